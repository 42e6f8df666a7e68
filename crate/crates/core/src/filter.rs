//! Smoothing filters: a windowed-sinc FIR low-pass for inertial signals, a
//! sampled-Gaussian smoother for pressure channels and a heavy 23-tap
//! low-pass for the whole-foot pressure sum.
//!
//! Every filter is applied as a centered (zero-phase) convolution with the
//! first and last samples replicated past the record edges, so output length
//! equals input length and stance plateaus at the boundaries are not pulled
//! toward zero.

use std::f64::consts::PI;

use crate::error::{GaitError, Result};

/// Linear-phase FIR filter with unity DC gain.
#[derive(Debug, Clone, PartialEq)]
pub struct FirFilter {
    coefficients: Vec<f64>,
    description: String,
}

impl FirFilter {
    /// Wraps caller-supplied taps. The length must be odd; the taps are used
    /// as given (no normalization).
    pub fn from_taps(coefficients: Vec<f64>, description: impl Into<String>) -> Result<Self> {
        if coefficients.len().is_multiple_of(2) {
            return Err(GaitError::EvenTaps(coefficients.len()));
        }
        Ok(FirFilter {
            coefficients,
            description: description.into(),
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        convolve_replicate(&self.coefficients, x)
    }
}

/// Designs a Hamming-windowed sinc low-pass normalized to unity DC gain.
pub fn design_lowpass(cutoff_hz: f64, sample_rate_hz: f64, num_taps: usize) -> Result<FirFilter> {
    if num_taps.is_multiple_of(2) {
        return Err(GaitError::EvenTaps(num_taps));
    }
    if !(cutoff_hz > 0.0 && sample_rate_hz > 0.0 && cutoff_hz < sample_rate_hz / 2.0) {
        return Err(GaitError::InvalidCutoff {
            cutoff_hz,
            sample_rate_hz,
        });
    }
    let coefficients = windowed_sinc(cutoff_hz / sample_rate_hz, num_taps);
    Ok(FirFilter {
        coefficients,
        description: format!(
            "hamming windowed-sinc lowpass, cutoff {cutoff_hz} Hz, fs {sample_rate_hz} Hz, {num_taps} taps"
        ),
    })
}

/// Taps for normalized cutoff `fc` (cycles/sample), mirrored so the result is
/// exactly symmetric.
fn windowed_sinc(fc: f64, num_taps: usize) -> Vec<f64> {
    let half = num_taps / 2;
    let mut taps = vec![0.0; num_taps];
    for k in 0..=half {
        let x = k as f64;
        let sinc = if k == 0 {
            2.0 * fc
        } else {
            (2.0 * PI * fc * x).sin() / (PI * x)
        };
        let window = if num_taps == 1 {
            1.0
        } else {
            0.54 + 0.46 * (2.0 * PI * x / (num_taps - 1) as f64).cos()
        };
        taps[half + k] = sinc * window;
        taps[half - k] = sinc * window;
    }
    let sum: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= sum);
    taps
}

pub fn apply_fir(filter: &FirFilter, x: &[f64]) -> Vec<f64> {
    filter.apply(x)
}

fn convolve_replicate(taps: &[f64], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let half = taps.len() / 2;
    let last = n - 1;
    let mut y = vec![0.0; n];
    for (i, out) in y.iter_mut().enumerate() {
        let mut acc = 0.0;
        if i >= half && i + half <= last {
            let base = i - half;
            for (k, w) in taps.iter().enumerate() {
                acc += w * x[base + k];
            }
        } else {
            for (k, w) in taps.iter().enumerate() {
                let j = (i + k).saturating_sub(half).min(last);
                acc += w * x[j];
            }
        }
        *out = acc;
    }
    y
}

/// Sampled-Gaussian smoothing kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussKernel {
    pub sigma: f64,
    pub taps: Vec<f64>,
}

impl GaussKernel {
    pub fn new(sigma: f64, num_taps: usize) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(GaitError::InvalidSigma(sigma));
        }
        if num_taps.is_multiple_of(2) {
            return Err(GaitError::EvenTaps(num_taps));
        }
        let half = (num_taps / 2) as i64;
        let mut taps: Vec<f64> = (-half..=half)
            .map(|k| (-((k * k) as f64) / (2.0 * sigma * sigma)).exp())
            .collect();
        let sum: f64 = taps.iter().sum();
        taps.iter_mut().for_each(|t| *t /= sum);
        Ok(GaussKernel { sigma, taps })
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        convolve_replicate(&self.taps, x)
    }
}

pub fn gauss_smooth(x: &[f64], sigma: f64, num_taps: usize) -> Result<Vec<f64>> {
    Ok(GaussKernel::new(sigma, num_taps)?.apply(x))
}

pub const PSUM_TAPS: usize = 23;

/// Heavy low-pass for the pressure sum. A sub-hertz cutoff cannot be
/// realized with a short FIR, so the design uses the lowest cutoff whose sinc
/// main lobe still fits inside the window, `fs / (taps - 1)`.
pub fn pressure_sum_filter(num_taps: usize) -> Result<FirFilter> {
    if num_taps.is_multiple_of(2) {
        return Err(GaitError::EvenTaps(num_taps));
    }
    if num_taps < 3 {
        return Err(GaitError::TooShort {
            needed: 3,
            got: num_taps,
        });
    }
    let fc = 1.0 / (num_taps - 1) as f64;
    Ok(FirFilter {
        coefficients: windowed_sinc(fc, num_taps),
        description: format!("hamming windowed-sinc lowpass, cutoff fs/{}, {num_taps} taps", num_taps - 1),
    })
}

pub fn pressure_sum_smooth(p: &[f64]) -> Result<Vec<f64>> {
    pressure_sum_smooth_with(p, PSUM_TAPS)
}

pub fn pressure_sum_smooth_with(p: &[f64], num_taps: usize) -> Result<Vec<f64>> {
    if p.len() < num_taps {
        return Err(GaitError::TooShort {
            needed: num_taps,
            got: p.len(),
        });
    }
    Ok(pressure_sum_filter(num_taps)?.apply(p))
}
