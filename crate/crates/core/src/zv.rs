//! Zero-velocity (foot-flat) detection.
//!
//! The forefoot and hindfoot pressure means are summed and heavily smoothed;
//! each stance region of that sum is split into a rising and a falling edge.
//! Toe-on is the first sample of the rising edge from which the gyroscope
//! X-axis goes quiet, heel-off the last quiet sample before it becomes active
//! again on the falling edge. Quietness is the population variance of first
//! differences over a short window.

use serde::{Deserialize, Serialize};

use crate::diag::{Diagnostic, DiagnosticKind};
use crate::error::{GaitError, Result};
use crate::filter::{FirFilter, GaussKernel};
use crate::model::{FootStream, Side};

const FOREFOOT: [usize; 3] = [2, 3, 4];
const HINDFOOT: [usize; 2] = [7, 8];

#[derive(Debug, Clone, PartialEq)]
pub struct PressureSums {
    /// Mean of forefoot channels 2-4.
    pub forefoot: Vec<f64>,
    /// Mean of hindfoot channels 7-8.
    pub hindfoot: Vec<f64>,
    /// Smoothed `forefoot + hindfoot`.
    pub total: Vec<f64>,
}

impl PressureSums {
    pub fn len(&self) -> usize {
        self.total.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total.is_empty()
    }
}

/// Smooths every pressure channel with `gauss`, then aggregates forefoot and
/// hindfoot means and low-passes their sum with `psum`.
pub fn pressure_sums(stream: &FootStream, gauss: &GaussKernel, psum: &FirFilter) -> Result<PressureSums> {
    if stream.is_empty() {
        return Err(GaitError::EmptyStream);
    }
    let smoothed: Vec<Vec<f64>> = (1..=8).map(|k| gauss.apply(&stream.channel(k))).collect();
    pressure_sums_from_channels(&smoothed, psum)
}

/// Aggregates already-smoothed channels (`channels[k - 1]` is channel `k`).
pub fn pressure_sums_from_channels(channels: &[Vec<f64>], psum: &FirFilter) -> Result<PressureSums> {
    let n = channels.first().map_or(0, Vec::len);
    if n == 0 {
        return Err(GaitError::EmptyStream);
    }
    if channels.len() < 8 || channels.iter().any(|c| c.len() != n) {
        return Err(GaitError::LengthMismatch("pressure channels".into()));
    }
    if n < psum.len() {
        return Err(GaitError::TooShort {
            needed: psum.len(),
            got: n,
        });
    }
    let mean_of = |chs: &[usize]| -> Vec<f64> {
        (0..n)
            .map(|i| chs.iter().map(|&k| channels[k - 1][i]).sum::<f64>() / chs.len() as f64)
            .collect()
    };
    let forefoot = mean_of(&FOREFOOT);
    let hindfoot = mean_of(&HINDFOOT);
    let sum: Vec<f64> = forefoot.iter().zip(&hindfoot).map(|(a, b)| a + b).collect();
    Ok(PressureSums {
        total: psum.apply(&sum),
        forefoot,
        hindfoot,
    })
}

/// Population variance of the first differences of `x[start..start + n]`
/// (`n - 1` differences).
pub fn diff_variance(x: &[f64], start: usize, n: usize) -> Result<f64> {
    let end = start.checked_add(n).filter(|&e| e <= x.len() && n >= 3).ok_or(
        GaitError::WindowOutOfBounds {
            start,
            end: start.saturating_add(n),
            len: x.len(),
        },
    )?;
    Ok(diff_variance_unchecked(&x[start..end]))
}

fn diff_variance_unchecked(w: &[f64]) -> f64 {
    let m = (w.len() - 1) as f64;
    let mean = (w[w.len() - 1] - w[0]) / m;
    w.windows(2)
        .map(|p| {
            let d = p[1] - p[0] - mean;
            d * d
        })
        .sum::<f64>()
        / m
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceGateConfig {
    /// Variance window length in samples.
    pub window: usize,
    /// Heel-off fires when the variance reaches this value, in (deg/s)^2.
    pub threshold1: f64,
    /// Toe-on fires when the variance drops below this value, in (deg/s)^2.
    pub threshold2: f64,
    /// Stance regions are where the pressure sum exceeds this fraction of its
    /// 95th percentile.
    pub stance_rel_threshold: f64,
}

impl Default for VarianceGateConfig {
    fn default() -> Self {
        VarianceGateConfig {
            window: 10,
            threshold1: 4.0,
            threshold2: 4.0,
            stance_rel_threshold: 0.2,
        }
    }
}

impl VarianceGateConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window < 3 {
            return Err(GaitError::InvalidConfig(format!(
                "zv_window_samples must be >= 3, got {}",
                self.window
            )));
        }
        if !(self.threshold2 <= self.threshold1) {
            return Err(GaitError::InvalidConfig(format!(
                "zv_variance_threshold2 ({}) must not exceed zv_variance_threshold1 ({})",
                self.threshold2, self.threshold1
            )));
        }
        if !(self.stance_rel_threshold > 0.0 && self.stance_rel_threshold < 1.0) {
            return Err(GaitError::InvalidConfig(format!(
                "stance_rel_threshold must be in (0, 1), got {}",
                self.stance_rel_threshold
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroVelocityInterval {
    /// Toe-on sample.
    pub start: usize,
    /// Heel-off sample.
    pub end: usize,
    pub side: Side,
}

impl ZeroVelocityInterval {
    pub fn midpoint(&self) -> usize {
        (self.start + self.end) / 2
    }

    pub fn contains(&self, i: usize) -> bool {
        (self.start..=self.end).contains(&i)
    }
}

/// Inclusive `[start, end]` runs where the pressure sum is above the stance
/// threshold.
pub fn stance_regions(total: &[f64], rel_threshold: f64) -> Vec<(usize, usize)> {
    let level = rel_threshold * percentile(total, 0.95);
    if !(level > 0.0) {
        return Vec::new();
    }
    let mut regions = Vec::new();
    let mut start = None;
    for (i, &p) in total.iter().enumerate() {
        match (p > level, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                regions.push((s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        regions.push((s, total.len() - 1));
    }
    regions
}

fn percentile(x: &[f64], q: f64) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

/// Detects one foot-flat interval per complete stance region. Regions that
/// touch the record boundaries or produce no gate crossing are skipped and
/// reported as diagnostics.
pub fn detect_zero_velocity(
    sums: &PressureSums,
    gyro_x: &[f64],
    cfg: &VarianceGateConfig,
    side: Side,
) -> Result<(Vec<ZeroVelocityInterval>, Vec<Diagnostic>)> {
    let len = sums.total.len();
    if gyro_x.len() != len || sums.forefoot.len() != len || sums.hindfoot.len() != len {
        return Err(GaitError::LengthMismatch(format!(
            "pressure sum has {len} samples, gyro X {}",
            gyro_x.len()
        )));
    }
    if cfg.window < 3 {
        return Err(GaitError::InvalidConfig(format!(
            "zv_window_samples must be >= 3, got {}",
            cfg.window
        )));
    }
    let n = cfg.window;
    let p = &sums.total;
    let mut intervals = Vec::new();
    let mut diags = Vec::new();

    for (a, b) in stance_regions(p, cfg.stance_rel_threshold) {
        if a == 0 || b + 1 == len {
            diags.push(
                Diagnostic::new(DiagnosticKind::TruncatedStance, "stance region touches the record boundary")
                    .on(side)
                    .at(a),
            );
            continue;
        }
        let region = &p[a..=b];
        let max = region.iter().copied().fold(f64::MIN, f64::max);
        let tol = max.abs() * 1e-9;
        let first_peak = a + region.iter().position(|v| *v >= max - tol).unwrap_or(0);
        let last_peak = a + region.iter().rposition(|v| *v >= max - tol).unwrap_or(0);

        let toe_on = (a..=first_peak)
            .take_while(|i| i + n <= len)
            .find(|&i| diff_variance_unchecked(&gyro_x[i..i + n]) < cfg.threshold2);
        let Some(toe_on) = toe_on else {
            diags.push(
                Diagnostic::new(DiagnosticKind::NoGateCrossing, "no toe-on gate crossing on the rising edge")
                    .on(side)
                    .at(a),
            );
            continue;
        };

        // Window ends one sample past the candidate: it fires on the first
        // moving sample, so the candidate is the last stationary one.
        let heel_off = (last_peak.max(toe_on + 1)..=b)
            .take_while(|i| i + 2 <= len)
            .find(|&i| {
                let lo = (i + 2).saturating_sub(n).max(toe_on);
                i + 2 - lo >= 3 && diff_variance_unchecked(&gyro_x[lo..i + 2]) >= cfg.threshold1
            });
        let Some(heel_off) = heel_off else {
            diags.push(
                Diagnostic::new(DiagnosticKind::NoGateCrossing, "no heel-off gate crossing on the falling edge")
                    .on(side)
                    .at(last_peak),
            );
            continue;
        };

        intervals.push(ZeroVelocityInterval {
            start: toe_on,
            end: heel_off,
            side,
        });
    }
    Ok((intervals, diags))
}
