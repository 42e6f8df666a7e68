//! The three smoothing filters: taps, DC gain and magnitude response.
//!
//! cargo run --example filter_design

use std::f64::consts::PI;

use gaitfuse::filter::{design_lowpass, pressure_sum_filter, GaussKernel};

fn gain_db(taps: &[f64], f_hz: f64, fs: f64) -> f64 {
    let w = 2.0 * PI * f_hz / fs;
    let (re, im) = taps.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, h)| {
        (re + h * (w * k as f64).cos(), im - h * (w * k as f64).sin())
    });
    20.0 * re.hypot(im).log10()
}

fn describe(name: &str, taps: &[f64]) {
    let fs = 66.0;
    println!("{name}: {} taps, DC gain {:.12}", taps.len(), taps.iter().sum::<f64>());
    for f in [0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 25.0, 30.0, 33.0] {
        println!("  {f:>5} Hz {:>8.2} dB", gain_db(taps, f, fs));
    }
}

fn main() -> gaitfuse::Result<()> {
    let lpf = design_lowpass(20.0, 66.0, 21)?;
    describe(lpf.description(), lpf.coefficients());
    let gauss = GaussKernel::new(5.0, 7)?;
    describe("gaussian sigma 5", &gauss.taps);
    println!("  taps {:?}", gauss.taps);
    let psum = pressure_sum_filter(23)?;
    describe(psum.description(), psum.coefficients());
    Ok(())
}
