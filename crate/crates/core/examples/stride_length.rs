//! Stride length with and without the zero-velocity update when the
//! accelerometer carries a constant bias.
//!
//! cargo run --example stride_length [bias_g]

use gaitfuse::spatial::{estimate_orientation, integrate_uncorrected, linear_acceleration};
use gaitfuse::{analyze, generate, AnalysisConfig, GaitProfile, Side};

fn main() -> gaitfuse::Result<()> {
    let bias: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.02);
    let mut profile = GaitProfile::normal().noiseless();
    profile.accel_bias_g = [0.0, bias, 0.0];
    let (session, _) = generate(&profile, 8.0)?;
    let cfg = AnalysisConfig::default();
    let analysis = analyze(&session, &cfg)?;

    let stream = session.foot(Side::Left);
    let foot = analysis.foot(Side::Left);
    let gyro: Vec<[f64; 3]> = stream.frames.iter().map(|f| f.gyro).collect();
    let accel: Vec<[f64; 3]> = stream.frames.iter().map(|f| f.accel).collect();
    let times = stream.times_ms();
    let q = estimate_orientation(&gyro, &accel, &times, &foot.zero_velocity)?;
    let lin = linear_acceleration(&accel, &q, cfg.gravity_mps2);

    println!("true stride {:.1} cm, forward bias {bias} g", profile.stride_length_cm);
    println!("{:>8} {:>10} {:>12} {:>14}", "stride", "ZVU cm", "plain cm", "residual m/s");
    for t in &foot.trajectories {
        let plain = integrate_uncorrected(&lin, &times, t.start, t.end);
        println!("{:>8} {:>10.2} {:>12.2} {:>14.4}", t.stride, t.stride_length_cm, plain, t.residual_mps);
    }
    Ok(())
}
