//! Foot-flat detection: pressure-sum stance regions gated by the variance of
//! the gyroscope's first differences, compared with the generator's truth.
//!
//! cargo run --example zero_velocity [normal|stroke-left|stroke-right]

use gaitfuse::zv::diff_variance;
use gaitfuse::{analyze, generate, AnalysisConfig, GaitProfile, Side};

fn main() -> gaitfuse::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "normal".into());
    let (session, truth) = generate(&GaitProfile::named(&name)?, 12.0)?;
    let cfg = AnalysisConfig::default();
    let analysis = analyze(&session, &cfg)?;
    let foot = analysis.foot(Side::Left);

    println!("variance gate: window {}, toe-on below {}, heel-off at or above {} (deg/s)^2",
        cfg.zv_window_samples, cfg.zv_variance_threshold2, cfg.zv_variance_threshold1);
    println!("{:>14} {:>14} {:>12}", "detected", "truth", "mid var");
    for z in &foot.zero_velocity {
        let t = truth.zero_velocity(Side::Left).iter().find(|t| t.start.abs_diff(z.start) < 15);
        let mid = z.start + (z.end - z.start) / 3;
        let var = diff_variance(&foot.gyro_x, mid, (z.end - z.start) / 3 + 1)?;
        let t = t.map_or("-".to_string(), |t| format!("[{}, {}]", t.start, t.end));
        println!("{:>14} {t:>14} {var:>12.3}", format!("[{}, {}]", z.start, z.end));
    }
    for d in &foot.diagnostics {
        println!("diagnostic: {d}");
    }
    Ok(())
}
