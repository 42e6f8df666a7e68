//! Generate a synthetic walk, analyze it and print the report next to the
//! ground truth.
//!
//! cargo run --example generate_and_analyze [normal|stroke-left|stroke-right] [seconds]

use gaitfuse::stats::Summary;
use gaitfuse::{analyze, generate, AnalysisConfig, GaitProfile, GaitReport};

fn show(name: &str, got: Option<Summary>, want: Option<Summary>) {
    let fmt = |s: Option<Summary>| s.map_or("-".to_string(), |s| format!("{:.3} +- {:.3}", s.mean, s.sd));
    println!("{name:<18} {:>20} {:>20}", fmt(got), fmt(want));
}

fn main() -> gaitfuse::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "normal".into());
    let seconds: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(30.0);

    let profile = GaitProfile::named(&name)?.with_seed(1);
    let (session, truth) = generate(&profile, seconds)?;
    let analysis = analyze(&session, &AnalysisConfig::default())?;
    let report = GaitReport::new(&session, &analysis);
    report.check_consistency()?;

    let (t, w) = (&analysis.temporal, &truth.temporal);
    println!("{name}, {seconds} s, {} events, {} cycles", report.events.len(), report.cycles.len());
    println!("{:<18} {:>20} {:>20}", "", "recovered", "truth");
    show("stance % L", t.stance_left, w.stance_left);
    show("stance % R", t.stance_right, w.stance_right);
    show("double stance %", t.double_stance, w.double_stance);
    show("step time L s", t.step_time_left, w.step_time_left);
    show("step time R s", t.step_time_right, w.step_time_right);
    show("stride time s", t.stride_time, w.stride_time);
    show("stride length cm", analysis.spatial.stride_length, truth.spatial.stride_length);
    println!("{:<18} {:>20.2} {:>20.2}", "cadence /min", t.cadence.unwrap_or(f64::NAN), w.cadence.unwrap_or(f64::NAN));
    println!(
        "{:<18} {:>20.3} {:>20.3}",
        "velocity km/h",
        analysis.spatial.velocity.unwrap_or(f64::NAN),
        truth.spatial.velocity.unwrap_or(f64::NAN)
    );
    for d in &report.diagnostics {
        println!("diagnostic: {d}");
    }
    Ok(())
}
