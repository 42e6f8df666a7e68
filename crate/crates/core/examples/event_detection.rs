//! Heel strike and toe off: the three sharpest turns of the pressure curve
//! near each foot-flat boundary and how they score.
//!
//! cargo run --example event_detection

use gaitfuse::events::{EventKind, GaitEvent};
use gaitfuse::{analyze, generate, AnalysisConfig, GaitProfile, Side};

fn nearest(truth: &[GaitEvent], kind: EventKind, idx: usize) -> Option<usize> {
    truth.iter().filter(|e| e.kind == kind).map(|e| e.idx).min_by_key(|t| t.abs_diff(idx))
}

fn main() -> gaitfuse::Result<()> {
    let (session, truth) = generate(&GaitProfile::normal().noiseless(), 6.0)?;
    let analysis = analyze(&session, &AnalysisConfig::default())?;
    let foot = analysis.foot(Side::Right);
    let truth = truth.events(Side::Right);

    for (label, kind, dets) in [
        ("heel strike", EventKind::HeelStrike, &foot.heel_strikes),
        ("toe off", EventKind::ToeOff, &foot.toe_offs),
    ] {
        for d in dets.iter().flatten() {
            println!("{label}: window {:?}, chose {}, truth {:?}", d.window, d.idx, nearest(truth, kind, d.idx));
            for c in &d.candidates {
                let score = match kind {
                    EventKind::HeelStrike => c.heel_strike_score(),
                    _ => c.toe_off_score(),
                };
                println!(
                    "  idx {:>4} theta {:>7.2} dC {:>7.4}  m {:>7.2} n {:>7.2} l {:>7.2}  score {:>8.2}",
                    c.idx, c.theta, c.delta_c, c.m, c.n, c.l, score
                );
            }
        }
    }
    Ok(())
}
