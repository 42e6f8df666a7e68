//! Grid search for the two foot-flat variance thresholds: picks the pair with
//! the best heel-strike/toe-off F1 over a synthetic corpus (normal walkers,
//! both stroke profiles and a stroke cohort, with and without noise).
//!
//! cargo run --release --example calibrate_thresholds [seconds-per-session]

use gaitfuse::events::EventKind;
use gaitfuse::synth::EventScore;
use gaitfuse::{analyze, generate, AnalysisConfig, GaitProfile, Side};

fn corpus() -> Vec<GaitProfile> {
    let mut out = Vec::new();
    for seed in 0..3 {
        for name in ["normal", "stroke-left", "stroke-right"] {
            out.push(GaitProfile::named(name).unwrap().with_seed(seed));
        }
    }
    out.extend(GaitProfile::stroke_cohort(12, 99));
    let clean: Vec<GaitProfile> = out.iter().map(|p| p.clone().noiseless()).collect();
    out.extend(clean);
    out
}

fn main() {
    let seconds: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(40.0);
    let sessions: Vec<_> = corpus().iter().map(|p| generate(p, seconds).unwrap()).collect();
    println!("{} sessions of {seconds} s", sessions.len());
    println!("{:>6} {:>6} {:>8} {:>8} {:>8} {:>9}", "thr1", "thr2", "HS F1", "TO F1", "mean F1", "worst F1");

    let mut best: Option<(f64, f64, f64)> = None;
    for thr1 in [3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 14.0] {
        for thr2 in [1.5, 2.0, 3.0, 4.0, 5.0] {
            if thr2 > thr1 {
                continue;
            }
            let cfg = AnalysisConfig {
                zv_variance_threshold1: thr1,
                zv_variance_threshold2: thr2,
                ..AnalysisConfig::default()
            };
            let (mut hs, mut to) = (EventScore::default(), EventScore::default());
            let mut worst = f64::INFINITY;
            for (s, truth) in &sessions {
                let a = analyze(s, &cfg).unwrap();
                let (mut h1, mut t1) = (EventScore::default(), EventScore::default());
                for side in [Side::Left, Side::Right] {
                    let d = &a.foot(side).events;
                    h1 = h1.merge(EventScore::compare(d, truth.events(side), EventKind::HeelStrike, 2));
                    t1 = t1.merge(EventScore::compare(d, truth.events(side), EventKind::ToeOff, 2));
                }
                worst = worst.min(h1.f1().min(t1.f1()));
                hs = hs.merge(h1);
                to = to.merge(t1);
            }
            let f1 = 0.5 * (hs.f1() + to.f1());
            println!("{thr1:>6} {thr2:>6} {:>8.3} {:>8.3} {f1:>8.3} {worst:>9.3}", hs.f1(), to.f1());
            if best.is_none_or(|b| f1 > b.2) {
                best = Some((thr1, thr2, f1));
            }
        }
    }
    if let Some((t1, t2, f1)) = best {
        println!("best: zv_variance_threshold1={t1} zv_variance_threshold2={t2} (mean F1 {f1:.3})");
    }
}
