//! A seeded cohort of hemiparetic walkers: recovered against true parameter
//! means and their Pearson correlation.
//!
//! cargo run --release --example stroke_cohort [subjects] [seed]

use gaitfuse::stats::{mean, pearson};
use gaitfuse::{analyze, generate, AnalysisConfig, GaitProfile};

const NAMES: [&str; 8] = [
    "stance % L",
    "stance % R",
    "double stance %",
    "step time L s",
    "step time R s",
    "stride time s",
    "stride length cm",
    "velocity km/h",
];

fn row(t: &gaitfuse::temporal::TemporalReport, s: &gaitfuse::spatial::SpatialReport) -> Option<[f64; 8]> {
    Some([
        t.stance_left?.mean,
        t.stance_right?.mean,
        t.double_stance?.mean,
        t.step_time_left?.mean,
        t.step_time_right?.mean,
        t.stride_time?.mean,
        s.stride_length?.mean,
        s.velocity?,
    ])
}

fn main() -> gaitfuse::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(27);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(2018);
    let cfg = AnalysisConfig::default();

    let (mut got, mut want) = (Vec::new(), Vec::new());
    for p in GaitProfile::stroke_cohort(n, seed) {
        let (s, truth) = generate(&p, 60.0)?;
        let a = analyze(&s, &cfg)?;
        match (row(&a.temporal, &a.spatial), row(&truth.temporal, &truth.spatial)) {
            (Some(g), Some(w)) => {
                got.push(g);
                want.push(w);
            }
            _ => println!("subject with seed {} gave incomplete parameters", p.seed),
        }
    }
    println!("{:<18} {:>10} {:>10}", "", "recovered", "truth");
    for (j, name) in NAMES.iter().enumerate() {
        let col = |rows: &[[f64; 8]]| mean(&rows.iter().map(|r| r[j]).collect::<Vec<_>>()).unwrap_or(f64::NAN);
        println!("{name:<18} {:>10.3} {:>10.3}", col(&got), col(&want));
    }
    let flat = |rows: &[[f64; 8]]| rows.iter().flatten().copied().collect::<Vec<f64>>();
    println!("PCC over {} subjects: {:.6}", got.len(), pearson(&flat(&got), &flat(&want)).unwrap_or(f64::NAN));
    Ok(())
}
