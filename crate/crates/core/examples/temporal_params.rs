//! Temporal parameters from a hand-written event table: cycles, stance and
//! swing, double stance, step and stride time, cadence.
//!
//! cargo run --example temporal_params

use gaitfuse::events::{EventKind, GaitEvent};
use gaitfuse::temporal::{segment_cycles, stance_swing, temporal_report};
use gaitfuse::Side;

/// One foot walking 1 s strides: strike, toe-on +0.1, heel-off +0.4,
/// toe off +0.6.
fn foot(side: Side, first_ms: f64, strides: usize) -> Vec<GaitEvent> {
    let mut out = Vec::new();
    for k in 0..=strides {
        let t0 = first_ms + 1000.0 * k as f64;
        let offsets: &[(EventKind, f64)] = if k == strides {
            &[(EventKind::HeelStrike, 0.0)]
        } else {
            &[
                (EventKind::HeelStrike, 0.0),
                (EventKind::ToeOn, 100.0),
                (EventKind::HeelOff, 400.0),
                (EventKind::ToeOff, 600.0),
            ]
        };
        for (kind, dt) in offsets {
            let t_ms = t0 + dt;
            out.push(GaitEvent { kind: *kind, idx: (t_ms * 0.066).round() as usize, t_ms, side });
        }
    }
    out
}

fn main() {
    let (left, _) = segment_cycles(&foot(Side::Left, 0.0, 5));
    let (right, _) = segment_cycles(&foot(Side::Right, 500.0, 5));
    for c in &left {
        let (st, sw) = stance_swing(c);
        println!("left cycle {:.0}-{:.0} ms: stance {st:.1}% swing {sw:.1}%", c.hs_start.t_ms, c.hs_end.t_ms);
    }
    let (report, diags) = temporal_report(&left, &right);
    println!("{report:#?}");
    for d in diags {
        println!("diagnostic: {d}");
    }
}
