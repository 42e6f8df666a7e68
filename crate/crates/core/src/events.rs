//! Heel-strike and toe-off detection from the hindfoot and forefoot pressure
//! curves around each foot-flat interval.
//!
//! Every consecutive sample triple inside a 66-sample window yields a turning
//! angle; the three sharpest turns become candidates, which are scored on
//! proximity to the foot-flat boundary (`m`), signal change to their left
//! (`n`) and to their right (`l`). Heel strike maximizes `m - n + l`, toe off
//! maximizes `m + n - l`.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::diag::{Diagnostic, DiagnosticKind};
use crate::error::{GaitError, Result};
use crate::model::Side;
use crate::zv::{PressureSums, ZeroVelocityInterval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EventKind {
    HeelStrike,
    ToeOn,
    HeelOff,
    ToeOff,
}

impl EventKind {
    pub fn code(self) -> &'static str {
        match self {
            EventKind::HeelStrike => "HS",
            EventKind::ToeOn => "TON",
            EventKind::HeelOff => "HO",
            EventKind::ToeOff => "TO",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaitEvent {
    pub kind: EventKind,
    pub idx: usize,
    pub t_ms: f64,
    pub side: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    HeelStrike,
    ToeOff,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventParams {
    pub window_before: usize,
    pub window_after: usize,
    pub neighborhood: usize,
}

impl Default for EventParams {
    fn default() -> Self {
        EventParams {
            window_before: 60,
            window_after: 6,
            neighborhood: 10,
        }
    }
}

/// Search window for one event: `before` samples ahead of toe-on and `after`
/// past it for heel strike; mirrored around heel-off for toe off.
pub fn candidate_window(
    zv: &ZeroVelocityInterval,
    which: Boundary,
    len: usize,
    params: &EventParams,
) -> (Range<usize>, Option<Diagnostic>) {
    let (start, end) = match which {
        Boundary::HeelStrike => (
            zv.start as i64 - params.window_before as i64,
            zv.start as i64 + params.window_after as i64,
        ),
        Boundary::ToeOff => (
            zv.end as i64 - params.window_after as i64,
            zv.end as i64 + params.window_before as i64,
        ),
    };
    let clipped = (start.clamp(0, len as i64) as usize)..(end.clamp(0, len as i64) as usize);
    let diag = (clipped.start as i64 != start || clipped.end as i64 != end).then(|| {
        Diagnostic::new(
            DiagnosticKind::ClippedWindow,
            format!("{which:?} window [{start}, {end}) clipped to [{}, {})", clipped.start, clipped.end),
        )
        .on(zv.side)
        .at(anchor_of(zv, which))
    });
    (clipped, diag)
}

fn anchor_of(zv: &ZeroVelocityInterval, which: Boundary) -> usize {
    match which {
        Boundary::HeelStrike => zv.start,
        Boundary::ToeOff => zv.end,
    }
}

/// Turning angle `theta` (degrees) at the middle point and its change score.
/// `theta` is 180 minus the signed turn of the polyline, counter-clockwise
/// turns counting positive, so valley-shaped corners read below 180.
pub fn angle_delta_c(prev: (f64, f64), mid: (f64, f64), next: (f64, f64)) -> Result<(f64, f64)> {
    if !(prev.0 < mid.0 && mid.0 < next.0) {
        return Err(GaitError::DegenerateTriple);
    }
    let (ax, ay) = (mid.0 - prev.0, mid.1 - prev.1);
    let (bx, by) = (next.0 - mid.0, next.1 - mid.1);
    let turn = (ax * by - ay * bx).atan2(ax * bx + ay * by).to_degrees();
    let theta = 180.0 - turn;
    Ok((theta, delta_c(theta)))
}

pub fn delta_c(theta: f64) -> f64 {
    let dev = (theta - 180.0).abs().to_radians();
    if theta < 180.0 {
        1.0 - dev.cos()
    } else if theta > 180.0 {
        dev.cos() - 1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidatePoint {
    pub idx: usize,
    pub theta: f64,
    pub delta_c: f64,
    pub m: f64,
    pub n: f64,
    pub l: f64,
}

impl CandidatePoint {
    pub fn heel_strike_score(&self) -> f64 {
        self.m - self.n + self.l
    }

    pub fn toe_off_score(&self) -> f64 {
        self.m + self.n - self.l
    }
}

/// The three triple midpoints with the largest `|deltaC|` inside `window`,
/// after normalizing the index axis by window length and the value axis by
/// the window's value range. Ties go to the earlier sample.
pub fn extract_candidates(curve: &[f64], window: Range<usize>) -> Result<(Vec<CandidatePoint>, Option<Diagnostic>)> {
    let no_candidates = || GaitError::NoCandidates {
        start: window.start,
        end: window.end,
    };
    if window.end > curve.len() || window.len() < 3 {
        return Err(no_candidates());
    }
    let w = &curve[window.clone()];
    let (lo, hi) = w
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    let range = hi - lo;
    if !(range > 0.0) {
        return Err(no_candidates());
    }
    let width = window.len() as f64;
    let point = |i: usize| (i as f64 / width, (w[i] - lo) / range);

    let mut all: Vec<CandidatePoint> = (1..w.len() - 1)
        .map(|i| {
            let (theta, delta_c) = angle_delta_c(point(i - 1), point(i), point(i + 1))?;
            Ok(CandidatePoint {
                idx: window.start + i,
                theta,
                delta_c,
                m: 0.0,
                n: 0.0,
                l: 0.0,
            })
        })
        .collect::<Result<_>>()?;
    all.sort_by(|a, b| b.delta_c.abs().total_cmp(&a.delta_c.abs()).then(a.idx.cmp(&b.idx)));
    if all.first().is_none_or(|c| c.delta_c == 0.0) {
        return Err(no_candidates());
    }
    all.truncate(3);
    let mut diag = None;
    if all.len() < 3 {
        diag = Some(Diagnostic::new(
            DiagnosticKind::PaddedCandidates,
            format!("only {} candidate(s); padded by duplication", all.len()),
        ));
        while all.len() < 3 {
            all.push(all[all.len() - 1]);
        }
    }
    Ok((all, diag))
}

/// Fills in the three scores. `r` is the neighborhood size on each side.
pub fn score_candidates(cands: &mut [CandidatePoint], anchor: usize, curve: &[f64], r: usize) -> Result<()> {
    if cands.is_empty() {
        return Err(GaitError::EmptyCandidates);
    }
    let r = r.max(1);
    let change = |idx: usize, left: bool| -> f64 {
        let b = curve[idx];
        let range = if left {
            idx.saturating_sub(r)..idx
        } else {
            (idx + 1).min(curve.len())..(idx + 1 + r).min(curve.len())
        };
        curve[range].iter().map(|v| (v - b).abs()).sum()
    };

    let dist: Vec<f64> = cands.iter().map(|c| c.idx.abs_diff(anchor) as f64).collect();
    let left: Vec<f64> = cands.iter().map(|c| change(c.idx, true)).collect();
    let right: Vec<f64> = cands.iter().map(|c| change(c.idx, false)).collect();
    let ms = normalized(&dist);
    let ns = normalized(&left);
    let ls = normalized(&right);
    for (i, c) in cands.iter_mut().enumerate() {
        c.m = -ms[i];
        c.n = ns[i];
        c.l = ls[i];
    }
    Ok(())
}

/// `v / max(v) * 100`, all zeros when the maximum is zero.
fn normalized(v: &[f64]) -> Vec<f64> {
    let max = v.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        v.iter().map(|x| x / max * 100.0).collect()
    } else {
        vec![0.0; v.len()]
    }
}

/// Outcome of one heel-strike or toe-off search.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub idx: usize,
    pub window: Range<usize>,
    pub candidates: Vec<CandidatePoint>,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn detect_boundary(
    sums: &PressureSums,
    zv: &ZeroVelocityInterval,
    which: Boundary,
    params: &EventParams,
) -> Result<Detection> {
    let curve = match which {
        Boundary::HeelStrike => &sums.hindfoot,
        Boundary::ToeOff => &sums.forefoot,
    };
    let (window, clip) = candidate_window(zv, which, curve.len(), params);
    let (mut candidates, pad) = extract_candidates(curve, window.clone())?;
    score_candidates(&mut candidates, anchor_of(zv, which), curve, params.neighborhood)?;
    let score = |c: &CandidatePoint| match which {
        Boundary::HeelStrike => c.heel_strike_score(),
        Boundary::ToeOff => c.toe_off_score(),
    };
    let best = candidates
        .iter()
        .copied()
        .reduce(|best, c| {
            let (s, sb) = (score(&c), score(&best));
            if s > sb || (s == sb && c.idx < best.idx) {
                c
            } else {
                best
            }
        })
        .ok_or(GaitError::EmptyCandidates)?;
    let diagnostics = clip
        .into_iter()
        .chain(pad.map(|d| d.on(zv.side).at(anchor_of(zv, which))))
        .collect();
    Ok(Detection {
        idx: best.idx,
        window,
        candidates,
        diagnostics,
    })
}

pub fn detect_heel_strike(sums: &PressureSums, zv: &ZeroVelocityInterval, params: &EventParams) -> Result<Detection> {
    detect_boundary(sums, zv, Boundary::HeelStrike, params)
}

pub fn detect_toe_off(sums: &PressureSums, zv: &ZeroVelocityInterval, params: &EventParams) -> Result<Detection> {
    detect_boundary(sums, zv, Boundary::ToeOff, params)
}

/// Heel-strike and toe-off indices found for one foot-flat interval; `None`
/// when the search produced no candidates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrideEvents {
    pub zv: ZeroVelocityInterval,
    pub heel_strike: Option<usize>,
    pub toe_off: Option<usize>,
}

/// Emits toe-on and heel-off for every stride, plus heel strike and toe off
/// where they respect the gait-phase order (also against the previous
/// stride's toe off), sorted by sample index. Keeping the foot-flat bounds of
/// rejected strides lets cycle segmentation see the gap.
pub fn assemble_events(side: Side, strides: &[StrideEvents], times_ms: &[f64]) -> (Vec<GaitEvent>, Vec<Diagnostic>) {
    let mut events = Vec::with_capacity(4 * strides.len());
    let mut diags = Vec::new();
    let mut push = |kind, idx: usize| {
        events.push(GaitEvent {
            kind,
            idx,
            t_ms: times_ms[idx],
            side,
        })
    };
    let mut last_to: Option<usize> = None;
    for s in strides {
        let (ton, ho) = (s.zv.start, s.zv.end);
        push(EventKind::ToeOn, ton);
        push(EventKind::HeelOff, ho);
        let (Some(hs), Some(to)) = (s.heel_strike, s.toe_off) else {
            diags.push(
                Diagnostic::new(DiagnosticKind::NoCandidates, "stride missing heel strike or toe off")
                    .on(side)
                    .at(ton),
            );
            continue;
        };
        let problem = if !(hs <= ton && ton < ho && ho <= to) || to >= times_ms.len() {
            Some(format!("HS {hs}, toe-on {ton}, heel-off {ho}, TO {to} out of phase order"))
        } else {
            last_to
                .filter(|t| hs <= *t)
                .map(|t| format!("HS {hs} does not follow the previous TO {t}"))
        };
        if let Some(msg) = problem {
            diags.push(Diagnostic::new(DiagnosticKind::OrderViolation, msg).on(side).at(ton));
            continue;
        }
        push(EventKind::HeelStrike, hs);
        push(EventKind::ToeOff, to);
        last_to = Some(to);
    }
    events.sort_by(|a, b| a.idx.cmp(&b.idx).then(a.kind.cmp(&b.kind)));
    (events, diags)
}
