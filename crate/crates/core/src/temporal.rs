//! Gait cycles and temporal parameters: stance and swing share, double
//! stance, step and stride time, cadence.

use serde::{Deserialize, Serialize};

use crate::diag::{Diagnostic, DiagnosticKind};
use crate::error::{GaitError, Result};
use crate::events::{EventKind, GaitEvent};
use crate::model::Side;
use crate::stats::Summary;

/// Event sample index plus its timestamp in milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Instant {
    pub idx: usize,
    pub t_ms: f64,
}

impl From<&GaitEvent> for Instant {
    fn from(e: &GaitEvent) -> Self {
        Instant { idx: e.idx, t_ms: e.t_ms }
    }
}

/// One heel-strike-to-heel-strike cycle of one foot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaitCycle {
    pub side: Side,
    pub hs_start: Instant,
    pub toe_on: Instant,
    pub heel_off: Instant,
    pub toe_off: Instant,
    pub hs_end: Instant,
}

impl GaitCycle {
    /// Cycle duration in seconds.
    pub fn duration_s(&self) -> f64 {
        (self.hs_end.t_ms - self.hs_start.t_ms) / 1000.0
    }

    fn is_ordered(&self) -> bool {
        let t = [self.hs_start, self.toe_on, self.heel_off, self.toe_off, self.hs_end];
        t.windows(2).all(|w| w[0].t_ms < w[1].t_ms)
    }
}

/// Groups one foot's phase-ordered events into cycles. A cycle needs a heel
/// strike followed by exactly one toe-on, heel-off and toe-off before the
/// next heel strike, which closes it. Spans around a missed heel strike hold
/// two of each and are rejected.
pub fn segment_cycles(events: &[GaitEvent]) -> (Vec<GaitCycle>, Vec<Diagnostic>) {
    let mut cycles = Vec::new();
    let mut diags = Vec::new();
    let strikes: Vec<usize> = events
        .iter()
        .enumerate()
        .filter(|(_, e)| e.kind == EventKind::HeelStrike)
        .map(|(i, _)| i)
        .collect();

    for (k, &i) in strikes.iter().enumerate() {
        let hs = &events[i];
        let Some(&j) = strikes.get(k + 1) else {
            diags.push(
                Diagnostic::new(DiagnosticKind::IncompleteCycle, "trailing stride has no closing heel strike")
                    .on(hs.side)
                    .at(hs.idx),
            );
            break;
        };
        let between = &events[i + 1..j];
        let find = |kind| between.iter().find(|e| e.kind == kind).map(Instant::from);
        let cycle = match (find(EventKind::ToeOn), find(EventKind::HeelOff), find(EventKind::ToeOff)) {
            (Some(toe_on), Some(heel_off), Some(toe_off)) if between.len() == 3 => Some(GaitCycle {
                side: hs.side,
                hs_start: hs.into(),
                toe_on,
                heel_off,
                toe_off,
                hs_end: (&events[j]).into(),
            }),
            _ => None,
        };
        match cycle {
            Some(c) if c.is_ordered() => cycles.push(c),
            _ => diags.push(
                Diagnostic::new(DiagnosticKind::IncompleteCycle, "cycle lacks an ordered event quadruple")
                    .on(hs.side)
                    .at(hs.idx),
            ),
        }
    }
    (cycles, diags)
}

/// Stance and swing share of one cycle in percent. Swing is the complement
/// of stance so the two always add up to exactly 100.
pub fn stance_swing(c: &GaitCycle) -> (f64, f64) {
    let gc = c.hs_end.t_ms - c.hs_start.t_ms;
    let stance = (c.toe_off.t_ms - c.hs_start.t_ms) / gc * 100.0;
    (stance, 100.0 - stance)
}

/// Double-stance share of every reference cycle (left cycles first, then
/// right): the time within the cycle during which the reference foot's
/// stance overlaps a stance of the other foot, over the cycle duration.
/// Cycles whose stance is not covered by the other foot's cycles are skipped.
pub fn double_stance(left: &[GaitCycle], right: &[GaitCycle]) -> Result<Vec<f64>> {
    if left.is_empty() || right.is_empty() {
        return Err(GaitError::NoBilateralOverlap);
    }
    let mut out = Vec::new();
    for (reference, other) in [(left, right), (right, left)] {
        let covered_from = other[0].hs_start.t_ms;
        let covered_to = other[other.len() - 1].hs_end.t_ms;
        for c in reference {
            let (s0, s1) = (c.hs_start.t_ms, c.toe_off.t_ms);
            if s0 < covered_from || s1 > covered_to {
                continue;
            }
            let both: f64 = other
                .iter()
                .map(|o| (s1.min(o.toe_off.t_ms) - s0.max(o.hs_start.t_ms)).max(0.0))
                .sum();
            out.push(both / (c.hs_end.t_ms - s0) * 100.0);
        }
    }
    if out.is_empty() {
        return Err(GaitError::NoBilateralOverlap);
    }
    Ok(out)
}

/// Step times in seconds and cadence in steps per minute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepTimes {
    /// Left heel strike to the following right heel strike.
    pub left: Vec<f64>,
    /// Right heel strike to the following left heel strike.
    pub right: Vec<f64>,
    pub cadence: f64,
}

impl StepTimes {
    /// Sum of mean left and mean right step time.
    pub fn stride_time(&self) -> Option<f64> {
        Some(crate::stats::mean(&self.left)? + crate::stats::mean(&self.right)?)
    }
}

/// Step times from consecutive opposite-foot heel strikes and cadence over
/// the span from the first to the last strike (steps = strikes - 1).
pub fn step_stride_cadence(left_hs_ms: &[f64], right_hs_ms: &[f64]) -> Result<StepTimes> {
    let mut strikes: Vec<(f64, Side)> = left_hs_ms
        .iter()
        .map(|t| (*t, Side::Left))
        .chain(right_hs_ms.iter().map(|t| (*t, Side::Right)))
        .collect();
    if strikes.len() < 2 {
        return Err(GaitError::InsufficientEvents(format!("{} heel strike(s)", strikes.len())));
    }
    if left_hs_ms.is_empty() || right_hs_ms.is_empty() {
        return Err(GaitError::InsufficientEvents("heel strikes from one foot only".into()));
    }
    strikes.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut st = StepTimes {
        left: Vec::new(),
        right: Vec::new(),
        cadence: 0.0,
    };
    for w in strikes.windows(2) {
        let dt = (w[1].0 - w[0].0) / 1000.0;
        match (w[0].1, w[1].1) {
            (Side::Left, Side::Right) => st.left.push(dt),
            (Side::Right, Side::Left) => st.right.push(dt),
            _ => {}
        }
    }
    let span_s = (strikes[strikes.len() - 1].0 - strikes[0].0) / 1000.0;
    if !(span_s > 0.0) {
        return Err(GaitError::ZeroDuration);
    }
    st.cadence = 60.0 * (strikes.len() - 1) as f64 / span_s;
    Ok(st)
}

/// Per-cycle values and session summaries of every temporal parameter.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TemporalReport {
    pub stance_left: Option<Summary>,
    pub swing_left: Option<Summary>,
    pub stance_right: Option<Summary>,
    pub swing_right: Option<Summary>,
    pub double_stance: Option<Summary>,
    pub step_time_left: Option<Summary>,
    pub step_time_right: Option<Summary>,
    /// Mean cycle duration over both feet.
    pub stride_time: Option<Summary>,
    pub cadence: Option<f64>,
}

pub fn temporal_report(left: &[GaitCycle], right: &[GaitCycle]) -> (TemporalReport, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let phases = |cycles: &[GaitCycle]| -> (Vec<f64>, Vec<f64>) { cycles.iter().map(stance_swing).unzip() };
    let (stl, swl) = phases(left);
    let (str_, swr) = phases(right);
    let gcs: Vec<f64> = left.iter().chain(right).map(GaitCycle::duration_s).collect();

    let mut report = TemporalReport {
        stance_left: Summary::of(&stl),
        swing_left: Summary::of(&swl),
        stance_right: Summary::of(&str_),
        swing_right: Summary::of(&swr),
        stride_time: Summary::of(&gcs),
        ..Default::default()
    };

    match double_stance(left, right) {
        Ok(dsp) => report.double_stance = Summary::of(&dsp),
        Err(e) => diags.push(Diagnostic::new(DiagnosticKind::NoBilateralOverlap, format!("double stance: {e}"))),
    }

    let strikes = |cycles: &[GaitCycle]| -> Vec<f64> {
        let mut t: Vec<f64> = cycles.iter().flat_map(|c| [c.hs_start.t_ms, c.hs_end.t_ms]).collect();
        t.dedup();
        t
    };
    match step_stride_cadence(&strikes(left), &strikes(right)) {
        Ok(st) => {
            report.step_time_left = Summary::of(&st.left);
            report.step_time_right = Summary::of(&st.right);
            report.cadence = Some(st.cadence);
        }
        Err(e) => diags.push(Diagnostic::new(DiagnosticKind::NoBilateralOverlap, format!("step time: {e}"))),
    }
    (report, diags)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(t_s: f64) -> Instant {
        Instant {
            idx: (t_s * 66.0).round() as usize,
            t_ms: t_s * 1000.0,
        }
    }

    fn cycle(side: Side, hs: f64, ton: f64, ho: f64, to: f64, next: f64) -> GaitCycle {
        GaitCycle {
            side,
            hs_start: at(hs),
            toe_on: at(ton),
            heel_off: at(ho),
            toe_off: at(to),
            hs_end: at(next),
        }
    }

    fn events_for(side: Side, strides: &[[f64; 4]]) -> Vec<GaitEvent> {
        let kinds = [EventKind::HeelStrike, EventKind::ToeOn, EventKind::HeelOff, EventKind::ToeOff];
        strides
            .iter()
            .flat_map(|s| {
                s.iter().zip(kinds).map(move |(t, kind)| GaitEvent {
                    kind,
                    idx: (t * 66.0).round() as usize,
                    t_ms: t * 1000.0,
                    side,
                })
            })
            .collect()
    }

    #[test]
    fn four_strikes_make_three_cycles() {
        let strides: Vec<[f64; 4]> = (0..4).map(|k| k as f64).map(|k| [k, k + 0.1, k + 0.4, k + 0.6]).collect();
        let (cycles, diags) = segment_cycles(&events_for(Side::Left, &strides));
        assert_eq!(cycles.len(), 3);
        assert_eq!(diags.len(), 1, "trailing stride is reported");
        assert!((cycles[1].duration_s() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_strike_makes_no_cycle() {
        let (cycles, _) = segment_cycles(&events_for(Side::Left, &[[0.0, 0.1, 0.4, 0.6]]));
        assert!(cycles.is_empty());
    }

    #[test]
    fn stride_missing_events_is_excluded() {
        let mut ev = events_for(Side::Left, &[[0.0, 0.1, 0.4, 0.6], [1.0, 1.1, 1.4, 1.6], [2.0, 2.1, 2.4, 2.6]]);
        ev.remove(6); // heel-off of the second stride
        let (cycles, diags) = segment_cycles(&ev);
        assert_eq!(cycles.len(), 1);
        assert_eq!(diags.iter().filter(|d| d.kind == DiagnosticKind::IncompleteCycle).count(), 2);
    }

    #[test]
    fn span_over_a_rejected_stride_is_not_a_cycle() {
        let mut ev = events_for(Side::Left, &[[0.0, 0.1, 0.4, 0.6], [1.0, 1.1, 1.4, 1.6], [2.0, 2.1, 2.4, 2.6]]);
        // second stride keeps only its foot-flat bounds
        ev.retain(|e| !(e.t_ms > 900.0 && e.t_ms < 1700.0 && matches!(e.kind, EventKind::HeelStrike | EventKind::ToeOff)));
        let (cycles, _) = segment_cycles(&ev);
        assert!(cycles.is_empty());
    }

    #[test]
    fn stance_sixty_swing_forty() {
        let (stp, swp) = stance_swing(&cycle(Side::Left, 0.0, 0.1, 0.4, 0.6, 1.0));
        assert!((stp - 60.0).abs() < 1e-12);
        assert!((swp - 40.0).abs() < 1e-12);
        assert_eq!(stp + swp, 100.0);
        let (stp, swp) = stance_swing(&cycle(Side::Left, 0.0, 0.1, 0.4, 1.0, 1.0));
        assert_eq!((stp, swp), (100.0, 0.0));
    }

    #[test]
    fn double_stance_extremes() {
        // both feet in stance over the whole reference window
        let l = [cycle(Side::Left, 1.0, 1.1, 1.5, 2.0, 2.0)];
        let r = [cycle(Side::Right, 0.5, 0.6, 1.0, 2.5, 2.6)];
        let dsp = double_stance(&l, &r).unwrap();
        assert!((dsp[0] - 100.0).abs() < 1e-12);

        // stance intervals disjoint in time
        let l = [cycle(Side::Left, 1.0, 1.1, 1.3, 1.4, 2.0)];
        let r = [cycle(Side::Right, 0.5, 0.6, 0.8, 0.9, 1.5), cycle(Side::Right, 1.5, 1.6, 1.8, 1.9, 2.5)];
        assert_eq!(double_stance(&l, &r).unwrap()[0], 0.0);

        assert!(matches!(double_stance(&l, &[]), Err(GaitError::NoBilateralOverlap)));
    }

    #[test]
    fn symmetric_gait_double_stance() {
        // stance 60 %, right half a cycle behind: 10 % + 10 %
        let l: Vec<GaitCycle> = (0..5).map(|k| k as f64).map(|k| cycle(Side::Left, k, k + 0.1, k + 0.4, k + 0.6, k + 1.0)).collect();
        let r: Vec<GaitCycle> = (0..5)
            .map(|k| k as f64 + 0.5)
            .map(|k| cycle(Side::Right, k, k + 0.1, k + 0.4, k + 0.6, k + 1.0))
            .collect();
        let dsp = double_stance(&l, &r).unwrap();
        assert!(!dsp.is_empty());
        assert!(dsp.iter().all(|d| (d - 20.0).abs() < 1e-9), "{dsp:?}");
    }

    #[test]
    fn step_times_and_cadence() {
        let st = step_stride_cadence(&[0.0, 1000.0], &[500.0]).unwrap();
        assert_eq!(st.left, vec![0.5]);
        assert_eq!(st.right, vec![0.5]);
        assert_eq!(st.stride_time(), Some(1.0));
        assert_eq!(st.cadence, 120.0);

        // 121 alternating strikes over 60 s: 120 steps per minute
        let l: Vec<f64> = (0..61).map(|k| k as f64 * 1000.0).collect();
        let r: Vec<f64> = (0..60).map(|k| k as f64 * 1000.0 + 500.0).collect();
        assert!((step_stride_cadence(&l, &r).unwrap().cadence - 120.0).abs() < 1e-12);

        assert!(matches!(step_stride_cadence(&[0.0], &[]), Err(GaitError::InsufficientEvents(_))));
    }

    #[test]
    fn report_over_symmetric_gait() {
        let l: Vec<GaitCycle> = (0..6).map(|k| k as f64).map(|k| cycle(Side::Left, k, k + 0.1, k + 0.4, k + 0.6, k + 1.0)).collect();
        let r: Vec<GaitCycle> = (0..6)
            .map(|k| k as f64 + 0.5)
            .map(|k| cycle(Side::Right, k, k + 0.1, k + 0.4, k + 0.6, k + 1.0))
            .collect();
        let (rep, diags) = temporal_report(&l, &r);
        assert!(diags.is_empty());
        assert!((rep.stance_left.unwrap().mean - 60.0).abs() < 1e-9);
        assert!((rep.double_stance.unwrap().mean - 20.0).abs() < 1e-9);
        assert!((rep.step_time_left.unwrap().mean - 0.5).abs() < 1e-12);
        assert!((rep.stride_time.unwrap().mean - 1.0).abs() < 1e-12);
        assert!((rep.cadence.unwrap() - 120.0).abs() < 1e-9);
    }
}
