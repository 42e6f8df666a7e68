//! End-to-end analysis of one session: filtering, foot-flat detection, event
//! detection, cycle segmentation, temporal and spatial parameters.

use crate::config::AnalysisConfig;
use crate::diag::{Diagnostic, DiagnosticKind};
use crate::error::{GaitError, Result};
use crate::events::{assemble_events, detect_heel_strike, detect_toe_off, Detection, GaitEvent, StrideEvents};
use crate::filter::{design_lowpass, pressure_sum_filter, FirFilter, GaussKernel};
use crate::model::{validate_session, FootStream, GaitSession, Side};
use crate::spatial::{estimate_orientation, spatial_report, zvu_integrate, SpatialReport, StrideTrajectory};
use crate::temporal::{segment_cycles, temporal_report, GaitCycle, TemporalReport};
use crate::zv::{detect_zero_velocity, pressure_sums, PressureSums, ZeroVelocityInterval};

/// The three filters of the preprocessing stage, designed once per analysis.
#[derive(Debug, Clone)]
pub struct Filters {
    pub inertial: FirFilter,
    pub gauss: GaussKernel,
    pub psum: FirFilter,
}

impl Filters {
    pub fn design(cfg: &AnalysisConfig) -> Result<Self> {
        Ok(Filters {
            inertial: design_lowpass(cfg.lpf_cutoff_hz, cfg.sample_rate_hz, cfg.lpf_taps)?,
            gauss: GaussKernel::new(cfg.gauss_sigma, cfg.gauss_taps)?,
            psum: pressure_sum_filter(cfg.psum_taps)?,
        })
    }
}

/// Intermediate signals and results for one foot.
#[derive(Debug, Clone, PartialEq)]
pub struct FootAnalysis {
    pub side: Side,
    pub times_ms: Vec<f64>,
    pub sums: PressureSums,
    /// Low-passed gyroscope X axis, the signal the foot-flat gate watches.
    pub gyro_x: Vec<f64>,
    pub zero_velocity: Vec<ZeroVelocityInterval>,
    pub heel_strikes: Vec<Option<Detection>>,
    pub toe_offs: Vec<Option<Detection>>,
    pub events: Vec<GaitEvent>,
    pub cycles: Vec<GaitCycle>,
    pub trajectories: Vec<StrideTrajectory>,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub config: AnalysisConfig,
    pub left: FootAnalysis,
    pub right: FootAnalysis,
    pub temporal: TemporalReport,
    pub spatial: SpatialReport,
    /// Session-level diagnostics followed by the left and right foot's.
    pub diagnostics: Vec<Diagnostic>,
}

impl Analysis {
    pub fn foot(&self, side: Side) -> &FootAnalysis {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

/// Runs the full pipeline. Fails on sessions that break a data-model
/// invariant; everything short of that becomes a diagnostic.
pub fn analyze(session: &GaitSession, cfg: &AnalysisConfig) -> Result<Analysis> {
    cfg.validate()?;
    let mut diagnostics = validate_session(session);
    if let Some(d) = diagnostics.iter().find(|d| d.kind.is_invariant_violation()) {
        return Err(GaitError::InvalidSession(d.to_string()));
    }
    if session.left.is_empty() || session.right.is_empty() {
        return Err(GaitError::EmptyStream);
    }
    let filters = Filters::design(cfg)?;
    let (left, right) = std::thread::scope(|s| {
        let l = s.spawn(|| analyze_foot(&session.left, cfg, &filters));
        let r = analyze_foot(&session.right, cfg, &filters);
        (l.join().expect("left foot analysis panicked"), r)
    });
    let (left, right) = (left?, right?);

    let (temporal, tdiags) = temporal_report(&left.cycles, &right.cycles);
    diagnostics.extend(tdiags);
    let spatial = spatial_report(&left.trajectories, &right.trajectories);
    diagnostics.extend(left.diagnostics.iter().cloned());
    diagnostics.extend(right.diagnostics.iter().cloned());
    Ok(Analysis {
        config: cfg.clone(),
        left,
        right,
        temporal,
        spatial,
        diagnostics,
    })
}

pub fn analyze_foot(stream: &FootStream, cfg: &AnalysisConfig, filters: &Filters) -> Result<FootAnalysis> {
    let side = stream.side;
    let times_ms = stream.times_ms();
    let sums = pressure_sums(stream, &filters.gauss, &filters.psum)?;
    let gyro: Vec<Vec<f64>> = (0..3).map(|a| filters.inertial.apply(&stream.gyro_axis(a))).collect();
    let (zero_velocity, mut diagnostics) = detect_zero_velocity(&sums, &gyro[0], &cfg.variance_gate(), side)?;

    let params = cfg.event_params();
    let mut heel_strikes = Vec::with_capacity(zero_velocity.len());
    let mut toe_offs = Vec::with_capacity(zero_velocity.len());
    let mut strides = Vec::with_capacity(zero_velocity.len());
    for zv in &zero_velocity {
        let keep = |r: Result<Detection>, diagnostics: &mut Vec<Diagnostic>| match r {
            Ok(d) => {
                diagnostics.extend(d.diagnostics.iter().cloned());
                Some(d)
            }
            Err(e) => {
                diagnostics.push(Diagnostic::new(DiagnosticKind::NoCandidates, e.to_string()).on(side).at(zv.start));
                None
            }
        };
        let hs = keep(detect_heel_strike(&sums, zv, &params), &mut diagnostics);
        let to = keep(detect_toe_off(&sums, zv, &params), &mut diagnostics);
        strides.push(StrideEvents {
            zv: *zv,
            heel_strike: hs.as_ref().map(|d| d.idx),
            toe_off: to.as_ref().map(|d| d.idx),
        });
        heel_strikes.push(hs);
        toe_offs.push(to);
    }
    let (events, ediags) = assemble_events(side, &strides, &times_ms);
    diagnostics.extend(ediags);
    let (cycles, cdiags) = segment_cycles(&events);
    diagnostics.extend(cdiags);

    let trajectories = if zero_velocity.len() >= 2 {
        let accel: Vec<Vec<f64>> = (0..3).map(|a| filters.inertial.apply(&stream.accel_axis(a))).collect();
        let gyro3: Vec<[f64; 3]> = (0..times_ms.len()).map(|i| [gyro[0][i], gyro[1][i], gyro[2][i]]).collect();
        let accel3: Vec<[f64; 3]> = (0..times_ms.len()).map(|i| [accel[0][i], accel[1][i], accel[2][i]]).collect();
        let q = estimate_orientation(&gyro3, &accel3, &times_ms, &zero_velocity)?;
        let all = zvu_integrate(&accel3, &q, &times_ms, &zero_velocity, cfg.gravity_mps2)?;
        keep_single_strides(all, cfg, side, &mut diagnostics)
    } else {
        diagnostics.push(Diagnostic::new(
            DiagnosticKind::SpatialSkipped,
            format!("{} foot-flat interval(s); need 2 for a stride", zero_velocity.len()),
        ).on(side));
        Vec::new()
    };

    Ok(FootAnalysis {
        side,
        times_ms,
        sums,
        gyro_x: gyro.into_iter().next().unwrap_or_default(),
        zero_velocity,
        heel_strikes,
        toe_offs,
        events,
        cycles,
        trajectories,
        diagnostics,
    })
}

/// Drops anchor pairs spanning more than one stride (a stance region between
/// them went undetected) and strides whose corrected end velocity breaks the
/// tolerance.
fn keep_single_strides(
    all: Vec<StrideTrajectory>,
    cfg: &AnalysisConfig,
    side: Side,
    diagnostics: &mut Vec<Diagnostic>,
) -> Vec<StrideTrajectory> {
    let mut spans: Vec<f64> = all.iter().map(|t| t.end_ms - t.start_ms).collect();
    spans.sort_by(f64::total_cmp);
    let median = spans.get(spans.len() / 2).copied().unwrap_or(0.0);
    all.into_iter()
        .filter(|t| {
            let span = t.end_ms - t.start_ms;
            if span > 1.5 * median {
                diagnostics.push(
                    Diagnostic::new(DiagnosticKind::SpatialSkipped, format!("anchor gap of {span:.0} ms spans more than one stride"))
                        .on(side)
                        .at(t.start),
                );
                return false;
            }
            let end_v = t.velocity.last().map_or(0.0, |v| v.norm());
            if end_v >= cfg.zvu_residual_tol_mps {
                diagnostics.push(
                    Diagnostic::new(DiagnosticKind::SpatialSkipped, format!("corrected anchor velocity {end_v} m/s"))
                        .on(side)
                        .at(t.end),
                );
                return false;
            }
            true
        })
        .enumerate()
        .map(|(i, mut t)| {
            t.stride = i;
            t
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate, GaitProfile};

    #[test]
    fn rejects_empty_foot() {
        let (mut s, _) = generate(&GaitProfile::normal(), 5.0).unwrap();
        s.right.frames.clear();
        assert!(analyze(&s, &AnalysisConfig::default()).is_err());
    }

    #[test]
    fn normal_walk_yields_cycles_on_both_feet() {
        let (s, t) = generate(&GaitProfile::normal().noiseless(), 20.0).unwrap();
        let a = analyze(&s, &AnalysisConfig::default()).unwrap();
        for side in [Side::Left, Side::Right] {
            let got = a.foot(side).cycles.len();
            let want = t.cycles(side).len();
            assert!(got + 1 >= want, "{side}: {got} cycles, truth {want}");
        }
        let st = a.temporal.stance_left.unwrap();
        let sw = a.temporal.swing_left.unwrap();
        assert!((st.mean + sw.mean - 100.0).abs() < 1e-9);
    }
}
