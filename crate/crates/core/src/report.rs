//! Session report: parameter summaries plus the event table, cycles and
//! strides they were computed from, rendered as TOML. Also the per-sample
//! plot-data CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::AnalysisConfig;
use crate::diag::Diagnostic;
use crate::error::{GaitError, Result};
use crate::events::GaitEvent;
use crate::model::{fmt_float, GaitSession, Side};
use crate::pipeline::{Analysis, FootAnalysis};
use crate::spatial::{spatial_report, SpatialReport, StrideTrajectory};
use crate::temporal::{segment_cycles, temporal_report, GaitCycle, TemporalReport};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub version: u32,
    pub frames_left: usize,
    pub frames_right: usize,
    pub sample_rate_left_hz: f64,
    pub sample_rate_right_hz: f64,
    #[serde(default)]
    pub session: BTreeMap<String, String>,
}

/// Temporal and spatial summaries, each as mean, population sd and count.
/// Phase shares are percent, times seconds, cadence steps/min, stride length
/// cm and velocity km/h.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Parameters {
    pub temporal: TemporalReport,
    pub spatial: SpatialReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaitReport {
    pub meta: ReportMeta,
    pub parameters: Parameters,
    pub config: AnalysisConfig,
    #[serde(default)]
    pub events: Vec<GaitEvent>,
    #[serde(default)]
    pub cycles: Vec<GaitCycle>,
    #[serde(default)]
    pub strides_left: Vec<StrideTrajectory>,
    #[serde(default)]
    pub strides_right: Vec<StrideTrajectory>,
    #[serde(default)]
    pub diagnostics: Vec<Diagnostic>,
}

impl GaitReport {
    pub fn new(session: &GaitSession, analysis: &Analysis) -> Self {
        let feet = [&analysis.left, &analysis.right];
        GaitReport {
            meta: ReportMeta {
                version: REPORT_VERSION,
                frames_left: session.left.len(),
                frames_right: session.right.len(),
                sample_rate_left_hz: session.left.sample_rate_hz,
                sample_rate_right_hz: session.right.sample_rate_hz,
                session: session.meta.clone(),
            },
            parameters: Parameters {
                temporal: analysis.temporal.clone(),
                spatial: analysis.spatial.clone(),
            },
            config: analysis.config.clone(),
            events: feet.iter().flat_map(|f| f.events.iter().copied()).collect(),
            cycles: feet.iter().flat_map(|f| f.cycles.iter().copied()).collect(),
            strides_left: summary_only(&analysis.left.trajectories),
            strides_right: summary_only(&analysis.right.trajectories),
            diagnostics: analysis.diagnostics.clone(),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| GaitError::Report(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| GaitError::Report(e.to_string()))
    }

    pub fn events_of(&self, side: Side) -> Vec<GaitEvent> {
        self.events.iter().filter(|e| e.side == side).copied().collect()
    }

    /// Rebuilds cycles from the event table and every summary from those
    /// cycles and the embedded strides. Returns what disagrees.
    pub fn recompute_mismatches(&self) -> Vec<String> {
        let mut out = Vec::new();
        let left = segment_cycles(&self.events_of(Side::Left)).0;
        let right = segment_cycles(&self.events_of(Side::Right)).0;
        let cycles: Vec<GaitCycle> = left.iter().chain(&right).copied().collect();
        if cycles != self.cycles {
            out.push(format!("cycles: {} rebuilt, {} embedded", cycles.len(), self.cycles.len()));
        }
        let temporal = temporal_report(&left, &right).0;
        if temporal != self.parameters.temporal {
            out.push(format!("temporal: rebuilt {temporal:?}, embedded {:?}", self.parameters.temporal));
        }
        let spatial = spatial_report(&self.strides_left, &self.strides_right);
        if spatial != self.parameters.spatial {
            out.push(format!("spatial: rebuilt {spatial:?}, embedded {:?}", self.parameters.spatial));
        }
        out
    }

    /// Fails when a summary cannot be recomputed from the embedded tables.
    pub fn check_consistency(&self) -> Result<()> {
        let m = self.recompute_mismatches();
        if m.is_empty() {
            Ok(())
        } else {
            Err(GaitError::Report(format!("report is not self-consistent: {}", m.join("; "))))
        }
    }
}

/// Strides without their per-sample velocity and position traces.
fn summary_only(strides: &[StrideTrajectory]) -> Vec<StrideTrajectory> {
    strides
        .iter()
        .map(|t| StrideTrajectory {
            velocity: Vec::new(),
            position: Vec::new(),
            ..t.clone()
        })
        .collect()
}

pub const PLOT_HEADER: &str = "side,idx,t_ms,p1,p2,p,gyro_x,zv,event";

/// One row per sample and foot: forefoot and hindfoot means, the smoothed
/// pressure sum, low-passed gyro X, a foot-flat flag and any event code.
pub fn plot_data(analysis: &Analysis) -> String {
    let mut out = String::from(PLOT_HEADER);
    out.push('\n');
    for foot in [&analysis.left, &analysis.right] {
        write_foot(&mut out, foot);
    }
    out
}

fn write_foot(out: &mut String, foot: &FootAnalysis) {
    let mut codes: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    for e in &foot.events {
        codes.entry(e.idx).or_default().push(e.kind.code());
    }
    let n = foot.times_ms.len();
    let mut zv = vec![false; n];
    for z in &foot.zero_velocity {
        zv[z.start..(z.end + 1).min(n)].iter_mut().for_each(|f| *f = true);
    }
    for (i, t) in foot.times_ms.iter().enumerate() {
        let event = codes.get(&i).map(|c| c.join("+")).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{i},{},{},{},{},{},{},{event}",
            foot.side.code(),
            fmt_float(*t),
            fmt_float(foot.sums.forefoot[i]),
            fmt_float(foot.sums.hindfoot[i]),
            fmt_float(foot.sums.total[i]),
            fmt_float(foot.gyro_x[i]),
            u8::from(zv[i]),
        );
    }
}
