//! Analysis configuration: one flat `key=value` file holding every tunable.
//!
//! The format is the flat subset of TOML, so `#` comments and blank lines are
//! accepted; nested tables and unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{GaitError, Result};
use crate::events::EventParams;
use crate::model::{IngestOptions, NOMINAL_RATE_HZ};
use crate::zv::VarianceGateConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Rate the filters are designed for.
    pub sample_rate_hz: f64,
    pub lpf_cutoff_hz: f64,
    pub lpf_taps: usize,
    pub gauss_sigma: f64,
    pub gauss_taps: usize,
    pub psum_taps: usize,
    /// Nominal pressure-sum cutoff. Not realizable with `psum_taps` taps; the
    /// filter uses the lowest cutoff its length supports.
    pub psum_cutoff_hz: f64,
    pub zv_variance_threshold1: f64,
    pub zv_variance_threshold2: f64,
    pub zv_window_samples: usize,
    pub stance_rel_threshold: f64,
    pub ev_window_before: usize,
    pub ev_window_after: usize,
    pub ev_neighborhood_r: usize,
    pub gravity_mps2: f64,
    pub zvu_residual_tol_mps: f64,
    pub pressure_full_scale: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        let zv = VarianceGateConfig::default();
        let ev = EventParams::default();
        AnalysisConfig {
            sample_rate_hz: NOMINAL_RATE_HZ,
            lpf_cutoff_hz: 20.0,
            lpf_taps: 21,
            gauss_sigma: 5.0,
            gauss_taps: 7,
            psum_taps: crate::filter::PSUM_TAPS,
            psum_cutoff_hz: 0.02,
            zv_variance_threshold1: zv.threshold1,
            zv_variance_threshold2: zv.threshold2,
            zv_window_samples: zv.window,
            stance_rel_threshold: zv.stance_rel_threshold,
            ev_window_before: ev.window_before,
            ev_window_after: ev.window_after,
            ev_neighborhood_r: ev.neighborhood,
            gravity_mps2: crate::spatial::STANDARD_GRAVITY,
            zvu_residual_tol_mps: 0.02,
            pressure_full_scale: 1.0,
        }
    }
}

impl AnalysisConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: AnalysisConfig = toml::from_str(text).map_err(|e| GaitError::InvalidConfig(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Every key with its value, one `key=value` line each, in declaration
    /// order. Parsing the output gives back an equal config.
    pub fn to_key_values(&self) -> String {
        let table = toml::Table::try_from(self).expect("flat config serializes");
        let mut out = String::new();
        for key in Self::KEYS {
            out.push_str(&format!("{key}={}\n", table[*key]));
        }
        out
    }

    pub const KEYS: &'static [&'static str] = &[
        "sample_rate_hz",
        "lpf_cutoff_hz",
        "lpf_taps",
        "gauss_sigma",
        "gauss_taps",
        "psum_taps",
        "psum_cutoff_hz",
        "zv_variance_threshold1",
        "zv_variance_threshold2",
        "zv_window_samples",
        "stance_rel_threshold",
        "ev_window_before",
        "ev_window_after",
        "ev_neighborhood_r",
        "gravity_mps2",
        "zvu_residual_tol_mps",
        "pressure_full_scale",
    ];

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(GaitError::InvalidConfig(msg));
        if !(self.sample_rate_hz > 0.0) {
            return bad(format!("sample_rate_hz must be positive, got {}", self.sample_rate_hz));
        }
        if !(self.lpf_cutoff_hz > 0.0 && self.lpf_cutoff_hz < self.sample_rate_hz / 2.0) {
            return bad(format!("lpf_cutoff_hz must lie in (0, {}), got {}", self.sample_rate_hz / 2.0, self.lpf_cutoff_hz));
        }
        for (key, taps) in [("lpf_taps", self.lpf_taps), ("gauss_taps", self.gauss_taps), ("psum_taps", self.psum_taps)] {
            if taps % 2 == 0 {
                return bad(format!("{key} must be odd, got {taps}"));
            }
        }
        if self.psum_taps < 3 {
            return bad(format!("psum_taps must be at least 3, got {}", self.psum_taps));
        }
        if !(self.gauss_sigma > 0.0) {
            return bad(format!("gauss_sigma must be positive, got {}", self.gauss_sigma));
        }
        if !(self.gravity_mps2 > 0.0) || !(self.zvu_residual_tol_mps > 0.0) || !(self.pressure_full_scale > 0.0) {
            return bad("gravity_mps2, zvu_residual_tol_mps and pressure_full_scale must be positive".into());
        }
        self.variance_gate().validate()
    }

    pub fn variance_gate(&self) -> VarianceGateConfig {
        VarianceGateConfig {
            window: self.zv_window_samples,
            threshold1: self.zv_variance_threshold1,
            threshold2: self.zv_variance_threshold2,
            stance_rel_threshold: self.stance_rel_threshold,
        }
    }

    pub fn event_params(&self) -> EventParams {
        EventParams {
            window_before: self.ev_window_before,
            window_after: self.ev_window_after,
            neighborhood: self.ev_neighborhood_r,
        }
    }

    pub fn ingest_options(&self) -> IngestOptions {
        IngestOptions {
            pressure_full_scale: self.pressure_full_scale,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(AnalysisConfig::parse("").unwrap(), AnalysisConfig::default());
        assert_eq!(AnalysisConfig::parse("# nothing\n\n").unwrap(), AnalysisConfig::default());
    }

    #[test]
    fn key_values_round_trip() {
        let c = AnalysisConfig {
            lpf_cutoff_hz: 15.5,
            ev_window_before: 50,
            ..AnalysisConfig::default()
        };
        let text = c.to_key_values();
        assert!(text.contains("lpf_taps=21\n"));
        assert!(text.contains("psum_cutoff_hz=0.02\n"));
        assert_eq!(text.lines().count(), AnalysisConfig::KEYS.len());
        assert_eq!(AnalysisConfig::parse(&text).unwrap(), c);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(matches!(AnalysisConfig::parse("lpf_tap=21"), Err(GaitError::InvalidConfig(_))));
        assert!(AnalysisConfig::parse("lpf_taps=20").is_err());
        assert!(AnalysisConfig::parse("lpf_cutoff_hz=40").is_err());
        assert!(AnalysisConfig::parse("zv_variance_threshold1=1\nzv_variance_threshold2=2").is_err());
        assert!(AnalysisConfig::parse("[zv]\nwindow=3").is_err());
        assert!(AnalysisConfig::parse("lpf_taps = 31 # longer").is_ok());
    }
}
