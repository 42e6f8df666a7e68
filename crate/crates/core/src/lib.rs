//! Spatial-temporal gait parameters from two in-shoe sensor units, each
//! carrying a 6-axis inertial sensor and eight film-pressure channels.
//!
//! The pipeline smooths the raw signals, finds foot-flat (zero-velocity)
//! intervals by fusing the pressure trend with gyroscope quietness, locates
//! heel strike and toe off on the hindfoot and forefoot pressure curves, and
//! derives stance/swing, double stance, step and stride time, cadence, stride
//! length and walking speed. [`synth`] generates sessions with exact ground
//! truth for checking all of it.

// `!(x > 0.0)` is how NaN gets rejected along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod diag;
pub mod error;
pub mod events;
pub mod filter;
pub mod model;
pub mod pipeline;
pub mod report;
pub mod spatial;
pub mod stats;
pub mod stream;
pub mod synth;
pub mod temporal;
pub mod zv;

pub use config::AnalysisConfig;
pub use diag::{Diagnostic, DiagnosticKind};
pub use error::{GaitError, Result};
pub use model::{parse_log, serialize_log, FootStream, GaitSession, SensorFrame, Side};
pub use pipeline::{analyze, Analysis};
pub use report::GaitReport;
pub use synth::{generate, GaitProfile, GroundTruth};
