use thiserror::Error;

use crate::model::Side;

pub type Result<T, E = GaitError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum GaitError {
    #[error("MalformedRow line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },

    #[error("NonMonotoneTime: {side} foot, frame {index} at t={t_ms} ms")]
    NonMonotoneTime { side: Side, index: usize, t_ms: f64 },

    #[error("OutOfRangeValue line {line}: column {column} = {value}")]
    OutOfRangeValue {
        line: usize,
        column: &'static str,
        value: f64,
    },

    #[error("InvalidCutoff: {cutoff_hz} Hz at fs {sample_rate_hz} Hz")]
    InvalidCutoff { cutoff_hz: f64, sample_rate_hz: f64 },

    #[error("EvenTaps: filter length {0} must be odd")]
    EvenTaps(usize),

    #[error("InvalidSigma: {0}")]
    InvalidSigma(f64),

    #[error("TooShort: need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("EmptyStream")]
    EmptyStream,

    #[error("WindowOutOfBounds: [{start}, {end}) over {len} samples")]
    WindowOutOfBounds { start: usize, end: usize, len: usize },

    #[error("LengthMismatch: {0}")]
    LengthMismatch(String),

    #[error("DegenerateTriple: indices must be strictly increasing")]
    DegenerateTriple,

    #[error("EmptyCandidates")]
    EmptyCandidates,

    #[error("NoCandidates in [{start}, {end})")]
    NoCandidates { start: usize, end: usize },

    #[error("NoBilateralOverlap")]
    NoBilateralOverlap,

    #[error("InsufficientEvents: {0}")]
    InsufficientEvents(String),

    #[error("NoAnchors")]
    NoAnchors,

    #[error("InsufficientAnchors: need 2, got {0}")]
    InsufficientAnchors(usize),

    #[error("ZeroDuration")]
    ZeroDuration,

    #[error("DurationTooShort: {duration_s} s is less than two strides of {stride_s} s")]
    DurationTooShort { duration_s: f64, stride_s: f64 },

    #[error("InvalidProfile: {0}")]
    InvalidProfile(String),

    #[error("InvalidSession: {0}")]
    InvalidSession(String),

    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),

    #[error("BindFailure: {addr}: {source}")]
    BindFailure {
        addr: String,
        #[source]
        source: std::io::Error,
    },

    #[error("report encoding: {0}")]
    Report(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl GaitError {
    /// Errors caused by bad input (exit code 2) as opposed to broken internal
    /// contracts (exit code 3).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            GaitError::MalformedRow { .. }
                | GaitError::NonMonotoneTime { .. }
                | GaitError::OutOfRangeValue { .. }
                | GaitError::InvalidCutoff { .. }
                | GaitError::EvenTaps(_)
                | GaitError::InvalidSigma(_)
                | GaitError::TooShort { .. }
                | GaitError::EmptyStream
                | GaitError::DurationTooShort { .. }
                | GaitError::InvalidProfile(_)
                | GaitError::InvalidConfig(_)
                | GaitError::InvalidSession(_)
                | GaitError::BindFailure { .. }
                | GaitError::Io(_)
        )
    }
}
