use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::Side;

/// What went wrong (or looked suspicious) while validating or analyzing a session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiagnosticKind {
    NonMonotoneTime,
    NonFinite,
    OutOfRangeValue,
    RateMismatch,
    SampleGap,
    EmptyStream,
    NoBilateralOverlap,
    TruncatedStance,
    NoGateCrossing,
    ClippedWindow,
    PaddedCandidates,
    NoCandidates,
    OrderViolation,
    IncompleteCycle,
    SpatialSkipped,
    ProtocolError,
    BufferOverflow,
}

impl DiagnosticKind {
    /// True for kinds that mean a data-model invariant does not hold. The rest
    /// are advisory: the session is usable but some output may be missing.
    pub fn is_invariant_violation(self) -> bool {
        matches!(
            self,
            DiagnosticKind::NonMonotoneTime
                | DiagnosticKind::NonFinite
                | DiagnosticKind::OutOfRangeValue
                | DiagnosticKind::RateMismatch
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub side: Option<Side>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub index: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, message: impl Into<String>) -> Self {
        Diagnostic {
            kind,
            side: None,
            index: None,
            message: message.into(),
        }
    }

    pub fn on(mut self, side: Side) -> Self {
        self.side = Some(side);
        self
    }

    pub fn at(mut self, index: usize) -> Self {
        self.index = Some(index);
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.kind)?;
        if let Some(side) = self.side {
            write!(f, " [{side}]")?;
        }
        if let Some(index) = self.index {
            write!(f, " at index {index}")?;
        }
        write!(f, ": {}", self.message)
    }
}
