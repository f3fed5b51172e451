use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Receiver sampling phase offset in symbol periods, in `[-0.5, 0.5]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SamplingPhase(f64);

impl SamplingPhase {
    pub const ZERO: SamplingPhase = SamplingPhase(0.0);

    pub fn new(epsilon: f64) -> Result<Self> {
        if (-0.5..=0.5).contains(&epsilon) {
            Ok(Self(epsilon))
        } else {
            Err(Error::invalid(format!("sampling phase {epsilon} outside [-0.5, 0.5]")))
        }
    }

    /// Reduces any real offset modulo one symbol into `[-0.5, 0.5)`.
    pub fn wrapped(epsilon: f64) -> Self {
        let mut e = epsilon - epsilon.round();
        if e >= 0.5 {
            e -= 1.0;
        }
        Self(e)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn add(self, delta: f64) -> Self {
        Self::wrapped(self.0 + delta)
    }
}

impl TryFrom<f64> for SamplingPhase {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SamplingPhase> for f64 {
    fn from(p: SamplingPhase) -> f64 {
        p.0
    }
}

impl std::fmt::Display for SamplingPhase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}
