use serde::{Deserialize, Serialize};

use crate::channel::SamplingPhase;
use crate::{Error, Result};

/// Sorted, distinct set of candidate sampling phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PhaseGrid {
    phases: Vec<SamplingPhase>,
}

impl PhaseGrid {
    pub const DEFAULT_SIZE: usize = 128;

    /// `n` points `-0.5 + i / n`, `i = 0..n`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("phase grid must not be empty"));
        }
        Ok(Self {
            phases: (0..n).map(|i| SamplingPhase::wrapped(-0.5 + i as f64 / n as f64)).collect(),
        })
    }

    /// Sorts and validates the given phases; duplicates are rejected.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("phase grid must not be empty"));
        }
        let mut phases = values.iter().map(|&v| SamplingPhase::new(v)).collect::<Result<Vec<_>>>()?;
        phases.sort_by(|a, b| a.value().total_cmp(&b.value()));
        if phases.windows(2).any(|w| w[0].value() == w[1].value()) {
            return Err(Error::invalid("phase grid contains duplicates"));
        }
        Ok(Self { phases })
    }

    pub fn phases(&self) -> &[SamplingPhase] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.phases.iter().map(|p| p.value()).collect()
    }

    /// Spacing of a uniform grid, or the smallest gap otherwise.
    pub fn step(&self) -> f64 {
        if self.phases.len() < 2 {
            return 1.0;
        }
        self.phases
            .windows(2)
            .map(|w| w[1].value() - w[0].value())
            .fold(f64::INFINITY, f64::min)
    }
}

impl Default for PhaseGrid {
    fn default() -> Self {
        Self::uniform(Self::DEFAULT_SIZE).expect("nonzero size")
    }
}

impl TryFrom<Vec<f64>> for PhaseGrid {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::from_values(&v)
    }
}

impl From<PhaseGrid> for Vec<f64> {
    fn from(g: PhaseGrid) -> Self {
        g.values()
    }
}

/// Inclusive roll-off band `(ceil(N(1-alpha)/2), floor(N(1+alpha)/2))`.
pub fn band_indices(n: usize, alpha: f64) -> Result<(usize, usize)> {
    crate::dsp::srrc::check_alpha(alpha)?;
    let lo = 0.5 * n as f64 * (1.0 - alpha);
    let hi = 0.5 * n as f64 * (1.0 + alpha);
    let lo = snap(lo, f64::ceil);
    let hi = snap(hi, f64::floor);
    if hi < lo || n == 0 {
        return Err(Error::EmptyBand { n_fft: n, alpha });
    }
    Ok((lo as usize, hi as usize))
}

/// Rounds to the nearest integer when within floating-point noise of it.
fn snap(x: f64, op: fn(f64) -> f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r
    } else {
        op(x)
    }
}
