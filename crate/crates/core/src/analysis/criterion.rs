use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::ber::BerPoint;
use super::grid::{band_indices, PhaseGrid};
use super::surrogate_eta;
use crate::channel::{EquivResponse, SamplingPhase};
use crate::{Error, Result};

/// Outcome of a sampling-phase criterion evaluated on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub phases: Vec<SamplingPhase>,
    pub chosen: SamplingPhase,
    pub chosen_index: usize,
    /// Maximized objective, one value per phase.
    pub objective: Vec<f64>,
    /// Exponential-form objective (minimized), when computed.
    pub exp_objective: Option<Vec<f64>>,
    /// Inclusive subcarrier range of the roll-off band.
    pub band: (usize, usize),
}

/// Index of the best value. Values within a relative `1e-12` of each other
/// are ties, resolved toward the smallest `|epsilon|` and then the smallest
/// `epsilon`.
pub fn select_phase(phases: &[SamplingPhase], values: &[f64], maximize: bool) -> Result<usize> {
    if phases.is_empty() || phases.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: phases.len(),
            actual: values.len(),
        });
    }
    if let Some(v) = values.iter().find(|v| v.is_nan()) {
        return Err(Error::invalid(format!("objective contains {v}")));
    }
    let sign = if maximize { 1.0 } else { -1.0 };
    let best = values.iter().map(|v| sign * v).fold(f64::NEG_INFINITY, f64::max);
    let tol = 1e-12 * best.abs();
    let idx = (0..phases.len())
        .filter(|&i| sign * values[i] >= best - tol)
        .min_by(|&a, &b| {
            let (pa, pb) = (phases[a].value(), phases[b].value());
            pa.abs().total_cmp(&pb.abs()).then(pa.total_cmp(&pb))
        })
        .expect("at least one candidate attains the best value");
    Ok(idx)
}

/// `sum_band cos^2(pi eps) + sin^2(pi eps) sin^2((pi/alpha)(0.5 - n/N))`.
pub fn awgn_band_objective(alpha: f64, n: usize, band: (usize, usize), epsilon: f64) -> f64 {
    let (c, s) = awgn_weights(epsilon);
    (band.0..=band.1).map(|i| c + s * band_shape(alpha, i, n)).sum()
}

fn awgn_weights(epsilon: f64) -> (f64, f64) {
    let (s, c) = (PI * epsilon).sin_cos();
    (c * c, s * s)
}

fn band_shape(alpha: f64, i: usize, n: usize) -> f64 {
    (PI / alpha * (0.5 - i as f64 / n as f64)).sin().powi(2)
}

/// Flat-channel criterion: maximize [`awgn_band_objective`] over the grid.
/// The exponential form `sum_band exp(-|H|^2 eta)` is evaluated alongside.
pub fn criterion_awgn(alpha: f64, n: usize, grid: &PhaseGrid, ebn0_db: f64, m: usize) -> Result<CriterionResult> {
    let band = band_indices(n, alpha)?;
    let eta = surrogate_eta(ebn0_db, m)?;
    let phases = grid.phases().to_vec();
    let objective: Vec<f64> = phases
        .iter()
        .map(|p| awgn_band_objective(alpha, n, band, p.value()))
        .collect();
    let exp_objective = phases
        .iter()
        .map(|p| {
            let (c, s) = awgn_weights(p.value());
            (band.0..=band.1)
                .map(|i| (-(c + s * band_shape(alpha, i, n)) * eta).exp())
                .sum()
        })
        .collect();
    let chosen_index = select_phase(&phases, &objective, true)?;
    Ok(CriterionResult {
        chosen: phases[chosen_index],
        chosen_index,
        phases,
        objective,
        exp_objective: Some(exp_objective),
        band,
    })
}

/// Roll-off band power `sum_band |h[n]|^2`.
pub fn band_power(h: &EquivResponse, band: (usize, usize)) -> f64 {
    h.h[band.0..=band.1].iter().map(|v| v.norm_sqr()).sum()
}

/// General criterion: the phase whose response carries the most power in
/// the roll-off band.
pub fn criterion_general(responses: &[(SamplingPhase, EquivResponse)], alpha: f64, n: usize) -> Result<CriterionResult> {
    if responses.is_empty() {
        return Err(Error::invalid("no responses to evaluate"));
    }
    let band = band_indices(n, alpha)?;
    if let Some((_, r)) = responses.iter().find(|(_, r)| r.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: r.len(),
        });
    }
    let phases: Vec<SamplingPhase> = responses.iter().map(|(p, _)| *p).collect();
    let objective: Vec<f64> = responses.iter().map(|(_, r)| band_power(r, band)).collect();
    let chosen_index = select_phase(&phases, &objective, true)?;
    Ok(CriterionResult {
        chosen: phases[chosen_index],
        chosen_index,
        phases,
        objective,
        exp_objective: None,
        band,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub best: SamplingPhase,
    pub best_index: usize,
    pub points: Vec<(SamplingPhase, BerPoint)>,
}

impl OracleResult {
    pub fn best_point(&self) -> &BerPoint {
        &self.points[self.best_index].1
    }
}

/// Evaluates `eval(index, phase)` for every grid phase in parallel and
/// returns the phase with the lowest BER. Results are collected in grid
/// order, so the outcome does not depend on scheduling.
pub fn grid_search_ber_oracle<F>(grid: &PhaseGrid, eval: F) -> Result<OracleResult>
where
    F: Fn(usize, SamplingPhase) -> Result<BerPoint> + Sync,
{
    let points = grid
        .phases()
        .par_iter()
        .enumerate()
        .map(|(i, &p)| eval(i, p).map(|pt| (p, pt)))
        .collect::<Result<Vec<_>>>()?;
    let phases: Vec<SamplingPhase> = points.iter().map(|(p, _)| *p).collect();
    let bers: Vec<f64> = points.iter().map(|(_, pt)| pt.ber).collect();
    let best_index = select_phase(&phases, &bers, false)?;
    Ok(OracleResult {
        best: phases[best_index],
        best_index,
        points,
    })
}
