//! Theoretical error rates and sampling-phase selection.

mod ber;
mod criterion;
mod grid;

pub use ber::{
    binomial_sigma, chernoff_surrogate, surrogate_eta, theoretical_ber, theoretical_ber_bpsk, theoretical_ser,
    theory_point, BerMode, BerPoint, BerSource,
};
pub use criterion::{
    awgn_band_objective, band_power, criterion_awgn, criterion_general, grid_search_ber_oracle, select_phase,
    CriterionResult, OracleResult,
};
pub use grid::{band_indices, PhaseGrid};
