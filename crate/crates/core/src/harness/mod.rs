//! Scenario files, the Monte-Carlo BER engine, and the analytic and
//! criterion runs built on top of it.

mod compare;
mod config;
mod link;
mod mc;
mod output;
mod theory;

pub use compare::{criterion_responses, run_criterion, run_str_baseline, CriterionReport, StrOutcome};
pub use config::{
    CriterionConfig, Equalizer, McConfig, PhaseConfig, ResponseSource, ScenarioConfig, SrrcConfig, StrConfig,
    SweepConfig,
};
pub use link::{Counts, Link};
pub use mc::{burst_seed, mc_point, run_mc_ber, BerCurve};
pub use output::{sidecar_path, write_curve, write_with_sidecar};
pub use theory::{analytic_response, dump_response, run_theory, ResponseTable};
