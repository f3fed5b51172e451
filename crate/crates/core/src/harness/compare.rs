use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{ResponseSource, ScenarioConfig};
use super::link::Link;
use super::mc::{burst_seed, mc_point, phase_key};
use super::theory::analytic_response;
use crate::analysis::{criterion_general, grid_search_ber_oracle, BerPoint, CriterionResult, OracleResult};
use crate::channel::{ChannelProfile, SamplingPhase};
use crate::dsp::SignalBuffer;
use crate::timing::{str_track, StrLayout, StrLoopState};
use crate::Result;

/// Seed streams reserved for estimation and timing recovery.
const ESTIMATE_STREAM: u64 = u64::MAX;
const STR_STREAM: u64 = u64::MAX - 1;

/// Result of the timing-recovery baseline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrOutcome {
    /// Recovered phase, wrapped to `[-0.5, 0.5)`.
    pub epsilon: f64,
    /// Mean peak offset from the nominal zero-phase position, in symbols.
    pub raw_offset: f64,
    pub converged: bool,
    pub converged_at: Option<usize>,
    pub phase_estimate: f64,
    pub error_history: Vec<f64>,
}

/// Runs acquisition and tracking on one noisy realization at `ebn0_db`.
pub fn run_str_baseline(cfg: &ScenarioConfig, profile: &ChannelProfile, ebn0_db: f64) -> Result<StrOutcome> {
    let s = &cfg.str_loop;
    let link = Link::new(cfg, profile, 0.0)?;
    let u = cfg.frame.n_upsam;
    let frame_syms = cfg.frame.frame_len();
    let l = cfg.frame.pn_len;
    let mut rng = ChaCha8Rng::seed_from_u64(burst_seed(cfg.seed, STR_STREAM, 0, 0));
    let z = link.received_stream(s.frames + 2, ebn0_db, &mut rng)?;
    let rx = SignalBuffer::oversampled(z, u)?;
    let layout = StrLayout {
        frame_len: frame_syms * u,
        search_start: 0,
        search_len: frame_syms * u,
        track_radius: s.track_radius,
        reference_offset: l / 2,
    };
    let state = str_track(&rx, link.pn(), StrLoopState::new(s.loop_gain)?, &layout, s.frames)?;
    let nominal = |f: usize| (link.filter_delay() + u * (f * frame_syms + l / 2)) as f64;
    let tail = s.frames - s.average_frames;
    let raw_offset = state.peak_positions[tail..]
        .iter()
        .enumerate()
        .map(|(k, t)| (t - nominal(tail + k)) / u as f64)
        .sum::<f64>()
        / s.average_frames as f64;
    Ok(StrOutcome {
        epsilon: SamplingPhase::wrapped(raw_offset).value(),
        raw_offset,
        converged: state.converged(),
        converged_at: state.converged_at,
        phase_estimate: state.phase_estimate,
        error_history: state.error_history,
    })
}

/// Criterion phase compared with the timing-recovery baseline and the
/// Monte-Carlo grid search, all at the reference Eb/N0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub fingerprint: String,
    pub profile: String,
    pub reference_ebn0_db: f64,
    pub criterion: CriterionResult,
    pub criterion_point: Option<BerPoint>,
    pub str_baseline: Option<StrOutcome>,
    pub str_point: Option<BerPoint>,
    pub oracle: Option<OracleResult>,
    pub wall_time_s: f64,
}

impl CriterionReport {
    /// True when a point ran out of budget or the loop did not converge.
    pub fn flagged(&self) -> bool {
        let exhausted = self
            .criterion_point
            .iter()
            .chain(&self.str_point)
            .chain(self.oracle.iter().flat_map(|o| o.points.iter().map(|(_, p)| p)))
            .any(|p| p.budget_exhausted);
        exhausted || self.str_baseline.as_ref().is_some_and(|s| !s.converged)
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "profile {} at Eb/N0 {} dB\ncriterion phase {} (band {}..={})\n",
            self.profile, self.reference_ebn0_db, self.criterion.chosen, self.criterion.band.0, self.criterion.band.1
        );
        let row = |name: &str, eps: f64, p: &BerPoint| {
            format!(
                "{name:<10} eps {eps:+.6}  ber {:.4e} +/- {:.1e}  ({} errors / {} bits)\n",
                p.ber,
                p.ber_sigma(),
                p.error_count,
                p.bit_count
            )
        };
        if let Some(p) = &self.criterion_point {
            out.push_str(&row("criterion", self.criterion.chosen.value(), p));
        }
        if let Some(s) = &self.str_baseline {
            out.push_str(&format!(
                "str loop   eps {:+.6}  converged {} (frame {:?})\n",
                s.epsilon, s.converged, s.converged_at
            ));
            if let Some(p) = &self.str_point {
                out.push_str(&row("str", s.epsilon, p));
            }
        }
        if let Some(o) = &self.oracle {
            out.push_str(&row("grid best", o.best.value(), o.best_point()));
        }
        out
    }
}

/// Per-phase responses for the criterion.
pub fn criterion_responses(
    cfg: &ScenarioConfig,
    profile: &ChannelProfile,
    phases: &[SamplingPhase],
    ebn0_db: f64,
) -> Result<Vec<(SamplingPhase, crate::channel::EquivResponse)>> {
    phases
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let h = match cfg.criterion.response {
                ResponseSource::Analytic => analytic_response(cfg, profile, p.value())?,
                ResponseSource::PnEstimated => {
                    let link = Link::new(cfg, profile, p.value())?;
                    let seed = burst_seed(cfg.seed, ESTIMATE_STREAM, phase_key(cfg, i), 0);
                    link.estimate_response(cfg.mc.pn_avg, ebn0_db, &mut ChaCha8Rng::seed_from_u64(seed))?
                }
            };
            Ok((*p, h))
        })
        .collect()
}

pub fn run_criterion(cfg: &ScenarioConfig) -> Result<CriterionReport> {
    cfg.validate()?;
    let start = Instant::now();
    let profile = cfg.profile()?;
    let grid = cfg.phase_grid()?;
    let ebn0 = cfg.reference_ebn0_db();
    let ref_index = cfg.sweep.ebn0_db.len() as u64;
    let responses = criterion_responses(cfg, &profile, grid.phases(), ebn0)?;
    let criterion = criterion_general(&responses, cfg.frame.alpha, cfg.frame.n_fft)?;

    let point_at = |eps: f64, key: u64| -> Result<BerPoint> {
        let link = Link::new(cfg, &profile, eps)?;
        mc_point(cfg, &link, ebn0, key, ref_index)
    };

    let oracle = if cfg.criterion.oracle {
        Some(grid_search_ber_oracle(&grid, |i, p| point_at(p.value(), phase_key(cfg, i)))?)
    } else {
        None
    };
    let criterion_point = match &oracle {
        Some(o) => o.points[criterion.chosen_index].1.clone(),
        None => point_at(criterion.chosen.value(), phase_key(cfg, criterion.chosen_index))?,
    };
    let (str_baseline, str_point) = if cfg.criterion.str_baseline {
        let s = run_str_baseline(cfg, &profile, ebn0)?;
        let p = point_at(s.epsilon, phase_key(cfg, grid.len()))?;
        (Some(s), Some(p))
    } else {
        (None, None)
    };
    Ok(CriterionReport {
        fingerprint: cfg.fingerprint()?,
        profile: profile.name().to_owned(),
        reference_ebn0_db: ebn0,
        criterion,
        criterion_point: Some(criterion_point),
        str_baseline,
        str_point,
        oracle,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}
