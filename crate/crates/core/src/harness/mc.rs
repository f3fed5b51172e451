use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::ScenarioConfig;
use super::link::{Counts, Link};
use crate::analysis::{BerPoint, BerSource};
use crate::Result;

/// A set of points with the fingerprint of the configuration that produced
/// them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerCurve {
    pub points: Vec<BerPoint>,
    pub fingerprint: String,
    pub wall_time_s: f64,
}

impl BerCurve {
    /// True when any point ran out of frame budget.
    pub fn flagged(&self) -> bool {
        self.points.iter().any(|p| p.budget_exhausted)
    }

    /// Points of one source at one phase, in sweep order.
    pub fn series(&self, epsilon: f64, source: BerSource) -> Vec<&BerPoint> {
        self.points
            .iter()
            .filter(|p| p.epsilon == epsilon && p.source == source)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("ebn0_db,epsilon,modulation,ser,ber,bits,errors,source\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{:e},{:e},{},{},{}\n",
                p.ebn0_db,
                p.epsilon,
                p.modulation.name(),
                p.ser,
                p.ber,
                p.bit_count,
                p.error_count,
                p.source.name()
            ));
        }
        out
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one burst, mixed from the master seed and its coordinates.
pub fn burst_seed(master: u64, burst: u64, phase_key: u64, ebn0_index: u64) -> u64 {
    [burst, phase_key, ebn0_index]
        .iter()
        .fold(splitmix64(master), |h, v| splitmix64(h ^ splitmix64(*v)))
}

/// Phase key used for seeding: shared by all phases under common random
/// numbers.
pub(crate) fn phase_key(cfg: &ScenarioConfig, phase_index: usize) -> u64 {
    if cfg.mc.common_random_numbers {
        0
    } else {
        phase_index as u64
    }
}

/// Runs bursts in fixed batches until the bit and error targets are met or
/// the frame budget is spent. Burst seeds depend only on their index, and
/// counters are summed, so the result does not depend on thread count.
pub fn mc_point(cfg: &ScenarioConfig, link: &Link, ebn0_db: f64, phase_key: u64, ebn0_index: u64) -> Result<BerPoint> {
    let mc = &cfg.mc;
    let per_burst = (mc.burst_frames - 2) as u64;
    let noiseless = link.noise_variance(ebn0_db) == 0.0;
    let mut total = Counts::default();
    let mut next_burst = 0u64;
    let mut exhausted = false;
    loop {
        let remaining = mc.max_frames.saturating_sub(total.frames);
        let bursts = (mc.batch_bursts as u64).min(remaining.div_ceil(per_burst));
        let batch = (next_burst..next_burst + bursts)
            .into_par_iter()
            .map(|b| {
                let mut rng = ChaCha8Rng::seed_from_u64(burst_seed(cfg.seed, b, phase_key, ebn0_index));
                link.simulate_burst(mc.burst_frames, ebn0_db, cfg.equalizer, mc.pn_avg, &mut rng)
            })
            .collect::<Result<Vec<_>>>()?;
        next_burst += bursts;
        batch.into_iter().for_each(|c| total += c);
        if noiseless || (total.bits >= mc.min_bits && total.bit_errors >= mc.min_errors) {
            break;
        }
        if total.frames >= mc.max_frames {
            exhausted = true;
            break;
        }
    }
    Ok(BerPoint {
        ebn0_db,
        epsilon: link.epsilon(),
        modulation: cfg.frame.modulation,
        ser: total.decision_errors as f64 / total.decisions as f64,
        ber: total.bit_errors as f64 / total.bits as f64,
        source: BerSource::MonteCarlo,
        bit_count: total.bits,
        error_count: total.bit_errors,
        decisions: total.decisions,
        decision_errors: total.decision_errors,
        budget_exhausted: exhausted,
    })
}

/// Monte-Carlo curve for every configured phase and Eb/N0.
pub fn run_mc_ber(cfg: &ScenarioConfig) -> Result<BerCurve> {
    cfg.validate()?;
    let start = Instant::now();
    let profile = cfg.profile()?;
    let mut points = Vec::new();
    for (pi, &eps) in cfg.phase.epsilon.iter().enumerate() {
        let link = Link::new(cfg, &profile, eps)?;
        for (ei, &ebn0) in cfg.sweep.ebn0_db.iter().enumerate() {
            points.push(mc_point(cfg, &link, ebn0, phase_key(cfg, pi), ei as u64)?);
        }
    }
    Ok(BerCurve {
        points,
        fingerprint: cfg.fingerprint()?,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}
