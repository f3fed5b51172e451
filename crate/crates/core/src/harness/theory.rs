use std::time::Instant;

use serde::Serialize;

use super::config::ScenarioConfig;
use super::mc::BerCurve;
use crate::analysis::{chernoff_surrogate, theoretical_ber, theory_point, BerPoint, BerSource};
use crate::channel::{equiv_response, equiv_response_awgn_bins, ChannelProfile, EquivResponse};
use crate::frame::Modulation;
use crate::Result;

/// Analytic per-bin response: the closed form on a flat channel, the image
/// sum otherwise.
pub fn analytic_response(cfg: &ScenarioConfig, profile: &ChannelProfile, epsilon: f64) -> Result<EquivResponse> {
    if profile.is_awgn() {
        equiv_response_awgn_bins(cfg.frame.alpha, epsilon, cfg.frame.n_fft)
    } else {
        equiv_response(profile, cfg.frame.alpha, epsilon, cfg.frame.n_fft)
    }
}

/// Theoretical curve for every configured phase and Eb/N0, plus the
/// exponential surrogate for QAM.
pub fn run_theory(cfg: &ScenarioConfig) -> Result<BerCurve> {
    cfg.validate()?;
    let start = Instant::now();
    let profile = cfg.profile()?;
    let m = cfg.frame.modulation;
    let mut points = Vec::new();
    for &eps in &cfg.phase.epsilon {
        let h = analytic_response(cfg, &profile, eps)?;
        for &ebn0 in &cfg.sweep.ebn0_db {
            let (ser, ber) = theory_point(&h, ebn0, m, cfg.ber_mode)?;
            points.push(BerPoint::analytic(ebn0, eps, m, ser, ber, BerSource::Theory));
        }
        if m != Modulation::Bpsk {
            for &ebn0 in &cfg.sweep.ebn0_db {
                let s = chernoff_surrogate(&h, ebn0, m.order())?;
                let b = theoretical_ber(s, m.order(), cfg.ber_mode)?;
                points.push(BerPoint::analytic(ebn0, eps, m, s, b, BerSource::Chernoff));
            }
        }
    }
    Ok(BerCurve {
        points,
        fingerprint: cfg.fingerprint()?,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// `|H(f; epsilon)|` on the `N` subcarrier frequencies, one column per phase.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResponseTable {
    pub frequencies: Vec<f64>,
    pub phases: Vec<f64>,
    /// `magnitudes[p][n]` for phase `p` and bin `n`.
    pub magnitudes: Vec<Vec<f64>>,
}

impl ResponseTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("f");
        for p in &self.phases {
            out.push_str(&format!(",eps={p}"));
        }
        out.push('\n');
        for (n, f) in self.frequencies.iter().enumerate() {
            out.push_str(&f.to_string());
            for col in &self.magnitudes {
                out.push_str(&format!(",{:.12}", col[n]));
            }
            out.push('\n');
        }
        out
    }
}

pub fn dump_response(cfg: &ScenarioConfig, phases: &[f64]) -> Result<ResponseTable> {
    cfg.validate()?;
    let profile = cfg.profile()?;
    let n = cfg.frame.n_fft;
    let magnitudes = phases
        .iter()
        .map(|&e| Ok(analytic_response(cfg, &profile, e)?.h.iter().map(|v| v.norm()).collect()))
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(ResponseTable {
        frequencies: (0..n).map(|i| i as f64 / n as f64).collect(),
        phases: phases.to_vec(),
        magnitudes,
    })
}
