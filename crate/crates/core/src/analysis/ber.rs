use serde::{Deserialize, Serialize};

use crate::channel::EquivResponse;
use crate::dsp::qfunc;
use crate::frame::Modulation;
use crate::{Error, Result};

/// How symbol errors are converted to bit errors for square QAM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BerMode {
    /// `Pe = Ps / log2(sqrt(M))`.
    #[default]
    Paper,
    /// `Pe = Ps / log2(M)`.
    StandardGray,
}

impl BerMode {
    pub fn name(self) -> &'static str {
        match self {
            BerMode::Paper => "paper",
            BerMode::StandardGray => "standard-gray",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BerSource {
    Theory,
    Chernoff,
    MonteCarlo,
}

impl BerSource {
    pub fn name(self) -> &'static str {
        match self {
            BerSource::Theory => "theory",
            BerSource::Chernoff => "chernoff",
            BerSource::MonteCarlo => "monte-carlo",
        }
    }
}

/// One point of a BER curve.
///
/// For square QAM `ser` is the error rate per amplitude axis (each symbol
/// contributes two decisions), which is the quantity the closed-form
/// expression predicts. For BPSK it is the ordinary symbol error rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub ebn0_db: f64,
    pub epsilon: f64,
    pub modulation: Modulation,
    pub ser: f64,
    pub ber: f64,
    pub source: BerSource,
    /// Monte-Carlo counters; zero for analytic points.
    pub bit_count: u64,
    pub error_count: u64,
    pub decisions: u64,
    pub decision_errors: u64,
    /// Set when the frame budget ran out before the error target.
    pub budget_exhausted: bool,
}

impl BerPoint {
    pub fn analytic(ebn0_db: f64, epsilon: f64, modulation: Modulation, ser: f64, ber: f64, source: BerSource) -> Self {
        Self {
            ebn0_db,
            epsilon,
            modulation,
            ser,
            ber,
            source,
            bit_count: 0,
            error_count: 0,
            decisions: 0,
            decision_errors: 0,
            budget_exhausted: false,
        }
    }

    /// Binomial standard deviation of the BER estimate (zero for analytic
    /// points).
    pub fn ber_sigma(&self) -> f64 {
        binomial_sigma(self.ber, self.bit_count)
    }

    pub fn ser_sigma(&self) -> f64 {
        binomial_sigma(self.ser, self.decisions)
    }
}

pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    if n == 0 {
        0.0
    } else {
        (p * (1.0 - p) / n as f64).sqrt()
    }
}

/// `kappa = sqrt(M)` for square QAM orders.
fn kappa(m: usize) -> Result<f64> {
    let k = (m as f64).sqrt().round() as usize;
    if m < 4 || k * k != m || !k.is_power_of_two() {
        return Err(Error::invalid(format!("M = {m} is not a square QAM order")));
    }
    Ok(k as f64)
}

/// `(lambda, eta_per_ebn0)`: the Q-function prefactor `2 (kappa-1)/kappa`
/// and the SNR scaling `6 log2(kappa) / (kappa^2 - 1)`.
fn qam_constants(m: usize) -> Result<(f64, f64)> {
    let k = kappa(m)?;
    Ok((2.0 * (k - 1.0) / k, 6.0 * k.log2() / (k * k - 1.0)))
}

pub(crate) fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Average over all subcarriers of the per-axis symbol error probability
/// of Gray square M-QAM with gain `|h[n]|^2`.
pub fn theoretical_ser(h: &EquivResponse, ebn0_db: f64, m: usize) -> Result<f64> {
    let (lambda, c) = qam_constants(m)?;
    let g = c * db_to_linear(ebn0_db);
    Ok(mean(h.magnitudes_sqr().map(|p| lambda * qfunc((p * g).sqrt()))))
}

pub fn theoretical_ber(ser: f64, m: usize, mode: BerMode) -> Result<f64> {
    let k = kappa(m)?;
    Ok(match mode {
        BerMode::Paper => ser / k.log2(),
        BerMode::StandardGray => ser / (m as f64).log2(),
    })
}

/// BPSK bit error rate `mean_n Q(sqrt(2 |h[n]|^2 Eb/N0))`.
pub fn theoretical_ber_bpsk(h: &EquivResponse, ebn0_db: f64) -> f64 {
    let g = 2.0 * db_to_linear(ebn0_db);
    mean(h.magnitudes_sqr().map(|p| qfunc((p * g).sqrt())))
}

/// Exponential surrogate `mean_n lambda exp(-|h[n]|^2 eta)`. Used to rank
/// phases; it is not a bound on the true error rate.
pub fn chernoff_surrogate(h: &EquivResponse, ebn0_db: f64, m: usize) -> Result<f64> {
    let (lambda, c) = qam_constants(m)?;
    let eta = c * db_to_linear(ebn0_db);
    Ok(mean(h.magnitudes_sqr().map(|p| lambda * (-p * eta).exp())))
}

/// Analytic `(ser, ber)` for any supported modulation.
pub fn theory_point(h: &EquivResponse, ebn0_db: f64, modulation: Modulation, mode: BerMode) -> Result<(f64, f64)> {
    match modulation {
        Modulation::Bpsk => {
            let p = theoretical_ber_bpsk(h, ebn0_db);
            Ok((p, p))
        }
        m => {
            let ser = theoretical_ser(h, ebn0_db, m.order())?;
            Ok((ser, theoretical_ber(ser, m.order(), mode)?))
        }
    }
}

/// `eta` of the exponential surrogate for a square QAM order.
pub fn surrogate_eta(ebn0_db: f64, m: usize) -> Result<f64> {
    Ok(qam_constants(m)?.1 * db_to_linear(ebn0_db))
}

fn mean(it: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = it.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}
