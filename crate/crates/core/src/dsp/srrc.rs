use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::{Error, Result};

/// Parameters of a finite square-root-raised-cosine pulse-shaping filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrrcSpec {
    alpha: f64,
    span_symbols: usize,
    samples_per_symbol: usize,
}

impl SrrcSpec {
    /// `span_symbols` is the half-length of the filter in symbol periods.
    pub fn new(alpha: f64, span_symbols: usize, samples_per_symbol: usize) -> Result<Self> {
        check_alpha(alpha)?;
        if span_symbols < 4 {
            return Err(Error::invalid(format!(
                "SRRC span must be at least 4 symbols, got {span_symbols}"
            )));
        }
        if samples_per_symbol < 2 {
            return Err(Error::invalid(format!(
                "SRRC needs at least 2 samples per symbol, got {samples_per_symbol}"
            )));
        }
        Ok(Self {
            alpha,
            span_symbols,
            samples_per_symbol,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn span_symbols(&self) -> usize {
        self.span_symbols
    }

    pub fn samples_per_symbol(&self) -> usize {
        self.samples_per_symbol
    }

    pub fn tap_count(&self) -> usize {
        2 * self.span_symbols * self.samples_per_symbol + 1
    }

    /// Group delay of one filter, in samples.
    pub fn group_delay(&self) -> usize {
        self.span_symbols * self.samples_per_symbol
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("roll-off factor must lie in (0, 1], got {alpha}")))
    }
}

/// Combined (transmit and receive) raised-cosine magnitude response at
/// frequency `f` in cycles per symbol, with the symbol period normalized to 1.
///
/// The argument is on the analog axis: it is not reduced modulo 1.
pub fn srrc_freq_response(f: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(raised_cosine(f, alpha))
}

#[inline]
pub(crate) fn raised_cosine(f: f64, alpha: f64) -> f64 {
    let af = f.abs();
    if af < 0.5 * (1.0 - alpha) {
        1.0
    } else if af < 0.5 * (1.0 + alpha) {
        0.5 * (1.0 + ((PI / (2.0 * alpha)) * (1.0 - 2.0 * af)).sin())
    } else {
        0.0
    }
}

/// Time-domain SRRC taps, truncated to `±span_symbols` and scaled to unit
/// energy.
pub fn design_srrc_taps(spec: &SrrcSpec) -> Vec<f64> {
    let sps = spec.samples_per_symbol as f64;
    let half = spec.group_delay() as isize;
    let mut taps: Vec<f64> = (-half..=half)
        .map(|n| srrc_impulse(n as f64 / sps, spec.alpha))
        .collect();
    let energy = taps.iter().map(|h| h * h).sum::<f64>().sqrt();
    taps.iter_mut().for_each(|h| *h /= energy);
    taps
}

/// Continuous SRRC impulse response at time `t` (symbol periods), with the
/// removable singularities at `t = 0` and `|t| = 1/(4 alpha)` replaced by
/// their limits.
fn srrc_impulse(t: f64, alpha: f64) -> f64 {
    const EPS: f64 = 1e-9;
    if t.abs() < EPS {
        return 1.0 - alpha + 4.0 * alpha / PI;
    }
    let q = 4.0 * alpha * t;
    if (q.abs() - 1.0).abs() < EPS {
        let x = PI / (4.0 * alpha);
        return alpha * FRAC_1_SQRT_2
            * ((1.0 + 2.0 / PI) * x.sin() + (1.0 - 2.0 / PI) * x.cos());
    }
    ((PI * t * (1.0 - alpha)).sin() + q * (PI * t * (1.0 + alpha)).cos())
        / (PI * t * (1.0 - q * q))
}
