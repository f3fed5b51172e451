use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::ChannelProfile;
use crate::dsp::resample::fractional_delay_slice;
use crate::dsp::{RateTag, SignalBuffer, FRACTIONAL_DELAY_TAPS};
use crate::{Error, Result};

/// Passes an oversampled signal through the tapped delay line.
///
/// Each tap's delay is converted to `delay * L` samples; the integer part is
/// an index shift and the remainder goes through the fractional-delay
/// interpolator. The output is extended past the input so that delayed tails
/// are kept.
pub fn apply_channel(x: &SignalBuffer, profile: &ChannelProfile) -> Result<SignalBuffer> {
    let factor = match x.rate() {
        RateTag::Oversampled(l) => l,
        RateTag::SymbolRate => return Err(Error::invalid("apply_channel expects an oversampled buffer")),
    };
    if profile.is_awgn() && profile.taps()[0].gain == Complex64::new(1.0, 0.0) {
        return Ok(x.clone());
    }
    let shifts: Vec<(usize, f64)> = profile
        .taps()
        .iter()
        .map(|t| {
            let s = t.delay * factor as f64;
            let n = s.round();
            (n as usize, s - n)
        })
        .collect();
    let max_shift = shifts.iter().map(|s| s.0).max().unwrap_or(0);
    let any_fraction = shifts.iter().any(|s| s.1 != 0.0);
    let pad = if any_fraction { FRACTIONAL_DELAY_TAPS / 2 + 1 } else { 0 };
    let out_len = x.len() + max_shift + pad;

    let mut padded = x.samples().to_vec();
    padded.resize(out_len, Complex64::default());
    let mut out = vec![Complex64::default(); out_len];
    for (tap, &(shift, frac)) in profile.taps().iter().zip(&shifts) {
        let delayed = if frac == 0.0 {
            padded.clone()
        } else {
            fractional_delay_slice(&padded, frac)
        };
        for (o, v) in out[shift..].iter_mut().zip(&delayed) {
            *o += tap.gain * v;
        }
    }
    x.with_samples(out)
}

/// Noise variance per real dimension for a target Eb/N0, given the signal's
/// average power per sample at the oversampled rate.
pub fn noise_variance_per_dim(signal_power: f64, ebn0_db: f64, bits_per_symbol: usize, oversampling: usize) -> f64 {
    if ebn0_db.is_infinite() && ebn0_db > 0.0 {
        return 0.0;
    }
    let ebn0 = 10f64.powf(ebn0_db / 10.0);
    signal_power * oversampling as f64 / (2.0 * bits_per_symbol as f64 * ebn0)
}

/// Adds circular complex Gaussian noise calibrated against the buffer's own
/// mean power.
pub fn add_awgn<R: Rng + ?Sized>(
    x: &SignalBuffer,
    ebn0_db: f64,
    bits_per_symbol: usize,
    oversampling: usize,
    rng: &mut R,
) -> Result<SignalBuffer> {
    add_awgn_with_power(x, x.mean_power(), ebn0_db, bits_per_symbol, oversampling, rng)
}

/// Like [`add_awgn`] but calibrated against a caller-supplied reference
/// power (for instance the OFDM body power only).
pub fn add_awgn_with_power<R: Rng + ?Sized>(
    x: &SignalBuffer,
    signal_power: f64,
    ebn0_db: f64,
    bits_per_symbol: usize,
    oversampling: usize,
    rng: &mut R,
) -> Result<SignalBuffer> {
    if bits_per_symbol == 0 || oversampling == 0 {
        return Err(Error::invalid("bits_per_symbol and oversampling must be positive"));
    }
    let var = noise_variance_per_dim(signal_power, ebn0_db, bits_per_symbol, oversampling);
    if var == 0.0 {
        return Ok(x.clone());
    }
    let mut out = x.samples().to_vec();
    add_noise_in_place(&mut out, var, rng);
    x.with_samples(out)
}

pub(crate) fn add_noise_in_place<R: Rng + ?Sized>(x: &mut [Complex64], var_per_dim: f64, rng: &mut R) {
    let sigma = var_per_dim.sqrt();
    for v in x.iter_mut() {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        *v += Complex64::new(re, im) * sigma;
    }
}
