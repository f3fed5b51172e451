use std::f64::consts::PI;

use num_complex::Complex64;

use super::{RateTag, SignalBuffer};
use crate::{Error, Result};

/// Length of the windowed-sinc fractional-delay interpolator.
pub const FRACTIONAL_DELAY_TAPS: usize = 63;
pub(crate) const FD_HALF: isize = (FRACTIONAL_DELAY_TAPS as isize - 1) / 2;

/// Zero-stuffing interpolation: `out[k L] = x[k]`, zeros elsewhere.
pub fn upsample(x: &SignalBuffer, factor: usize) -> Result<SignalBuffer> {
    if factor < 2 {
        return Err(Error::invalid(format!("upsampling factor must be >= 2, got {factor}")));
    }
    if x.rate() != RateTag::SymbolRate {
        return Err(Error::invalid("upsample expects a symbol-rate buffer"));
    }
    let mut out = vec![Complex64::default(); x.len() * factor];
    for (k, s) in x.samples().iter().enumerate() {
        out[k * factor] = *s;
    }
    SignalBuffer::oversampled(out, factor)
}

/// Decimation `out[k] = x[k L + offset]`.
pub fn downsample(x: &SignalBuffer, factor: usize, offset: usize) -> Result<SignalBuffer> {
    if x.rate() != RateTag::Oversampled(factor) {
        return Err(Error::invalid(format!(
            "downsample by {factor} expects an Oversampled({factor}) buffer, got {:?}",
            x.rate()
        )));
    }
    if offset >= factor {
        return Err(Error::invalid(format!("offset {offset} out of range for factor {factor}")));
    }
    let out: Vec<Complex64> = x.samples().iter().skip(offset).step_by(factor).copied().collect();
    SignalBuffer::symbol_rate(out)
}

/// Full linear convolution of complex samples with real taps
/// (`len(x) + len(taps) - 1` outputs).
pub fn convolve(x: &[Complex64], taps: &[f64]) -> Vec<Complex64> {
    if x.is_empty() || taps.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::default(); x.len() + taps.len() - 1];
    for (i, s) in x.iter().enumerate() {
        if s.re == 0.0 && s.im == 0.0 {
            continue;
        }
        for (o, h) in out[i..i + taps.len()].iter_mut().zip(taps) {
            *o += s * h;
        }
    }
    out
}

/// Taps of the Blackman-windowed sinc that delays by `mu` samples, indexed
/// from lag `-31` to `+31`, normalized to unit DC gain.
pub fn fractional_delay_taps(mu: f64) -> Vec<f64> {
    let half_width = FD_HALF as f64 + 1.0;
    let mut taps: Vec<f64> = (-FD_HALF..=FD_HALF)
        .map(|m| {
            let t = m as f64 - mu;
            let sinc = if t.abs() < 1e-12 { 1.0 } else { (PI * t).sin() / (PI * t) };
            let w = 0.42 + 0.5 * (PI * t / half_width).cos() + 0.08 * (2.0 * PI * t / half_width).cos();
            sinc * w
        })
        .collect();
    let dc: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|h| *h /= dc);
    taps
}

/// Delays `x` by `mu` samples (`y[k] ~ x(k - mu)`), `mu` in `[-0.5, 0.5]`.
///
/// The interpolator's group delay is removed, so the output has the input's
/// length and alignment; samples outside the buffer are taken as zero.
pub fn fractional_delay(x: &SignalBuffer, mu: f64) -> Result<SignalBuffer> {
    if !(-0.5..=0.5).contains(&mu) {
        return Err(Error::invalid(format!("fractional delay {mu} outside [-0.5, 0.5]")));
    }
    if mu == 0.0 {
        return Ok(x.clone());
    }
    x.with_samples(fractional_delay_slice(x.samples(), mu))
}

pub(crate) fn fractional_delay_slice(x: &[Complex64], mu: f64) -> Vec<Complex64> {
    if mu == 0.0 {
        return x.to_vec();
    }
    let taps = fractional_delay_taps(mu);
    let n = x.len() as isize;
    (0..n)
        .map(|k| {
            let mut acc = Complex64::default();
            for (i, h) in taps.iter().enumerate() {
                let j = k - (i as isize - FD_HALF);
                if (0..n).contains(&j) {
                    acc += x[j as usize] * h;
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(m, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (k * m) as f64 / n as f64))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn upsample_examples() {
        let x = SignalBuffer::symbol_rate(vec![c(1.0), c(2.0)]).unwrap();
        let y = upsample(&x, 2).unwrap();
        assert_eq!(y.samples(), &[c(1.0), c(0.0), c(2.0), c(0.0)]);
        assert_eq!(y.rate(), RateTag::Oversampled(2));
        let a = Complex64::new(0.3, -1.2);
        let y = upsample(&SignalBuffer::symbol_rate(vec![a]).unwrap(), 4).unwrap();
        assert_eq!(y.samples(), &[a, c(0.0), c(0.0), c(0.0)]);
        assert!(upsample(&y, 2).is_err());
    }

    #[test]
    fn upsampled_spectrum_is_periodic_repetition() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<Complex64> = (0..16).map(|_| Complex64::new(rng.random(), rng.random())).collect();
        let up = upsample(&SignalBuffer::symbol_rate(x.clone()).unwrap(), 4).unwrap();
        let bx = naive_dft(&x);
        let by = naive_dft(up.samples());
        for (k, v) in by.iter().enumerate() {
            assert!((v - bx[k % 16]).norm() < 1e-10);
        }
    }

    #[test]
    fn downsample_examples() {
        let x = SignalBuffer::oversampled(vec![c(1.0), c(0.0), c(2.0), c(0.0)], 2).unwrap();
        assert_eq!(downsample(&x, 2, 0).unwrap().samples(), &[c(1.0), c(2.0)]);
        assert_eq!(downsample(&x, 2, 1).unwrap().samples(), &[c(0.0), c(0.0)]);
        assert!(downsample(&x, 2, 2).is_err());
        let s = SignalBuffer::symbol_rate(vec![c(1.0), c(-2.0), c(5.0)]).unwrap();
        assert_eq!(downsample(&upsample(&s, 3).unwrap(), 3, 0).unwrap(), s);
    }

    #[test]
    fn convolve_length_and_impulse() {
        let y = convolve(&[c(0.0), c(1.0), c(0.0)], &[1.0, 2.0, 3.0]);
        assert_eq!(y, vec![c(0.0), c(1.0), c(2.0), c(3.0), c(0.0)]);
    }

    fn tone(f0: f64, n: usize) -> Vec<Complex64> {
        (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * PI * f0 * k as f64)).collect()
    }

    #[test]
    fn zero_delay_is_identity() {
        let x = SignalBuffer::symbol_rate(tone(0.13, 100)).unwrap();
        let y = fractional_delay(&x, 0.0).unwrap();
        assert_eq!(x, y);
        let y = fractional_delay_slice(x.samples(), 1e-300);
        for (a, b) in x.samples().iter().zip(&y) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let x = SignalBuffer::symbol_rate(tone(0.1, 8)).unwrap();
        assert!(fractional_delay(&x, 0.6).is_err());
    }

    #[test]
    fn delayed_tone_phase() {
        let f0 = 0.1;
        let x = SignalBuffer::symbol_rate(tone(f0, 400)).unwrap();
        let y = fractional_delay(&x, 0.25).unwrap();
        let want = Complex64::from_polar(1.0, -2.0 * PI * f0 * 0.25);
        for k in 40..360 {
            let ratio = y.samples()[k] / x.samples()[k];
            assert!((ratio - want).norm() < 1e-3, "k={k}: {ratio}");
        }
    }

    #[test]
    fn cascade_recovers_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        // Band-limited random signal: random tones below 0.4 cycles/sample.
        let n = 600;
        let mut x = vec![Complex64::default(); n];
        for _ in 0..20 {
            let f = rng.random_range(-0.35..0.35);
            let a = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            for (k, v) in x.iter_mut().enumerate() {
                *v += a * Complex64::from_polar(1.0, 2.0 * PI * f * k as f64);
            }
        }
        let buf = SignalBuffer::symbol_rate(x.clone()).unwrap();
        let back = fractional_delay(&fractional_delay(&buf, 0.25).unwrap(), -0.25).unwrap();
        let edge = 2 * FD_HALF as usize;
        for k in edge..n - edge {
            assert!((back.samples()[k] - x[k]).norm() < 1e-3, "k={k}");
        }
    }

    #[test]
    fn preserves_band_limited_energy() {
        let f0s = [0.05, 0.2, 0.39];
        for mu in [-0.5, -0.3, 0.1, 0.5] {
            for f0 in f0s {
                let x = SignalBuffer::symbol_rate(tone(f0, 2000)).unwrap();
                let y = fractional_delay(&x, mu).unwrap();
                let e_in: f64 = x.samples()[100..1900].iter().map(|v| v.norm_sqr()).sum();
                let e_out: f64 = y.samples()[100..1900].iter().map(|v| v.norm_sqr()).sum();
                assert!((e_out / e_in - 1.0).abs() < 1e-3, "mu={mu} f0={f0}: {}", e_out / e_in);
            }
        }
    }
}
