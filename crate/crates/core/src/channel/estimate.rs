use num_complex::Complex64;

use super::EquivResponse;
use crate::dsp;
use crate::{Error, Result};

/// Least-squares channel estimate from received PN windows.
///
/// Each window is `L` symbol-rate samples whose transmitted content is a
/// cyclic shift of the guard, given as `reference`. The per-bin ratio
/// `DFT(rx) / DFT(reference)` is averaged over the windows, then interpolated
/// from `L` to `n_fft` bins: linearly in `|H|^2`, with the phase of the
/// linearly interpolated complex value.
pub fn estimate_response_from_pn(
    windows: &[Vec<Complex64>],
    reference: &[Complex64],
    n_fft: usize,
) -> Result<EquivResponse> {
    if windows.is_empty() {
        return Err(Error::invalid("need at least one received PN window"));
    }
    if n_fft == 0 {
        return Err(Error::invalid("n_fft must be positive"));
    }
    let l = reference.len();
    let ref_spec = dsp::dft(reference)?;
    let mean_mag = ref_spec.iter().map(|v| v.norm()).sum::<f64>() / l as f64;
    if mean_mag == 0.0 {
        return Err(Error::invalid("PN reference is all zeros"));
    }
    if let Some(bin) = ref_spec.iter().position(|v| v.norm() < 1e-6 * mean_mag) {
        return Err(Error::invalid(format!("PN spectrum vanishes at bin {bin}")));
    }
    let mut acc = vec![Complex64::default(); l];
    for w in windows {
        if w.len() != l {
            return Err(Error::LengthMismatch {
                expected: l,
                actual: w.len(),
            });
        }
        for ((a, y), x) in acc.iter_mut().zip(dsp::dft(w)?).zip(&ref_spec) {
            *a += y / x;
        }
    }
    let scale = 1.0 / windows.len() as f64;
    acc.iter_mut().for_each(|v| *v *= scale);

    let h = (0..n_fft)
        .map(|n| {
            let pos = n as f64 * l as f64 / n_fft as f64;
            let i0 = pos.floor() as usize % l;
            let i1 = (i0 + 1) % l;
            let t = pos - pos.floor();
            let power = (1.0 - t) * acc[i0].norm_sqr() + t * acc[i1].norm_sqr();
            let lin = acc[i0] * (1.0 - t) + acc[i1] * t;
            if lin.norm() > 0.0 {
                lin / lin.norm() * power.sqrt()
            } else {
                Complex64::new(power.sqrt(), 0.0)
            }
        })
        .collect();
    Ok(EquivResponse {
        h,
        epsilon: f64::NAN,
        alpha: f64::NAN,
        profile: "pn-estimate".into(),
    })
}
