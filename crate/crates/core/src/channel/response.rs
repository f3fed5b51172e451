use std::f64::consts::PI;

use num_complex::Complex64;

use super::ChannelProfile;
use crate::dsp::srrc::{check_alpha, raised_cosine};
use crate::{Error, Result};

/// Per-subcarrier gains `h[n] = H(n / N; epsilon)` of the symbol-rate
/// equivalent channel.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivResponse {
    pub h: Vec<Complex64>,
    pub epsilon: f64,
    pub alpha: f64,
    pub profile: String,
}

impl EquivResponse {
    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn magnitudes_sqr(&self) -> impl Iterator<Item = f64> + '_ {
        self.h.iter().map(|v| v.norm_sqr())
    }

    /// Copy with every gain multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            h: self.h.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }
}

/// Images `k` with `|k| <= 2` cover the full support: the raised cosine
/// vanishes beyond `(1 + alpha) / 2 <= 1`.
const IMAGES: i32 = 2;

/// Equivalent response by summing the shifted spectral images:
/// `h[n] = sum_k H_C(f_n - k) RC(f_n - k) exp(j 2 pi (f_n - k) epsilon)`.
///
/// `epsilon` is any real offset in symbols; values outside `[-0.5, 0.5]` are
/// used as given.
pub fn equiv_response(profile: &ChannelProfile, alpha: f64, epsilon: f64, n: usize) -> Result<EquivResponse> {
    check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::invalid("response length must be positive"));
    }
    let h = (0..n)
        .map(|i| {
            let f = i as f64 / n as f64;
            (-IMAGES..=IMAGES)
                .map(|k| {
                    let fk = f - k as f64;
                    let rc = raised_cosine(fk, alpha);
                    if rc == 0.0 {
                        Complex64::default()
                    } else {
                        profile.frequency_response(fk) * rc * Complex64::from_polar(1.0, 2.0 * PI * fk * epsilon)
                    }
                })
                .sum()
        })
        .collect();
    Ok(EquivResponse {
        h,
        epsilon,
        alpha,
        profile: profile.name().to_owned(),
    })
}

/// Closed-form equivalent response over a flat channel, `f` in `[0, 1)`.
pub fn equiv_response_awgn(alpha: f64, epsilon: f64, f: f64) -> Result<Complex64> {
    check_alpha(alpha)?;
    if !(0.0..1.0).contains(&f) {
        return Err(Error::invalid(format!("frequency {f} outside [0, 1)")));
    }
    Ok(awgn_closed_form(alpha, epsilon, f))
}

pub(crate) fn awgn_closed_form(alpha: f64, epsilon: f64, f: f64) -> Complex64 {
    if epsilon == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    if f < 0.5 * (1.0 - alpha) {
        Complex64::from_polar(1.0, 2.0 * PI * epsilon * f)
    } else if f < 0.5 * (1.0 + alpha) {
        let (s, c) = (PI * epsilon).sin_cos();
        let roll = ((PI / alpha) * (0.5 - f)).sin();
        Complex64::from_polar(1.0, 2.0 * PI * epsilon * (f - 0.5)) * Complex64::new(c, roll * s)
    } else {
        Complex64::from_polar(1.0, 2.0 * PI * epsilon * (f - 1.0))
    }
}

/// [`equiv_response_awgn`] evaluated on the `N` subcarrier frequencies.
pub fn equiv_response_awgn_bins(alpha: f64, epsilon: f64, n: usize) -> Result<EquivResponse> {
    check_alpha(alpha)?;
    let h = (0..n)
        .map(|i| awgn_closed_form(alpha, epsilon, i as f64 / n as f64))
        .collect();
    Ok(EquivResponse {
        h,
        epsilon,
        alpha,
        profile: "awgn".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn awgn_zero_phase_is_unit() {
        let r = equiv_response(&ChannelProfile::awgn(), 0.05, 0.0, 256).unwrap();
        assert!(r.h.iter().all(|v| (v.norm() - 1.0).abs() < 1e-9));
        for f in [0.0, 0.3, 0.5, 0.51, 0.99] {
            assert_eq!(equiv_response_awgn(0.05, 0.0, f).unwrap(), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn half_symbol_offset_nulls_band_center() {
        let r = equiv_response(&ChannelProfile::awgn(), 0.05, 0.5, 256).unwrap();
        assert!(r.h[128].norm() < 1e-12);
        assert!(equiv_response_awgn(0.05, 0.5, 0.5).unwrap().norm() < 1e-15);
    }

    #[test]
    fn passband_is_pure_phase() {
        for eps in [-0.4, 0.1, 0.5] {
            let r = equiv_response(&ChannelProfile::awgn(), 0.05, eps, 256).unwrap();
            assert!((r.h[64].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rolloff_center_magnitude() {
        let v = equiv_response_awgn(0.05, 0.25, 0.5).unwrap();
        assert!((v.norm() - (PI / 4.0).cos()).abs() < 1e-9);
    }

    #[test]
    fn closed_form_rejects_out_of_range() {
        assert!(equiv_response_awgn(0.05, 0.1, 1.0).is_err());
        assert!(equiv_response_awgn(0.05, 0.1, -0.1).is_err());
        assert!(equiv_response_awgn(0.0, 0.1, 0.1).is_err());
    }

    /// The closed form and the image sum agree on a 33-phase grid.
    #[test]
    fn closed_form_matches_image_sum() {
        let n = 1024;
        for i in 0..33 {
            let eps = -0.5 + i as f64 / 32.0;
            let sum = equiv_response(&ChannelProfile::awgn(), 0.05, eps, n).unwrap();
            let closed = equiv_response_awgn_bins(0.05, eps, n).unwrap();
            let err = sum.h.iter().zip(&closed.h).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-9, "eps={eps}: {err}");
        }
    }

    #[test]
    fn magnitude_decreases_with_offset_at_band_center() {
        let mut prev = f64::INFINITY;
        for i in 0..=50 {
            let eps = i as f64 / 100.0;
            let m = equiv_response_awgn(0.05, eps, 0.5).unwrap().norm();
            assert!((m - (PI * eps).cos().abs()).abs() < 1e-12);
            assert!(m < prev);
            prev = m;
        }
    }

    proptest! {
        #[test]
        fn periodic_in_epsilon(eps in -0.5f64..0.5, d in 0.0f64..2.0, g in -1.0f64..1.0) {
            let p = ChannelProfile::two_ray(d + 0.1, g).unwrap();
            let a = equiv_response(&p, 0.05, eps, 128).unwrap();
            let b = equiv_response(&p, 0.05, eps + 1.0, 128).unwrap();
            for (x, y) in a.h.iter().zip(&b.h) {
                prop_assert!((x.norm() - y.norm()).abs() < 1e-9);
            }
        }

        #[test]
        fn even_in_epsilon_over_awgn(eps in 0.0f64..0.5, f in 0.0f64..1.0, alpha in 0.01f64..=1.0) {
            let a = equiv_response_awgn(alpha, eps, f).unwrap().norm();
            let b = equiv_response_awgn(alpha, -eps, f).unwrap().norm();
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
