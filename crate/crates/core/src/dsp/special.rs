use std::f64::consts::SQRT_2;

/// Gaussian tail probability `Q(x) = P(Z > x)` for a standard normal `Z`.
pub fn qfunc(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}
