use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn check_len(n: usize) -> Result<()> {
    if n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::NotPowerOfTwo(n))
    }
}

/// Unnormalized forward DFT, `X[n] = sum_k x[k] exp(-j 2 pi n k / N)`.
pub fn dft(x: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(x.len())?;
    let mut buf = x.to_vec();
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(&mut buf));
    Ok(buf)
}

/// Inverse DFT carrying the `1/N` factor.
pub fn idft(x: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(x.len())?;
    let mut buf = x.to_vec();
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(&mut buf));
    let scale = 1.0 / buf.len() as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    Ok(buf)
}
