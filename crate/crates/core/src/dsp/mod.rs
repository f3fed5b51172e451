//! Signal-processing primitives shared by the transmitter, channel and
//! receiver models.

mod fft;
pub(crate) mod resample;
mod special;
pub(crate) mod srrc;

pub use fft::{dft, idft};
pub use resample::{
    convolve, downsample, fractional_delay, fractional_delay_taps, upsample, FRACTIONAL_DELAY_TAPS,
};
pub use special::qfunc;
pub use srrc::{design_srrc_taps, srrc_freq_response, SrrcSpec};

use num_complex::Complex64;

use crate::{Error, Result};

/// Sample-rate tag of a [`SignalBuffer`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateTag {
    SymbolRate,
    /// Oversampled by the given integer factor.
    Oversampled(usize),
}

impl RateTag {
    pub fn factor(self) -> usize {
        match self {
            RateTag::SymbolRate => 1,
            RateTag::Oversampled(l) => l,
        }
    }
}

/// A non-empty run of complex baseband samples at a known rate.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalBuffer {
    samples: Vec<Complex64>,
    rate: RateTag,
}

impl SignalBuffer {
    pub fn new(samples: Vec<Complex64>, rate: RateTag) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("signal buffer must not be empty"));
        }
        if let Some(k) = samples.iter().position(|s| !(s.re.is_finite() && s.im.is_finite())) {
            return Err(Error::invalid(format!("non-finite sample at index {k}")));
        }
        if let RateTag::Oversampled(l) = rate {
            if l < 2 {
                return Err(Error::invalid("oversampling factor must be at least 2"));
            }
        }
        Ok(Self { samples, rate })
    }

    pub fn symbol_rate(samples: Vec<Complex64>) -> Result<Self> {
        Self::new(samples, RateTag::SymbolRate)
    }

    pub fn oversampled(samples: Vec<Complex64>, factor: usize) -> Result<Self> {
        Self::new(samples, RateTag::Oversampled(factor))
    }

    pub fn rate(&self) -> RateTag {
        self.rate
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Mean of `|x|^2` over the buffer.
    pub fn mean_power(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }

    /// Same samples, same rate, from a new vector. Used by element-wise stages
    /// that keep the rate tag.
    pub(crate) fn with_samples(&self, samples: Vec<Complex64>) -> Result<Self> {
        Self::new(samples, self.rate)
    }
}

impl AsRef<[Complex64]> for SignalBuffer {
    fn as_ref(&self) -> &[Complex64] {
        &self.samples
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_nan() {
        assert!(SignalBuffer::symbol_rate(vec![]).is_err());
        assert!(SignalBuffer::symbol_rate(vec![Complex64::new(f64::NAN, 0.0)]).is_err());
        assert!(SignalBuffer::oversampled(vec![Complex64::new(1.0, 0.0)], 1).is_err());
    }
}
