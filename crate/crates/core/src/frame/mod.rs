//! TDS-OFDM frame assembly: PN guard, Gray QAM, IDFT body, and the
//! upsample-and-shape transmit chain.

mod pn;
mod qam;

pub use pn::{generate_pn, LfsrPoly, PnSequence};
pub use qam::{Constellation, Modulation};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dsp::{self, design_srrc_taps, SignalBuffer, SrrcSpec};
use crate::{Error, Result};

/// Frame geometry and modulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FrameConfig {
    /// OFDM block length `N`.
    pub n_fft: usize,
    /// PN guard length `L` (per copy when `dual_pn`).
    pub pn_len: usize,
    pub dual_pn: bool,
    pub modulation: Modulation,
    pub n_upsam: usize,
    pub alpha: f64,
    /// Average guard power relative to average body power, per sample.
    pub pn_power_ratio: f64,
}

impl Default for FrameConfig {
    fn default() -> Self {
        Self {
            n_fft: 1024,
            pn_len: 128,
            dual_pn: true,
            modulation: Modulation::Qam16,
            n_upsam: 4,
            alpha: 0.05,
            pn_power_ratio: 1.0,
        }
    }
}

impl FrameConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.n_fft.is_power_of_two() || self.n_fft < 2 {
            return Err(Error::NotPowerOfTwo(self.n_fft));
        }
        if self.pn_len < 16 {
            return Err(Error::invalid(format!("PN length must be >= 16, got {}", self.pn_len)));
        }
        if self.n_upsam < 2 {
            return Err(Error::invalid(format!("n_upsam must be >= 2, got {}", self.n_upsam)));
        }
        dsp::SrrcSpec::new(self.alpha, 4, self.n_upsam)?;
        if !(self.pn_power_ratio > 0.0 && self.pn_power_ratio.is_finite()) {
            return Err(Error::invalid("pn_power_ratio must be positive"));
        }
        Ok(())
    }

    pub fn guard_len(&self) -> usize {
        self.pn_len * if self.dual_pn { 2 } else { 1 }
    }

    /// Frame length in symbols.
    pub fn frame_len(&self) -> usize {
        self.n_fft + self.guard_len()
    }

    /// Average body power per symbol-rate sample for unit-energy data.
    pub fn body_power(&self) -> f64 {
        1.0 / self.n_fft as f64
    }

    /// Scale applied to the +/-1 PN chips.
    pub fn guard_amplitude(&self) -> f64 {
        (self.pn_power_ratio * self.body_power()).sqrt()
    }
}

/// One frame at symbol rate: PN guard (one or two copies) then the OFDM body.
#[derive(Debug, Clone, PartialEq)]
pub struct TdsFrame {
    pub guard: Vec<Complex64>,
    pub body: Vec<Complex64>,
}

impl TdsFrame {
    pub fn len(&self) -> usize {
        self.guard.len() + self.body.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn samples(&self) -> impl Iterator<Item = &Complex64> {
        self.guard.iter().chain(&self.body)
    }

    pub fn energy(&self) -> f64 {
        self.samples().map(|s| s.norm_sqr()).sum()
    }
}

/// Builds one frame: `body = idft(data)`, guard = scaled PN (twice for DPN).
pub fn build_frame(data: &[Complex64], pn: &PnSequence, cfg: &FrameConfig) -> Result<TdsFrame> {
    if data.len() != cfg.n_fft {
        return Err(Error::LengthMismatch {
            expected: cfg.n_fft,
            actual: data.len(),
        });
    }
    if pn.len() != cfg.pn_len {
        return Err(Error::LengthMismatch {
            expected: cfg.pn_len,
            actual: pn.len(),
        });
    }
    let body = dsp::idft(data)?;
    let amp = cfg.guard_amplitude();
    let copies = if cfg.dual_pn { 2 } else { 1 };
    let guard = (0..copies)
        .flat_map(|_| pn.chips().iter().map(|c| Complex64::new(c * amp, 0.0)))
        .collect();
    Ok(TdsFrame { guard, body })
}

/// Shaped oversampled signal and the delay (in samples) of symbol 0.
#[derive(Debug, Clone)]
pub struct ShapedSignal {
    pub signal: SignalBuffer,
    pub group_delay: usize,
}

/// Concatenates frames, upsamples by `n_upsam`, and convolves with the SRRC
/// taps. The full convolution transient is kept.
pub fn transmit_chain(frames: &[TdsFrame], cfg: &FrameConfig, srrc: &SrrcSpec) -> Result<ShapedSignal> {
    if srrc.samples_per_symbol() != cfg.n_upsam {
        return Err(Error::invalid(format!(
            "SRRC designed for {} samples/symbol but frame uses n_upsam = {}",
            srrc.samples_per_symbol(),
            cfg.n_upsam
        )));
    }
    let symbols: Vec<Complex64> = frames.iter().flat_map(|f| f.samples().copied()).collect();
    shape_symbols(&symbols, srrc)
}

pub(crate) fn shape_symbols(symbols: &[Complex64], srrc: &SrrcSpec) -> Result<ShapedSignal> {
    let taps = design_srrc_taps(srrc);
    let up = dsp::upsample(&SignalBuffer::symbol_rate(symbols.to_vec())?, srrc.samples_per_symbol())?;
    let shaped = dsp::convolve(up.samples(), &taps);
    Ok(ShapedSignal {
        signal: SignalBuffer::oversampled(shaped, srrc.samples_per_symbol())?,
        group_delay: srrc.group_delay(),
    })
}
