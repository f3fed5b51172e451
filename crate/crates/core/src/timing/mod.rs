//! Conventional symbol timing recovery: PN correlation peak search, a
//! sidelobe-difference timing error detector, and a first-order loop that
//! steers a fractional-delay interpolator.

use serde::Serialize;

use crate::dsp::resample::{fractional_delay_slice, FD_HALF};
use crate::dsp::SignalBuffer;
use crate::frame::PnSequence;
use crate::{Complex64, Error, Result};

/// `|R(k)|` over consecutive lags.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTrace {
    pub r: Vec<f64>,
    /// First index attaining the maximum.
    pub peak_index: usize,
}

impl CorrelationTrace {
    pub fn new(r: Vec<f64>) -> Result<Self> {
        if r.is_empty() {
            return Err(Error::invalid("empty correlation trace"));
        }
        let peak_index = argmax_first(&r);
        Ok(Self { r, peak_index })
    }

    /// Peak magnitude over the largest value at least `guard` lags away.
    pub fn peak_to_sidelobe(&self, guard: usize) -> f64 {
        let side = self
            .r
            .iter()
            .enumerate()
            .filter(|(k, _)| k.abs_diff(self.peak_index) >= guard)
            .map(|(_, v)| *v)
            .fold(0.0, f64::max);
        self.r[self.peak_index] / side
    }
}

fn argmax_first(r: &[f64]) -> usize {
    let mut best = 0;
    for (k, v) in r.iter().enumerate() {
        if *v > r[best] {
            best = k;
        }
    }
    best
}

/// `r[k] = |sum_m rx[k + m n_upsam] pn[m]|` for every lag with full overlap.
pub fn correlate_pn(rx: &SignalBuffer, pn: &PnSequence, n_upsam: usize) -> Result<CorrelationTrace> {
    CorrelationTrace::new(correlate_slice(rx.samples(), pn.chips(), n_upsam)?)
}

fn correlate_slice(x: &[Complex64], chips: &[f64], n_upsam: usize) -> Result<Vec<f64>> {
    if n_upsam == 0 || chips.is_empty() {
        return Err(Error::invalid("correlation needs a PN and a positive step"));
    }
    let span = (chips.len() - 1) * n_upsam + 1;
    if x.len() < span {
        return Err(Error::LengthMismatch {
            expected: span,
            actual: x.len(),
        });
    }
    Ok((0..=x.len() - span)
        .map(|k| {
            chips
                .iter()
                .enumerate()
                .map(|(m, c)| x[k + m * n_upsam] * *c)
                .sum::<Complex64>()
                .norm()
        })
        .collect())
}

/// `(r[p+1] - r[p-1]) / r[p]` at the peak `p`. Positive when the true peak
/// lies after `p`.
pub fn timing_error(trace: &CorrelationTrace) -> Result<f64> {
    let p = trace.peak_index;
    if p == 0 || p + 1 >= trace.r.len() {
        return Err(Error::invalid(format!("correlation peak at trace boundary ({p})")));
    }
    if trace.r[p] == 0.0 {
        return Err(Error::invalid("correlation trace is identically zero"));
    }
    Ok((trace.r[p + 1] - trace.r[p - 1]) / trace.r[p])
}

/// Where the guard intervals sit in the received stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrLayout {
    /// Frame period in oversampled samples.
    pub frame_len: usize,
    /// First sample of the acquisition search.
    pub search_start: usize,
    /// Number of lags searched during acquisition.
    pub search_len: usize,
    /// Half-width (in lags) of the tracking window around the expected peak.
    pub track_radius: usize,
    /// The reference is the PN rotated left by this many chips. With a
    /// repeated guard, half a PN length centres the window so that both
    /// edges see PN chips rather than data.
    pub reference_offset: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrLoopState {
    /// Interpolator delay in oversampled samples; the loop drives it to the
    /// negative of the timing offset.
    pub phase_estimate: f64,
    pub loop_gain: f64,
    pub error_history: Vec<f64>,
    /// Continuous peak position in the raw stream, one per tracked frame.
    pub peak_positions: Vec<f64>,
    /// Frame at which the convergence run began.
    pub converged_at: Option<usize>,
}

impl StrLoopState {
    pub const LOCK_THRESHOLD: f64 = 0.02;
    pub const LOCK_FRAMES: usize = 5;

    pub fn new(loop_gain: f64) -> Result<Self> {
        if !(loop_gain > 0.0 && loop_gain <= 1.0) {
            return Err(Error::invalid(format!("loop gain {loop_gain} outside (0, 1]")));
        }
        Ok(Self {
            phase_estimate: 0.0,
            loop_gain,
            error_history: Vec::new(),
            peak_positions: Vec::new(),
            converged_at: None,
        })
    }

    pub fn converged(&self) -> bool {
        self.converged_at.is_some()
    }

    /// Peak position of the last tracked frame.
    pub fn last_peak(&self) -> Option<f64> {
        self.peak_positions.last().copied()
    }
}

/// Runs acquisition on the first guard and then tracks `n_frames` guards.
/// Non-convergence leaves `converged_at` empty; a stream that ends before
/// `n_frames` guards is an error.
pub fn str_track(
    rx: &SignalBuffer,
    pn: &PnSequence,
    mut state: StrLoopState,
    layout: &StrLayout,
    n_frames: usize,
) -> Result<StrLoopState> {
    if !state.phase_estimate.is_finite() {
        return Err(Error::invalid("phase estimate is not finite"));
    }
    let l = rx.rate().factor();
    let x = rx.samples();
    let off = layout.reference_offset % pn.len();
    let reference: Vec<f64> = pn.chips()[off..].iter().chain(&pn.chips()[..off]).copied().collect();
    let span = (pn.len() - 1) * l + 1;
    let acq_end = layout.search_start + layout.search_len + span - 1;
    if acq_end > x.len() {
        return Err(Error::LengthMismatch {
            expected: acq_end,
            actual: x.len(),
        });
    }
    let acq = correlate_slice(&x[layout.search_start..acq_end], &reference, l)?;
    let mut center = (layout.search_start + first_strong_peak(&acq)) as isize;

    let mut run = 0;
    for f in 0..n_frames {
        let radius = layout.track_radius as isize;
        let a = center - radius;
        let len = 2 * layout.track_radius + span;
        let y = interpolated(x, a, len, state.phase_estimate).ok_or_else(|| {
            Error::invalid(format!("stream ends before guard {f} of {n_frames}"))
        })?;
        let trace = CorrelationTrace::new(correlate_slice(&y, &reference, l)?)?;
        let e = timing_error(&trace)?;
        let peak = a + trace.peak_index as isize;
        state.peak_positions.push(peak as f64 - state.phase_estimate);
        state.error_history.push(e);
        state.phase_estimate -= state.loop_gain * e;
        if e.abs() < StrLoopState::LOCK_THRESHOLD {
            run += 1;
            if run == StrLoopState::LOCK_FRAMES && state.converged_at.is_none() {
                state.converged_at = Some(f + 1 - StrLoopState::LOCK_FRAMES);
            }
        } else {
            run = 0;
        }
        center = peak + layout.frame_len as isize;
    }
    Ok(state)
}

/// First lag reaching 80 % of the maximum, advanced to its local maximum.
/// Prefers the first copy of a repeated guard.
fn first_strong_peak(r: &[f64]) -> usize {
    let max = r.iter().copied().fold(0.0, f64::max);
    let mut k = r.iter().position(|v| *v >= 0.8 * max).unwrap_or(0);
    while k + 1 < r.len() && r[k + 1] > r[k] {
        k += 1;
    }
    k
}

/// `y[j] = x(a + j - phi)` for `j in 0..len`, or `None` when the
/// interpolator support leaves the stream.
fn interpolated(x: &[Complex64], a: isize, len: usize, phi: f64) -> Option<Vec<Complex64>> {
    let ip = phi.round();
    let mu = phi - ip;
    let start = a - ip as isize - FD_HALF;
    let end = start + len as isize + 2 * FD_HALF;
    if start < 0 || end > x.len() as isize {
        return None;
    }
    let d = fractional_delay_slice(&x[start as usize..end as usize], mu);
    Some(d[FD_HALF as usize..FD_HALF as usize + len].to_vec())
}
