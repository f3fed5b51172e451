use num_complex::Complex64;
use rand::Rng;

use super::config::{Equalizer, ScenarioConfig};
use crate::channel::impair::add_noise_in_place;
use crate::channel::{apply_channel, estimate_response_from_pn, noise_variance_per_dim, ChannelProfile, EquivResponse};
use crate::dsp::resample::FD_HALF;
use crate::dsp::{convolve, design_srrc_taps, dft, fractional_delay_taps, SrrcSpec};
use crate::frame::{build_frame, shape_symbols, Constellation, FrameConfig, PnSequence, TdsFrame};
use crate::{Error, Result};

/// Error counters of one or more bursts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub frames: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub decisions: u64,
    pub decision_errors: u64,
}

impl std::ops::AddAssign for Counts {
    fn add_assign(&mut self, o: Self) {
        self.frames += o.frames;
        self.bits += o.bits;
        self.bit_errors += o.bit_errors;
        self.decisions += o.decisions;
        self.decision_errors += o.decision_errors;
    }
}

/// The complete transmit / channel / receive chain at one sampling phase.
///
/// The receiver samples the matched-filter output at `k T + epsilon T`,
/// removes inter-block interference and restores the cyclic structure of
/// each OFDM body with the known symbol-rate impulse response of the chain
/// (ideal guard removal), then applies one-tap zero forcing.
#[derive(Debug, Clone)]
pub struct Link {
    frame: FrameConfig,
    srrc: SrrcSpec,
    taps: Vec<f64>,
    profile: ChannelProfile,
    constellation: Constellation,
    pn: PnSequence,
    epsilon: f64,
    shift: isize,
    interp: Option<Vec<f64>>,
    impulse: Vec<Complex64>,
    lead: usize,
    bins: Vec<Complex64>,
}

impl Link {
    pub fn new(cfg: &ScenarioConfig, profile: &ChannelProfile, epsilon: f64) -> Result<Self> {
        Self::with_parts(&cfg.frame, cfg.srrc_spec()?, profile, epsilon)
    }

    pub fn with_parts(frame: &FrameConfig, srrc: SrrcSpec, profile: &ChannelProfile, epsilon: f64) -> Result<Self> {
        frame.validate()?;
        if !epsilon.is_finite() {
            return Err(Error::invalid("sampling phase must be finite"));
        }
        if srrc.samples_per_symbol() != frame.n_upsam {
            return Err(Error::invalid("SRRC oversampling differs from n_upsam"));
        }
        let u = frame.n_upsam as f64;
        let shift = (epsilon * u).round();
        let frac = epsilon * u - shift;
        let mut link = Self {
            frame: frame.clone(),
            taps: design_srrc_taps(&srrc),
            srrc,
            profile: profile.clone(),
            constellation: Constellation::new(frame.modulation),
            pn: PnSequence::for_length(frame.pn_len)?,
            epsilon,
            shift: shift as isize,
            interp: (frac != 0.0).then(|| fractional_delay_taps(-frac)),
            impulse: Vec::new(),
            lead: 0,
            bins: Vec::new(),
        };
        let lead = 2 * link.srrc.span_symbols()
            + link.profile.max_delay().ceil() as usize
            + epsilon.abs().ceil() as usize
            + (FD_HALF as usize).div_ceil(frame.n_upsam)
            + 2;
        let mut stream = vec![Complex64::default(); 2 * lead + 1];
        stream[lead] = Complex64::new(1.0, 0.0);
        link.impulse = link.receive_no_rng(&stream)?;
        link.lead = lead;
        let n = frame.n_fft;
        let mut folded = vec![Complex64::default(); n];
        for (k, h) in link.impulse.iter().enumerate() {
            let j = k as isize - lead as isize;
            folded[j.rem_euclid(n as isize) as usize] += h;
        }
        link.bins = dft(&folded)?;
        Ok(link)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn frame(&self) -> &FrameConfig {
        &self.frame
    }

    pub fn pn(&self) -> &PnSequence {
        &self.pn
    }

    /// Symbol-rate impulse response `h[j]`, `j = -lead..=lead`.
    pub fn impulse_response(&self) -> (&[Complex64], usize) {
        (&self.impulse, self.lead)
    }

    /// Per-bin gains of the simulated chain.
    pub fn chain_response(&self) -> EquivResponse {
        EquivResponse {
            h: self.bins.clone(),
            epsilon: self.epsilon,
            alpha: self.frame.alpha,
            profile: self.profile.name().to_owned(),
        }
    }

    /// Noise variance per real dimension at the oversampled rate, referenced
    /// to the nominal OFDM body power.
    pub fn noise_variance(&self, ebn0_db: f64) -> f64 {
        let u = self.frame.n_upsam;
        noise_variance_per_dim(
            self.frame.body_power() / u as f64,
            ebn0_db,
            self.constellation.bits_per_symbol(),
            u,
        )
    }

    fn receive_no_rng(&self, symbols: &[Complex64]) -> Result<Vec<Complex64>> {
        let z = convolve(&self.through_channel(symbols)?, &self.taps);
        Ok(self.sample(&z, symbols.len()))
    }

    /// Shapes, passes through the channel, adds noise and matched filters.
    /// Sample `D + k L` of the result corresponds to symbol `k` at zero phase,
    /// with `D` the combined filter delay.
    pub fn matched_output<R: Rng + ?Sized>(&self, symbols: &[Complex64], var_per_dim: f64, rng: &mut R) -> Result<Vec<Complex64>> {
        let mut rx = self.through_channel(symbols)?;
        if var_per_dim > 0.0 {
            add_noise_in_place(&mut rx, var_per_dim, rng);
        }
        Ok(convolve(&rx, &self.taps))
    }

    fn through_channel(&self, symbols: &[Complex64]) -> Result<Vec<Complex64>> {
        let shaped = shape_symbols(symbols, &self.srrc)?;
        Ok(apply_channel(&shaped.signal, &self.profile)?.into_samples())
    }

    /// Combined transmit and receive filter delay in oversampled samples.
    pub fn filter_delay(&self) -> usize {
        self.taps.len() - 1
    }

    /// `y[k] = z(D + (k + epsilon) L)` for `k in 0..count`.
    fn sample(&self, z: &[Complex64], count: usize) -> Vec<Complex64> {
        let u = self.frame.n_upsam as isize;
        let base = self.filter_delay() as isize + self.shift;
        let at = |i: isize| {
            if (0..z.len() as isize).contains(&i) {
                z[i as usize]
            } else {
                Complex64::default()
            }
        };
        (0..count as isize)
            .map(|k| {
                let p = base + k * u;
                match &self.interp {
                    None => at(p),
                    Some(h) => h
                        .iter()
                        .enumerate()
                        .map(|(i, t)| at(p - (i as isize - FD_HALF)) * t)
                        .sum(),
                }
            })
            .collect()
    }

    /// Random frames: per frame the transmitted labels and the frame.
    fn random_frames<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<(Vec<usize>, TdsFrame)>> {
        let m = self.frame.modulation.order();
        let points = self.constellation.points();
        (0..n)
            .map(|_| {
                let labels: Vec<usize> = (0..self.frame.n_fft).map(|_| rng.random_range(0..m)).collect();
                let data: Vec<Complex64> = labels.iter().map(|l| points[*l]).collect();
                Ok((labels, build_frame(&data, &self.pn, &self.frame)?))
            })
            .collect()
    }

    /// Transmits `n_frames` random frames and counts decision errors on all
    /// but the first and last.
    pub fn simulate_burst<R: Rng + ?Sized>(
        &self,
        n_frames: usize,
        ebn0_db: f64,
        equalizer: Equalizer,
        pn_avg: usize,
        rng: &mut R,
    ) -> Result<Counts> {
        if n_frames < 3 {
            return Err(Error::invalid("a burst needs at least three frames"));
        }
        let frames = self.random_frames(n_frames, rng)?;
        let symbols: Vec<Complex64> = frames.iter().flat_map(|(_, f)| f.samples().copied()).collect();
        let z = self.matched_output(&symbols, self.noise_variance(ebn0_db), rng)?;
        let y = self.sample(&z, symbols.len());

        let estimated;
        let gains = match equalizer {
            Equalizer::Known => &self.bins,
            Equalizer::PnEstimated => {
                let guards = (1..n_frames).take(pn_avg).collect::<Vec<_>>();
                estimated = self.estimate_from(&y, &guards)?.h;
                &estimated
            }
        };

        let bps = self.constellation.bits_per_symbol() as u64;
        let dims = self.frame.modulation.dimensions() as u64;
        let n = self.frame.n_fft as u64;
        let mut c = Counts::default();
        for f in 1..n_frames - 1 {
            let (labels, frame) = &frames[f];
            let body = self.cyclic_body(&y, &symbols, f, &frame.body);
            for ((yv, h), tx) in dft(&body)?.iter().zip(gains).zip(labels) {
                let eq = if h.norm_sqr() > 0.0 { yv / h } else { *yv };
                let rx = self.constellation.decide(eq);
                c.bit_errors += (rx ^ tx).count_ones() as u64;
                c.decision_errors += self.constellation.dimension_errors(rx, *tx) as u64;
            }
            c.frames += 1;
            c.bits += n * bps;
            c.decisions += n * dims;
        }
        Ok(c)
    }

    /// Body of frame `f` with the contributions of neighbouring symbols
    /// replaced by the cyclic continuation of the body itself.
    fn cyclic_body(&self, y: &[Complex64], s: &[Complex64], f: usize, body: &[Complex64]) -> Vec<Complex64> {
        let n = self.frame.n_fft as isize;
        let b = (f * self.frame.frame_len() + self.frame.guard_len()) as isize;
        let lead = self.lead as isize;
        let sym = |k: isize| {
            if (0..s.len() as isize).contains(&k) {
                s[k as usize]
            } else {
                Complex64::default()
            }
        };
        (0..n)
            .map(|i| {
                let mut v = y[(b + i) as usize];
                // Only taps reaching outside the body differ from the cyclic model.
                for j in (-lead..=lead).filter(|j| i - j < 0 || i - j >= n) {
                    let h = self.impulse[(j + lead) as usize];
                    v -= h * (sym(b + i - j) - body[(i - j).rem_euclid(n) as usize]);
                }
                v
            })
            .collect()
    }

    /// The PN reference seen by a window starting half a PN into the
    /// repeated guard.
    fn centred_reference(&self) -> Vec<Complex64> {
        let l = self.pn.len();
        let amp = self.frame.guard_amplitude();
        (0..l)
            .map(|k| Complex64::new(self.pn.chips()[(k + l / 2) % l] * amp, 0.0))
            .collect()
    }

    fn estimate_from(&self, y: &[Complex64], guards: &[usize]) -> Result<EquivResponse> {
        if !self.frame.dual_pn {
            return Err(Error::invalid("PN estimation needs a repeated guard"));
        }
        let l = self.pn.len();
        let windows: Vec<Vec<Complex64>> = guards
            .iter()
            .map(|g| {
                let s = g * self.frame.frame_len() + l / 2;
                y[s..s + l].to_vec()
            })
            .collect();
        let mut r = estimate_response_from_pn(&windows, &self.centred_reference(), self.frame.n_fft)?;
        r.epsilon = self.epsilon;
        r.alpha = self.frame.alpha;
        Ok(r)
    }

    /// PN-based estimate of the per-bin gains from `n_guards` noisy guards.
    pub fn estimate_response<R: Rng + ?Sized>(&self, n_guards: usize, ebn0_db: f64, rng: &mut R) -> Result<EquivResponse> {
        if n_guards == 0 {
            return Err(Error::invalid("need at least one guard"));
        }
        let frames = self.random_frames(n_guards + 2, rng)?;
        let symbols: Vec<Complex64> = frames.iter().flat_map(|(_, f)| f.samples().copied()).collect();
        let z = self.matched_output(&symbols, self.noise_variance(ebn0_db), rng)?;
        let y = self.sample(&z, symbols.len());
        self.estimate_from(&y, &(1..=n_guards).collect::<Vec<_>>())
    }

    /// Matched-filter output (oversampled) for `n_frames` random frames.
    pub fn received_stream<R: Rng + ?Sized>(&self, n_frames: usize, ebn0_db: f64, rng: &mut R) -> Result<Vec<Complex64>> {
        let frames = self.random_frames(n_frames, rng)?;
        let symbols: Vec<Complex64> = frames.iter().flat_map(|(_, f)| f.samples().copied()).collect();
        self.matched_output(&symbols, self.noise_variance(ebn0_db), rng)
    }

    /// Per-bin gains `Y[n] / X[n]` measured on a noiseless burst.
    pub fn measured_gains<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<Complex64>> {
        let frames = self.random_frames(3, rng)?;
        let symbols: Vec<Complex64> = frames.iter().flat_map(|(_, f)| f.samples().copied()).collect();
        let z = self.matched_output(&symbols, 0.0, rng)?;
        let y = self.sample(&z, symbols.len());
        let (labels, frame) = &frames[1];
        let body = self.cyclic_body(&y, &symbols, 1, &frame.body);
        let points = self.constellation.points();
        Ok(dft(&body)?
            .iter()
            .zip(labels)
            .map(|(v, l)| v / points[*l])
            .collect())
    }
}
