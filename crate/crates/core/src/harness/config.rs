use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{BerMode, PhaseGrid};
use crate::channel::ChannelProfile;
use crate::dsp::SrrcSpec;
use crate::frame::FrameConfig;
use crate::{Error, Result};

/// How the receiver obtains the per-bin gains used for zero forcing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equalizer {
    /// Exact gains of the simulated chain.
    #[default]
    Known,
    /// Least-squares estimate from the centre of the repeated PN guard.
    PnEstimated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SrrcConfig {
    /// One-sided filter span in symbols.
    pub span_symbols: usize,
}

impl Default for SrrcConfig {
    fn default() -> Self {
        Self { span_symbols: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhaseConfig {
    /// Sampling phases (symbol periods) for `theory` and `simulate`.
    pub epsilon: Vec<f64>,
    /// Uniform grid size for the criterion and the grid search.
    pub grid: usize,
}

impl Default for PhaseConfig {
    fn default() -> Self {
        Self {
            epsilon: vec![0.0],
            grid: PhaseGrid::DEFAULT_SIZE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub ebn0_db: Vec<f64>,
    /// Operating point for phase comparisons; defaults to the last sweep
    /// value.
    pub reference_ebn0_db: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            ebn0_db: vec![10.0],
            reference_ebn0_db: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McConfig {
    pub min_bits: u64,
    pub min_errors: u64,
    /// Upper bound on counted frames per point.
    pub max_frames: u64,
    /// Frames per simulated burst; the first and last are not counted.
    pub burst_frames: usize,
    /// Bursts dispatched per parallel batch.
    pub batch_bursts: usize,
    /// Guard windows averaged by the PN estimator.
    pub pn_avg: usize,
    /// Reuse the same bits and noise for every phase of a sweep.
    pub common_random_numbers: bool,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            min_bits: 2_000_000,
            min_errors: 100,
            max_frames: 20_000,
            burst_frames: 6,
            batch_bursts: 8,
            pn_avg: 4,
            common_random_numbers: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StrConfig {
    pub loop_gain: f64,
    /// Guards tracked.
    pub frames: usize,
    /// Half-width of the tracking window in oversampled samples.
    pub track_radius: usize,
    /// Trailing frames averaged for the reported phase.
    pub average_frames: usize,
}

impl Default for StrConfig {
    fn default() -> Self {
        Self {
            loop_gain: 0.5,
            frames: 40,
            track_radius: 32,
            average_frames: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResponseSource {
    #[default]
    Analytic,
    PnEstimated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CriterionConfig {
    pub response: ResponseSource,
    /// Also run the timing-recovery baseline.
    pub str_baseline: bool,
    /// Also run the Monte-Carlo grid search.
    pub oracle: bool,
}

impl Default for CriterionConfig {
    fn default() -> Self {
        Self {
            response: ResponseSource::Analytic,
            str_baseline: true,
            oracle: true,
        }
    }
}

/// A complete simulation scenario, read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub ber_mode: BerMode,
    /// `"awgn"`, `"two-ray:<delay>:<gain>"`, or a profile file path
    /// (relative paths resolve against the config file's directory).
    pub channel: String,
    pub equalizer: Equalizer,
    pub frame: FrameConfig,
    pub srrc: SrrcConfig,
    pub phase: PhaseConfig,
    pub sweep: SweepConfig,
    pub mc: McConfig,
    #[serde(rename = "str")]
    pub str_loop: StrConfig,
    pub criterion: CriterionConfig,
    #[serde(skip)]
    base_dir: PathBuf,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            ber_mode: BerMode::Paper,
            channel: "awgn".into(),
            equalizer: Equalizer::Known,
            frame: FrameConfig::default(),
            srrc: SrrcConfig::default(),
            phase: PhaseConfig::default(),
            sweep: SweepConfig::default(),
            mc: McConfig::default(),
            str_loop: StrConfig::default(),
            criterion: CriterionConfig::default(),
            base_dir: PathBuf::from("."),
        }
    }
}

impl ScenarioConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_toml(&text, base)
    }

    pub fn from_toml(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.base_dir = base_dir.into();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn base_dir(&self) -> &Path {
        &self.base_dir
    }

    pub fn set_base_dir(&mut self, dir: impl Into<PathBuf>) {
        self.base_dir = dir.into();
    }

    pub fn validate(&self) -> Result<()> {
        let cfg_err = |m: String| Err(Error::Config(m));
        if let Err(e) = self.frame.validate() {
            return cfg_err(format!("[frame]: {e}"));
        }
        self.srrc_spec().map_err(|e| Error::Config(format!("[srrc]: {e}")))?;
        if self.sweep.ebn0_db.is_empty() {
            return cfg_err("[sweep] ebn0_db must not be empty".into());
        }
        if self.sweep.ebn0_db.iter().any(|v| v.is_nan() || *v == f64::NEG_INFINITY) {
            return cfg_err("[sweep] ebn0_db values must be numbers or +inf".into());
        }
        if self.sweep.ebn0_db.windows(2).any(|w| w[0] >= w[1]) {
            return cfg_err("[sweep] ebn0_db must be strictly increasing".into());
        }
        if let Some(r) = self.sweep.reference_ebn0_db {
            if r.is_nan() || r == f64::NEG_INFINITY {
                return cfg_err("[sweep] reference_ebn0_db must be a number or +inf".into());
            }
        }
        if self.phase.epsilon.is_empty() || self.phase.epsilon.iter().any(|e| !e.is_finite()) {
            return cfg_err("[phase] epsilon must be a non-empty list of finite values".into());
        }
        if self.phase.grid == 0 {
            return cfg_err("[phase] grid must be positive".into());
        }
        let mc = &self.mc;
        if mc.min_errors == 0 || mc.max_frames == 0 || mc.batch_bursts == 0 || mc.pn_avg == 0 {
            return cfg_err("[mc] min_errors, max_frames, batch_bursts and pn_avg must be positive".into());
        }
        if mc.burst_frames < 3 {
            return cfg_err("[mc] burst_frames must be at least 3".into());
        }
        let needs_pn_window = self.equalizer == Equalizer::PnEstimated
            || self.criterion.response == ResponseSource::PnEstimated
            || self.criterion.str_baseline;
        if needs_pn_window && !self.frame.dual_pn {
            return cfg_err("PN estimation and timing recovery need dual_pn = true".into());
        }
        let s = &self.str_loop;
        if !(s.loop_gain > 0.0 && s.loop_gain <= 1.0) {
            return cfg_err("[str] loop_gain must lie in (0, 1]".into());
        }
        if s.frames < 2 || s.average_frames == 0 || s.average_frames > s.frames || s.track_radius < 2 {
            return cfg_err("[str] needs frames >= 2, 1 <= average_frames <= frames, track_radius >= 2".into());
        }
        self.profile()?;
        Ok(())
    }

    pub fn srrc_spec(&self) -> Result<SrrcSpec> {
        SrrcSpec::new(self.frame.alpha, self.srrc.span_symbols, self.frame.n_upsam)
    }

    /// Resolves the `channel` entry.
    pub fn profile(&self) -> Result<ChannelProfile> {
        let c = self.channel.trim();
        if c.eq_ignore_ascii_case("awgn") {
            return Ok(ChannelProfile::awgn());
        }
        if let Some(rest) = c.strip_prefix("two-ray:") {
            let parts: Vec<&str> = rest.split(':').collect();
            let parsed: Option<Vec<f64>> = parts.iter().map(|p| p.trim().parse().ok()).collect();
            return match parsed.as_deref() {
                Some([d, g]) => ChannelProfile::two_ray(*d, *g).map_err(|e| Error::Config(e.to_string())),
                _ => Err(Error::Config(format!("bad two-ray channel spec {c:?}"))),
            };
        }
        let path = Path::new(c);
        let path = if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        };
        ChannelProfile::load(&path).map_err(|e| match e {
            Error::Io(io) => Error::Config(format!("cannot read channel profile {}: {io}", path.display())),
            other => other,
        })
    }

    pub fn phase_grid(&self) -> Result<PhaseGrid> {
        PhaseGrid::uniform(self.phase.grid)
    }

    pub fn reference_ebn0_db(&self) -> f64 {
        self.sweep
            .reference_ebn0_db
            .unwrap_or_else(|| *self.sweep.ebn0_db.last().expect("validated non-empty"))
    }

    /// 64-bit FNV-1a of the canonical JSON form plus the resolved channel
    /// taps, as 16 hex digits.
    pub fn fingerprint(&self) -> Result<String> {
        let profile = self.profile()?;
        let taps: Vec<[f64; 3]> = profile.taps().iter().map(|t| [t.delay, t.gain.re, t.gain.im]).collect();
        let json = serde_json::to_string(&(self, taps)).map_err(|e| Error::Config(e.to_string()))?;
        Ok(format!("{:016x}", fnv1a(json.as_bytes())))
    }
}

pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ *b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}
