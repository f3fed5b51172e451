use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tap {
    /// Delay in symbol periods.
    pub delay: f64,
    pub gain: Complex64,
}

/// Static multipath channel as a tapped delay line, normalized to unit power.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelProfile {
    name: String,
    taps: Vec<Tap>,
}

impl ChannelProfile {
    pub fn new(name: impl Into<String>, taps: Vec<Tap>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::invalid("channel profile needs at least one tap"));
        }
        for (i, t) in taps.iter().enumerate() {
            if !(t.delay >= 0.0 && t.delay.is_finite()) {
                return Err(Error::invalid(format!("tap {i}: delay must be finite and >= 0")));
            }
            if !(t.gain.re.is_finite() && t.gain.im.is_finite()) {
                return Err(Error::invalid(format!("tap {i}: gain must be finite")));
            }
            if i > 0 && t.delay <= taps[i - 1].delay {
                return Err(Error::invalid(format!("tap {i}: delays must be strictly increasing")));
            }
        }
        let power: f64 = taps.iter().map(|t| t.gain.norm_sqr()).sum();
        if power <= 0.0 {
            return Err(Error::invalid("channel profile has zero power"));
        }
        let scale = power.sqrt().recip();
        let taps = taps
            .into_iter()
            .map(|t| Tap {
                delay: t.delay,
                gain: t.gain * scale,
            })
            .collect();
        Ok(Self {
            name: name.into(),
            taps,
        })
    }

    /// Single unit tap at zero delay.
    pub fn awgn() -> Self {
        Self {
            name: "awgn".into(),
            taps: vec![Tap {
                delay: 0.0,
                gain: Complex64::new(1.0, 0.0),
            }],
        }
    }

    /// Two real taps, the first at zero delay.
    pub fn two_ray(delay: f64, second_gain: f64) -> Result<Self> {
        Self::new(
            format!("two-ray({delay},{second_gain})"),
            vec![
                Tap {
                    delay: 0.0,
                    gain: Complex64::new(1.0, 0.0),
                },
                Tap {
                    delay,
                    gain: Complex64::new(second_gain, 0.0),
                },
            ],
        )
    }

    /// Parses the line-oriented profile format:
    /// `delay_symbols gain_re gain_im` per line, `#` starts a comment.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self> {
        let name = name.into();
        let mut taps = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Profile {
                path: name.clone().into(),
                line: lineno + 1,
                msg,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(err(format!("expected 3 fields, found {}", fields.len())));
            }
            let mut vals = [0.0; 3];
            for (v, f) in vals.iter_mut().zip(&fields) {
                *v = f.parse().map_err(|_| err(format!("not a number: {f:?}")))?;
            }
            if let Some(prev) = taps.last().map(|t: &Tap| t.delay) {
                if vals[0] <= prev {
                    return Err(err("delays must be strictly increasing".into()));
                }
            }
            taps.push(Tap {
                delay: vals[0],
                gain: Complex64::new(vals[1], vals[2]),
            });
        }
        Self::new(name.clone(), taps).map_err(|e| Error::Profile {
            path: name.into(),
            line: 0,
            msg: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        Self::parse(name, &text).map_err(|e| match e {
            Error::Profile { line, msg, .. } => Error::Profile {
                path: path.to_path_buf(),
                line,
                msg,
            },
            other => other,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn taps(&self) -> &[Tap] {
        &self.taps
    }

    pub fn is_awgn(&self) -> bool {
        self.taps.len() == 1 && self.taps[0].delay == 0.0
    }

    pub fn max_delay(&self) -> f64 {
        self.taps.last().map_or(0.0, |t| t.delay)
    }

    /// `H_C(f) = sum_i g_i exp(-j 2 pi f d_i)`, `f` in cycles per symbol.
    pub fn frequency_response(&self, f: f64) -> Complex64 {
        self.taps
            .iter()
            .map(|t| t.gain * Complex64::from_polar(1.0, -2.0 * PI * f * t.delay))
            .sum()
    }
}
