use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modulation {
    Bpsk,
    Qam16,
    Qam64,
    Qam256,
}

impl Modulation {
    pub fn order(self) -> usize {
        match self {
            Modulation::Bpsk => 2,
            Modulation::Qam16 => 16,
            Modulation::Qam64 => 64,
            Modulation::Qam256 => 256,
        }
    }

    pub fn bits_per_symbol(self) -> usize {
        self.order().trailing_zeros() as usize
    }

    /// Number of independently sliced amplitude dimensions (1 for BPSK).
    pub fn dimensions(self) -> usize {
        match self {
            Modulation::Bpsk => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Modulation::Bpsk => "bpsk",
            Modulation::Qam16 => "qam16",
            Modulation::Qam64 => "qam64",
            Modulation::Qam256 => "qam256",
        }
    }
}

impl std::fmt::Display for Modulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Gray-labelled constellation with unit average energy.
///
/// Square QAM labels carry the in-phase Gray code in the upper half of the
/// bits and the quadrature code in the lower half, most significant bit first
/// on the bit stream. BPSK maps bit 0 to +1 and bit 1 to -1.
#[derive(Debug, Clone)]
pub struct Constellation {
    modulation: Modulation,
    /// Points indexed by label.
    points: Vec<Complex64>,
    /// Amplitude levels per axis.
    levels: usize,
    /// Distance from zero to the innermost level.
    scale: f64,
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

fn gray_inverse(mut g: usize) -> usize {
    let mut i = g;
    while g > 0 {
        g >>= 1;
        i ^= g;
    }
    i
}

impl Constellation {
    pub fn new(modulation: Modulation) -> Self {
        if modulation == Modulation::Bpsk {
            return Self {
                modulation,
                points: vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
                levels: 2,
                scale: 1.0,
            };
        }
        let m = modulation.order();
        let levels = (m as f64).sqrt() as usize;
        let half_bits = modulation.bits_per_symbol() / 2;
        let scale = (3.0 / (2.0 * (m as f64 - 1.0))).sqrt();
        let mut points = vec![Complex64::default(); m];
        for i in 0..levels {
            for q in 0..levels {
                let label = (gray(i) << half_bits) | gray(q);
                points[label] = Complex64::new(
                    (2.0 * i as f64 - (levels as f64 - 1.0)) * scale,
                    (2.0 * q as f64 - (levels as f64 - 1.0)) * scale,
                );
            }
        }
        Self {
            modulation,
            points,
            levels,
            scale,
        }
    }

    pub fn modulation(&self) -> Modulation {
        self.modulation
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.modulation.bits_per_symbol()
    }

    pub fn mean_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }

    /// Maps bits (one `u8` per bit, 0 or 1) to symbols.
    pub fn modulate(&self, bits: &[u8]) -> Result<Vec<Complex64>> {
        let k = self.bits_per_symbol();
        if bits.len() % k != 0 {
            return Err(Error::invalid(format!(
                "{} bits is not a multiple of {k} bits per {} symbol",
                bits.len(),
                self.modulation
            )));
        }
        Ok(bits
            .chunks(k)
            .map(|c| self.points[c.iter().fold(0usize, |acc, b| (acc << 1) | (*b as usize & 1))])
            .collect())
    }

    /// Hard decision: label of the nearest point. A symbol exactly midway
    /// between two points goes to the lower label.
    pub fn decide(&self, s: Complex64) -> usize {
        if self.modulation == Modulation::Bpsk {
            // Labels: 0 -> +1, 1 -> -1; the tie at 0 goes to label 0.
            return usize::from(s.re < 0.0);
        }
        let half_bits = self.bits_per_symbol() / 2;
        (self.slice_axis(s.re) << half_bits) | self.slice_axis(s.im)
    }

    /// Gray code of the nearest level on one axis.
    fn slice_axis(&self, x: f64) -> usize {
        let top = self.levels as f64 - 1.0;
        let pos = ((x / self.scale + top) / 2.0).clamp(0.0, top);
        let lo = pos.floor();
        let frac = pos - lo;
        let lo = lo as usize;
        // Midpoints within rounding noise count as ties.
        const TIE: f64 = 1e-9;
        if frac > 0.5 + TIE {
            gray(lo + 1)
        } else if frac < 0.5 - TIE || lo + 1 >= self.levels {
            gray(lo)
        } else {
            gray(lo).min(gray(lo + 1))
        }
    }

    pub fn demodulate(&self, symbols: &[Complex64]) -> Vec<u8> {
        let k = self.bits_per_symbol();
        let mut bits = Vec::with_capacity(symbols.len() * k);
        for s in symbols {
            let label = self.decide(*s);
            bits.extend((0..k).rev().map(|b| ((label >> b) & 1) as u8));
        }
        bits
    }

    /// Number of axes on which two labels decide different amplitude levels.
    pub fn dimension_errors(&self, a: usize, b: usize) -> usize {
        if self.modulation == Modulation::Bpsk {
            return usize::from(a != b);
        }
        let h = self.bits_per_symbol() / 2;
        let mask = (1 << h) - 1;
        usize::from(a >> h != b >> h) + usize::from(a & mask != b & mask)
    }

    /// Amplitude level index of a label on each axis, for tests and tooling.
    pub fn level_of(&self, label: usize) -> (usize, usize) {
        if self.modulation == Modulation::Bpsk {
            return (label, 0);
        }
        let h = self.bits_per_symbol() / 2;
        (gray_inverse(label >> h), gray_inverse(label & ((1 << h) - 1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [Modulation; 4] = [Modulation::Bpsk, Modulation::Qam16, Modulation::Qam64, Modulation::Qam256];

    fn label_bits(label: usize, k: usize) -> Vec<u8> {
        (0..k).rev().map(|b| ((label >> b) & 1) as u8).collect()
    }

    #[test]
    fn bpsk_convention() {
        let c = Constellation::new(Modulation::Bpsk);
        let s = c.modulate(&[0, 1]).unwrap();
        assert_eq!(s, vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
    }

    #[test]
    fn unit_energy_and_distinct_points() {
        for m in ALL {
            let c = Constellation::new(m);
            assert!((c.mean_energy() - 1.0).abs() < 1e-12, "{m}");
            for (i, a) in c.points().iter().enumerate() {
                for b in &c.points()[i + 1..] {
                    assert!((a - b).norm() > 1e-6);
                }
            }
        }
    }

    #[test]
    fn rejects_misaligned_bits() {
        assert!(Constellation::new(Modulation::Qam16).modulate(&[0, 1, 1]).is_err());
    }

    /// Exhaustive: every axis-neighbour pair differs in exactly one bit.
    #[test]
    fn gray_adjacency() {
        for m in ALL {
            let c = Constellation::new(m);
            let d_min = 2.0 * c.scale;
            for (i, a) in c.points().iter().enumerate() {
                for (j, b) in c.points().iter().enumerate() {
                    let d = a - b;
                    let axis_neighbour = (d.norm() - d_min).abs() < 1e-9 && (d.re.abs() < 1e-9 || d.im.abs() < 1e-9);
                    if axis_neighbour {
                        assert_eq!((i ^ j).count_ones(), 1, "{m}: {i} vs {j}");
                    }
                }
            }
        }
    }

    #[test]
    fn noiseless_round_trip_all_labels() {
        for m in ALL {
            let c = Constellation::new(m);
            let k = c.bits_per_symbol();
            let bits: Vec<u8> = (0..m.order()).flat_map(|l| label_bits(l, k)).collect();
            let syms = c.modulate(&bits).unwrap();
            assert_eq!(c.demodulate(&syms), bits, "{m}");
        }
    }

    #[test]
    fn small_perturbation_keeps_label() {
        let c = Constellation::new(Modulation::Qam16);
        for (label, p) in c.points().iter().enumerate() {
            for d in [Complex64::new(0.04, -0.03), Complex64::new(-0.049, 0.0), Complex64::new(0.0, 0.049)] {
                assert_eq!(c.decide(p + d), label);
            }
        }
    }

    /// Oracle: exhaustive minimum-distance search with ties going to the
    /// lower label, compared with the axis slicer on a dense grid that
    /// includes every decision boundary exactly.
    #[test]
    fn slicer_matches_brute_force_including_ties() {
        for m in [Modulation::Qam16, Modulation::Qam64] {
            let c = Constellation::new(m);
            let step = c.scale / 2.0;
            let reach = (c.levels as f64 + 1.0) * c.scale;
            let n = (2.0 * reach / step) as i32;
            for a in 0..=n {
                for b in 0..=n {
                    let s = Complex64::new(-reach + a as f64 * step, -reach + b as f64 * step);
                    let mut best = (f64::INFINITY, usize::MAX);
                    for (label, p) in c.points().iter().enumerate() {
                        let d = (s - p).norm_sqr();
                        if d < best.0 - 1e-12 || ((d - best.0).abs() <= 1e-12 && label < best.1) {
                            best = (d, label);
                        }
                    }
                    assert_eq!(c.decide(s), best.1, "{m} at {s}");
                }
            }
        }
    }

    #[test]
    fn midway_tie_goes_to_lower_label() {
        let c = Constellation::new(Modulation::Qam16);
        let a = c.points()[0b0000];
        let b = c.points()[0b0100];
        let mid = (a + b) / 2.0;
        assert_eq!(c.decide(mid), 0b0000);
    }

    #[test]
    fn dimension_error_count() {
        let c = Constellation::new(Modulation::Qam16);
        assert_eq!(c.dimension_errors(0b0000, 0b0000), 0);
        assert_eq!(c.dimension_errors(0b0001, 0b0000), 1);
        assert_eq!(c.dimension_errors(0b0101, 0b0000), 2);
        assert_eq!(c.level_of(0b1000), (3, 0));
    }
}
