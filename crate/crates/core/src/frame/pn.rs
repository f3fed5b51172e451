use crate::{Error, Result};

/// Feedback polynomial of a Fibonacci LFSR over GF(2).
///
/// Bit `i` of the mask is the coefficient of `x^i`; the highest set bit is
/// the degree and bit 0 must be set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LfsrPoly(u32);

/// Primitive polynomials shipped with the crate, indexed by degree 3..=12.
const PRIMITIVE: [(u32, u32); 10] = [
    (3, 0b1011),              // x^3 + x + 1
    (4, 0b1_0011),            // x^4 + x + 1
    (5, 0b10_0101),           // x^5 + x^2 + 1
    (6, 0b100_0011),          // x^6 + x + 1
    (7, 0b1000_1001),         // x^7 + x^3 + 1
    (8, 0b1_0001_1101),       // x^8 + x^4 + x^3 + x^2 + 1
    (9, 0b10_0001_0001),      // x^9 + x^4 + 1
    (10, 0b100_0000_1001),    // x^10 + x^3 + 1
    (11, 0b1000_0000_0101),   // x^11 + x^2 + 1
    (12, 0b1_0000_0101_0011), // x^12 + x^6 + x^4 + x + 1
];

impl LfsrPoly {
    pub fn from_mask(mask: u32) -> Result<Self> {
        if mask & 1 == 0 || mask < 0b100 {
            return Err(Error::invalid(format!(
                "LFSR polynomial {mask:#b} needs degree >= 2 and a constant term"
            )));
        }
        Ok(Self(mask))
    }

    /// A shipped primitive polynomial of the given degree (3 to 12).
    pub fn primitive(degree: u32) -> Result<Self> {
        PRIMITIVE
            .iter()
            .find(|(d, _)| *d == degree)
            .map(|&(_, m)| Self(m))
            .ok_or_else(|| Error::invalid(format!("no shipped primitive polynomial of degree {degree}")))
    }

    pub fn shipped() -> impl Iterator<Item = Self> {
        PRIMITIVE.iter().map(|&(_, m)| Self(m))
    }

    pub fn degree(self) -> u32 {
        31 - self.0.leading_zeros()
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn period(self) -> usize {
        (1usize << self.degree()) - 1
    }
}

/// Bipolar (+1/-1) pseudo-noise guard sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct PnSequence {
    chips: Vec<f64>,
    poly: LfsrPoly,
    seed: u32,
}

impl PnSequence {
    pub fn chips(&self) -> &[f64] {
        &self.chips
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }

    pub fn poly(&self) -> LfsrPoly {
        self.poly
    }

    pub fn seed(&self) -> u32 {
        self.seed
    }

    /// Default guard for a length: the shipped polynomial of degree
    /// `ceil(log2(length))`, all-ones seed, cyclically extended.
    pub fn for_length(length: usize) -> Result<Self> {
        let degree = length.next_power_of_two().trailing_zeros().max(3);
        let poly = LfsrPoly::primitive(degree)?;
        generate_pn(length, poly, (1 << degree) - 1)
    }
}

/// m-sequence from the recurrence `s[n+d] = sum_i c_i s[n+i]`, seeded with
/// the low `d` bits of `seed` (bit `i` is `s[i]`), mapped 0 -> +1, 1 -> -1
/// and repeated cyclically when `length` exceeds the period.
pub fn generate_pn(length: usize, poly: LfsrPoly, seed: u32) -> Result<PnSequence> {
    let d = poly.degree() as usize;
    let state_mask = (1u32 << d) - 1;
    if seed & state_mask == 0 {
        return Err(Error::invalid("LFSR seed must be nonzero"));
    }
    if length == 0 {
        return Err(Error::invalid("PN length must be positive"));
    }
    let taps = poly.mask() & state_mask;
    let period = poly.period();
    let mut state = seed & state_mask;
    let mut bits = Vec::with_capacity(period.min(length));
    for _ in 0..period.min(length) {
        bits.push(state & 1);
        let fb = (state & taps).count_ones() & 1;
        state = (state >> 1) | (fb << (d - 1));
    }
    let chips = (0..length)
        .map(|k| if bits[k % bits.len()] == 0 { 1.0 } else { -1.0 })
        .collect();
    Ok(PnSequence {
        chips,
        poly,
        seed: seed & state_mask,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn periodic_autocorr(c: &[f64], lag: usize) -> f64 {
        let n = c.len();
        (0..n).map(|k| c[k] * c[(k + lag) % n]).sum()
    }

    #[test]
    fn degree3_two_valued_autocorrelation() {
        let pn = generate_pn(7, LfsrPoly::from_mask(0b1011).unwrap(), 0b001).unwrap();
        assert_eq!(periodic_autocorr(pn.chips(), 0), 7.0);
        for lag in 1..7 {
            assert_eq!(periodic_autocorr(pn.chips(), lag), -1.0);
        }
    }

    #[test]
    fn every_shipped_polynomial_is_maximal() {
        for poly in LfsrPoly::shipped() {
            let n = poly.period();
            let pn = generate_pn(n, poly, 1).unwrap();
            assert!(pn.chips().iter().all(|c| c.abs() == 1.0));
            assert_eq!(periodic_autocorr(pn.chips(), 0), n as f64);
            for lag in 1..n {
                assert_eq!(periodic_autocorr(pn.chips(), lag), -1.0, "degree {} lag {lag}", poly.degree());
            }
        }
    }

    #[test]
    fn deterministic() {
        let p = LfsrPoly::primitive(7).unwrap();
        assert_eq!(generate_pn(100, p, 5).unwrap(), generate_pn(100, p, 5).unwrap());
        assert_ne!(generate_pn(100, p, 5).unwrap(), generate_pn(100, p, 6).unwrap());
    }

    #[test]
    fn rejects_zero_seed_and_bad_poly() {
        let p = LfsrPoly::primitive(5).unwrap();
        assert!(generate_pn(10, p, 0).is_err());
        assert!(generate_pn(10, p, 0b100000).is_err());
        assert!(LfsrPoly::from_mask(0b1010).is_err());
        assert!(LfsrPoly::primitive(20).is_err());
    }

    /// Brute-force oracle: enumerate the degree-9 register state by state with
    /// a Galois-free shift loop independent of `generate_pn`.
    #[test]
    fn degree9_balance_and_cyclic_extension() {
        let poly = LfsrPoly::primitive(9).unwrap();
        let pn = generate_pn(512, poly, 0x1ff).unwrap();
        let mut reg = [1u8; 9];
        let mut oracle = Vec::new();
        for _ in 0..511 {
            oracle.push(reg[0]);
            let fb = reg[0] ^ reg[4];
            reg.rotate_left(1);
            reg[8] = fb;
        }
        for (k, b) in oracle.iter().enumerate() {
            assert_eq!(pn.chips()[k], if *b == 0 { 1.0 } else { -1.0 }, "chip {k}");
        }
        let minus = pn.chips()[..511].iter().filter(|c| **c < 0.0).count();
        assert_eq!(minus, 256);
        assert_eq!(511 - minus, 255);
        assert_eq!(pn.chips()[511], pn.chips()[0]);
    }

    #[test]
    fn for_length_picks_degree() {
        assert_eq!(PnSequence::for_length(512).unwrap().poly().degree(), 9);
        assert_eq!(PnSequence::for_length(128).unwrap().poly().degree(), 7);
        assert_eq!(PnSequence::for_length(100).unwrap().len(), 100);
    }
}
