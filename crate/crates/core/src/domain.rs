//! Binary joint distributions, information measures, sampling and LLRs.
//!
//! Entropies are in bits (base 2), log-likelihood ratios in nats. The
//! convention `0 · log 0 = 0` is used throughout.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::rng;
use crate::{Error, Result};

/// Magnitude cap for log-likelihood ratios (natural log units).
pub const LLR_MAX: f64 = 25.0;

const NORMALIZATION_TOL: f64 = 1e-12;

/// Binary entropy `h(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * libm::log2(p) - (1.0 - p) * libm::log2(1.0 - p)
}

#[inline]
pub fn clip_llr(v: f64) -> f64 {
    v.clamp(-LLR_MAX, LLR_MAX)
}

/// Hard decision on an LLR; ties go to 0.
#[inline]
pub fn hard_decision(llr: f64) -> u8 {
    (llr < 0.0) as u8
}

/// A nonempty string of bits stored one per byte.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyBitString);
        }
        if let Some((index, &value)) = bits.iter().enumerate().find(|(_, &b)| b > 1) {
            return Err(Error::InvalidBit { index, value });
        }
        Ok(BitString(bits))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(alloc::vec![0; n])
    }

    /// Caller guarantees `bits` is nonempty and every entry is 0 or 1.
    pub(crate) fn from_raw(bits: Vec<u8>) -> Self {
        debug_assert!(!bits.is_empty() && bits.iter().all(|&b| b <= 1));
        BitString(bits)
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    /// Flips bit `i`.
    pub fn flip(&mut self, i: usize) -> Result<()> {
        let len = self.0.len();
        let bit = self
            .0
            .get_mut(i)
            .ok_or(Error::IndexOutOfRange { index: i, len })?;
        *bit ^= 1;
        Ok(())
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                what: "xor operand",
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(BitString(
            self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect(),
        ))
    }

    pub fn hamming_distance(&self, other: &BitString) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }
}

impl Deref for BitString {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl TryFrom<Vec<u8>> for BitString {
    type Error = Error;

    fn try_from(bits: Vec<u8>) -> Result<Self> {
        BitString::new(bits)
    }
}

impl From<BitString> for Vec<u8> {
    fn from(b: BitString) -> Vec<u8> {
        b.0
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct RawTable {
    p00: f64,
    p01: f64,
    p10: f64,
    p11: f64,
}

/// Joint law of one `(X, Y)` pair: `p_xy = Pr[X = x, Y = y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable")]
pub struct JointDistribution {
    p00: f64,
    p01: f64,
    p10: f64,
    p11: f64,
}

impl TryFrom<RawTable> for JointDistribution {
    type Error = Error;

    fn try_from(t: RawTable) -> Result<Self> {
        JointDistribution::new(t.p00, t.p01, t.p10, t.p11)
    }
}

impl JointDistribution {
    pub fn new(p00: f64, p01: f64, p10: f64, p11: f64) -> Result<Self> {
        let entries = [p00, p01, p10, p11];
        if entries.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "entries must be finite and nonnegative, got {entries:?}"
            )));
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {sum}, not 1"
            )));
        }
        Ok(JointDistribution { p00, p01, p10, p11 })
    }

    /// Uniform `X`, `Y = X ⊕ Z` with `Z ~ Bernoulli(p)`.
    pub fn from_bsc(p: f64) -> Result<Self> {
        check_range("p", p, 0.0, 0.5)?;
        Self::new((1.0 - p) / 2.0, p / 2.0, p / 2.0, (1.0 - p) / 2.0)
    }

    /// Uniform `X` through a binary asymmetric channel with
    /// `a = P(Y=1|X=0)` and `b = P(Y=0|X=1)`.
    pub fn from_asymmetric(a: f64, b: f64) -> Result<Self> {
        check_range("a", a, 0.0, 1.0)?;
        check_range("b", b, 0.0, 1.0)?;
        Self::new((1.0 - a) / 2.0, a / 2.0, b / 2.0, (1.0 - b) / 2.0)
    }

    pub fn p(&self, x: u8, y: u8) -> f64 {
        match (x, y) {
            (0, 0) => self.p00,
            (0, _) => self.p01,
            (_, 0) => self.p10,
            _ => self.p11,
        }
    }

    pub fn table(&self) -> [f64; 4] {
        [self.p00, self.p01, self.p10, self.p11]
    }

    pub fn px(&self, x: u8) -> f64 {
        self.p(x, 0) + self.p(x, 1)
    }

    pub fn py(&self, y: u8) -> f64 {
        self.p(0, y) + self.p(1, y)
    }

    /// `Pr[X ≠ Y]`, the crossover seen by a symmetric-channel model.
    pub fn mismatch_probability(&self) -> f64 {
        self.p01 + self.p10
    }

    /// `(P(Y=1|X=0), P(Y=0|X=1))`, with `None` for an impossible input.
    pub fn channel(&self) -> (Option<f64>, Option<f64>) {
        let a = (self.px(0) > 0.0).then(|| self.p01 / self.px(0));
        let b = (self.px(1) > 0.0).then(|| self.p10 / self.px(1));
        (a, b)
    }

    pub fn entropy_x(&self) -> f64 {
        binary_entropy(self.px(1))
    }

    /// `H(X|Y) = Σ_y Pr[Y=y] · h(P(X=1|Y=y))`.
    pub fn conditional_entropy(&self) -> f64 {
        [0u8, 1]
            .iter()
            .map(|&y| {
                let py = self.py(y);
                if py > 0.0 {
                    py * binary_entropy(self.p(1, y) / py)
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// `I(X;Y) = H(X) − H(X|Y)`.
    pub fn mutual_information(&self) -> f64 {
        self.entropy_x() - self.conditional_entropy()
    }

    /// `ln(P(X=0|Y=y) / P(X=1|Y=y))`, clipped to `±LLR_MAX`.
    pub fn llr(&self, y: u8) -> Result<f64> {
        let (num, den) = (self.p(0, y), self.p(1, y));
        match (num > 0.0, den > 0.0) {
            (false, false) => Err(Error::ImpossibleObservation(y)),
            (true, false) => Ok(LLR_MAX),
            (false, true) => Ok(-LLR_MAX),
            (true, true) => Ok(clip_llr(libm::log(num / den))),
        }
    }

    /// Per-position decoder priors for Bob's string.
    pub fn priors(&self, y: &BitString) -> Result<Vec<f64>> {
        let table = [self.llr(0), self.llr(1)];
        y.iter()
            .map(|&bit| table[bit as usize].clone())
            .collect()
    }

    /// Draws `n` i.i.d. pairs. `X` is drawn first from its marginal, then `Y`
    /// from `P(Y|X)`, each from its own uniform variate, so members of a
    /// family sharing the `X` marginal see identical `x` under a common seed.
    pub fn sample(&self, n: usize, seed: u64) -> Result<(BitString, BitString)> {
        if n == 0 {
            return Err(Error::EmptyBitString);
        }
        let mut rng = rng::rng_from(seed);
        let px1 = self.px(1);
        let (a, b) = self.channel();
        let (a, b) = (a.unwrap_or(0.0), b.unwrap_or(0.0));
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            let u_x = rng::unit(&mut rng);
            let u_y = rng::unit(&mut rng);
            let xi = (u_x < px1) as u8;
            let flip = if xi == 0 { u_y < a } else { u_y < b };
            x.push(xi);
            y.push(xi ^ flip as u8);
        }
        Ok((BitString::from_raw(x), BitString::from_raw(y)))
    }

    /// Finds `b ∈ [0, 1/2]` with `H(X|Y) = target` for `from_asymmetric(a, b)`
    /// by bisection.
    pub fn solve_equal_hxy(target: f64, a: f64) -> Result<Self> {
        check_range("target", target, 0.0, 1.0)?;
        check_range("a", a, 0.0, 1.0)?;
        let f = |b: f64| -> Result<f64> {
            Ok(Self::from_asymmetric(a, b)?.conditional_entropy() - target)
        };
        let (mut lo, mut hi) = (0.0f64, 0.5f64);
        let (f_lo, f_hi) = (f(lo)?, f(hi)?);
        if f_lo.abs() <= 1e-15 {
            return Self::from_asymmetric(a, lo);
        }
        if f_hi.abs() <= 1e-15 {
            return Self::from_asymmetric(a, hi);
        }
        if f_lo.signum() == f_hi.signum() {
            return Err(Error::NoSolution { target, a });
        }
        let rising = f_hi > f_lo;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let v = f(mid)?;
            if (v < 0.0) == rising {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let b = 0.5 * (lo + hi);
        let d = Self::from_asymmetric(a, b)?;
        if (d.conditional_entropy() - target).abs() > 1e-9 {
            return Err(Error::NoSolution { target, a });
        }
        Ok(d)
    }

    /// Short human-readable label: `bsc:p`, `asym:a,b` or the raw table.
    pub fn label(&self) -> alloc::string::String {
        let uniform_x = (self.px(0) - 0.5).abs() <= 1e-15;
        match self.channel() {
            (Some(a), Some(b)) if uniform_x && a == b && a <= 0.5 => format!("bsc:{a}"),
            (Some(a), Some(b)) if uniform_x => format!("asym:{a},{b}"),
            _ => format!(
                "table:{},{},{},{}",
                self.p00, self.p01, self.p10, self.p11
            ),
        }
    }
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !(lo..=hi).contains(&value) {
        return Err(Error::OutOfRange {
            name,
            value,
            lo,
            hi,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    // Independent oracle: entropy computed straight from the 2x2 table as
    // H(X,Y) - H(Y).
    fn hxy_oracle(t: [f64; 4]) -> f64 {
        let plogp = |p: f64| if p > 0.0 { -p * libm::log2(p) } else { 0.0 };
        let joint: f64 = t.iter().map(|&p| plogp(p)).sum();
        let hy = plogp(t[0] + t[2]) + plogp(t[1] + t[3]);
        joint - hy
    }

    #[test]
    fn bsc_tables() {
        assert_eq!(
            JointDistribution::from_bsc(0.0).unwrap().table(),
            [0.5, 0.0, 0.0, 0.5]
        );
        assert_eq!(JointDistribution::from_bsc(0.5).unwrap().table(), [0.25; 4]);
        let t = JointDistribution::from_bsc(0.1).unwrap().table();
        for (got, want) in t.iter().zip([0.45, 0.05, 0.05, 0.45]) {
            assert!(close(*got, want, 1e-15));
        }
        assert!(JointDistribution::from_bsc(0.51).is_err());
        assert!(JointDistribution::from_bsc(-0.01).is_err());
    }

    #[test]
    fn asymmetric_tables() {
        let t = JointDistribution::from_asymmetric(0.1, 0.0).unwrap().table();
        for (got, want) in t.iter().zip([0.45, 0.05, 0.0, 0.5]) {
            assert!(close(*got, want, 1e-15));
        }
        assert_eq!(
            JointDistribution::from_asymmetric(0.2, 0.2).unwrap(),
            JointDistribution::from_bsc(0.2).unwrap()
        );
        assert_eq!(
            JointDistribution::from_asymmetric(0.0, 0.0).unwrap().table(),
            [0.5, 0.0, 0.0, 0.5]
        );
        assert!(JointDistribution::from_asymmetric(1.2, 0.0).is_err());
        assert!(JointDistribution::from_asymmetric(0.0, -0.1).is_err());
    }

    #[test]
    fn rejects_unnormalized_tables() {
        assert!(JointDistribution::new(0.5, 0.5, 0.1, 0.0).is_err());
        assert!(JointDistribution::new(-0.1, 0.6, 0.25, 0.25).is_err());
        assert!(JointDistribution::new(f64::NAN, 0.5, 0.25, 0.25).is_err());
    }

    #[test]
    fn entropies() {
        let d0 = JointDistribution::from_bsc(0.0).unwrap();
        assert_eq!(d0.conditional_entropy(), 0.0);
        let dh = JointDistribution::from_bsc(0.5).unwrap();
        assert!(close(dh.conditional_entropy(), 1.0, 1e-15));
        let d1 = JointDistribution::from_bsc(0.1).unwrap();
        assert!(close(d1.conditional_entropy(), 0.468_995_593_589_281_2, 1e-12));
        assert!(close(
            d1.conditional_entropy(),
            hxy_oracle(d1.table()),
            1e-12
        ));
        assert_eq!(d1.entropy_x(), 1.0);
        let constant = JointDistribution::new(1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(constant.entropy_x(), 0.0);
        let skew = JointDistribution::new(0.40, 0.10, 0.25, 0.25).unwrap();
        assert!(close(skew.px(0), 0.5, 1e-15));
        assert!(close(skew.entropy_x(), 1.0, 1e-12));
    }

    #[test]
    fn llr_values() {
        let dh = JointDistribution::from_bsc(0.5).unwrap();
        assert_eq!(dh.llr(0).unwrap(), 0.0);
        let d1 = JointDistribution::from_bsc(0.1).unwrap();
        assert!(close(d1.llr(0).unwrap(), 2.197_224_577_336_219_6, 1e-12));
        assert!(close(d1.llr(1).unwrap(), -2.197_224_577_336_219_6, 1e-12));
        let d0 = JointDistribution::from_bsc(0.0).unwrap();
        assert_eq!(d0.llr(1).unwrap(), -LLR_MAX);
        assert_eq!(d0.llr(0).unwrap(), LLR_MAX);
        let never_one = JointDistribution::new(0.5, 0.0, 0.5, 0.0).unwrap();
        assert_eq!(
            never_one.llr(1),
            Err(Error::ImpossibleObservation(1))
        );
    }

    #[test]
    fn llr_sign_matches_posterior() {
        let d = JointDistribution::from_asymmetric(0.3, 0.05).unwrap();
        for y in [0u8, 1] {
            let l = d.llr(y).unwrap();
            assert_eq!(l > 0.0, d.p(0, y) > d.p(1, y));
        }
        assert_eq!(hard_decision(0.0), 0);
        assert_eq!(hard_decision(-1e-300), 1);
    }

    #[test]
    fn sampling() {
        let d0 = JointDistribution::from_bsc(0.0).unwrap();
        let (x, y) = d0.sample(1000, 3).unwrap();
        assert_eq!(x, y);

        let d = JointDistribution::from_bsc(0.1).unwrap();
        let n = 100_000;
        let (x, y) = d.sample(n, 11).unwrap();
        let mismatches = x.hamming_distance(&y) as f64;
        let sigma = (n as f64 * 0.1 * 0.9).sqrt();
        assert!((mismatches - 0.1 * n as f64).abs() <= 3.0 * sigma);

        assert_eq!(d.sample(64, 5).unwrap(), d.sample(64, 5).unwrap());
        assert_ne!(d.sample(64, 5).unwrap(), d.sample(64, 6).unwrap());
        assert!(d.sample(0, 1).is_err());
    }

    #[test]
    fn common_seed_shares_x_across_family() {
        let d1 = JointDistribution::from_bsc(0.1).unwrap();
        let d2 = JointDistribution::from_asymmetric(0.05, 0.16).unwrap();
        assert_eq!(d1.sample(500, 9).unwrap().0, d2.sample(500, 9).unwrap().0);
    }

    #[test]
    fn solve_equal_hxy_cases() {
        let target = binary_entropy(0.1);
        let sym = JointDistribution::solve_equal_hxy(target, 0.1).unwrap();
        let (_, b) = sym.channel();
        assert!(close(b.unwrap(), 0.1, 1e-9));

        let d = JointDistribution::solve_equal_hxy(target, 0.05).unwrap();
        let (a, b) = d.channel();
        assert!(close(a.unwrap(), 0.05, 1e-15));
        // Bisection oracle computed offline on an independent entropy routine.
        assert!(close(b.unwrap(), 0.159_923_538_397_887_75, 1e-8));
        assert!(close(hxy_oracle(d.table()), target, 1e-9));

        // max over b of H(X|Y) with a = 0 is 0.6887 < 0.99.
        assert_eq!(
            JointDistribution::solve_equal_hxy(0.99, 0.0),
            Err(Error::NoSolution {
                target: 0.99,
                a: 0.0
            })
        );
    }

    #[test]
    fn bitstring_validation() {
        assert_eq!(BitString::new(vec![]), Err(Error::EmptyBitString));
        assert_eq!(
            BitString::new(vec![0, 2]),
            Err(Error::InvalidBit { index: 1, value: 2 })
        );
        let mut b = BitString::new(vec![0, 1, 1]).unwrap();
        b.flip(0).unwrap();
        assert_eq!(b.as_slice(), &[1, 1, 1]);
        assert!(b.flip(3).is_err());
        assert_eq!(alloc::string::ToString::to_string(&b), "111");
    }

    #[test]
    fn labels() {
        use alloc::string::ToString;
        assert_eq!(JointDistribution::from_bsc(0.1).unwrap().label(), "bsc:0.1");
        assert_eq!(
            JointDistribution::from_asymmetric(0.1, 0.2).unwrap().label(),
            "asym:0.1,0.2"
        );
        assert_eq!(
            JointDistribution::new(1.0, 0.0, 0.0, 0.0).unwrap().label(),
            "table:1,0,0,0".to_string()
        );
    }
}
