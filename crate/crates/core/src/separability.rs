//! Exact strict linear separability of dichotomies, plus the two ways the
//! distinguishers turn bit streams into dichotomies.
//!
//! A dichotomy (Y⁺, Y⁻) of points in {0,1}ⁿ is linearly separable when some
//! x₁..xₙ₊₁ satisfy
//!
//! ```text
//!     Σⱼ xⱼyⱼ > xₙ₊₁   for y ∈ Y⁺
//!     Σⱼ xⱼyⱼ < xₙ₊₁   for y ∈ Y⁻
//! ```
//!
//! The strict system is decided through the closed margin-1 system
//! `Σⱼ xⱼyⱼ − xₙ₊₁ ≥ 1` on Y⁺ and `≤ −1` on Y⁻. The two are equivalent for
//! finite point sets: a margin-1 solution is strict, and a strict solution
//! has a least slack g > 0 over the finitely many points, so dividing it
//! by g gives margin ≥ 1. Rational data keeps every step exact, which is
//! why the verdict is deterministic and the witness re-substitutes exactly.

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dynamics::BitStream;
use crate::error::{Error, Result};
use crate::lp;
use crate::types::{format_rational, parse_rational, BitVector, Dichotomy, Rational};

/// Coefficients x₁..xₙ₊₁ of a strict separating hyperplane; the last entry
/// is the threshold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationWitness {
    coefficients: Vec<Rational>,
}

impl SeparationWitness {
    pub fn new(coefficients: Vec<Rational>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::domain("a witness needs n + 1 >= 2 coefficients"));
        }
        Ok(SeparationWitness { coefficients })
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn dimension(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn threshold(&self) -> &Rational {
        &self.coefficients[self.dimension()]
    }

    /// Σⱼ xⱼyⱼ − xₙ₊₁.
    pub fn margin(&self, y: &BitVector) -> Rational {
        let mut acc = -self.threshold().clone();
        for (x, b) in self.coefficients.iter().zip(y.iter()) {
            if b {
                acc += x;
            }
        }
        acc
    }

    /// Exact re-substitution into the strict system.
    pub fn certifies(&self, d: &Dichotomy) -> bool {
        if d.dimension() != self.dimension() {
            return false;
        }
        let zero = Rational::zero();
        d.positive().iter().all(|y| self.margin(y) > zero)
            && d.negative().iter().all(|y| self.margin(y) < zero)
    }
}

#[derive(Serialize, Deserialize)]
struct RawWitness {
    coefficients: Vec<String>,
}

impl Serialize for SeparationWitness {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawWitness {
            coefficients: self.coefficients.iter().map(format_rational).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SeparationWitness {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawWitness::deserialize(deserializer)?;
        let coefficients = raw
            .coefficients
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        SeparationWitness::new(coefficients).map_err(serde::de::Error::custom)
    }
}

/// Solves the margin-1 system exactly. Returns a witness iff the dichotomy
/// is linearly separable; the witness is checked by re-substitution before
/// it is returned.
pub fn separate(d: &Dichotomy) -> Option<SeparationWitness> {
    let n = d.dimension();
    let one = Rational::one();
    let mut rows = Vec::with_capacity(d.positive().len() + d.negative().len());
    for (y, label) in d.labeled_points() {
        // label +: (y, −1)·x ≥ 1    label −: (−y, +1)·x ≥ 1
        let sign = if label { one.clone() } else { -one.clone() };
        let mut row: Vec<Rational> = y
            .iter()
            .map(|b| if b { sign.clone() } else { Rational::zero() })
            .collect();
        row.push(-sign);
        rows.push(row);
    }
    let rhs = vec![one; rows.len()];
    let mut x = lp::feasible_point(&rows, &rhs)?;
    x.resize(n + 1, Rational::zero());
    let witness = SeparationWitness::new(x).expect("n >= 1");
    assert!(
        witness.certifies(d),
        "simplex returned a point that does not separate the dichotomy"
    );
    Some(witness)
}

pub fn is_linearly_separable(d: &Dichotomy) -> bool {
    separate(d).is_some()
}

/// Chunks a single stream: with m = ⌊(t−1)/n⌋, chunk i (bits (i−1)n+1 ..
/// in) is labeled by bit in+1. Trailing bits past mn+1 are ignored.
pub fn build_single_dichotomy(y: &BitStream, n: usize) -> Result<Dichotomy> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    let t = y.len();
    if t <= n {
        return Err(Error::StreamTooShort { len: t, n });
    }
    let m = (t - 1) / n;
    let bits = y.as_slice();
    let mut d = Dichotomy::empty(n)?;
    for i in 0..m {
        d.insert(y.chunk(i * n, (i + 1) * n), bits[(i + 1) * n])?;
    }
    Ok(d)
}

/// Each (n+1)-bit sample contributes its first n bits, labeled by its last.
pub fn build_multi_dichotomy(samples: &[BitStream], n: usize) -> Result<Dichotomy> {
    let mut d = Dichotomy::empty(n)?;
    for (i, s) in samples.iter().enumerate() {
        if s.len() != n + 1 {
            return Err(Error::domain(format!(
                "sample {} has {} bits, expected n + 1 = {}",
                i + 1,
                s.len(),
                n + 1
            )));
        }
        d.insert(s.chunk(0, n), s.as_slice()[n])?;
    }
    Ok(d)
}
