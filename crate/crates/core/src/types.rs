//! Value types shared by every other module: bit vectors, exact rational
//! scalars, threshold units, McCulloch-Pitts systems, dichotomies and
//! verdicts.
//!
//! Documentation uses 1-based bit indices (bit 1 is the first bit of a
//! vector); the code indexes from 0. The integer encoding is little-endian:
//! bit 1 is the least significant bit, so `encode_state(5, 3)` is `101`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::separability::SeparationWitness;

/// Exact rational scalar. Arithmetic never rounds.
pub type Rational = BigRational;

/// Parses `"p/q"` or `"p"` (optional leading `-`) into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |msg: &str| Error::domain(format!("invalid rational {s:?}: {msg}"));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
    let den: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"p/q"` form, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_from_i64(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// A point of {0,1}ⁿ with n ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector(Vec<bool>);

impl BitVector {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::domain("bit vector must have length >= 1"));
        }
        Ok(BitVector(bits))
    }

    /// Builds from 0/1 integers; anything else is a domain error.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let bits = bits
            .iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::domain(format!("bit value {other} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![false; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Bit at 0-based position `i`.
    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    pub fn into_inner(self) -> Vec<bool> {
        self.0
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::domain(format!("unexpected character {other:?} in bit string"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits)
    }
}

impl Serialize for BitVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Little-endian n-bit encoding of `k`: bit 1 is the least significant.
pub fn encode_state(k: u64, n: usize) -> Result<BitVector> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    if n < 64 && k >> n != 0 {
        return Err(Error::domain(format!("{k} does not fit in {n} bits")));
    }
    BitVector::new((0..n).map(|j| j < 64 && (k >> j) & 1 == 1).collect())
}

/// Inverse of [`encode_state`]: Σⱼ vⱼ·2^(j−1). Set bits past position 64
/// cannot be represented and are reported as a domain error.
pub fn decode_state(v: &BitVector) -> Result<u64> {
    let mut k = 0u64;
    for (j, b) in v.iter().enumerate() {
        if b {
            if j >= 64 {
                return Err(Error::domain("state does not fit in 64 bits"));
            }
            k |= 1 << j;
        }
    }
    Ok(k)
}

/// One linear threshold function x ↦ H(Σ wⱼxⱼ − θ) with H(0) = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdUnit {
    weights: Vec<Rational>,
    theta: Rational,
}

impl ThresholdUnit {
    pub fn new(weights: Vec<Rational>, theta: Rational) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::domain("threshold unit needs at least one weight"));
        }
        Ok(ThresholdUnit { weights, theta })
    }

    pub fn from_integers(weights: &[i64], theta: i64) -> Result<Self> {
        Self::new(
            weights.iter().map(|&w| rational_from_i64(w)).collect(),
            rational_from_i64(theta),
        )
    }

    pub fn arity(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    /// Σ wⱼxⱼ − θ, exactly.
    pub fn activation(&self, x: &BitVector) -> Result<Rational> {
        if x.len() != self.arity() {
            return Err(Error::domain(format!(
                "input of length {} for unit of arity {}",
                x.len(),
                self.arity()
            )));
        }
        let mut acc = -self.theta.clone();
        for (w, b) in self.weights.iter().zip(x.iter()) {
            if b {
                acc += w;
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, x: &BitVector) -> Result<bool> {
        Ok(!self.activation(x)?.is_negative())
    }
}

/// Evaluates `u` at `x`; ties (Σ wⱼxⱼ = θ) give 1.
pub fn eval_threshold(u: &ThresholdUnit, x: &BitVector) -> Result<bool> {
    u.eval(x)
}

/// A McCulloch-Pitts dynamical system Φ: {0,1}ⁿ → {0,1}ⁿ, one threshold
/// unit per coordinate, each reading the full state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPSystem {
    arity: usize,
    units: Vec<ThresholdUnit>,
}

impl MPSystem {
    pub fn new(units: Vec<ThresholdUnit>) -> Result<Self> {
        let arity = units.len();
        if arity == 0 {
            return Err(Error::domain("system needs at least one unit"));
        }
        if let Some((j, u)) = units.iter().enumerate().find(|(_, u)| u.arity() != arity) {
            return Err(Error::domain(format!(
                "unit {} has arity {} in a system of arity {arity}",
                j + 1,
                u.arity()
            )));
        }
        Ok(MPSystem { arity, units })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn units(&self) -> &[ThresholdUnit] {
        &self.units
    }

    /// Unit j copies xⱼ: weight 1 on itself, 0 elsewhere, θ = 1.
    pub fn identity(n: usize) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|j| {
                    let w: Vec<i64> = (0..n).map(|i| i64::from(i == j)).collect();
                    ThresholdUnit::from_integers(&w, 1)
                })
                .collect::<Result<_>>()?,
        )
    }

    /// Every unit has zero weights; θ = 0 makes every output 1, θ = 1 every
    /// output 0.
    pub fn constant(n: usize, output: bool) -> Result<Self> {
        let theta = if output { 0 } else { 1 };
        Self::new(
            (0..n)
                .map(|_| ThresholdUnit::from_integers(&vec![0; n], theta))
                .collect::<Result<_>>()?,
        )
    }

    /// Random integer system: weights uniform in [−W, W], θ uniform in
    /// [−W·n, W·n].
    pub fn random<R: Rng + ?Sized>(n: usize, weight_bound: i64, rng: &mut R) -> Result<Self> {
        if weight_bound < 0 {
            return Err(Error::domain("weight bound must be nonnegative"));
        }
        let theta_bound = weight_bound * n as i64;
        Self::new(
            (0..n)
                .map(|_| {
                    let w: Vec<i64> = (0..n)
                        .map(|_| rng.gen_range(-weight_bound..=weight_bound))
                        .collect();
                    ThresholdUnit::from_integers(&w, rng.gen_range(-theta_bound..=theta_bound))
                })
                .collect::<Result<_>>()?,
        )
    }

    /// Parses the JSON system descriptor
    /// `{"n": int, "units": [{"weights": ["p/q", ...], "theta": "p"}, ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSystem = serde_json::from_str(text).map_err(|e| {
            Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string())
        })?;
        if raw.units.len() != raw.n {
            return Err(Error::parse(
                "units",
                format!("expected {} units for n = {}, found {}", raw.n, raw.n, raw.units.len()),
            ));
        }
        let mut units = Vec::with_capacity(raw.n);
        for (i, u) in raw.units.iter().enumerate() {
            if u.weights.len() != raw.n {
                return Err(Error::parse(
                    format!("units[{i}].weights"),
                    format!("expected {} weights, found {}", raw.n, u.weights.len()),
                ));
            }
            let weights = u
                .weights
                .iter()
                .enumerate()
                .map(|(j, w)| {
                    parse_rational(w)
                        .map_err(|e| Error::parse(format!("units[{i}].weights[{j}]"), e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            let theta = parse_rational(&u.theta)
                .map_err(|e| Error::parse(format!("units[{i}].theta"), e.to_string()))?;
            units.push(ThresholdUnit::new(weights, theta)?);
        }
        MPSystem::new(units)
    }

    pub fn to_json(&self) -> String {
        let raw = RawSystem {
            n: self.arity,
            units: self
                .units
                .iter()
                .map(|u| RawUnit {
                    weights: u.weights.iter().map(format_rational).collect(),
                    theta: format_rational(&u.theta),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("system descriptor serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    n: usize,
    units: Vec<RawUnit>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUnit {
    weights: Vec<String>,
    theta: String,
}

/// An ordered pair (Y⁺, Y⁻) of point sets in {0,1}ⁿ. Swapping the sides
/// gives a different dichotomy. A point may sit on both sides; such a
/// dichotomy is never separable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDichotomy", into = "RawDichotomy")]
pub struct Dichotomy {
    dimension: usize,
    positive: BTreeSet<BitVector>,
    negative: BTreeSet<BitVector>,
}

impl Dichotomy {
    pub fn empty(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::domain("dichotomy dimension must be positive"));
        }
        Ok(Dichotomy {
            dimension,
            positive: BTreeSet::new(),
            negative: BTreeSet::new(),
        })
    }

    pub fn new<P, N>(dimension: usize, positive: P, negative: N) -> Result<Self>
    where
        P: IntoIterator<Item = BitVector>,
        N: IntoIterator<Item = BitVector>,
    {
        let mut d = Self::empty(dimension)?;
        for y in positive {
            d.insert(y, true)?;
        }
        for y in negative {
            d.insert(y, false)?;
        }
        Ok(d)
    }

    /// Adds `y` to Y⁺ when `label` is true, else to Y⁻.
    pub fn insert(&mut self, y: BitVector, label: bool) -> Result<()> {
        if y.len() != self.dimension {
            return Err(Error::domain(format!(
                "point {y} has length {} in a dichotomy of dimension {}",
                y.len(),
                self.dimension
            )));
        }
        if label {
            self.positive.insert(y);
        } else {
            self.negative.insert(y);
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn positive(&self) -> &BTreeSet<BitVector> {
        &self.positive
    }

    pub fn negative(&self) -> &BTreeSet<BitVector> {
        &self.negative
    }

    /// The same point sets with the sides exchanged.
    pub fn flipped(&self) -> Self {
        Dichotomy {
            dimension: self.dimension,
            positive: self.negative.clone(),
            negative: self.positive.clone(),
        }
    }

    pub fn has_conflict(&self) -> bool {
        self.positive.intersection(&self.negative).next().is_some()
    }

    /// Labeled points, Y⁺ first, each in set order.
    pub fn labeled_points(&self) -> impl Iterator<Item = (&BitVector, bool)> {
        self.positive
            .iter()
            .map(|y| (y, true))
            .chain(self.negative.iter().map(|y| (y, false)))
    }
}

#[derive(Serialize, Deserialize)]
struct RawDichotomy {
    n: usize,
    positive: Vec<BitVector>,
    negative: Vec<BitVector>,
}

impl TryFrom<RawDichotomy> for Dichotomy {
    type Error = Error;

    fn try_from(raw: RawDichotomy) -> Result<Self> {
        Dichotomy::new(raw.n, raw.positive, raw.negative)
    }
}

impl From<Dichotomy> for RawDichotomy {
    fn from(d: Dichotomy) -> Self {
        RawDichotomy {
            n: d.dimension,
            positive: d.positive.into_iter().collect(),
            negative: d.negative.into_iter().collect(),
        }
    }
}

/// Output of a distinguisher run. A `McCullochPitts` verdict always
/// carries the witness that certified separability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    McCullochPitts(SeparationWitness),
    Random,
}

impl Verdict {
    pub fn is_mcculloch_pitts(&self) -> bool {
        matches!(self, Verdict::McCullochPitts(_))
    }

    pub fn witness(&self) -> Option<&SeparationWitness> {
        match self {
            Verdict::McCullochPitts(w) => Some(w),
            Verdict::Random => None,
        }
    }

    /// `McCulloch-Pitts` or `random`.
    pub fn message(&self) -> &'static str {
        match self {
            Verdict::McCullochPitts(_) => "McCulloch-Pitts",
            Verdict::Random => "random",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.message())
    }
}
