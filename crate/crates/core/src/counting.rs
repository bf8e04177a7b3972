//! Counting machinery around linearly separable dichotomies: the upper
//! bound 2·Σᵢ₌₀ⁿ C(m−1, i) on separable dichotomies of m points in n
//! dimensions, the region-count recurrence for central hyperplane
//! arrangements, and a brute-force enumerator over all 2^m ordered
//! dichotomies.
//!
//! The bound comes from mapping each separable dichotomy of points
//! y¹..yᵐ ∈ Rⁿ to the open region containing its witness in the arrangement
//! of the m hyperplanes {x ∈ Rⁿ⁺¹ : Σⱼ yⁱⱼxⱼ − xₙ₊₁ = 0} through the origin.
//! That correspondence is one-to-one, so the separable count is at most the
//! region count R(m, n+1). The table below uses the recurrence
//! R(m,n) = R(m−1,n) + R(m−1,n−1) with equality, which is the count for
//! hyperplanes in general position; in general the recurrence is only an
//! upper bound.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::separability::is_linearly_separable;
use crate::types::{encode_state, BitVector, Dichotomy};

/// Largest point set `enumerate_separable_dichotomies` accepts.
pub const ENUMERATION_CAP: usize = 20;

/// Largest cube dimension `count_threshold_functions` accepts.
pub const THRESHOLD_COUNT_MAX_N: usize = 4;

/// 2·Σᵢ₌₀ⁿ C(m−1, i).
pub fn cover_bound(m: u64, n: u64) -> Result<BigUint> {
    if m == 0 || n == 0 {
        return Err(Error::domain("cover_bound needs m >= 1 and n >= 1"));
    }
    let top = BigUint::from(m - 1);
    let sum: BigUint = (0..=n.min(m - 1))
        .map(|i| binomial(top.clone(), BigUint::from(i)))
        .sum();
    Ok(sum * 2u32)
}

/// T(m, n) for 1 ≤ m ≤ m_max, 1 ≤ n ≤ n_max.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionTable {
    m_max: usize,
    n_max: usize,
    cells: Vec<Vec<BigUint>>,
}

impl RegionTable {
    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Entry T(m, n), 1-based.
    pub fn get(&self, m: usize, n: usize) -> &BigUint {
        assert!((1..=self.m_max).contains(&m) && (1..=self.n_max).contains(&n));
        &self.cells[m - 1][n - 1]
    }

    /// Long-format CSV with header `m,n,regions`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,regions\n");
        for m in 1..=self.m_max {
            for n in 1..=self.n_max {
                out.push_str(&format!("{m},{n},{}\n", self.get(m, n)));
            }
        }
        out
    }

    /// `{"m_max":..,"n_max":..,"rows":[["2","2",...],...]}`, row m−1 holding
    /// T(m, 1..n_max) as decimal strings.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Raw {
            m_max: usize,
            n_max: usize,
            rows: Vec<Vec<String>>,
        }
        let raw = Raw {
            m_max: self.m_max,
            n_max: self.n_max,
            rows: self
                .cells
                .iter()
                .map(|r| r.iter().map(BigUint::to_string).collect())
                .collect(),
        };
        serde_json::to_string(&raw).expect("table serializes")
    }
}

/// T(m,n) = T(m−1,n) + T(m−1,n−1) with T(1,n) = T(m,1) = 2.
pub fn region_count_table(m_max: usize, n_max: usize) -> Result<RegionTable> {
    if m_max == 0 || n_max == 0 {
        return Err(Error::domain("table bounds must be positive"));
    }
    let two = BigUint::from(2u32);
    let mut cells: Vec<Vec<BigUint>> = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let row = (1..=n_max)
            .map(|n| {
                if m == 1 || n == 1 {
                    two.clone()
                } else {
                    let prev = &cells[m - 2];
                    &prev[n - 1] + &prev[n - 2]
                }
            })
            .collect();
        cells.push(row);
    }
    Ok(RegionTable { m_max, n_max, cells })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub m: usize,
    pub n: usize,
    pub separable_count: u64,
    #[serde(serialize_with = "serialize_biguint")]
    pub bound: BigUint,
    pub attained: bool,
}

fn serialize_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub report: CountReport,
    /// Separable ordered dichotomies, in increasing order of the mask whose
    /// bit i puts the i-th point (in sorted order) into Y⁺.
    pub separable: Vec<Dichotomy>,
}

/// Tests every ordered dichotomy of `points` for separability.
pub fn enumerate_separable_dichotomies(points: &BTreeSet<BitVector>) -> Result<Enumeration> {
    let m = points.len();
    if m == 0 {
        return Err(Error::domain("point set must be nonempty"));
    }
    if m > ENUMERATION_CAP {
        return Err(Error::EnumerationCap(format!(
            "{m} points would need 2^{m} separability tests; the cap is {ENUMERATION_CAP} points"
        )));
    }
    let pts: Vec<&BitVector> = points.iter().collect();
    let n = pts[0].len();
    if let Some(p) = pts.iter().find(|p| p.len() != n) {
        return Err(Error::domain(format!("point {p} does not have dimension {n}")));
    }

    let build = |mask: u64| -> Dichotomy {
        let mut d = Dichotomy::empty(n).expect("n >= 1");
        for (i, p) in pts.iter().enumerate() {
            d.insert((*p).clone(), mask >> i & 1 == 1).expect("uniform dimension");
        }
        d
    };
    let separable: Vec<Dichotomy> = (0..1u64 << m)
        .into_par_iter()
        .filter_map(|mask| {
            let d = build(mask);
            is_linearly_separable(&d).then_some(d)
        })
        .collect();

    let bound = cover_bound(m as u64, n as u64)?;
    let separable_count = separable.len() as u64;
    let attained = BigUint::from(separable_count) == bound;
    Ok(Enumeration {
        report: CountReport {
            m,
            n,
            separable_count,
            bound,
            attained,
        },
        separable,
    })
}

/// Every point of {0,1}ⁿ.
pub fn cube(n: usize) -> Result<BTreeSet<BitVector>> {
    if n == 0 || n >= 64 {
        return Err(Error::domain("cube dimension must be in 1..64"));
    }
    (0..1u64 << n).map(|k| encode_state(k, n)).collect()
}

/// Number of n-variable threshold functions, counted as ordered
/// dichotomies of {0,1}ⁿ.
pub fn count_threshold_functions(n: usize) -> Result<u64> {
    if n == 0 || n > THRESHOLD_COUNT_MAX_N {
        return Err(Error::EnumerationCap(format!(
            "n = {n}: threshold function counting is limited to 1 <= n <= {THRESHOLD_COUNT_MAX_N}"
        )));
    }
    Ok(enumerate_separable_dichotomies(&cube(n)?)?.report.separable_count)
}

/// Exact 2^k.
pub fn pow2(k: u32) -> BigUint {
    BigUint::one() << k
}
