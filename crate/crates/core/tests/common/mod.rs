//! Independent oracles for integration and acceptance tests. Nothing here
//! calls the LP path.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use mpdist::BitVector;
use num_bigint::BigUint;

/// Every point of {0,1}ⁿ in lexicographic order of the 0/1 string.
pub fn cube_points(n: usize) -> Vec<BitVector> {
    (0..1u32 << n)
        .map(|k| {
            let bits: Vec<bool> = (0..n).map(|j| k >> (n - 1 - j) & 1 == 1).collect();
            BitVector::new(bits).unwrap()
        })
        .collect()
}

/// All label masks over `points` (bit i set ⇔ point i in Y⁺) realized by
/// integer weights w ∈ [−range, range]ⁿ and a half-integer threshold
/// θ + ½, so no point can land on the hyperplane.
pub fn integer_witness_masks(points: &[BitVector], n: usize, range: i64) -> HashSet<u64> {
    let mut out = HashSet::new();
    let side = (2 * range + 1) as u64;
    let reach = range * n as i64;
    let mut w = vec![0i64; n];
    for code in 0..side.pow(n as u32) {
        let mut c = code;
        for wi in w.iter_mut() {
            *wi = (c % side) as i64 - range;
            c /= side;
        }
        let sums: Vec<i64> = points
            .iter()
            .map(|y| y.iter().zip(&w).map(|(b, wi)| if b { *wi } else { 0 }).sum())
            .collect();
        for theta in -reach - 1..=reach {
            let mask = sums
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &s)| if s > theta { acc | 1 << i } else { acc });
            out.insert(mask);
        }
    }
    out
}

/// Masks over the full cube {0,1}ⁿ realized by integer witnesses; the
/// realized dichotomies of any subset are the restrictions of these.
pub fn cube_witness_masks(n: usize, range: i64) -> HashSet<u64> {
    integer_witness_masks(&cube_points(n), n, range)
}

/// Restricts full-cube masks to the subset selected by `subset` (bit k of
/// `subset` selects cube point k), renumbering bits in subset order.
pub fn restrict_masks(full: &HashSet<u64>, subset: u64, cube_size: usize) -> HashSet<u64> {
    let idx: Vec<usize> = (0..cube_size).filter(|&k| subset >> k & 1 == 1).collect();
    full.iter()
        .map(|&mask| {
            idx.iter()
                .enumerate()
                .fold(0u64, |acc, (i, &k)| acc | ((mask >> k & 1) << i))
        })
        .collect()
}

/// Subset of the cube selected by `subset`, as an ordered set.
pub fn subset_points(points: &[BitVector], subset: u64) -> BTreeSet<BitVector> {
    points
        .iter()
        .enumerate()
        .filter(|(k, _)| subset >> k & 1 == 1)
        .map(|(_, p)| p.clone())
        .collect()
}

/// C(n, k) from Pascal's rule.
pub fn pascal_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::from(1u32)];
    for _ in 0..n {
        let mut next = vec![BigUint::from(1u32); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row
}
