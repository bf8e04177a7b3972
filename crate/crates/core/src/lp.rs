//! Exact feasibility for systems `A·z ≥ b` over free variables.
//!
//! Phase I of the tableau simplex method: free variables are split as
//! `z = u − v`, every row gets a surplus and an artificial column, and the
//! sum of artificials is driven to zero. Bland's rule (lowest eligible
//! index enters, lowest basic index breaks ratio ties) rules out cycling,
//! so the loop terminates on every input.
//!
//! The tableau is kept fraction-free (integer pivoting): every entry is an
//! integer and the true tableau is `T / det`, where `det` is the previous
//! pivot element and stays positive. A pivot on `(r, c)` with `p = T[r][c]`
//! rewrites every other row as `(p·T[i][j] − T[i][c]·T[r][j]) / det`; the
//! division is exact because each entry is a subdeterminant of the input.
//! The solver first runs on `i128` and restarts on `BigInt` if any
//! intermediate product would overflow, so results are exact either way.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::types::Rational;

/// Integer scalar for the fraction-free tableau. Operations return `None`
/// when the result does not fit.
trait Scalar: Clone + Sized {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn zero_value() -> Self;
    fn one_value() -> Self;
    fn signum(&self) -> Ordering;
    /// `(p·a − q·b) / det`, exact.
    fn pivot(p: &Self, a: &Self, q: &Self, b: &Self, det: &Self) -> Option<Self>;
    /// Compares `a/b` with `c/d` for positive `b`, `d`.
    fn cmp_ratio(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Ordering>;
}

impl Scalar for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        i128::try_from(v).ok()
    }

    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn zero_value() -> Self {
        0
    }

    fn one_value() -> Self {
        1
    }

    fn signum(&self) -> Ordering {
        self.cmp(&0)
    }

    fn pivot(p: &Self, a: &Self, q: &Self, b: &Self, det: &Self) -> Option<Self> {
        if *q == 0 || *b == 0 {
            let pa = p.checked_mul(*a)?;
            return Some(pa / det);
        }
        let num = p.checked_mul(*a)?.checked_sub(q.checked_mul(*b)?)?;
        debug_assert_eq!(num % det, 0);
        Some(num / det)
    }

    fn cmp_ratio(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Ordering> {
        Some(a.checked_mul(*d)?.cmp(&c.checked_mul(*b)?))
    }
}

impl Scalar for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }

    fn to_big(&self) -> BigInt {
        self.clone()
    }

    fn zero_value() -> Self {
        Zero::zero()
    }

    fn one_value() -> Self {
        One::one()
    }

    fn signum(&self) -> Ordering {
        self.sign().cmp(&num_bigint::Sign::NoSign)
    }

    fn pivot(p: &Self, a: &Self, q: &Self, b: &Self, det: &Self) -> Option<Self> {
        let num = if q.is_zero() || b.is_zero() { p * a } else { p * a - q * b };
        debug_assert!((&num % det).is_zero());
        Some(num / det)
    }

    fn cmp_ratio(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Ordering> {
        Some((a * d).cmp(&(c * b)))
    }
}

struct Overflow;

struct Tableau<T> {
    /// Constraint rows; the last entry of each row is its right-hand side.
    rows: Vec<Vec<T>>,
    /// Phase I reduced costs (scaled by `det`), same layout as a row.
    cost: Vec<T>,
    det: T,
    basis: Vec<usize>,
    /// Columns that may still enter; artificials drop out once they leave.
    live: Vec<bool>,
}

impl<T: Scalar> Tableau<T> {
    fn rhs_col(&self) -> usize {
        self.cost.len() - 1
    }

    fn entering(&self) -> Option<usize> {
        (0..self.rhs_col()).find(|&j| self.live[j] && self.cost[j].signum() == Ordering::Less)
    }

    fn leaving(&self, col: usize) -> Result<Option<usize>, Overflow> {
        let rhs = self.rhs_col();
        let mut best: Option<usize> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if row[col].signum() != Ordering::Greater {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => {
                    let other = &self.rows[b];
                    match T::cmp_ratio(&row[rhs], &row[col], &other[rhs], &other[col]).ok_or(Overflow)? {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[i] < self.basis[b],
                        Ordering::Greater => false,
                    }
                }
            };
            if better {
                best = Some(i);
            }
        }
        Ok(best)
    }

    fn pivot(&mut self, r: usize, col: usize) -> Result<(), Overflow> {
        let p = self.rows[r][col].clone();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let width = pivot_row.len();
        let update = |target: &mut Vec<T>, live: &[bool]| -> Result<(), Overflow> {
            let q = target[col].clone();
            for j in 0..width {
                if j < live.len() && !live[j] {
                    continue;
                }
                target[j] = T::pivot(&p, &target[j], &q, &pivot_row[j], &self.det).ok_or(Overflow)?;
            }
            Ok(())
        };
        for row in self.rows.iter_mut() {
            if !row.is_empty() {
                update(row, &self.live)?;
            }
        }
        update(&mut self.cost, &self.live)?;
        self.rows[r] = pivot_row;
        self.basis[r] = col;
        self.det = p;
        Ok(())
    }
}

/// Runs phase I on the integer system `a·z ≥ b`; `Ok(None)` means
/// infeasible.
fn solve<T: Scalar>(a: &[Vec<BigInt>], b: &[BigInt], k: usize) -> Result<Option<Vec<Rational>>, Overflow> {
    let m = a.len();
    // columns: u (k) | v (k) | surplus (m) | artificial (m) | rhs
    let width = 2 * k + 2 * m + 1;
    let art = 2 * k + m;
    let conv = |v: &BigInt| T::from_big(v).ok_or(Overflow);
    let mut rows = Vec::with_capacity(m);
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut row = vec![T::zero_value(); width];
        for (j, aij) in ai.iter().enumerate() {
            if !aij.is_zero() {
                let v = if flip { -aij } else { aij.clone() };
                row[j] = conv(&v)?;
                row[k + j] = conv(&-v)?;
            }
        }
        row[2 * k + i] = conv(&BigInt::from(if flip { 1 } else { -1 }))?;
        row[art + i] = T::one_value();
        row[width - 1] = conv(&bi.abs())?;
        rows.push(row);
    }
    // reduced costs of phase I: minus the column sums over non-artificials
    let mut cost = Vec::with_capacity(width);
    for j in 0..width {
        if (art..art + m).contains(&j) {
            cost.push(T::zero_value());
        } else {
            let s: BigInt = rows.iter().map(|r| r[j].to_big()).sum();
            cost.push(conv(&-s)?);
        }
    }
    let mut t = Tableau {
        rows,
        cost,
        det: T::one_value(),
        basis: (art..art + m).collect(),
        live: vec![true; width - 1],
    };

    while let Some(col) = t.entering() {
        let r = t
            .leaving(col)?
            .expect("phase I objective is bounded below by zero");
        let out = t.basis[r];
        t.pivot(r, col)?;
        if out >= art {
            t.live[out] = false;
        }
    }

    if t.cost[width - 1].signum() != Ordering::Equal {
        return Ok(None);
    }
    let det = t.det.to_big();
    let mut value = vec![Rational::zero(); 2 * k];
    for (row, &var) in t.rows.iter().zip(&t.basis) {
        if var < 2 * k {
            value[var] = Rational::new(row[width - 1].to_big(), det.clone());
        }
    }
    Ok(Some((0..k).map(|j| &value[j] - &value[k + j]).collect()))
}

/// Returns some `z` with `A·z ≥ b` componentwise, or `None` when the system
/// is infeasible. `a` must be rectangular with `b.len()` rows.
pub fn feasible_point(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let k = a.first().map_or(0, Vec::len);
    if a.is_empty() {
        return Some(vec![Rational::zero(); k]);
    }
    assert!(a.iter().all(|row| row.len() == k), "ragged constraint matrix");

    // clear denominators row by row; a positive row scale keeps the solution set
    let mut int_a = Vec::with_capacity(a.len());
    let mut int_b = Vec::with_capacity(b.len());
    for (row, bi) in a.iter().zip(b) {
        let scale = row
            .iter()
            .chain(std::iter::once(bi))
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let s = Rational::from_integer(scale);
        int_a.push(row.iter().map(|r| (r * &s).to_integer()).collect::<Vec<_>>());
        int_b.push((bi * &s).to_integer());
    }

    match solve::<i128>(&int_a, &int_b, k) {
        Ok(res) => res,
        Err(Overflow) => match solve::<BigInt>(&int_a, &int_b, k) {
            Ok(res) => res,
            Err(Overflow) => unreachable!("BigInt arithmetic does not overflow"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{parse_rational, rational_from_i64};

    fn q(v: i64) -> Rational {
        rational_from_i64(v)
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    fn satisfies(a: &[Vec<Rational>], b: &[Rational], z: &[Rational]) -> bool {
        a.iter().zip(b).all(|(row, bi)| {
            let lhs: Rational = row.iter().zip(z).map(|(x, y)| x * y).sum();
            lhs >= *bi
        })
    }

    #[test]
    fn simple_feasible_system() {
        // z1 + z2 >= 2, z1 - z2 >= 1, -z1 >= -5
        let a = mat(&[&[1, 1], &[1, -1], &[-1, 0]]);
        let b = vec![q(2), q(1), q(-5)];
        let z = feasible_point(&a, &b).unwrap();
        assert!(satisfies(&a, &b, &z));
    }

    #[test]
    fn contradictory_rows() {
        // z >= 1 and -z >= 1
        let a = mat(&[&[1], &[-1]]);
        assert!(feasible_point(&a, &[q(1), q(1)]).is_none());
    }

    #[test]
    fn negative_solution_needed() {
        let a = mat(&[&[1, 0], &[0, -1]]);
        let b = vec![q(-7), q(3)];
        let z = feasible_point(&a, &b).unwrap();
        assert!(satisfies(&a, &b, &z));
        assert!(z[1] <= q(-3));
    }

    #[test]
    fn fractional_input() {
        let r = |s: &str| parse_rational(s).unwrap();
        // z/3 >= 1/2 and -z/4 >= -1/5  =>  3/2 <= z <= 4/5: infeasible
        let a = vec![vec![r("1/3")], vec![r("-1/4")]];
        assert!(feasible_point(&a, &[r("1/2"), r("-1/5")]).is_none());
        // z/3 >= 1/7 and -z/4 >= -1/5
        let b = vec![r("1/7"), r("-1/5")];
        let z = feasible_point(&a, &b).unwrap();
        assert!(satisfies(&a, &b, &z));
    }

    #[test]
    fn empty_and_zero_rows() {
        assert_eq!(feasible_point(&[], &[]), Some(vec![]));
        let a = mat(&[&[0, 0]]);
        assert!(feasible_point(&a, &[q(0)]).is_some());
        assert!(feasible_point(&a, &[q(1)]).is_none());
    }

    #[test]
    fn degenerate_system_terminates() {
        // many redundant copies of the same constraints
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for _ in 0..6 {
            rows.push(vec![q(1), q(1), q(1)]);
            rows.push(vec![q(1), q(-1), q(0)]);
            rows.push(vec![q(0), q(1), q(-1)]);
            rhs.extend([q(0), q(0), q(0)]);
        }
        rows.push(vec![q(1), q(0), q(0)]);
        rhs.push(q(1));
        let z = feasible_point(&rows, &rhs).unwrap();
        assert!(satisfies(&rows, &rhs, &z));
    }

    #[test]
    fn big_coefficients_take_the_bigint_path() {
        let huge = BigInt::from(10).pow(30);
        let h = Rational::from_integer(huge.clone());
        // h·z1 - h·z2 >= 1, z2 >= h, -z1 >= -(h + 1)
        let a = vec![
            vec![h.clone(), -h.clone()],
            vec![q(0), q(1)],
            vec![q(-1), q(0)],
        ];
        let b = vec![q(1), h.clone(), -(h.clone() + q(1))];
        let z = feasible_point(&a, &b).unwrap();
        assert!(satisfies(&a, &b, &z));
        let i128_ok = solve::<i128>(
            &[vec![huge.clone() * &huge, BigInt::from(1)]],
            &[BigInt::from(1)],
            2,
        );
        assert!(i128_ok.is_err());
    }

    #[test]
    fn integer_paths_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let rows = rng.gen_range(1..12);
            let k = rng.gen_range(1..5);
            let a: Vec<Vec<BigInt>> = (0..rows)
                .map(|_| (0..k).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect())
                .collect();
            let b: Vec<BigInt> = (0..rows).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
            let small = solve::<i128>(&a, &b, k).ok().unwrap();
            let big = solve::<BigInt>(&a, &b, k).ok().unwrap();
            assert_eq!(small, big);
            if let Some(z) = small {
                let ra: Vec<Vec<Rational>> = a
                    .iter()
                    .map(|r| r.iter().map(|v| Rational::from_integer(v.clone())).collect())
                    .collect();
                let rb: Vec<Rational> = b.iter().map(|v| Rational::from_integer(v.clone())).collect();
                assert!(satisfies(&ra, &rb, &z));
            }
        }
    }
}
