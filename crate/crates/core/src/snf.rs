//! Smith normal form of sparse integer matrices and ranks over the field of
//! two elements.
//!
//! Elimination first uses unit pivots, which keep entries small and which
//! Khovanov differentials have in abundance. Each pivot is chosen in a short
//! row and, within it, in the column with fewest entries. Whatever remains
//! without a unit entry is handed to a dense big-integer reduction.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::SparseMatrix;

/// Invariant factors of a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl SmithForm {
    /// All nonzero invariant factors, units included.
    pub fn factors(&self) -> Vec<BigInt> {
        let units = self.rank - self.torsion.len();
        std::iter::repeat_n(BigInt::one(), units)
            .chain(self.torsion.iter().cloned())
            .collect()
    }
}

trait Entry: Clone {
    fn from_i32(v: i32) -> Self;
    fn is_nil(&self) -> bool;
    fn is_invertible(&self) -> bool;
    /// `self - f * x`, or `None` on overflow.
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self>;
    /// The `f` with `a - f * unit == 0`.
    fn unit_quotient(a: &Self, unit: &Self) -> Self;
    fn to_bigint(&self) -> BigInt;
}

impl Entry for i64 {
    fn from_i32(v: i32) -> Self {
        v as i64
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_invertible(&self) -> bool {
        self.abs() == 1
    }
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self> {
        self.checked_sub(f.checked_mul(*x)?)
    }
    fn unit_quotient(a: &Self, unit: &Self) -> Self {
        a * unit
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn from_i32(v: i32) -> Self {
        BigInt::from(v)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_invertible(&self) -> bool {
        self.abs().is_one()
    }
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self> {
        Some(self - f * x)
    }
    fn unit_quotient(a: &Self, unit: &Self) -> Self {
        a * unit
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// An element of the field with two elements; only `Gf2(true)` is stored.
#[derive(Clone, Copy)]
struct Gf2(bool);

impl Entry for Gf2 {
    fn from_i32(v: i32) -> Self {
        Gf2(v % 2 != 0)
    }
    fn is_nil(&self) -> bool {
        !self.0
    }
    fn is_invertible(&self) -> bool {
        self.0
    }
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self> {
        Some(Gf2(self.0 ^ (f.0 & x.0)))
    }
    fn unit_quotient(a: &Self, _unit: &Self) -> Self {
        *a
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(self.0 as u8)
    }
}

struct Overflow;

/// Result of unit-pivot elimination: the number of pivots and the rows left
/// over, restricted to surviving columns.
struct Reduced<E> {
    pivots: usize,
    rest: Vec<Vec<(u32, E)>>,
}

fn eliminate_units<E: Entry>(m: &SparseMatrix) -> Result<Reduced<E>, Overflow> {
    let mut rows: Vec<Vec<(u32, E)>> = vec![Vec::new(); m.rows()];
    for j in 0..m.cols() {
        for &(i, v) in m.column(j) {
            let e = E::from_i32(v);
            if !e.is_nil() {
                rows[i as usize].push((j as u32, e));
            }
        }
    }
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); m.cols()];
    for (i, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c as usize].push(i as u32);
        }
    }
    let mut row_dead = vec![false; m.rows()];
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.is_empty())
        .map(|(i, r)| Reverse((r.len(), i as u32)))
        .collect();
    let mut pivots = 0;

    while let Some(Reverse((len, r))) = heap.pop() {
        let r = r as usize;
        if row_dead[r] || rows[r].len() != len || len == 0 {
            continue;
        }
        let Some(&(c, ref p)) = rows[r]
            .iter()
            .filter(|(_, v)| v.is_invertible())
            .min_by_key(|(c, _)| col_rows[*c as usize].len())
        else {
            continue;
        };
        let p = p.clone();
        let pivot_row = std::mem::take(&mut rows[r]);
        row_dead[r] = true;
        pivots += 1;
        for r2 in std::mem::take(&mut col_rows[c as usize]) {
            let r2 = r2 as usize;
            if row_dead[r2] {
                continue;
            }
            let Ok(k) = rows[r2].binary_search_by_key(&c, |e| e.0) else {
                continue;
            };
            let f = E::unit_quotient(&rows[r2][k].1, &p);
            let merged = sub_row(&rows[r2], &f, &pivot_row, &mut col_rows, r2 as u32)?;
            rows[r2] = merged;
            if !rows[r2].is_empty() {
                heap.push(Reverse((rows[r2].len(), r2 as u32)));
            }
        }
    }
    let rest = rows
        .into_iter()
        .enumerate()
        .filter(|(i, r)| !row_dead[*i] && !r.is_empty())
        .map(|(_, r)| r)
        .collect();
    Ok(Reduced { pivots, rest })
}

/// `a - f * b` for sorted sparse rows; columns newly present in the result
/// record `row` as a member.
fn sub_row<E: Entry>(
    a: &[(u32, E)],
    f: &E,
    b: &[(u32, E)],
    col_rows: &mut [Vec<u32>],
    row: u32,
) -> Result<Vec<(u32, E)>, Overflow> {
    let zero = E::from_i32(0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = zero.sub_mul(f, &b[j].1).ok_or(Overflow)?;
            if !v.is_nil() {
                col_rows[b[j].0 as usize].push(row);
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = a[i].1.sub_mul(f, &b[j].1).ok_or(Overflow)?;
            if !v.is_nil() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

fn finish<E: Entry>(red: Reduced<E>) -> SmithForm {
    let mut cols: Vec<u32> = red
        .rest
        .iter()
        .flat_map(|r| r.iter().map(|e| e.0))
        .collect();
    cols.sort_unstable();
    cols.dedup();
    let dense: Vec<Vec<BigInt>> = red
        .rest
        .iter()
        .map(|r| {
            let mut row = vec![BigInt::zero(); cols.len()];
            for (c, v) in r {
                row[cols.binary_search(c).unwrap()] = v.to_bigint();
            }
            row
        })
        .collect();
    let diag = dense_invariant_factors(dense);
    let rank = red.pivots + diag.len();
    let torsion = diag.into_iter().filter(|d| !d.is_one()).collect();
    SmithForm { rank, torsion }
}

/// Smith normal form over the integers.
///
/// ```
/// use oddkh::{smith_normal_form, SparseMatrix};
/// let m = SparseMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
/// let s = smith_normal_form(&m);
/// assert_eq!(s.rank, 3);
/// let t: Vec<String> = s.torsion.iter().map(|d| d.to_string()).collect();
/// assert_eq!(t, ["2", "6", "12"]);
/// ```
pub fn smith_normal_form(m: &SparseMatrix) -> SmithForm {
    match eliminate_units::<i64>(m) {
        Ok(red) => finish(red),
        Err(Overflow) => match eliminate_units::<BigInt>(m) {
            Ok(red) => finish(red),
            Err(Overflow) => unreachable!("big integers do not overflow"),
        },
    }
}

/// Rank over the field of two elements.
pub fn rank_gf2(m: &SparseMatrix) -> usize {
    match eliminate_units::<Gf2>(m) {
        Ok(red) => {
            debug_assert!(red.rest.is_empty());
            red.pivots
        }
        Err(Overflow) => unreachable!("field arithmetic does not overflow"),
    }
}

/// Nonzero invariant factors of a dense matrix, sorted by divisibility.
fn dense_invariant_factors(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_entry(&m, t, t, rows, cols) else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            for i in t + 1..rows {
                if !m[i][t].is_zero() {
                    let q = m[i][t].div_floor(&m[t][t]);
                    for j in t..cols {
                        let delta = &q * &m[t][j];
                        m[i][j] -= delta;
                    }
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let q = m[t][j].div_floor(&m[t][t]);
                    for i in t..rows {
                        let delta = &q * &m[i][t];
                        m[i][j] -= delta;
                    }
                }
            }
            // a leftover remainder in the pivot row or column becomes the new pivot
            let mut best: Option<(usize, usize)> = None;
            let mut consider = |i: usize, j: usize, m: &Vec<Vec<BigInt>>| {
                if !m[i][j].is_zero()
                    && best.is_none_or(|(bi, bj): (usize, usize)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            };
            for i in t + 1..rows {
                consider(i, t, &m);
            }
            for j in t + 1..cols {
                consider(t, j, &m);
            }
            match best {
                None => break,
                Some((i, j)) => {
                    if j == t {
                        m.swap(t, i);
                    } else {
                        for row in m.iter_mut() {
                            row.swap(t, j);
                        }
                    }
                }
            }
        }
        diag.push(m[t][t].abs());
    }
    normalize_diagonal(diag)
}

fn smallest_entry(
    m: &[Vec<BigInt>],
    r0: usize,
    c0: usize,
    rows: usize,
    cols: usize,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in r0..rows {
        for j in c0..cols {
            if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                best = Some((i, j));
                if m[i][j].abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

/// Turns any diagonal into the divisibility chain with the same cokernel.
fn normalize_diagonal(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn torsion(m: &SparseMatrix) -> Vec<i64> {
        smith_normal_form(m)
            .torsion
            .iter()
            .map(|d| d.try_into().unwrap())
            .collect()
    }

    #[test]
    fn small_cases() {
        let m = SparseMatrix::from_dense(&[vec![2]]);
        assert_eq!(smith_normal_form(&m).rank, 1);
        assert_eq!(torsion(&m), [2]);
        let m = SparseMatrix::from_dense(&[vec![1, 0], vec![0, 0]]);
        assert_eq!(
            smith_normal_form(&m),
            SmithForm {
                rank: 1,
                torsion: vec![]
            }
        );
        let m = SparseMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(torsion(&m), [2, 6, 12]);
        assert_eq!(smith_normal_form(&SparseMatrix::zeros(3, 2)).rank, 0);
    }

    #[test]
    fn diagonal_is_normalized() {
        let m = SparseMatrix::from_dense(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(torsion(&m), [6]);
        let m = SparseMatrix::from_dense(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 1]]);
        assert_eq!(torsion(&m), [2, 12]);
    }

    #[test]
    fn gf2_rank() {
        let m = SparseMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(rank_gf2(&m), 2);
        assert_eq!(smith_normal_form(&m).rank, 3);
        assert_eq!(rank_gf2(&SparseMatrix::from_dense(&[vec![2, 4]])), 0);
    }

    #[test]
    fn huge_entries_fall_back_to_big_integers() {
        let big = 1 << 30;
        let mut rows = vec![vec![0i64; 6]; 6];
        for i in 0..6 {
            rows[i][i] = 1;
            if i + 1 < 6 {
                rows[i][i + 1] = big;
            }
            rows[5][i] = big - 1;
        }
        let m = SparseMatrix::from_dense(&rows);
        let s = smith_normal_form(&m);
        assert_eq!(s.rank, oracle_factors(&rows).len());
        assert_eq!(s.factors(), oracle_factors(&rows));
    }

    /// Determinantal divisors: d_k = gcd of all k x k minors, and the k-th
    /// invariant factor is d_k / d_{k-1}.
    fn oracle_factors(rows: &[Vec<i64>]) -> Vec<BigInt> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut prev = BigInt::one();
        let mut out = Vec::new();
        for k in 1..=r.min(c) {
            let mut g = BigInt::zero();
            for rs in subsets(r, k) {
                for cs in subsets(c, k) {
                    let minor: Vec<Vec<BigInt>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| BigInt::from(rows[i][j])).collect())
                        .collect();
                    g = g.gcd(&det(minor));
                }
            }
            if g.is_zero() {
                break;
            }
            out.push(&g / &prev);
            prev = g;
        }
        out
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect()
    }

    fn det(m: Vec<Vec<BigInt>>) -> BigInt {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|e| e.0 != j)
                            .map(|e| e.1.clone())
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
                s * &m[0][j] * det(minor)
            })
            .sum()
    }

    proptest! {
        #[test]
        fn matches_minor_oracle(
            (r, c, cells) in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
                (Just(r), Just(c), proptest::collection::vec(-4i64..=4, r * c))
            })
        ) {
            let rows: Vec<Vec<i64>> = cells.chunks(c).map(<[i64]>::to_vec).collect();
            prop_assert_eq!(rows.len(), r);
            let s = smith_normal_form(&SparseMatrix::from_dense(&rows));
            prop_assert_eq!(s.factors(), oracle_factors(&rows));
        }

        #[test]
        fn gf2_rank_matches_mod2_factors(
            cells in proptest::collection::vec(-3i64..=3, 16)
        ) {
            let rows: Vec<Vec<i64>> = cells.chunks(4).map(<[i64]>::to_vec).collect();
            let m = SparseMatrix::from_dense(&rows);
            let odd_factors = oracle_factors(&rows).iter().filter(|d| d.is_odd()).count();
            prop_assert_eq!(rank_gf2(&m), odd_factors);
        }
    }
}
