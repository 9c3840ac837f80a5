//! Smith normal form and exact rank computations.
//!
//! Two entry points:
//!  - [`snf_diagonal`]: diagonal entries only, tuned for the very sparse
//!    boundary matrices of this crate. Unit pivots are eliminated directly on
//!    the sparse structure (chosen by least fill); whatever remains is
//!    finished densely. Arithmetic starts in i128 and escalates to arbitrary
//!    precision on overflow.
//!  - [`smith_normal_form`]: full U·A·V = D with unimodular U, V, computed
//!    densely in arbitrary precision. Meant for desk-scale matrices.
//!
//! [`rank_over_q`] is an independent rational-rank route (fraction-free
//! Bareiss elimination) used to cross-check Betti numbers.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::matrix::{DenseBigMatrix, SparseIntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SnfError {
    #[error("dense elimination block too large: {rows} x {cols} (max {max} per side)")]
    DenseBlockTooLarge { rows: usize, cols: usize, max: usize },
    #[error("transform-tracking SNF limited to {max} per side, got {rows} x {cols}")]
    TransformsTooLarge { rows: usize, cols: usize, max: usize },
}

const DENSE_FINISH_MAX: usize = 1024;
const TRANSFORM_MAX: usize = 1024;

/// Result of a transform-tracking Smith normal form: U * A * V = D with
/// |det U| = |det V| = 1 and D diagonal with a divisibility chain.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub u: DenseBigMatrix,
    pub d: DenseBigMatrix,
    pub v: DenseBigMatrix,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|v| !v.is_zero()).count()
    }
}

/// Integer arithmetic that can report overflow, so elimination can escalate
/// from machine words to arbitrary precision.
pub(crate) trait ExactInt: Clone + Eq + Ord + std::fmt::Debug {
    fn nil() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn abs_val(&self) -> Self;
    fn try_sub_mul(&self, q: &Self, b: &Self) -> Option<Self>; // self - q*b
    fn try_add(&self, o: &Self) -> Option<Self>;
    fn quo_rem(&self, o: &Self) -> Option<(Self, Self)>;
    fn is_divisor_of(&self, o: &Self) -> bool;
    fn to_big(&self) -> BigInt;
}

impl ExactInt for i128 {
    fn nil() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn abs_val(&self) -> Self {
        self.wrapping_abs()
    }
    fn try_sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*b)?)
    }
    fn try_add(&self, o: &Self) -> Option<Self> {
        i128::checked_add(*self, *o)
    }
    fn quo_rem(&self, o: &Self) -> Option<(Self, Self)> {
        let q = self.checked_div(*o)?;
        let r = self.checked_rem(*o)?;
        Some((q, r))
    }
    fn is_divisor_of(&self, o: &Self) -> bool {
        *self != 0 && o.checked_rem(*self) == Some(0)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ExactInt for BigInt {
    fn nil() -> Self {
        BigInt::ZERO
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        num_traits::One::is_one(self.magnitude())
    }
    fn abs_val(&self) -> Self {
        Signed::abs(self)
    }
    fn try_sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn try_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn quo_rem(&self, o: &Self) -> Option<(Self, Self)> {
        Some(Integer::div_rem(self, o))
    }
    fn is_divisor_of(&self, o: &Self) -> bool {
        !Zero::is_zero(self) && Zero::is_zero(&(o % self))
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Diagonal of the Smith normal form of `m` (length min(rows, cols), zeros
/// included), nonnegative, in divisibility-chain order.
pub fn snf_diagonal(m: &SparseIntMatrix) -> Result<Vec<BigInt>, SnfError> {
    match sparse_snf::<i128>(m) {
        Some(result) => result,
        // overflow in machine words; redo everything in arbitrary precision
        None => sparse_snf::<BigInt>(m).expect("bigint elimination cannot overflow"),
    }
}

/// Number of nonzero diagonal entries, i.e. the rank of `m`.
pub fn snf_rank(m: &SparseIntMatrix) -> Result<usize, SnfError> {
    Ok(snf_diagonal(m)?.iter().filter(|v| !v.is_zero()).count())
}

/// Sparse unit-pivot phase + dense finish. Returns None on i128 overflow.
fn sparse_snf<T: ExactInt>(m: &SparseIntMatrix) -> Option<Result<Vec<BigInt>, SnfError>> {
    let n_rows = m.rows();
    let n_cols = m.cols();
    let mut rows: Vec<HashMap<usize, T>> = vec![HashMap::new(); n_rows];
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); n_cols]; // unsorted, lazily cleaned
    for (r, c, v) in m.triplets() {
        rows[r].insert(c, T::from_i64(v));
        col_rows[c].push(r);
    }
    let mut row_live = vec![true; n_rows];
    let mut col_live = vec![true; n_cols];
    let mut units = 0usize;

    // each scan collects every unit entry ordered by fill score
    // (row_nnz-1)*(col_nnz-1); candidates are applied until they go stale,
    // then the matrix is rescanned, which amortizes the scans over long runs
    // of independent pivots
    loop {
        let mut candidates: Vec<(usize, usize, usize)> = Vec::new(); // (score, col, row)
        for c in 0..n_cols {
            if !col_live[c] {
                continue;
            }
            col_rows[c].retain(|&r| row_live[r] && rows[r].contains_key(&c));
            col_rows[c].sort_unstable();
            col_rows[c].dedup();
            let c_nnz = col_rows[c].len();
            for &r in &col_rows[c] {
                if rows[r][&c].is_unit() {
                    candidates.push(((rows[r].len() - 1) * (c_nnz - 1), c, r));
                }
            }
        }
        if candidates.is_empty() {
            break;
        }
        candidates.sort_unstable();
        let mut applied = false;
        for (_, pc, pr) in candidates {
            if !col_live[pc] || !row_live[pr] {
                continue;
            }
            let Some(pivot) = rows[pr].get(&pc).cloned() else {
                continue;
            };
            if !pivot.is_unit() {
                continue;
            }
            // clear column pc with row operations; col_rows is maintained
            // lazily and may hold duplicates
            let mut victims: Vec<usize> = col_rows[pc]
                .iter()
                .copied()
                .filter(|&r| r != pr && row_live[r] && rows[r].contains_key(&pc))
                .collect();
            victims.sort_unstable();
            victims.dedup();
            let pivot_row: Vec<(usize, T)> =
                rows[pr].iter().map(|(&c, v)| (c, v.clone())).collect();
            for r in victims {
                let coeff = rows[r][&pc].clone();
                // q = coeff / pivot; the remainder vanishes since the pivot
                // is a unit
                let (q, rem) = coeff.quo_rem(&pivot)?;
                debug_assert!(rem.is_nil());
                for (c, w) in &pivot_row {
                    if !col_live[*c] {
                        continue;
                    }
                    let cur = rows[r].get(c).cloned().unwrap_or_else(T::nil);
                    let next = cur.try_sub_mul(&q, w)?;
                    if next.is_nil() {
                        rows[r].remove(c);
                    } else {
                        if !rows[r].contains_key(c) {
                            col_rows[*c].push(r);
                        }
                        rows[r].insert(*c, next);
                    }
                }
            }
            // the pivot row's other entries are cleared by column operations
            // that touch no other row (column pc is now singleton), so just
            // retire both
            row_live[pr] = false;
            col_live[pc] = false;
            rows[pr].clear();
            units += 1;
            applied = true;
        }
        if !applied {
            break;
        }
    }

    // densify what is left
    let live_r: Vec<usize> = (0..n_rows).filter(|&r| row_live[r] && !rows[r].is_empty()).collect();
    let mut live_c: Vec<usize> = live_r
        .iter()
        .flat_map(|&r| rows[r].keys().copied())
        .filter(|&c| col_live[c])
        .collect();
    live_c.sort_unstable();
    live_c.dedup();
    if live_r.len() > DENSE_FINISH_MAX || live_c.len() > DENSE_FINISH_MAX {
        return Some(Err(SnfError::DenseBlockTooLarge {
            rows: live_r.len(),
            cols: live_c.len(),
            max: DENSE_FINISH_MAX,
        }));
    }
    let col_pos: HashMap<usize, usize> = live_c.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut dense: Vec<Vec<T>> = vec![vec![T::nil(); live_c.len()]; live_r.len()];
    for (i, &r) in live_r.iter().enumerate() {
        for (c, v) in &rows[r] {
            if let Some(&j) = col_pos.get(c) {
                dense[i][j] = v.clone();
            }
        }
    }
    let tail = dense_snf_diagonal(dense)?;

    let total = n_rows.min(n_cols);
    let mut diag: Vec<BigInt> = Vec::with_capacity(total);
    diag.extend(std::iter::repeat(BigInt::one()).take(units));
    diag.extend(tail.iter().map(|v| v.to_big()));
    diag.resize(total, BigInt::ZERO);
    Some(Ok(diag))
}

/// Dense SNF diagonal without transforms; returns None on overflow.
/// Entries come out nonnegative in divisibility-chain order.
fn dense_snf_diagonal<T: ExactInt>(mut a: Vec<Vec<T>>) -> Option<Vec<T>> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let limit = m.min(n);
    't: for t in 0..limit {
        loop {
            // minimal |value| pivot in the trailing submatrix
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if a[i][j].is_nil() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| a[i][j].abs_val() < a[bi][bj].abs_val()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 't };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            // reduce column t
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t].is_nil() {
                    continue;
                }
                let (q, r) = a[i][t].quo_rem(&a[t][t])?;
                if !q.is_nil() {
                    for j in t..n {
                        let next = a[i][j].try_sub_mul(&q, &a[t][j])?;
                        a[i][j] = next;
                    }
                }
                if !r.is_nil() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // reduce row t
            for j in t + 1..n {
                if a[t][j].is_nil() {
                    continue;
                }
                let (q, r) = a[t][j].quo_rem(&a[t][t])?;
                if !q.is_nil() {
                    for i in t..m {
                        let next = a[i][j].try_sub_mul(&q, &a[i][t])?;
                        a[i][j] = next;
                    }
                }
                if !r.is_nil() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility sweep: pull any non-multiple into row t
            let mut offender = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !a[i][j].is_nil() && !a[t][t].is_divisor_of(&a[i][j]) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    for j in t..n {
                        let next = a[t][j].try_add(&a[i][j])?;
                        a[t][j] = next;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs_val());
    }
    Some(diag)
}

/// Full Smith normal form with unimodular transforms, dense arbitrary
/// precision.
pub fn smith_normal_form(m: &SparseIntMatrix) -> Result<SnfResult, SnfError> {
    let rows = m.rows();
    let cols = m.cols();
    if rows > TRANSFORM_MAX || cols > TRANSFORM_MAX {
        return Err(SnfError::TransformsTooLarge {
            rows,
            cols,
            max: TRANSFORM_MAX,
        });
    }
    let mut a = DenseBigMatrix::from_sparse(m);
    let mut u = DenseBigMatrix::identity(rows);
    let mut v = DenseBigMatrix::identity(cols);
    let limit = rows.min(cols);
    't: for t in 0..limit {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[(i, j)].is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 't };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let (q, r) = Integer::div_rem(&a[(i, t)], &a[(t, t)]);
                if !q.is_zero() {
                    let neg_q = -&q;
                    a.add_row_multiple(i, t, &neg_q);
                    u.add_row_multiple(i, t, &neg_q);
                }
                if !r.is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let (q, r) = Integer::div_rem(&a[(t, j)], &a[(t, t)]);
                if !q.is_zero() {
                    let neg_q = -&q;
                    a.add_col_multiple(j, t, &neg_q);
                    v.add_col_multiple(j, t, &neg_q);
                }
                if !r.is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a[(i, j)].is_zero() && !(&a[(i, j)] % &a[(t, t)]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    Ok(SnfResult { u, d: a, v })
}

/// Rank over the rationals by fraction-free (Bareiss) elimination;
/// independent of the SNF code path.
pub fn rank_over_q(m: &SparseIntMatrix) -> usize {
    match bareiss_rank::<i128>(&m.to_dense_i128()) {
        Some(rank) => rank,
        None => bareiss_rank::<BigInt>(&m.to_dense_bigint())
            .expect("bigint elimination cannot overflow"),
    }
}

trait BareissInt: Clone + Eq {
    fn is_nil(&self) -> bool;
    fn unit() -> Self;
    fn mul_sub_div(a: &Self, d: &Self, b: &Self, c: &Self, prev: &Self) -> Option<Self>; // (a*d - b*c)/prev
}

impl BareissInt for i128 {
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn unit() -> Self {
        1
    }
    fn mul_sub_div(a: &Self, d: &Self, b: &Self, c: &Self, prev: &Self) -> Option<Self> {
        let num = a.checked_mul(*d)?.checked_sub(b.checked_mul(*c)?)?;
        Some(num / prev)
    }
}

impl BareissInt for BigInt {
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn unit() -> Self {
        One::one()
    }
    fn mul_sub_div(a: &Self, d: &Self, b: &Self, c: &Self, prev: &Self) -> Option<Self> {
        Some((a * d - b * c) / prev)
    }
}

fn bareiss_rank<T: BareissInt>(dense: &[Vec<T>]) -> Option<usize> {
    let m = dense.len();
    let n = if m == 0 { 0 } else { dense[0].len() };
    let mut a: Vec<Vec<T>> = dense.to_vec();
    let mut prev = T::unit();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..n {
        if row >= m {
            break;
        }
        let pivot = (row..m).find(|&i| !a[i][col].is_nil());
        let Some(p) = pivot else { continue };
        a.swap(row, p);
        for i in row + 1..m {
            for j in col + 1..n {
                a[i][j] = T::mul_sub_div(&a[i][j], &a[row][col], &a[i][col], &a[row][j], &prev)?;
            }
            // entries at and left of the pivot column are never read again
        }
        prev = a[row][col].clone();
        rank += 1;
        row += 1;
    }
    Some(rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sparse(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> SparseIntMatrix {
        SparseIntMatrix::from_triplets(rows, cols, entries.iter().copied())
    }

    #[test]
    fn hand_checked_2x2() {
        // gcd of entries is 2, |det| = 8, so the chain is (2, 4)
        let m = sparse(2, 2, &[(0, 0, 2), (0, 1, 4), (1, 0, 6), (1, 1, 8)]);
        let d = snf_diagonal(&m).unwrap();
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn identity_and_zero() {
        let id = SparseIntMatrix::identity(3);
        assert_eq!(
            snf_diagonal(&id).unwrap(),
            vec![BigInt::from(1); 3]
        );
        let z = SparseIntMatrix::zero(2, 3);
        assert_eq!(snf_diagonal(&z).unwrap(), vec![BigInt::ZERO; 2]);
    }

    #[test]
    fn transforms_satisfy_contract() {
        let m = sparse(2, 2, &[(0, 0, 2), (0, 1, 4), (1, 0, 6), (1, 1, 8)]);
        let snf = smith_normal_form(&m).unwrap();
        let a = DenseBigMatrix::from_sparse(&m);
        assert_eq!(snf.u.multiply(&a).multiply(&snf.v), snf.d);
        assert_eq!(snf.u.determinant().magnitude().to_string(), "1");
        assert_eq!(snf.v.determinant().magnitude().to_string(), "1");
        assert_eq!(
            snf.diagonal(),
            vec![BigInt::from(2), BigInt::from(4)]
        );
    }

    #[test]
    fn divisibility_chain_on_awkward_matrix() {
        // diag(2, 3) is equivalent to diag(1, 6)
        let m = sparse(2, 2, &[(0, 0, 2), (1, 1, 3)]);
        assert_eq!(
            snf_diagonal(&m).unwrap(),
            vec![BigInt::from(1), BigInt::from(6)]
        );
    }

    #[test]
    fn rank_routes_agree() {
        let m = sparse(
            3,
            4,
            &[(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4), (2, 3, 5)],
        );
        assert_eq!(rank_over_q(&m), 2);
        assert_eq!(snf_rank(&m).unwrap(), 2);
    }

    #[test]
    fn wide_and_tall_shapes() {
        let wide = sparse(1, 4, &[(0, 2, 7)]);
        assert_eq!(snf_diagonal(&wide).unwrap(), vec![BigInt::from(7)]);
        let tall = sparse(4, 1, &[(3, 0, -7)]);
        assert_eq!(snf_diagonal(&tall).unwrap(), vec![BigInt::from(7)]);
    }

    /// The arbitrary-precision escalation path computes the same diagonal as
    /// the machine-word path (it only ever runs on overflow, so exercise it
    /// directly).
    #[test]
    fn bigint_path_matches_machine_path() {
        let mut seed = 0xdead_beef_1234_5678u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _trial in 0..50 {
            let rows = 1 + (next() % 8) as usize;
            let cols = 1 + (next() % 8) as usize;
            let mut triplets = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if next() % 3 == 0 {
                        triplets.push((r, c, (next() % 19) as i64 - 9));
                    }
                }
            }
            let m = SparseIntMatrix::from_triplets(rows, cols, triplets);
            let via_machine = sparse_snf::<i128>(&m).unwrap().unwrap();
            let via_big = sparse_snf::<BigInt>(&m).unwrap().unwrap();
            assert_eq!(via_machine, via_big);
        }
    }
}
