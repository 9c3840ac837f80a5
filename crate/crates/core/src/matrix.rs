//! Sparse exact-integer matrices used for boundary operators.
//!
//! Entries are i64 at rest (boundary coefficients are tiny); all elimination
//! is done by the SNF module, which widens to i128 or arbitrary precision as
//! needed.

use num_bigint::BigInt;

/// Column-major sparse integer matrix. Each column holds (row, value) pairs
/// sorted by row, zero values never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: Vec<Vec<(usize, i64)>>,
}

impl SparseIntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let cols = (0..n).map(|i| vec![(i, 1)]).collect();
        SparseIntMatrix { rows: n, cols }
    }

    /// Build from (row, col, value) triplets; repeated positions accumulate.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        let mut m = SparseIntMatrix::zero(rows, cols);
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r},{c}) out of bounds");
            m.add(r, c, v);
        }
        m
    }

    /// Build column-by-column from already-sorted entries.
    pub fn from_columns(rows: usize, cols: Vec<Vec<(usize, i64)>>) -> Self {
        for col in &cols {
            debug_assert!(col.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(col.iter().all(|&(r, v)| r < rows && v != 0));
        }
        SparseIntMatrix { rows, cols }
    }

    fn add(&mut self, r: usize, c: usize, v: i64) {
        if v == 0 {
            return;
        }
        let col = &mut self.cols[c];
        match col.binary_search_by_key(&r, |&(row, _)| row) {
            Ok(pos) => {
                let nv = col[pos].1.checked_add(v).expect("entry overflow");
                if nv == 0 {
                    col.remove(pos);
                } else {
                    col[pos].1 = nv;
                }
            }
            Err(pos) => col.insert(pos, (r, v)),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, c: usize) -> &[(usize, i64)] {
        &self.cols[c]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.cols[c]
            .binary_search_by_key(&r, |&(row, _)| row)
            .map(|pos| self.cols[c][pos].1)
            .unwrap_or(0)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
    }

    /// Exact product self * other, with i128 accumulation.
    pub fn multiply(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols(), other.rows(), "shape mismatch in multiply");
        let mut out_cols = Vec::with_capacity(other.cols());
        let mut acc: Vec<i128> = vec![0; self.rows];
        for c in 0..other.cols() {
            let mut touched: Vec<usize> = Vec::new();
            for &(k, w) in other.column(c) {
                for &(r, v) in self.column(k) {
                    if acc[r] == 0 {
                        touched.push(r);
                    }
                    acc[r] = acc[r]
                        .checked_add(v as i128 * w as i128)
                        .expect("overflow in matrix product");
                }
            }
            touched.sort_unstable();
            let mut col = Vec::with_capacity(touched.len());
            for r in touched {
                if acc[r] != 0 {
                    let v = i64::try_from(acc[r]).expect("product entry exceeds i64");
                    col.push((r, v));
                }
                acc[r] = 0;
            }
            out_cols.push(col);
        }
        SparseIntMatrix {
            rows: self.rows,
            cols: out_cols,
        }
    }

    pub fn to_dense_i128(&self) -> Vec<Vec<i128>> {
        let mut dense = vec![vec![0i128; self.cols()]; self.rows];
        for (r, c, v) in self.triplets() {
            dense[r][c] = v as i128;
        }
        dense
    }

    pub fn to_dense_bigint(&self) -> Vec<Vec<BigInt>> {
        let mut dense = vec![vec![BigInt::from(0); self.cols()]; self.rows];
        for (r, c, v) in self.triplets() {
            dense[r][c] = BigInt::from(v);
        }
        dense
    }

    /// Keep the given rows and columns (in the listed order), reindexing.
    pub fn restrict(&self, keep_rows: &[usize], keep_cols: &[usize]) -> SparseIntMatrix {
        let mut row_map = vec![usize::MAX; self.rows];
        for (new, &old) in keep_rows.iter().enumerate() {
            row_map[old] = new;
        }
        let cols = keep_cols
            .iter()
            .map(|&c| {
                self.cols[c]
                    .iter()
                    .filter_map(|&(r, v)| {
                        (row_map[r] != usize::MAX).then(|| (row_map[r], v))
                    })
                    .collect()
            })
            .collect();
        SparseIntMatrix {
            rows: keep_rows.len(),
            cols,
        }
    }
}

/// Small dense matrix of arbitrary-precision integers; only used for SNF
/// transform bookkeeping where unimodular factors are requested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseBigMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl DenseBigMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        DenseBigMatrix {
            rows,
            cols,
            data: vec![BigInt::from(0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseBigMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::from(1);
        }
        m
    }

    pub fn from_sparse(m: &SparseIntMatrix) -> Self {
        let mut out = DenseBigMatrix::zero(m.rows(), m.cols());
        for (r, c, v) in m.triplets() {
            out[(r, c)] = BigInt::from(v);
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn multiply(&self, other: &DenseBigMatrix) -> DenseBigMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseBigMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a == &BigInt::from(0) {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    let cur = &out[(i, j)] + prod;
                    out[(i, j)] = cur;
                }
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += q * row[source]
    pub fn add_row_multiple(&mut self, target: usize, source: usize, q: &BigInt) {
        for j in 0..self.cols {
            let delta = q * &self[(source, j)];
            let cur = &self[(target, j)] + delta;
            self[(target, j)] = cur;
        }
    }

    /// col[target] += q * col[source]
    pub fn add_col_multiple(&mut self, target: usize, source: usize, q: &BigInt) {
        for i in 0..self.rows {
            let delta = q * &self[(i, source)];
            let cur = &self[(i, target)] + delta;
            self[(i, target)] = cur;
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }

    pub fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, c)];
            self[(i, c)] = v;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::from(1);
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self[(i, j)].clone()).collect())
            .collect();
        let mut sign = BigInt::from(1);
        let mut prev = BigInt::from(1);
        let zero = BigInt::from(0);
        for k in 0..n - 1 {
            if a[k][k] == zero {
                match (k + 1..n).find(|&i| a[i][k] != zero) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return zero,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
                a[i][k] = zero.clone();
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }
}

impl std::ops::Index<(usize, usize)> for DenseBigMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseBigMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}
