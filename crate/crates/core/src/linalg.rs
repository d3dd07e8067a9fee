//! Dense exact linear algebra over F_p.
//!
//! Elimination order is fixed (leftmost pivot column, first nonzero row from
//! the top), so reduced forms, kernel bases and particular solutions are
//! reproducible bit for bit.

use std::fmt;

use crate::field::PrimeField;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl DenseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for i in 0..size {
            m.set(i, i, 1);
        }
        m
    }

    /// Scalar multiple of the identity.
    pub fn scalar(field: PrimeField, size: usize, value: u32) -> Self {
        let mut m = Self::zeros(field, size, size);
        for i in 0..size {
            m.set(i, i, value);
        }
        m
    }

    pub fn diagonal(field: PrimeField, diag: &[u32]) -> Self {
        let mut m = Self::zeros(field, diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Build from signed integer rows, reducing mod p.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&v| field.from_i64(v)));
        }
        Self {
            field,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_columns(field: PrimeField, height: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, height, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), height);
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Matrix product; panics on a shape mismatch.
    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let k = self.field;
        let mut out = Self::zeros(k, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = k.mul_add(out.data[idx], a, other.get(l, j));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let k = self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| k.mul_add(acc, a, b))
            })
            .collect()
    }

    pub fn scale(&self, s: u32) -> DenseMatrix {
        let k = self.field;
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v = k.mul(*v, s));
        out
    }

    /// Reduced row echelon form together with the ordered pivot columns.
    pub fn rref(&self) -> (DenseMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let k = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..cols {
            if pr == rows {
                break;
            }
            let Some(src) = (pr..rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            if src != pr {
                for j in 0..cols {
                    self.data.swap(src * cols + j, pr * cols + j);
                }
            }
            let inv = k.inv(self.get(pr, c)).expect("pivot is nonzero");
            for j in c..cols {
                let v = self.get(pr, j);
                self.set(pr, j, k.mul(v, inv));
            }
            for r in 0..rows {
                if r == pr {
                    continue;
                }
                let factor = self.get(r, c);
                if factor == 0 {
                    continue;
                }
                let neg = k.neg(factor);
                for j in c..cols {
                    let v = k.mul_add(self.get(r, j), neg, self.get(pr, j));
                    self.set(r, j, v);
                }
            }
            pivots.push(c);
            pr += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        // forward elimination only
        let k = self.field;
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(src) = (rank..rows).find(|&r| m[r * cols + c] != 0) else {
                continue;
            };
            if src != rank {
                for j in 0..cols {
                    m.swap(src * cols + j, rank * cols + j);
                }
            }
            let inv = k.inv(m[rank * cols + c]).expect("pivot is nonzero");
            for r in rank + 1..rows {
                let factor = m[r * cols + c];
                if factor == 0 {
                    continue;
                }
                let t = k.neg(k.mul(factor, inv));
                for j in c..cols {
                    m[r * cols + j] = k.mul_add(m[r * cols + j], t, m[rank * cols + j]);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Canonical basis of the right kernel, one column per free variable in
    /// increasing column order.
    pub fn kernel_basis(&self) -> DenseMatrix {
        let k = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = DenseMatrix::zeros(k, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            out.set(fc, j, 1);
            for (row, &pc) in pivots.iter().enumerate() {
                out.set(pc, j, k.neg(r.get(row, fc)));
            }
        }
        out
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Particular solution of `M x = v` with all free variables set to zero,
    /// or `None` when `v` is outside the column span.
    pub fn solve(&self, v: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(v.len(), self.rows, "right-hand side has wrong length");
        let mut aug = DenseMatrix::zeros(self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, v[r]);
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(row, self.cols);
        }
        Some(x)
    }

    pub fn contains_column(&self, v: &[u32]) -> bool {
        self.solve(v).is_some()
    }

    pub fn inverse(&self) -> Option<DenseMatrix> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = DenseMatrix::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let pivots = aug.rref_in_place();
        if !pivots.iter().copied().eq(0..n) {
            return None;
        }
        let mut inv = DenseMatrix::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Some(inv)
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        DenseMatrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &DenseMatrix) -> DenseMatrix {
        self.transpose().vstack(&other.transpose()).transpose()
    }

    /// Signed entries in the symmetric range, row by row.
    pub fn to_signed_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|&v| self.field.to_signed(v)).collect())
            .collect()
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} over {} ", self.rows, self.cols, self.field)?;
        f.debug_list().entries(self.to_signed_rows()).finish()
    }
}

/// Dimension of the intersection of two column spans living in the same
/// ambient space.
pub fn intersection_dimension(a: &DenseMatrix, b: &DenseMatrix) -> usize {
    a.rank() + b.rank() - a.hstack(b).rank()
}
