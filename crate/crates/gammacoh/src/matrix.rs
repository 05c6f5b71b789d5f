//! Dense matrices over a finite field.
//!
//! Entries are element codes of a fixed [`Fq`](crate::Fq); the field itself
//! is passed into each arithmetic operation rather than stored per matrix,
//! so matrices stay plain data and compare by entries.  Row reduction,
//! ranks, kernels, and span bookkeeping here are the entire linear-algebra
//! substrate for the cohomology computations in this crate.

use crate::field::Fq;

/// A `rows × cols` matrix over `F_q`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl FqMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        FqMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = FqMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from complete rows; all rows must share a length.
    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows in matrix literal");
        }
        FqMatrix {
            rows: rows.len(),
            cols,
            entries: rows.concat(),
        }
    }

    /// Convenience for tests and literals: embeds signed integers through
    /// the prime subfield.
    pub fn from_int_rows(f: &Fq, rows: &[&[i64]]) -> Self {
        let lifted: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| f.from_int(x)).collect())
            .collect();
        FqMatrix::from_rows(&lifted)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn add(&self, f: &Fq, other: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        FqMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, f: &Fq, other: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        FqMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn mul(&self, f: &Fq, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = FqMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let term = f.mul(a, other.at(k, j));
                    out.set(i, j, f.add(out.at(i, j), term));
                }
            }
        }
        out
    }

    /// Matrix power of a square matrix by square-and-multiply.
    pub fn pow(&self, f: &Fq, k: u64) -> FqMatrix {
        assert!(self.is_square(), "powers need a square matrix");
        let mut result = FqMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut exp = k;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(f, &base);
            }
            base = base.mul(f, &base);
            exp >>= 1;
        }
        result
    }

    /// Kronecker product; row `(i1, i2)` of the result is indexed as
    /// `i1 · other.rows + i2`, matching the tensor-basis convention
    /// `v ⊗ w ↦ index(v) · dim(w) + index(w)`.
    pub fn kronecker(&self, f: &Fq, other: &FqMatrix) -> FqMatrix {
        let mut out = FqMatrix::zero(self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.at(i1, j1);
                if a == 0 {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let value = f.mul(a, other.at(i2, j2));
                        out.set(i1 * other.rows + i2, j1 * other.cols + j2, value);
                    }
                }
            }
        }
        out
    }

    /// Stacks `other` below `self`; column counts must agree.
    pub fn vstack(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.cols, "column counts must agree");
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        FqMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Block-diagonal assembly of square blocks.
    pub fn block_diag(blocks: &[FqMatrix]) -> FqMatrix {
        let n: usize = blocks.iter().map(FqMatrix::rows).sum();
        for b in blocks {
            assert!(b.is_square(), "block-diagonal assembly needs square blocks");
        }
        let mut out = FqMatrix::zero(n, n);
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(offset + i, offset + j, b.at(i, j));
                }
            }
            offset += b.rows;
        }
        out
    }

    /// Applies the matrix to a coordinate vector.
    pub fn apply(&self, f: &Fq, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "vector length must match columns");
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for (j, &x) in v.iter().enumerate() {
                    acc = f.add(acc, f.mul(self.at(i, j), x));
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }
}

/// In-place reduction to reduced row echelon form; returns the pivot
/// columns in order.
pub fn rref(f: &Fq, m: &mut FqMatrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols() {
        if row == m.rows() {
            break;
        }
        let Some(p) = (row..m.rows()).find(|&i| m.at(i, col) != 0) else {
            continue;
        };
        if p != row {
            for j in 0..m.cols() {
                let (a, b) = (m.at(row, j), m.at(p, j));
                m.set(row, j, b);
                m.set(p, j, a);
            }
        }
        let scale = f.inv(m.at(row, col));
        for j in 0..m.cols() {
            m.set(row, j, f.mul(scale, m.at(row, j)));
        }
        for i in 0..m.rows() {
            if i == row || m.at(i, col) == 0 {
                continue;
            }
            let factor = m.at(i, col);
            for j in 0..m.cols() {
                let value = f.sub(m.at(i, j), f.mul(factor, m.at(row, j)));
                m.set(i, j, value);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(f: &Fq, m: &FqMatrix) -> usize {
    let mut work = m.clone();
    rref(f, &mut work).len()
}

pub fn is_invertible(f: &Fq, m: &FqMatrix) -> bool {
    m.is_square() && rank(f, m) == m.rows()
}

/// A basis of the right kernel `{v : m · v = 0}`, one coordinate vector per
/// free column of the echelon form.
pub fn kernel_basis(f: &Fq, m: &FqMatrix) -> Vec<Vec<u64>> {
    let mut work = m.clone();
    let pivots = rref(f, &mut work);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..m.cols() {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; m.cols()];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(work.at(r, free));
        }
        basis.push(v);
    }
    basis
}

/// Dimension of the span of a family of vectors.
pub fn span_dim(f: &Fq, vectors: &[Vec<u64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rank(f, &FqMatrix::from_rows(vectors))
}

/// Greedily selects candidates that are independent of `span` (and of the
/// candidates already chosen), returning the chosen vectors.
pub fn independent_from(
    f: &Fq,
    span: &[Vec<u64>],
    candidates: &[Vec<u64>],
) -> Vec<Vec<u64>> {
    let mut current: Vec<Vec<u64>> = span.to_vec();
    let mut dim = span_dim(f, &current);
    let mut chosen = Vec::new();
    for c in candidates {
        current.push(c.clone());
        let next = span_dim(f, &current);
        if next > dim {
            dim = next;
            chosen.push(c.clone());
        } else {
            current.pop();
        }
    }
    chosen
}

/// Solves `columns · x = target` where `columns` is a list of independent
/// column vectors; `None` when the target leaves their span.
pub fn coordinates_in_span(
    f: &Fq,
    columns: &[Vec<u64>],
    target: &[u64],
) -> Option<Vec<u64>> {
    let height = target.len();
    for c in columns {
        assert_eq!(c.len(), height, "span vectors must match the target length");
    }
    let mut aug = FqMatrix::zero(height, columns.len() + 1);
    for (j, c) in columns.iter().enumerate() {
        for (i, &x) in c.iter().enumerate() {
            aug.set(i, j, x);
        }
    }
    for (i, &x) in target.iter().enumerate() {
        aug.set(i, columns.len(), x);
    }
    let pivots = rref(f, &mut aug);
    if pivots.contains(&columns.len()) {
        return None;
    }
    let mut x = vec![0u64; columns.len()];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.at(r, columns.len());
    }
    Some(x)
}
