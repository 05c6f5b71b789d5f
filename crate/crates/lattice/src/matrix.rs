//! Dense arbitrary-precision integer matrices, Smith normal form, exact
//! integer solving, and a column-style Hermite reduction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Dense integer matrix with arbitrary-precision entries, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    /// Builds a matrix from row-major entries. Panics if the entry count is
    /// not `rows * cols`.
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        IntMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Test/readability convenience: build from machine-word rows.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: r, cols: c, entries }
    }

    /// Builds from a list of column vectors (all of length `rows`).
    pub fn from_columns(rows: usize, cols_vecs: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zero(rows, cols_vecs.len());
        for (j, col) in cols_vecs.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cur = out.at(i, j) + a * rhs.at(k, j);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length must equal cols");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, rhs.rows, "row counts must agree");
        let mut out = Self::zero(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.at(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.at(i, j).clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = -self.at(i, j).clone();
            self.set(i, j, x);
        }
    }

    /// row_i -= q * row_k
    fn row_sub_mul(&mut self, i: usize, k: usize, q: &BigInt) {
        for j in 0..self.cols {
            let x = self.at(i, j) - q * self.at(k, j);
            self.set(i, j, x);
        }
    }

    /// col_j -= q * col_k
    fn col_sub_mul(&mut self, j: usize, k: usize, q: &BigInt) {
        for i in 0..self.rows {
            let x = self.at(i, j) - q * self.at(i, k);
            self.set(i, j, x);
        }
    }

    /// row_i += row_k
    fn row_add(&mut self, i: usize, k: usize) {
        for j in 0..self.cols {
            let x = self.at(i, j) + self.at(k, j);
            self.set(i, j, x);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

// The interchange encoding is an array of rows, every entry a decimal string,
// so values beyond 64 bits survive any JSON parser.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).to_string()).collect())
            .collect();
        rows.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(de)?;
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(D::Error::custom("ragged matrix rows"));
            }
            for s in row {
                let x: BigInt = s
                    .parse()
                    .map_err(|_| D::Error::custom(format!("bad integer literal: {s:?}")))?;
                entries.push(x);
            }
        }
        Ok(IntMatrix { rows: r, cols: c, entries })
    }
}

/// Quotient-and-remainder with the quotient rounded to the nearest integer
/// (ties toward the floor side); keeps Euclidean-style remainders at most
/// half the divisor in magnitude.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    if r.magnitude() * 2u8 > *b.magnitude() {
        if r.is_negative() == b.is_negative() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// The result of a Smith reduction: `u * a * v = d` with `u`, `v` unimodular
/// and `d` diagonal, nonnegative, each diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).filter(|&i| !self.d.at(i, i).is_zero()).count()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.at(i, i).clone()).collect()
    }
}

/// Smith normal form by Euclidean pivoting. The pivot is always a smallest
/// nonzero entry (in absolute value) of the trailing submatrix, which keeps
/// coefficient growth tame on the dense small matrices seen here.
pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let steps = m.min(n);
    for t in 0..steps {
        let Some((pi, pj)) = pivot_position(&d, t) else {
            break; // trailing submatrix is zero
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            // Clear the pivot column with row operations.
            for i in t + 1..m {
                if d.at(i, t).is_zero() {
                    continue;
                }
                let q = div_nearest(d.at(i, t), d.at(t, t));
                if !q.is_zero() {
                    d.row_sub_mul(i, t, &q);
                    u.row_sub_mul(i, t, &q);
                }
            }
            let mut leftover_row: Option<usize> = None;
            for i in t + 1..m {
                if d.at(i, t).is_zero() {
                    continue;
                }
                match leftover_row {
                    Some(b) if d.at(b, t).magnitude() <= d.at(i, t).magnitude() => {}
                    _ => leftover_row = Some(i),
                }
            }
            if let Some(i) = leftover_row {
                // A remainder smaller than the pivot survives: promote it.
                d.swap_rows(t, i);
                u.swap_rows(t, i);
                continue;
            }
            // Clear the pivot row with column operations.
            for j in t + 1..n {
                if d.at(t, j).is_zero() {
                    continue;
                }
                let q = div_nearest(d.at(t, j), d.at(t, t));
                if !q.is_zero() {
                    d.col_sub_mul(j, t, &q);
                    v.col_sub_mul(j, t, &q);
                }
            }
            let mut leftover_col: Option<usize> = None;
            for j in t + 1..n {
                if d.at(t, j).is_zero() {
                    continue;
                }
                match leftover_col {
                    Some(b) if d.at(t, b).magnitude() <= d.at(t, j).magnitude() => {}
                    _ => leftover_col = Some(j),
                }
            }
            if let Some(j) = leftover_col {
                d.swap_cols(t, j);
                v.swap_cols(t, j);
                continue; // the column may be dirty again; re-run
            }
            // Row and column are clear; force the pivot to divide the
            // trailing block so the diagonal chain holds.
            let pivot = d.at(t, t).clone();
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !d.at(i, j).mod_floor(&pivot).is_zero());
            match offender {
                Some((i, _)) => {
                    d.row_add(t, i);
                    u.row_add(t, i);
                    // The new row entry is not a pivot multiple; the next
                    // round shrinks the pivot strictly, so this terminates.
                }
                None => break,
            }
        }
    }
    for t in 0..steps {
        if d.at(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { u, d, v }
}

fn pivot_position(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            if d.at(i, j).is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if d.at(bi, bj).magnitude() <= d.at(i, j).magnitude() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntMatrix) -> BigInt {
    assert!(a.is_square(), "determinant needs a square matrix");
    let n = a.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m.at(k, k).is_zero() {
            match (k + 1..n).find(|&i| !m.at(i, k).is_zero()) {
                Some(i) => {
                    m.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)).div_floor(&prev);
                m.set(i, j, x);
            }
            m.set(i, k, BigInt::zero());
        }
        prev = m.at(k, k).clone();
    }
    let det = m.at(n - 1, n - 1).clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// One integer solution of `a * x = b`, or `None` when the system has no
/// integral solution. Deterministic: the particular solution produced by the
/// Smith reduction with all free coordinates set to zero.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    SnfSolver::new(a).solve(b)
}

/// Reusable solver for repeated right-hand sides against one matrix.
pub struct SnfSolver {
    smith: Smith,
    rank: usize,
}

impl SnfSolver {
    pub fn new(a: &IntMatrix) -> Self {
        let smith = smith_normal_form(a);
        let rank = smith.rank();
        SnfSolver { smith, rank }
    }

    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let m = self.smith.u.cols();
        let n = self.smith.v.rows();
        assert_eq!(b.len(), m, "rhs length must equal rows");
        let ub = self.smith.u.apply(b);
        let mut y = vec![BigInt::zero(); n];
        for (i, ubi) in ub.iter().enumerate() {
            if i < self.rank {
                let (q, r) = ubi.div_rem(self.smith.d.at(i, i));
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !ubi.is_zero() {
                return None;
            }
        }
        Some(self.smith.v.apply(&y))
    }
}

/// Basis of the integer kernel of `a`: the columns of `v` matched to zero
/// diagonal positions of the Smith form.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let smith = smith_normal_form(a);
    let rank = smith.rank();
    (rank..a.cols()).map(|j| smith.v.column(j)).collect()
}

/// Column-style Hermite normal form: unique echelon basis of the column span.
/// Pivots are positive, strictly descending in row position, and every entry
/// left of a pivot in its row is reduced into `[0, pivot)`. Zero columns are
/// dropped.
pub fn column_hermite(a: &IntMatrix) -> IntMatrix {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut c = 0; // next pivot column slot
    for r in 0..rows {
        if c == cols {
            break;
        }
        // Use column operations to collect gcd of row r over columns >= c.
        while let Some(j) = min_by_magnitude(&m, r, c) {
            m.swap_cols(c, j);
            if m.at(r, c).is_negative() {
                for i in 0..rows {
                    let x = -m.at(i, c).clone();
                    m.set(i, c, x);
                }
            }
            let mut done = true;
            for j2 in c + 1..cols {
                if m.at(r, j2).is_zero() {
                    continue;
                }
                let q = div_nearest(m.at(r, j2), m.at(r, c));
                m.col_sub_mul(j2, c, &q);
                if !m.at(r, j2).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m.at(r, c).is_zero() {
            continue; // row r has no pivot; stay on slot c
        }
        // Reduce earlier pivot columns at row r into [0, pivot).
        let pivot = m.at(r, c).clone();
        for j in 0..c {
            let q = m.at(r, j).div_floor(&pivot);
            if !q.is_zero() {
                m.col_sub_mul(j, c, &q);
            }
        }
        c += 1;
    }
    // Keep the first c columns (the rest are zero), in pivot-row order.
    let keep: Vec<Vec<BigInt>> = (0..c).map(|j| m.column(j)).collect();
    IntMatrix::from_columns(rows, &keep)
}

fn min_by_magnitude(m: &IntMatrix, r: usize, c: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for j in c..m.cols() {
        if m.at(r, j).is_zero() {
            continue;
        }
        match best {
            Some(b) if m.at(r, b).magnitude() <= m.at(r, j).magnitude() => {}
            _ => best = Some(j),
        }
    }
    best
}
