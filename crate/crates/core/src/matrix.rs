//! Dense matrices over the rationals and the exact decompositions the rest
//! of the crate relies on: reduced row echelon form, nullspace, linear
//! solving, and the signature of a symmetric form.
//!
//! Dimensions in this crate stay at desk scale, so everything is a dense
//! row-major `Vec<Rational>` and pivoting just takes the first nonzero
//! entry — over an exact field there is nothing to gain from magnitude
//! heuristics.

use crate::rational::{render_rational, Rational};
use num::{One, Signed, Zero};
use thiserror::Error;

/// The linear system has no solution: rank of the augmented matrix exceeds
/// the rank of the coefficient matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("linear system is inconsistent")]
pub struct Inconsistent;

/// `signature` requires a symmetric input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("matrix is not symmetric")]
pub struct NotSymmetric;

/// Dense row-major matrix of [`Rational`] entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

/// Result of a reduced row echelon form computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: RatMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows. Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            assert_eq!(row.len(), n_cols, "ragged rows");
            entries.extend(row);
        }
        RatMatrix {
            rows: n_rows,
            cols: n_cols,
            entries,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        RatMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for r in 0..self.rows {
            for c in (r + 1)..self.cols {
                if self.at(r, c) != self.at(c, r) {
                    return false;
                }
            }
        }
        true
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix::from_fn(self.rows, self.cols, |r, c| self.at(r, c) + other.at(r, c))
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix::from_fn(self.rows, self.cols, |r, c| self.at(r, c) - other.at(r, c))
    }

    pub fn neg(&self) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |r, c| -self.at(r, c))
    }

    pub fn scale(&self, factor: &Rational) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |r, c| self.at(r, c) * factor)
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        RatMatrix::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = Rational::zero();
            for k in 0..self.cols {
                acc += self.at(r, k) * other.at(k, c);
            }
            acc
        })
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for (cell, value) in self.row(r).iter().zip(v) {
                    acc += cell * value;
                }
                acc
            })
            .collect()
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &RatMatrix) -> RatMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Row-major flattening, used to treat operators as vectors when
    /// computing spans inside `gl(V)`.
    pub fn vectorize(&self) -> Vec<Rational> {
        self.entries.clone()
    }

    /// Reduced row echelon form with the pivot columns and the rank.
    /// The result is the unique RREF of the matrix.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;

        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            // First nonzero entry at or below pivot_row.
            let found = (pivot_row..m.rows).find(|&r| !m.at(r, col).is_zero());
            let row = match found {
                Some(r) => r,
                None => continue,
            };
            m.swap_rows(pivot_row, row);

            let inv = m.at(pivot_row, col).recip();
            m.scale_row(pivot_row, &inv);

            for r in 0..m.rows {
                if r != pivot_row && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    m.sub_scaled_row(r, pivot_row, &factor);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }

        let rank = pivots.len();
        Rref {
            matrix: m,
            pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Canonical nullspace basis read off the RREF: one vector per free
    /// column (ascending), with a 1 in the free position.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let Rref { matrix, pivots, .. } = self.rref();
        let mut basis = Vec::new();
        let mut pivot_iter = pivots.iter().copied().peekable();
        let mut free_cols = Vec::new();
        for col in 0..self.cols {
            if pivot_iter.peek() == Some(&col) {
                pivot_iter.next();
            } else {
                free_cols.push(col);
            }
        }
        for &free in &free_cols {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -matrix.at(row, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Any particular solution of `self * x = b` (free variables at zero),
    /// or `Inconsistent` when none exists.
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>, Inconsistent> {
        assert_eq!(self.rows, b.len(), "dimension mismatch in solve");
        let mut aug = RatMatrix::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                b[r].clone()
            }
        });
        let reduced = {
            let m = std::mem::replace(&mut aug, RatMatrix::zero(0, 0));
            m.rref()
        };
        if reduced.pivots.last() == Some(&self.cols) {
            return Err(Inconsistent);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &pc) in reduced.pivots.iter().enumerate() {
            x[pc] = reduced.matrix.at(row, self.cols).clone();
        }
        Ok(x)
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = RatMatrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.at(r, c).clone()
            } else if c - n == r {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let reduced = aug.rref();
        if reduced.rank < n || reduced.pivots.iter().take(n).copied().ne(0..n) {
            return None;
        }
        Some(RatMatrix::from_fn(n, n, |r, c| {
            reduced.matrix.at(r, n + c).clone()
        }))
    }

    /// Inertia `(positive, negative, zero)` of a symmetric matrix, computed
    /// by congruence diagonalization. When no nonzero diagonal pivot is
    /// available but some off-diagonal entry is nonzero, the row and column
    /// of that entry are added into its partner first (the standard repair,
    /// valid in characteristic zero). The result is basis-independent by
    /// Sylvester's law of inertia.
    pub fn signature(&self) -> Result<(usize, usize, usize), NotSymmetric> {
        if !self.is_symmetric() {
            return Err(NotSymmetric);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut k = 0;
        while k < n {
            let diag = (k..n).find(|&i| !m.at(i, i).is_zero());
            let pivot = match diag {
                Some(i) => i,
                None => {
                    // All remaining diagonal entries vanish; look for an
                    // off-diagonal entry to fold onto the diagonal.
                    let mut found = None;
                    'outer: for i in k..n {
                        for j in (i + 1)..n {
                            if !m.at(i, j).is_zero() {
                                found = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    match found {
                        None => break, // remaining block is zero
                        Some((i, j)) => {
                            m.add_row(i, j);
                            m.add_col(i, j);
                            i
                        }
                    }
                }
            };
            if pivot != k {
                m.swap_rows(k, pivot);
                m.swap_cols(k, pivot);
            }
            let pivot_value = m.at(k, k).clone();
            for r in (k + 1)..n {
                if !m.at(r, k).is_zero() {
                    let factor = m.at(r, k) / &pivot_value;
                    m.sub_scaled_row(r, k, &factor);
                    m.sub_scaled_col(r, k, &factor);
                }
            }
            k += 1;
        }
        let mut pos = 0;
        let mut neg = 0;
        let mut zero = 0;
        for i in 0..n {
            let d = m.at(i, i);
            if d.is_zero() {
                zero += 1;
            } else if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
        }
        Ok((pos, neg, zero))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn scale_row(&mut self, r: usize, factor: &Rational) {
        for c in 0..self.cols {
            let v = self.at(r, c) * factor;
            self.set(r, c, v);
        }
    }

    /// `row[dst] -= factor * row[src]`
    fn sub_scaled_row(&mut self, dst: usize, src: usize, factor: &Rational) {
        for c in 0..self.cols {
            let v = self.at(dst, c) - self.at(src, c) * factor;
            self.set(dst, c, v);
        }
    }

    /// `col[dst] -= factor * col[src]`
    fn sub_scaled_col(&mut self, dst: usize, src: usize, factor: &Rational) {
        for r in 0..self.rows {
            let v = self.at(r, dst) - self.at(r, src) * factor;
            self.set(r, dst, v);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize) {
        for c in 0..self.cols {
            let v = self.at(dst, c) + self.at(src, c);
            self.set(dst, c, v);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize) {
        for r in 0..self.rows {
            let v = self.at(r, dst) + self.at(r, src);
            self.set(r, dst, v);
        }
    }
}

/// Incrementally built row space, used to decide whether a vector enlarges
/// a span. Rows are kept forward-reduced with unit leading entries and
/// strictly increasing pivot columns.
#[derive(Debug, Clone)]
pub struct SpanBuilder {
    cols: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl SpanBuilder {
    pub fn new(cols: usize) -> Self {
        SpanBuilder {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after reduction against the stored rows.
    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let factor = v[p].clone();
                for (cell, basis) in v[p..].iter_mut().zip(&row[p..]) {
                    *cell -= basis * &factor;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Rational::is_zero)
    }

    /// Inserts `v`; returns `true` when it enlarged the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let reduced = self.reduce(v);
        let pivot = match reduced.iter().position(|x| !x.is_zero()) {
            Some(p) => p,
            None => return false,
        };
        let inv = reduced[pivot].recip();
        let normalized: Vec<Rational> = reduced.iter().map(|x| x * &inv).collect();
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(at, pivot);
        self.rows.insert(at, normalized);
        true
    }
}

/// Renders a vector as `[a, b, c]` with canonical rational literals.
pub fn render_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(render_rational).collect();
    format!("[{}]", parts.join(", "))
}

/// Renders a matrix as nested rows, `[[a, b], [c, d]]`.
pub fn render_matrix(m: &RatMatrix) -> String {
    let rows: Vec<String> = (0..m.rows()).map(|r| render_vector(m.row(r))).collect();
    format!("[{}]", rows.join(", "))
}

pub fn vec_is_zero(v: &[Rational]) -> bool {
    v.iter().all(Rational::is_zero)
}

/// `dst += factor * src`
pub fn vec_add_scaled(dst: &mut [Rational], src: &[Rational], factor: &Rational) {
    assert_eq!(dst.len(), src.len());
    for (d, s) in dst.iter_mut().zip(src) {
        *d += s * factor;
    }
}
