//! Exact linear algebra over arbitrary-precision rationals.
//!
//! Everything downstream (star operators, cohomology, the dδ-solvers) reduces
//! to kernels, solves and membership tests of sparse rational matrices, so this
//! module is deliberately boring: deterministic first-nonzero pivoting, no
//! magnitude heuristics, exact arithmetic throughout.  Matrices are stored
//! sparsely; small dense work (determinants, the < 64×64 fallback) uses
//! fraction-free Bareiss elimination.

use num::{BigInt, BigRational, One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Rational from a numerator/denominator pair. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    /// `quotient_dim(a, b)` requires a ⊆ b; anything else is a caller bug.
    #[error("claimed subspace is not contained in the ambient subspace")]
    NotASubspace,
}

/// Which end of the column order the eliminator prefers when choosing pivots.
///
/// Both orders are exact and deterministic; they differ only in which solution
/// a rank-deficient `solve` returns.  Running a computation under both orders
/// is how callers certify that a result does not depend on the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotOrder {
    Forward,
    Backward,
}

type SparseVec = BTreeMap<usize, Rational>;

/// Sparse rational matrix.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = RatMatrix::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged row");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Build a matrix column-by-column (the natural shape for operator matrices).
    pub fn from_columns(cols: Vec<Vec<Rational>>, rows: usize) -> Self {
        let c = cols.len();
        let mut m = RatMatrix::zero(rows, c);
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged column");
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
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

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rational::zero)
    }

    fn sparse_rows(&self) -> Vec<SparseVec> {
        let mut out = vec![SparseVec::new(); self.rows];
        for ((r, c), v) in &self.entries {
            out[*r].insert(*c, v.clone());
        }
        out
    }

    fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for ((r, c), v) in &self.entries {
            out[*r][*c] = v.clone();
        }
        out
    }

    /// Rank. Dense Bareiss below the 64×64 fallback threshold, sparse
    /// elimination above it; the two paths agree (property-tested).
    pub fn rank(&self) -> usize {
        if self.rows < 64 && self.cols < 64 {
            bareiss_rank(self.to_dense())
        } else {
            let order: Vec<usize> = (0..self.cols).collect();
            Rref::compute(self.sparse_rows(), &order).pivots.len()
        }
    }

    /// Basis of the right kernel: all x with M·x = 0.
    ///
    /// Deterministic: pivot columns are chosen first-nonzero in ascending
    /// column order, and each free column contributes one basis vector.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let order: Vec<usize> = (0..self.cols).collect();
        let rref = Rref::compute(self.sparse_rows(), &order);
        rref.kernel(self.cols)
    }

    /// A particular solution x of M·x = b, or `None` when b is outside the
    /// column space.  Free variables are set to zero; `order` decides which
    /// columns become free when the system is underdetermined.
    pub fn solve(&self, b: &[Rational], order: PivotOrder) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let col_order: Vec<usize> = match order {
            PivotOrder::Forward => (0..self.cols).collect(),
            PivotOrder::Backward => (0..self.cols).rev().collect(),
        };
        // Eliminate [M | b] with b pinned after every real column.
        let bcol = self.cols;
        let mut rows = self.sparse_rows();
        for (i, v) in b.iter().enumerate() {
            if !v.is_zero() {
                rows[i].insert(bcol, v.clone());
            }
        }
        let mut full_order = col_order;
        full_order.push(bcol);
        let rref = Rref::compute(rows, &full_order);
        if rref.pivots.iter().any(|(c, _)| *c == bcol) {
            return None; // b is independent of the columns: no solution
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (c, row) in &rref.pivots {
            // Reduced pivot rows read "x_c + Σ free-terms = rhs"; with free
            // variables zero the solution is just the rhs entry.
            x[*c] = row.get(&bcol).cloned().unwrap_or_else(Rational::zero);
        }
        Some(x)
    }

    /// Determinant of a square matrix (fraction-free Bareiss).
    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        bareiss_det(self.to_dense())
    }
}

/// Reduced row echelon form of a sparse row list under a given column order.
struct Rref {
    /// (pivot column, fully reduced row with pivot entry 1), insertion order.
    pivots: Vec<(usize, SparseVec)>,
}

impl Rref {
    fn compute(mut rows: Vec<SparseVec>, col_order: &[usize]) -> Self {
        let mut pivots: Vec<(usize, SparseVec)> = Vec::new();
        for &col in col_order {
            // First remaining row (ascending index) with a nonzero in `col`.
            let Some(pos) = rows.iter().position(|r| r.contains_key(&col)) else {
                continue;
            };
            let mut pivot_row = rows.swap_remove(pos);
            let inv = {
                let p = &pivot_row[&col];
                p.recip()
            };
            for v in pivot_row.values_mut() {
                *v = &*v * &inv;
            }
            for row in rows.iter_mut() {
                eliminate(row, col, &pivot_row);
            }
            for (_, prow) in pivots.iter_mut() {
                eliminate(prow, col, &pivot_row);
            }
            pivots.push((col, pivot_row));
        }
        Rref { pivots }
    }

    fn kernel(&self, cols: usize) -> Vec<Vec<Rational>> {
        let pivot_cols: Vec<usize> = self.pivots.iter().map(|(c, _)| *c).collect();
        let mut out = Vec::new();
        for free in 0..cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (c, row) in &self.pivots {
                if let Some(coef) = row.get(&free) {
                    v[*c] = -coef.clone();
                }
            }
            out.push(v);
        }
        out
    }
}

fn eliminate(row: &mut SparseVec, col: usize, pivot_row: &SparseVec) {
    let Some(factor) = row.get(&col).cloned() else { return };
    for (c, v) in pivot_row {
        let cur = row.get(c).cloned().unwrap_or_else(Rational::zero);
        let next = cur - &factor * v;
        if next.is_zero() {
            row.remove(c);
        } else {
            row.insert(*c, next);
        }
    }
}

/// Fraction-free Bareiss elimination; returns the rank.
fn bareiss_rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = Rational::one();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(pos) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, pos);
        let piv = m[pivot_row][col].clone();
        for r in 0..rows {
            if r == pivot_row {
                continue;
            }
            for c in 0..cols {
                if c == col {
                    continue;
                }
                let v = (&piv * &m[r][c] - &m[r][col] * &m[pivot_row][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = Rational::zero();
        }
        prev = piv;
        pivot_row += 1;
    }
    pivot_row
}

/// Fraction-free Bareiss determinant of a dense square matrix.
fn bareiss_det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut prev = Rational::one();
    let mut sign = Rational::one();
    for col in 0..n {
        let Some(pos) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pos != col {
            m.swap(col, pos);
            sign = -sign;
        }
        let piv = m[col][col].clone();
        for r in (col + 1)..n {
            for c in (col + 1)..n {
                m[r][c] = (&piv * &m[r][c] - &m[r][col] * &m[col][c]) / &prev;
            }
            m[r][col] = Rational::zero();
        }
        prev = piv;
    }
    sign * m[n - 1][n - 1].clone()
}

/// A linear subspace of Q^ambient, kept as a reduced (RREF) basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    /// Reduced basis rows; pairwise distinct pivot columns, pivot entries 1.
    basis: Vec<(usize, SparseVec)>,
}

impl Subspace {
    pub fn empty(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    /// Span of the given vectors.
    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<Rational>>) -> Self {
        let mut s = Subspace::empty(ambient);
        for v in vectors {
            s.insert(&v);
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Reduce `v` against the stored basis; the residual is zero exactly when
    /// v lies in the span.
    fn residual(&self, v: &[Rational]) -> SparseVec {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        let mut row: SparseVec =
            v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
        for (c, b) in &self.basis {
            eliminate(&mut row, *c, b);
        }
        row
    }

    /// Add `v` to the span; returns `true` when it enlarged the subspace.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut row = self.residual(v);
        let Some((&col, _)) = row.iter().next() else { return false };
        let inv = row[&col].recip();
        for x in row.values_mut() {
            *x = &*x * &inv;
        }
        for (_, b) in self.basis.iter_mut() {
            eliminate(b, col, &row);
        }
        self.basis.push((col, row));
        self.basis.sort_by_key(|(c, _)| *c);
        true
    }

    /// Exact membership test.
    pub fn contains(&self, v: &[Rational]) -> bool {
        self.residual(v).is_empty()
    }

    /// Does this subspace contain every basis vector of `other`?
    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|(_, row)| {
            let dense = sparse_to_dense(row, self.ambient);
            self.contains(&dense)
        })
    }

    /// Dense copies of the reduced basis vectors.
    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.iter().map(|(_, row)| sparse_to_dense(row, self.ambient)).collect()
    }

    /// Dimension of big/small. `small` must be contained in `big`.
    pub fn quotient_dim(small: &Subspace, big: &Subspace) -> Result<usize, LinalgError> {
        if small.ambient != big.ambient {
            return Err(LinalgError::ShapeMismatch { expected: big.ambient, got: small.ambient });
        }
        if !big.contains_subspace(small) {
            return Err(LinalgError::NotASubspace);
        }
        Ok(big.dim() - small.dim())
    }
}

fn sparse_to_dense(row: &SparseVec, len: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    for (c, x) in row {
        v[*c] = x.clone();
    }
    v
}
