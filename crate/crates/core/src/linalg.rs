//! Dense exact linear algebra over the rationals.
//!
//! Elimination never touches floating point. Rows are cleared of denominators
//! and reduced over the integers: determinants use Bareiss' fraction-free
//! scheme, echelon forms divide each updated row by its content. Pivoting is
//! leftmost-greedy everywhere so column selections are reproducible.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Row-major dense matrix of rationals.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<String>,
}

impl TryFrom<MatrixRepr> for Matrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        let entries = repr.entries.iter().map(|e| rational::parse(e)).collect::<Result<Vec<_>>>()?;
        Matrix::new(repr.rows, repr.cols, entries)
    }
}

impl From<Matrix> for MatrixRepr {
    fn from(m: Matrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            entries: m.entries.iter().map(rational::format).collect(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(rational::format).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let nrows = rows.len();
        Matrix::new(nrows, cols, rows.into_iter().flatten().collect())
    }

    /// Builds an `rows x cols.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<Rational>]) -> Result<Self> {
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::Shape(format!("columns must have length {rows}")));
        }
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| rational::from_int(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Submatrix made of the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                m[(r, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::Shape(format!("cannot stack {} rows beside {} rows", self.rows, other.rows)));
        }
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..other.cols {
                m[(r, self.cols + c)] = other[(r, c)].clone();
            }
        }
        Ok(m)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        m[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e * s).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(c, r)] = self[(r, c)].clone();
            }
        }
        m
    }

    /// Rows scaled by the lcm of their denominators, as integers.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| integerize(self.row(r)).1).collect()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.entries[r * self.cols + c]
    }
}

fn integerize(row: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let l = rational::common_denominator(row);
    let ints = row.iter().map(|v| v.numer() * (&l / v.denom())).collect();
    (l, ints)
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// Integer row echelon form with leftmost-greedy pivots.
///
/// Returns the reduced rows (pivot rows first) and the pivot columns. Each
/// pivot column is the leftmost column independent of the columns before it.
fn echelon(mut rows: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..cols {
        if top == rows.len() {
            break;
        }
        let Some(p) = (top..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(top, p);
        let (head, tail) = rows.split_at_mut(top + 1);
        let pivot_row = &head[top];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for j in c..cols {
                row[j] = &row[j] * pivot - &factor * &pivot_row[j];
            }
            make_primitive(row);
        }
        pivots.push(c);
        top += 1;
    }
    (rows, pivots)
}

/// Exact determinant by Bareiss elimination on denominator-cleared rows.
pub fn det(m: &Matrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|r| {
            let (l, ints) = integerize(m.row(r));
            scale *= l;
            ints
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                debug_assert!((&v % &prev).is_zero());
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(Rational::new(sign * &a[n - 1][n - 1], scale))
}

pub fn rank(m: &Matrix) -> usize {
    echelon(m.integer_rows(), m.cols).1.len()
}

/// Basis of the right kernel, one vector per non-pivot column.
pub fn kernel(m: &Matrix) -> Vec<Vec<Rational>> {
    let (rows, pivots) = echelon(m.integer_rows(), m.cols);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); m.cols];
            x[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate().rev() {
                let s: Rational = (p + 1..m.cols)
                    .filter(|&j| !rows[r][j].is_zero() && !x[j].is_zero())
                    .map(|j| Rational::from_integer(rows[r][j].clone()) * &x[j])
                    .sum();
                x[p] = -s / Rational::from_integer(rows[r][p].clone());
            }
            x
        })
        .collect()
}

/// Leftmost-greedy set of `rank(m)` linearly independent columns, skipping
/// `forbidden`. Fails when the remaining columns cannot reach the full rank.
pub fn select_independent_columns(m: &Matrix, forbidden: &[usize]) -> Result<Vec<usize>> {
    let allowed: Vec<usize> = (0..m.cols).filter(|c| !forbidden.contains(c)).collect();
    let full_rank = rank(m);
    let sub = m.select_columns(&allowed);
    let picks: Vec<usize> = echelon(sub.integer_rows(), sub.cols).1.into_iter().map(|j| allowed[j]).collect();
    if picks.len() < full_rank {
        return Err(Error::RankUnattainable { rank: full_rank });
    }
    Ok(picks)
}

/// Standard-basis indices that extend independent `columns` to a basis of
/// `dim`-space, chosen leftmost-greedy.
pub fn complete_to_basis(columns: &[Vec<Rational>], dim: usize) -> Result<Vec<usize>> {
    let given = Matrix::from_columns(dim, columns)?;
    let aug = given.hstack(&Matrix::identity(dim))?;
    let pivots = echelon(aug.integer_rows(), aug.cols).1;
    let k = columns.len();
    if pivots.iter().take(k).copied().ne(0..k) {
        return Err(Error::DependentColumns);
    }
    Ok(pivots[k..].iter().map(|p| p - k).collect())
}

/// Exact inverse by Gauss-Jordan elimination.
pub fn inverse(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let mut a = m.hstack(&Matrix::identity(n))?;
    for c in 0..n {
        let p = (c..n).find(|&r| !a[(r, c)].is_zero()).ok_or(Error::Singular)?;
        if p != c {
            for j in 0..2 * n {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(c, j)].clone();
                a[(c, j)] = tmp;
            }
        }
        let inv = a[(c, c)].recip();
        for j in 0..2 * n {
            a[(c, j)] = &a[(c, j)] * &inv;
        }
        for r in 0..n {
            if r == c || a[(r, c)].is_zero() {
                continue;
            }
            let f = a[(r, c)].clone();
            for j in 0..2 * n {
                let v = &f * &a[(c, j)];
                a[(r, j)] -= v;
            }
        }
    }
    Ok(a.select_columns(&(n..2 * n).collect::<Vec<_>>()))
}

/// Solves `a x = b` exactly when the system is consistent with full column rank.
pub fn solve(a: &Matrix, b: &[Rational]) -> Result<Vec<Rational>> {
    if b.len() != a.rows {
        return Err(Error::Shape(format!("right-hand side of length {} for {} rows", b.len(), a.rows)));
    }
    let rhs = Matrix::from_columns(a.rows, &[b.to_vec()])?;
    let aug = a.hstack(&rhs)?;
    let n = a.cols;
    let (rows, pivots) = echelon(aug.integer_rows(), aug.cols);
    if pivots.last() == Some(&n) {
        return Err(Error::Inconsistent);
    }
    if pivots.len() < n {
        return Err(Error::Underdetermined { rank: pivots.len(), unknowns: n });
    }
    let mut x = vec![Rational::zero(); n];
    for r in (0..n).rev() {
        let s: Rational = (r + 1..n)
            .filter(|&j| !rows[r][j].is_zero())
            .map(|j| Rational::from_integer(rows[r][j].clone()) * &x[j])
            .sum();
        x[r] = (Rational::from_integer(rows[r][n].clone()) - s) / Rational::from_integer(rows[r][r].clone());
    }
    Ok(x)
}

/// Sign of a permutation given as images of `0..n`.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}
