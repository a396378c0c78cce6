//! Bounded complexes of based vector spaces and their torsion.
//!
//! A [`BasedComplex`] is `0 -> E^0 -> E^1 -> ... -> E^{n+1} -> 0` with every
//! `E^i = Q^{r_i}` carrying its standard basis and `d_i` stored as an
//! `r_{i+1} x r_i` matrix.
//!
//! For an exact complex, write `k_i = rank(d_i)` and pick for each term a
//! family `S_i` of `k_i` vectors whose images `d_i S_i` are independent. Then
//! `M_i = [d_{i-1} S_{i-1} | S_i]` is an invertible `r_i x r_i` matrix (with
//! `M_0 = S_0` and `M_{n+1} = d_n S_n`) and the torsion is
//!
//! ```text
//! tor^{(-1)^n} = prod_{i=0}^{n+1} det(M_i)^{(-1)^{i+1}}
//! ```
//!
//! which does not depend on the `S_i`. [`torsion`] fixes `S_0` to the
//! standard basis and completes each image with leftmost-greedy standard basis
//! vectors; [`torsion_with`] accepts arbitrary choices.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ComplexRepr", into = "ComplexRepr")]
pub struct BasedComplex {
    dims: Vec<usize>,
    boundaries: Vec<Matrix>,
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    dims: Vec<usize>,
    boundaries: Vec<Matrix>,
}

impl TryFrom<ComplexRepr> for BasedComplex {
    type Error = Error;

    fn try_from(repr: ComplexRepr) -> Result<Self> {
        BasedComplex::new(repr.dims, repr.boundaries)
    }
}

impl From<BasedComplex> for ComplexRepr {
    fn from(c: BasedComplex) -> Self {
        ComplexRepr { dims: c.dims, boundaries: c.boundaries }
    }
}

impl BasedComplex {
    /// Checks that there is one boundary between each pair of consecutive
    /// terms and that `d_i` has shape `r_{i+1} x r_i`.
    pub fn new(dims: Vec<usize>, boundaries: Vec<Matrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Shape("a complex needs at least one term".into()));
        }
        if boundaries.len() + 1 != dims.len() {
            return Err(Error::Shape(format!(
                "{} terms need {} boundaries, got {}",
                dims.len(),
                dims.len() - 1,
                boundaries.len()
            )));
        }
        for (i, d) in boundaries.iter().enumerate() {
            if d.rows() != dims[i + 1] || d.cols() != dims[i] {
                return Err(Error::Shape(format!(
                    "boundary {i} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        Ok(BasedComplex { dims, boundaries })
    }

    /// Two-term complex `0 -> Q^c -> Q^r -> 0`.
    pub fn two_term(d: Matrix) -> Self {
        BasedComplex { dims: vec![d.cols(), d.rows()], boundaries: vec![d] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundaries(&self) -> &[Matrix] {
        &self.boundaries
    }

    /// Index of the last boundary, the `n` in `E^{n+1}`; `None` for a single term.
    pub fn top_index(&self) -> Option<usize> {
        self.boundaries.len().checked_sub(1)
    }

    /// Multiplies every boundary by `mu`.
    pub fn scaled(&self, mu: &Rational) -> BasedComplex {
        BasedComplex { dims: self.dims.clone(), boundaries: self.boundaries.iter().map(|d| d.scale(mu)).collect() }
    }

    /// Re-expresses term `i` in the basis given by the columns of `t`
    /// (new basis vector `j` is `sum_k t[k][j] e_k`).
    pub fn change_basis(&self, i: usize, t: &Matrix) -> Result<BasedComplex> {
        if i >= self.dims.len() || t.rows() != self.dims[i] || !t.is_square() {
            return Err(Error::Shape(format!("basis change for term {i} must be {0}x{0}", self.dims[i.min(self.dims.len() - 1)])));
        }
        let t_inv = linalg::inverse(t)?;
        let mut boundaries = self.boundaries.clone();
        if i > 0 {
            boundaries[i - 1] = t_inv.mul(&boundaries[i - 1])?;
        }
        if i < boundaries.len() {
            boundaries[i] = boundaries[i].mul(t)?;
        }
        BasedComplex::new(self.dims.clone(), boundaries)
    }
}

/// One factor `det(M_i)^{exponent}` of the torsion product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionFactor {
    pub term: usize,
    #[serde(with = "rational::serde_str")]
    pub det: Rational,
    pub exponent: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionResult {
    /// The torsion, already raised to `(-1)^n`.
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    /// Index of the last boundary; the audit product equals `value^{(-1)^n}`.
    pub n: usize,
    pub factors: Vec<TorsionFactor>,
}

impl TorsionResult {
    /// Recomputes `prod det(M_i)^{exponent}` from the audit log.
    pub fn audit_product(&self) -> Rational {
        self.factors.iter().fold(Rational::one(), |acc, f| acc * rational::pow(&f.det, f.exponent as i64))
    }
}

/// True iff `d_{i+1} d_i = 0` for every consecutive pair.
pub fn is_complex(c: &BasedComplex) -> bool {
    first_noncomposing(c).is_none()
}

fn first_noncomposing(c: &BasedComplex) -> Option<usize> {
    c.boundaries.windows(2).position(|w| !w[1].mul(&w[0]).expect("shapes checked at construction").is_zero())
}

fn boundary_ranks(c: &BasedComplex) -> Vec<usize> {
    c.boundaries.iter().map(linalg::rank).collect()
}

fn first_inexact(c: &BasedComplex, ranks: &[usize]) -> Option<usize> {
    (0..c.dims.len()).find(|&i| {
        let incoming = if i == 0 { 0 } else { ranks[i - 1] };
        let outgoing = ranks.get(i).copied().unwrap_or(0);
        incoming + outgoing != c.dims[i]
    })
}

/// Acyclicity test: `rank(d_{i-1}) + rank(d_i) = r_i` at every term.
pub fn is_exact(c: &BasedComplex) -> Result<bool> {
    if let Some(i) = first_noncomposing(c) {
        return Err(Error::NotAComplex(i));
    }
    Ok(first_inexact(c, &boundary_ranks(c)).is_none())
}

/// Torsion with the deterministic choice: `S_0` is the standard basis of
/// `E^0`, and each later `S_i` is the leftmost-greedy set of standard basis
/// vectors completing the image `d_{i-1} S_{i-1}`.
pub fn torsion(c: &BasedComplex) -> Result<TorsionResult> {
    torsion_with(c, |_, image, _| {
        let dim = image.rows();
        let cols: Vec<Vec<Rational>> = (0..image.cols()).map(|j| image.column(j)).collect();
        let picks = linalg::complete_to_basis(&cols, dim)?;
        Ok(Matrix::identity(dim).select_columns(&picks))
    })
}

/// Torsion with caller-supplied choices.
///
/// `choose(i, image, k_i)` receives the `r_i x k_{i-1}` matrix `d_{i-1} S_{i-1}`
/// (empty for `i = 0`) and returns `S_i` as an `r_i x k_i` matrix. A choice
/// that leaves `M_i` singular is rejected with [`Error::InvalidChoice`].
pub fn torsion_with<F>(c: &BasedComplex, mut choose: F) -> Result<TorsionResult>
where
    F: FnMut(usize, &Matrix, usize) -> Result<Matrix>,
{
    if c.dims.first() == Some(&0) || c.dims.last() == Some(&0) {
        return Err(Error::ZeroEdgeTerm);
    }
    if let Some(i) = first_noncomposing(c) {
        return Err(Error::NotAComplex(i));
    }
    let ranks = boundary_ranks(c);
    if let Some(i) = first_inexact(c, &ranks) {
        return Err(Error::NotExact(i));
    }
    // A single nonzero term is never exact, so there is at least one boundary.
    let n = c.boundaries.len() - 1;

    let mut factors = Vec::with_capacity(n + 2);
    let mut image = Matrix::zeros(c.dims[0], 0);
    for i in 0..=n + 1 {
        let kappa = ranks.get(i).copied().unwrap_or(0);
        let s = choose(i, &image, kappa)?;
        if s.rows() != c.dims[i] || s.cols() != kappa {
            return Err(Error::InvalidChoice(i));
        }
        let block = image.hstack(&s)?;
        let d = linalg::det(&block)?;
        if d.is_zero() {
            return Err(Error::InvalidChoice(i));
        }
        factors.push(TorsionFactor { term: i, det: d, exponent: if i % 2 == 0 { -1 } else { 1 } });
        if i <= n {
            image = c.boundaries[i].mul(&s)?;
        }
    }

    let product = factors.iter().fold(Rational::one(), |acc, f| acc * rational::pow(&f.det, f.exponent as i64));
    let value = if n.is_multiple_of(2) { product } else { product.recip() };
    Ok(TorsionResult { value, n, factors })
}

/// Drops zero-dimensional terms from both ends.
///
/// Dropping a leading zero term leaves the torsion unchanged; dropping a
/// trailing one inverts it, since the top index `n` loses one unit of parity.
pub fn trim(c: &BasedComplex) -> Result<BasedComplex> {
    let first = c.dims.iter().position(|&r| r != 0).ok_or(Error::AllTermsZero)?;
    let last = c.dims.iter().rposition(|&r| r != 0).expect("some term is nonzero");
    Ok(BasedComplex {
        dims: c.dims[first..=last].to_vec(),
        boundaries: c.boundaries[first..last].to_vec(),
    })
}

/// Degree of the torsion as a function of the boundaries:
/// `(-1)^{n+1} sum_i (-1)^i i r_i`, so `tor(mu d) = mu^e tor(d)`.
pub fn scaling_exponent(dims: &[usize]) -> i64 {
    let s: i64 = dims.iter().enumerate().map(|(i, &r)| if i % 2 == 0 { 1 } else { -1 } * (i * r) as i64).sum();
    // dims.len() = n + 2, so (-1)^{n+1} = (-1)^{len - 1}.
    if dims.len().is_multiple_of(2) { -s } else { s }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_frac, from_int};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(rows).unwrap()
    }

    fn short_exact(d1: &[&[i64]]) -> BasedComplex {
        BasedComplex::new(vec![1, 2, 1], vec![m(&[&[1], &[0]]), m(d1)]).unwrap()
    }

    #[test]
    fn composition_check() {
        assert!(is_complex(&short_exact(&[&[0, 1]])));
        assert!(!is_complex(&short_exact(&[&[1, 0]])));
        assert!(is_complex(&BasedComplex::two_term(m(&[&[3]]))));
        assert!(matches!(is_exact(&short_exact(&[&[1, 0]])), Err(Error::NotAComplex(0))));
    }

    #[test]
    fn shapes_are_validated() {
        assert!(BasedComplex::new(vec![1, 2], vec![m(&[&[1, 0]])]).is_err());
        assert!(BasedComplex::new(vec![1, 2, 1], vec![m(&[&[1], &[0]])]).is_err());
        assert!(BasedComplex::new(vec![], vec![]).is_err());
    }

    #[test]
    fn exactness_examples() {
        assert!(is_exact(&short_exact(&[&[0, 1]])).unwrap());
        assert!(!is_exact(&BasedComplex::two_term(m(&[&[0]]))).unwrap());
        assert!(is_exact(&BasedComplex::two_term(m(&[&[5]]))).unwrap());
        assert!(!is_exact(&BasedComplex::new(vec![1], vec![]).unwrap()).unwrap());
        assert!(is_exact(&BasedComplex::new(vec![0], vec![]).unwrap()).unwrap());
    }

    #[test]
    fn torsion_examples() {
        for c in [-3i64, 1, 7] {
            let t = torsion(&BasedComplex::two_term(m(&[&[c]]))).unwrap();
            assert_eq!(t.value, from_int(c));
        }
        let t = torsion(&short_exact(&[&[0, 1]])).unwrap();
        assert_eq!(t.value, from_int(1));
        assert_eq!(t.n, 1);
        let t = torsion(&BasedComplex::two_term(m(&[&[2, 5], &[3, 4]]))).unwrap();
        assert_eq!(t.value, from_int(2 * 4 - 5 * 3));
    }

    #[test]
    fn torsion_of_scaled_short_exact_sequence() {
        // 0 -> Q -(a,b)^T-> Q^2 -(c,d)-> Q -> 0 with ac + bd = 0 and b != 0.
        // Greedy: M_1 = [[a,1],[b,0]], M_2 = [c], so tor^{-1} = -b / c.
        let c = BasedComplex::new(vec![1, 2, 1], vec![m(&[&[2], &[3]]), m(&[&[-3, 2]])]).unwrap();
        assert_eq!(torsion(&c).unwrap().value, from_int(1));
        let c = BasedComplex::new(vec![1, 2, 1], vec![m(&[&[6], &[3]]), m(&[&[-1, 2]])]).unwrap();
        assert_eq!(torsion(&c).unwrap().value, from_frac(2, 6));
        assert_eq!(torsion(&c).unwrap().audit_product(), from_int(3));
    }

    #[test]
    fn torsion_errors() {
        assert!(matches!(torsion(&BasedComplex::two_term(m(&[&[0]]))), Err(Error::NotExact(0))));
        let padded = BasedComplex::new(vec![0, 1, 1], vec![Matrix::zeros(1, 0), m(&[&[2]])]).unwrap();
        assert!(matches!(torsion(&padded), Err(Error::ZeroEdgeTerm)));
        assert_eq!(torsion(&trim(&padded).unwrap()).unwrap().value, from_int(2));
    }

    #[test]
    fn invalid_choices_are_rejected() {
        let c = BasedComplex::two_term(m(&[&[1, 0], &[0, 1]]));
        let r = torsion_with(&c, |_, _, _| Ok(Matrix::zeros(2, 2)));
        assert!(matches!(r, Err(Error::InvalidChoice(0))));
    }

    #[test]
    fn trim_examples() {
        let c = BasedComplex::new(vec![0, 2, 2], vec![Matrix::zeros(2, 0), Matrix::identity(2)]).unwrap();
        assert_eq!(trim(&c).unwrap().dims(), &[2, 2]);
        let c = BasedComplex::new(
            vec![2, 2, 0, 0],
            vec![Matrix::identity(2), Matrix::zeros(0, 2), Matrix::zeros(0, 0)],
        )
        .unwrap();
        assert_eq!(trim(&c).unwrap().dims(), &[2, 2]);
        let c = short_exact(&[&[0, 1]]);
        assert_eq!(trim(&c).unwrap(), c);
        let z = BasedComplex::new(vec![0, 0], vec![Matrix::zeros(0, 0)]).unwrap();
        assert!(matches!(trim(&z), Err(Error::AllTermsZero)));
    }

    #[test]
    fn trailing_trim_flips_exponent() {
        let c = BasedComplex::new(vec![1, 1, 0], vec![m(&[&[5]]), Matrix::zeros(0, 1)]).unwrap();
        let trimmed = torsion(&trim(&c).unwrap()).unwrap();
        assert_eq!(trimmed.value, from_int(5));
        assert_eq!(scaling_exponent(c.dims()), -scaling_exponent(trim(&c).unwrap().dims()));
    }

    #[test]
    fn scaling_exponent_examples() {
        assert_eq!(scaling_exponent(&[1, 1]), 1);
        assert_eq!(scaling_exponent(&[1, 2, 1]), 0);
        assert_eq!(scaling_exponent(&[2, 2]), 2);
        // Leading zero terms do not change the exponent of an exact complex.
        assert_eq!(scaling_exponent(&[0, 2, 2]), 2);
    }

    #[test]
    fn scaling_law_small() {
        let c = BasedComplex::new(vec![1, 3, 3, 1], vec![
            m(&[&[1], &[2], &[0]]),
            m(&[&[2, -1, 0], &[0, 0, 1], &[0, 0, 0]]),
            m(&[&[0, 0, 5]]),
        ]);
        // d_1 d_0 = (0, 0, 0) and d_2 d_1 = 0, ranks 1, 2, 1.
        let c = c.unwrap();
        assert!(is_exact(&c).unwrap());
        let base = torsion(&c).unwrap().value;
        for mu in [from_int(2), from_int(-3), from_frac(1, 2)] {
            let scaled = torsion(&c.scaled(&mu)).unwrap().value;
            assert_eq!(scaled, rational::pow(&mu, scaling_exponent(c.dims())) * &base);
        }
    }

    #[test]
    fn json_round_trip() {
        let c = short_exact(&[&[0, 1]]);
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.starts_with(r#"{"dims":[1,2,1],"boundaries":[{"rows":2,"cols":1"#));
        let back: BasedComplex = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<BasedComplex>(r#"{"dims":[1,2],"boundaries":[]}"#).is_err());
    }
}
