//! Resultants, discriminants and Chow forms.
//!
//! The resultant of `n+1` forms on `P^n` is the torsion of their graded Koszul
//! complex at the Macaulay bound. It vanishes exactly when the forms share a
//! projective zero, in which case the complex is not exact and we report 0.
//! The Sylvester determinant is kept as an independent route for `n = 1`.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::complexes;
use crate::error::{Error, Result};
use crate::koszul::{self, KoszulSpec};
use crate::linalg::{self, Matrix};
use crate::poly::{monomial_basis, ExponentVector, MultiPoly};
use crate::rational::{self, Rational};

/// `n+1` homogeneous forms in `n+1` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormSystem {
    n: usize,
    forms: Vec<MultiPoly>,
    degrees: Vec<u32>,
}

impl FormSystem {
    /// Degrees are read off the forms, which must be nonzero, homogeneous and
    /// of positive degree.
    pub fn new(n: usize, forms: Vec<MultiPoly>) -> Result<Self> {
        let degrees = forms
            .iter()
            .map(|f| {
                if f.is_zero() {
                    return Err(Error::ZeroPolynomial);
                }
                match f.is_homogeneous() {
                    None => Err(Error::NotHomogeneous),
                    Some(0) => Err(Error::DegreeMismatch("forms must have positive degree".into())),
                    Some(d) => Ok(d),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        FormSystem::with_degrees(n, forms, degrees)
    }

    /// Explicit degrees; zero forms are accepted here and make the resultant vanish.
    pub fn with_degrees(n: usize, forms: Vec<MultiPoly>, degrees: Vec<u32>) -> Result<Self> {
        if forms.len() != n + 1 || degrees.len() != n + 1 {
            return Err(Error::DegreeMismatch(format!(
                "need {} forms and degrees for n = {n}, got {} and {}",
                n + 1,
                forms.len(),
                degrees.len()
            )));
        }
        for (i, (f, &d)) in forms.iter().zip(&degrees).enumerate() {
            if f.var_count() != n + 1 {
                return Err(Error::Shape(format!("form {i} has {} variables, expected {}", f.var_count(), n + 1)));
            }
            if d == 0 {
                return Err(Error::DegreeMismatch("forms must have positive degree".into()));
            }
            match f.is_homogeneous() {
                _ if f.is_zero() => {}
                Some(e) if e == d => {}
                Some(e) => return Err(Error::DegreeMismatch(format!("form {i} has degree {e}, expected {d}"))),
                None => return Err(Error::NotHomogeneous),
            }
        }
        Ok(FormSystem { n, forms, degrees })
    }

    /// Parses `"f0; f1; ..."` in `n+1` variables.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let forms =
            text.split(';').map(|t| MultiPoly::parse(t, Some(n + 1))).collect::<Result<Vec<_>>>()?;
        FormSystem::new(n, forms)
    }

    /// Builds the system whose coefficients, laid out as in [`coefficient_layout`], are `coeffs`.
    pub fn from_coefficients(n: usize, degrees: &[u32], coeffs: &[Rational]) -> Result<Self> {
        let layout = coefficient_layout(n, degrees);
        let total: usize = layout.iter().map(Vec::len).sum();
        if coeffs.len() != total {
            return Err(Error::Shape(format!("{} coefficients given, layout has {total}", coeffs.len())));
        }
        let mut it = coeffs.iter();
        let forms = layout
            .iter()
            .map(|mons| {
                MultiPoly::from_terms(n + 1, mons.iter().map(|e| (e.clone(), it.next().expect("length checked").clone())))
            })
            .collect::<Result<Vec<_>>>()?;
        FormSystem::with_degrees(n, forms, degrees.to_vec())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn forms(&self) -> &[MultiPoly] {
        &self.forms
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Coefficients in the layout of [`coefficient_layout`].
    pub fn coefficients(&self) -> Vec<Rational> {
        coefficient_layout(self.n, &self.degrees)
            .iter()
            .zip(&self.forms)
            .flat_map(|(mons, f)| mons.iter().map(move |e| f.coefficient(e)))
            .collect()
    }

    /// The system `f_i(A x)`.
    pub fn apply_linear(&self, a: &Matrix) -> Result<Self> {
        let forms = self.forms.iter().map(|f| f.apply_linear(a)).collect::<Result<Vec<_>>>()?;
        FormSystem::with_degrees(self.n, forms, self.degrees.clone())
    }
}

/// Coefficient variables of a system: form `i` contributes one variable per
/// monomial of degree `d_i`, in graded-lex order, and forms follow each other.
pub fn coefficient_layout(n: usize, degrees: &[u32]) -> Vec<Vec<ExponentVector>> {
    degrees.iter().map(|&d| monomial_basis(n + 1, d)).collect()
}

/// Resultant as the torsion of the Koszul complex at the Macaulay bound; 0 when
/// the forms share a projective zero.
pub fn resultant(sys: &FormSystem) -> Result<Rational> {
    let spec = KoszulSpec::at_macaulay_bound(sys.n, sys.degrees.clone())?;
    resultant_at(sys, &spec)
}

/// Same as [`resultant`] at an explicit twist `m >= sum d_i - n`.
pub fn resultant_with_twist(sys: &FormSystem, m: i64) -> Result<Rational> {
    let spec = KoszulSpec::new(sys.n, sys.degrees.clone(), m)?;
    resultant_at(sys, &spec)
}

fn resultant_at(sys: &FormSystem, spec: &KoszulSpec) -> Result<Rational> {
    let c = koszul::build_complex(spec, &sys.forms)?;
    if !complexes::is_exact(&c)? {
        return Ok(Rational::zero());
    }
    Ok(complexes::torsion(&c)?.value)
}

/// Coefficients of a binary form of degree `d`, from `x0^d` down to `x1^d`.
fn binary_coefficients(f: &MultiPoly, d: u32) -> Vec<Rational> {
    (0..=d).map(|k| f.coefficient(&[d - k, k])).collect()
}

/// Determinant of the Sylvester matrix of two binary forms.
pub fn sylvester_resultant(f: &MultiPoly, g: &MultiPoly) -> Result<Rational> {
    let degree = |p: &MultiPoly| -> Result<u32> {
        if p.var_count() != 2 {
            return Err(Error::Shape(format!("binary form expected, got {} variables", p.var_count())));
        }
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        p.is_homogeneous().ok_or(Error::NotHomogeneous)
    };
    let (df, dg) = (degree(f)?, degree(g)?);
    let size = (df + dg) as usize;
    let mut s = Matrix::zeros(size, size);
    for (offset, shifts, coeffs) in [(0, dg, binary_coefficients(f, df)), (dg as usize, df, binary_coefficients(g, dg))] {
        for r in 0..shifts as usize {
            for (k, c) in coeffs.iter().enumerate() {
                s[(offset + r, r + k)] = c.clone();
            }
        }
    }
    linalg::det(&s)
}

/// `sum_i prod_{j != i} d_j`, the total degree of the resultant in the coefficients.
pub fn resultant_degree(degrees: &[u32]) -> u64 {
    (0..degrees.len())
        .map(|i| degrees.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &d)| d as u64).product::<u64>())
        .sum()
}

/// Largest resultant degree [`resultant_symbolic`] accepts.
pub const MAX_SYMBOLIC_DEGREE: u64 = 6;
/// Largest number of forms [`resultant_symbolic`] accepts.
pub const MAX_SYMBOLIC_FORMS: usize = 3;
/// Default cap on interpolation points.
pub const DEFAULT_MAX_GRID: usize = 4096;

const GRID_RADIUS: i64 = 3;
const GRID_SEED: u64 = 0x5eed_0fe1;
const CHECK_POINTS: usize = 4;

/// The resultant as a polynomial in the generic coefficients `u_k`
/// (numbered as in [`coefficient_layout`]).
///
/// Recovered by exact interpolation: the resultant has degree `prod_{j != i} d_j`
/// in the coefficients of form `i`, so the candidate monomials are known, and
/// their coefficients solve a linear system built from numeric resultants at
/// points of the integer grid `[-3, 3]^N`. Extra points then check the answer.
/// The sign is fixed by making the lexicographically first monomial positive.
pub fn resultant_symbolic(n: usize, degrees: &[u32], max_grid: usize) -> Result<MultiPoly> {
    if degrees.len() != n + 1 {
        return Err(Error::DegreeMismatch(format!("{} degrees given for n = {n}", degrees.len())));
    }
    if degrees.contains(&0) {
        return Err(Error::DegreeMismatch("all degrees must be positive".into()));
    }
    if n + 1 > MAX_SYMBOLIC_FORMS {
        return Err(Error::GuardExceeded(format!("{} forms (at most {MAX_SYMBOLIC_FORMS})", n + 1)));
    }
    let total_degree = resultant_degree(degrees);
    if total_degree > MAX_SYMBOLIC_DEGREE {
        return Err(Error::GuardExceeded(format!("resultant degree {total_degree} (at most {MAX_SYMBOLIC_DEGREE})")));
    }

    let layout = coefficient_layout(n, degrees);
    let var_count: usize = layout.iter().map(Vec::len).sum();
    let per_form: Vec<Vec<ExponentVector>> = layout
        .iter()
        .enumerate()
        .map(|(i, mons)| {
            let e = degrees.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &d)| d).product::<u32>();
            monomial_basis(mons.len(), e)
        })
        .collect();
    let candidates: Vec<ExponentVector> = per_form.iter().fold(vec![Vec::new()], |acc, block| {
        acc.iter()
            .flat_map(|prefix| {
                block.iter().map(move |m| {
                    let mut e = prefix.clone();
                    e.extend_from_slice(m);
                    e
                })
            })
            .collect()
    });
    if candidates.len() + CHECK_POINTS > max_grid {
        return Err(Error::GuardExceeded(format!(
            "{} interpolation points needed, grid capped at {max_grid}",
            candidates.len() + CHECK_POINTS
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(GRID_SEED);
    let mut draw = |count: usize| -> Vec<Vec<Rational>> {
        (0..count)
            .map(|_| (0..var_count).map(|_| rational::from_int(rng.gen_range(-GRID_RADIUS..=GRID_RADIUS))).collect())
            .collect()
    };
    let evaluate = |points: &[Vec<Rational>]| -> Result<Vec<Rational>> {
        points
            .par_iter()
            .map(|u| resultant(&FormSystem::from_coefficients(n, degrees, u)?))
            .collect::<Result<Vec<_>>>()
    };
    let monomial_value = |e: &ExponentVector, u: &[Rational]| -> Rational {
        e.iter()
            .zip(u)
            .filter(|(k, _)| **k > 0)
            .fold(Rational::one(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
    };

    let mut points = draw(candidates.len() + CHECK_POINTS);
    let mut values = evaluate(&points)?;
    let coeffs = loop {
        let rows: Vec<Vec<Rational>> =
            points.iter().map(|u| candidates.iter().map(|e| monomial_value(e, u)).collect()).collect();
        match linalg::solve(&Matrix::from_rows(rows)?, &values) {
            Ok(x) => break x,
            Err(Error::Underdetermined { .. }) if points.len() + candidates.len() <= max_grid => {
                let more = draw(candidates.len());
                values.extend(evaluate(&more)?);
                points.extend(more);
            }
            Err(Error::Underdetermined { rank, unknowns }) => {
                return Err(Error::GuardExceeded(format!(
                    "grid cap {max_grid} reached with rank {rank} of {unknowns}"
                )))
            }
            Err(Error::Inconsistent) => {
                return Err(Error::InterpolationInconsistent(
                    "numeric resultants do not fit the expected multidegree".into(),
                ))
            }
            Err(e) => return Err(e),
        }
    };

    let mut r = MultiPoly::from_terms(var_count, candidates.into_iter().zip(coeffs))?;
    let check = draw(CHECK_POINTS);
    for (u, v) in check.iter().zip(evaluate(&check)?) {
        if r.eval(u)? != v {
            return Err(Error::InterpolationInconsistent("check point disagrees".into()));
        }
    }
    if r.terms().next_back().is_some_and(|(_, c)| c.is_negative()) {
        r = r.neg();
    }
    Ok(r)
}

/// Resultant of the partial derivatives of `f`.
///
/// No power of the degree is divided out, so for a binary quadratic this is
/// `4ac - b^2` rather than `b^2 - 4ac` up to normalization. It vanishes exactly
/// when the hypersurface `f = 0` is singular.
pub fn discriminant(f: &MultiPoly) -> Result<Rational> {
    let d = f.is_homogeneous().ok_or(Error::NotHomogeneous)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if d < 2 {
        return Err(Error::DegreeTooLow(d));
    }
    let vars = f.var_count();
    if vars < 2 {
        return Err(Error::Shape("a hypersurface needs at least two variables".into()));
    }
    let partials = (0..vars).map(|k| f.partial(k)).collect::<Result<Vec<_>>>()?;
    let sys = FormSystem::with_degrees(vars - 1, partials, vec![d - 1; vars])?;
    resultant(&sys)
}

/// Chow form of a finite set of points in `P^N`: `prod_p (sum_j u_j p_j)`,
/// with each point scaled so its first nonzero coordinate is 1.
pub fn chow_form_points(points: &[Vec<Rational>]) -> Result<MultiPoly> {
    let dim = points.first().map(Vec::len).ok_or_else(|| Error::Shape("no points given".into()))?;
    if dim == 0 || points.iter().any(|p| p.len() != dim) {
        return Err(Error::Shape("all points must have the same positive number of coordinates".into()));
    }
    points.iter().try_fold(MultiPoly::one(dim), |acc, p| {
        let lead = p.iter().find(|c| !c.is_zero()).ok_or(Error::ZeroVector)?.clone();
        let normalized: Vec<Rational> = p.iter().map(|c| c / &lead).collect();
        acc.mul(&MultiPoly::linear_form(&normalized))
    })
}
