//! Graded pieces of the Koszul complex of `n+1` forms on `P^n`.
//!
//! For forms `f_0..f_n` of degrees `d_0..d_n` and a twist `m`, the degree-`m`
//! piece of the Koszul complex has one basis element `e_S (x) x^a` per subset
//! `S` of `{0..n}` and monomial `x^a` of degree `m - sum_{i in S} d_i`. The
//! boundary contracts with `(f_0, ..., f_n)`:
//!
//! ```text
//! d(e_S (x) x^a) = sum_{i in S} (-1)^{pos(i, S)} e_{S \ i} (x) f_i x^a
//! ```
//!
//! Terms are stored with `E^0` at the top exterior power (`|S| = n+1`) and
//! `E^{n+1}` the degree-`m` polynomials, so the complex runs in the direction
//! [`crate::complexes`] expects. Bases are ordered by subset (colex) and then
//! by monomial (graded-lex).
//!
//! For `m` at or above the Macaulay bound `sum d_i - n` none of the line
//! bundles involved has higher cohomology, the complex is exact exactly when
//! the forms have no common zero, and its torsion is the resultant.

use std::collections::HashMap;

use num_traits::One;
use serde::Serialize;

use crate::complexes::{self, BasedComplex};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{self, ExponentVector, MultiPoly};
use crate::rational::{binomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KoszulSpec {
    n: usize,
    degrees: Vec<u32>,
    twist: i64,
}

impl KoszulSpec {
    pub fn new(n: usize, degrees: Vec<u32>, twist: i64) -> Result<Self> {
        if degrees.len() != n + 1 {
            return Err(Error::DegreeMismatch(format!("{} degrees given for n = {n}, need {}", degrees.len(), n + 1)));
        }
        if degrees.contains(&0) {
            return Err(Error::DegreeMismatch("all degrees must be positive".into()));
        }
        Ok(KoszulSpec { n, degrees, twist })
    }

    /// Spec with the twist set to the Macaulay bound.
    pub fn at_macaulay_bound(n: usize, degrees: Vec<u32>) -> Result<Self> {
        let m = degrees.iter().map(|&d| d as i64).sum::<i64>() - n as i64;
        KoszulSpec::new(n, degrees, m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn with_twist(&self, twist: i64) -> Self {
        KoszulSpec { twist, ..self.clone() }
    }

    fn subset_degree(&self, subset: &[usize]) -> i64 {
        self.twist - subset.iter().map(|&i| self.degrees[i] as i64).sum::<i64>()
    }
}

/// `e_S (x) x^a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct KoszulBasisElement {
    pub subset: Vec<usize>,
    pub monomial: ExponentVector,
}

/// All `size`-subsets of `0..universe`, in colex order.
pub fn subsets_colex(universe: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, universe: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..universe {
            cur.push(i);
            rec(i + 1, universe, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if size <= universe {
        rec(0, universe, size, &mut Vec::with_capacity(size), &mut out);
    }
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}

/// `r_j(m)`: dimension of the piece built from `j`-subsets.
pub fn term_dimension(spec: &KoszulSpec, j: usize) -> usize {
    subsets_colex(spec.n + 1, j)
        .iter()
        .map(|s| {
            let deg = spec.subset_degree(s);
            if deg < 0 { 0 } else { binomial(deg + spec.n as i64, spec.n as i64) as usize }
        })
        .sum()
}

/// `[r_0(m), ..., r_{n+1}(m)]`, indexed by subset size.
pub fn exterior_dims(spec: &KoszulSpec) -> Vec<usize> {
    (0..=spec.n + 1).map(|j| term_dimension(spec, j)).collect()
}

/// Term dimensions in complex order (`E^i` built from `(n+1-i)`-subsets), untrimmed.
pub fn complex_dims(spec: &KoszulSpec) -> Vec<usize> {
    let mut dims = exterior_dims(spec);
    dims.reverse();
    dims
}

/// `chi = sum_j (-1)^{j+1} j r_j(m)`.
pub fn chi(spec: &KoszulSpec) -> i64 {
    exterior_dims(spec)
        .iter()
        .enumerate()
        .map(|(j, &r)| if j % 2 == 1 { 1 } else { -1 } * (j * r) as i64)
        .sum()
}

/// Least twist at which no summand `O(m - sum_S d_i)` has higher cohomology:
/// `sum d_i - n`.
pub fn macaulay_bound(spec: &KoszulSpec) -> i64 {
    spec.degrees.iter().map(|&d| d as i64).sum::<i64>() - spec.n as i64
}

/// Basis of the piece built from `j`-subsets, ordered by subset then monomial.
pub fn basis(spec: &KoszulSpec, j: usize) -> Vec<KoszulBasisElement> {
    let mut out = Vec::new();
    for subset in subsets_colex(spec.n + 1, j) {
        let deg = spec.subset_degree(&subset);
        if deg < 0 {
            continue;
        }
        for monomial in poly::monomial_basis(spec.n + 1, deg as u32) {
            out.push(KoszulBasisElement { subset: subset.clone(), monomial });
        }
    }
    out
}

fn check_forms(spec: &KoszulSpec, forms: &[MultiPoly]) -> Result<()> {
    if forms.len() != spec.n + 1 {
        return Err(Error::DegreeMismatch(format!("{} forms given for n = {}", forms.len(), spec.n)));
    }
    for (i, f) in forms.iter().enumerate() {
        if f.var_count() != spec.n + 1 {
            return Err(Error::Shape(format!("form {i} has {} variables, expected {}", f.var_count(), spec.n + 1)));
        }
        match f.is_homogeneous() {
            _ if f.is_zero() => {}
            Some(d) if d == spec.degrees[i] => {}
            Some(d) => {
                return Err(Error::DegreeMismatch(format!("form {i} has degree {d}, expected {}", spec.degrees[i])))
            }
            None => return Err(Error::NotHomogeneous),
        }
    }
    Ok(())
}

/// The full complex including zero-dimensional terms.
pub fn build_untrimmed(spec: &KoszulSpec, forms: &[MultiPoly]) -> Result<BasedComplex> {
    check_forms(spec, forms)?;
    let bound = macaulay_bound(spec);
    if spec.twist < bound {
        return Err(Error::BelowMacaulayBound { m: spec.twist, bound });
    }
    let n = spec.n;
    let bases: Vec<Vec<KoszulBasisElement>> = (0..=n + 1).map(|i| basis(spec, n + 1 - i)).collect();
    let mut boundaries = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let source = &bases[i];
        let target = &bases[i + 1];
        let index: HashMap<&KoszulBasisElement, usize> = target.iter().enumerate().map(|(k, e)| (e, k)).collect();
        let mut d = Matrix::zeros(target.len(), source.len());
        for (col, el) in source.iter().enumerate() {
            for (pos, &form) in el.subset.iter().enumerate() {
                let sign = if pos % 2 == 0 { Rational::one() } else { -Rational::one() };
                let mut rest = el.subset.clone();
                rest.remove(pos);
                for (e, c) in forms[form].terms() {
                    let key = KoszulBasisElement {
                        subset: rest.clone(),
                        monomial: e.iter().zip(&el.monomial).map(|(a, b)| a + b).collect(),
                    };
                    let row = index[&key];
                    d[(row, col)] += &sign * c;
                }
            }
        }
        boundaries.push(d);
    }
    BasedComplex::new(bases.iter().map(Vec::len).collect(), boundaries)
}

/// The graded Koszul complex with zero-dimensional edge terms removed.
pub fn build_complex(spec: &KoszulSpec, forms: &[MultiPoly]) -> Result<BasedComplex> {
    complexes::trim(&build_untrimmed(spec, forms)?)
}
