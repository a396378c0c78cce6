//! Diagonal one-parameter subgroups acting on polynomials.
//!
//! `lambda(t)` acts on coordinates by `w_k -> t^{a_k} w_k`, and on polynomials by
//! `(lambda(t) F)(w) = F(lambda(t)^{-1} w)`. A monomial `c w^b` therefore picks
//! up the factor `t^{-<a, b>}`, and `lambda(t) F = sum_e t^e F_e` for the
//! weight pieces `F_e`. The weight of `F` is the smallest `e` with `F_e != 0`
//! and `F_e` itself is the limit of the orbit as `t -> 0`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{monomial_basis, MultiPoly};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnePS {
    pub weights: Vec<i64>,
}

impl OnePS {
    pub fn new(weights: Vec<i64>) -> Self {
        OnePS { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Exponent of `t` picked up by `w^b`.
    pub fn exponent(&self, b: &[u32]) -> i64 {
        -self.weights.iter().zip(b).map(|(a, &k)| a * k as i64).sum::<i64>()
    }
}

/// `lambda(t) F = sum_e t^e parts[e]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDecomposition {
    parts: BTreeMap<i64, MultiPoly>,
}

impl WeightDecomposition {
    pub fn parts(&self) -> &BTreeMap<i64, MultiPoly> {
        &self.parts
    }

    /// Smallest exponent, `None` for the zero polynomial.
    pub fn min_exponent(&self) -> Option<i64> {
        self.parts.keys().next().copied()
    }

    pub fn lowest_part(&self) -> Option<&MultiPoly> {
        self.parts.values().next()
    }

    /// `sum_e t^e parts[e]` at an exact nonzero `t`.
    pub fn at(&self, var_count: usize, t: &Rational) -> Result<MultiPoly> {
        if t.is_zero() {
            return Err(Error::InvalidArgument("t must be nonzero".into()));
        }
        self.parts.iter().try_fold(MultiPoly::zero(var_count), |acc, (&e, p)| acc.add(&p.scale(&rational::pow(t, e))))
    }

    /// `log ||lambda(t) F||^2` for the coefficient 2-norm, evaluated stably in log space.
    pub fn log_norm_sq(&self, t: f64) -> f64 {
        let logs: Vec<f64> = self
            .parts
            .iter()
            .map(|(&e, p)| 2.0 * e as f64 * t.ln() + rational::to_f64(&p.coefficient_norm_sq()).ln())
            .collect();
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return max;
        }
        max + logs.iter().map(|l| (l - max).exp()).sum::<f64>().ln()
    }
}

fn check_len(f: &MultiPoly, lambda: &OnePS) -> Result<()> {
    if lambda.len() != f.var_count() {
        return Err(Error::Shape(format!("{} weights for {} variables", lambda.len(), f.var_count())));
    }
    Ok(())
}

/// Splits `F` into pieces of equal `t`-exponent under `lambda`.
pub fn act_decompose(f: &MultiPoly, lambda: &OnePS) -> Result<WeightDecomposition> {
    check_len(f, lambda)?;
    let mut parts: BTreeMap<i64, MultiPoly> = BTreeMap::new();
    for (e, c) in f.terms() {
        parts
            .entry(lambda.exponent(e))
            .or_insert_with(|| MultiPoly::zero(f.var_count()))
            .add_term(e.clone(), c.clone());
    }
    Ok(WeightDecomposition { parts })
}

/// `w_lambda(F)`: the order of `lambda(t) F` as `t -> 0`.
pub fn weight(f: &MultiPoly, lambda: &OnePS) -> Result<i64> {
    act_decompose(f, lambda)?.min_exponent().ok_or(Error::ZeroPolynomial)
}

/// `lim_{t -> 0} t^{-w} lambda(t) F`, the lowest weight piece.
pub fn limit_polynomial(f: &MultiPoly, lambda: &OnePS) -> Result<MultiPoly> {
    act_decompose(f, lambda)?.lowest_part().cloned().ok_or(Error::ZeroPolynomial)
}

/// `lambda(t) F` at an exact nonzero `t`.
pub fn act(f: &MultiPoly, lambda: &OnePS, t: &Rational) -> Result<MultiPoly> {
    act_decompose(f, lambda)?.at(f.var_count(), t)
}

/// Weights on the coefficient space of degree-`d` forms in `n+1` variables
/// induced by `x -> lambda(t) x` with ambient weights `b`: the coefficient of
/// `x^a` gets `-<b, a>`, listed in graded-lex monomial order.
///
/// Substituting `x -> diag(t^b) x` into a form multiplies its coefficient
/// vector `u` by `t^{-w}`, which is how `lambda(t)` acts on functions of `u`:
/// `R(f(diag(t^b) x)) = (lambda(t) R)(u)`.
pub fn induced_coefficient_weights(n: usize, d: u32, ambient: &OnePS) -> Result<OnePS> {
    if ambient.len() != n + 1 {
        return Err(Error::Shape(format!("{} ambient weights for {} variables", ambient.len(), n + 1)));
    }
    Ok(OnePS::new(monomial_basis(n + 1, d).iter().map(|a| ambient.exponent(a)).collect()))
}

/// Least-squares slope of `log ||lambda(t) F||^2` against `log t^2`.
///
/// `t_values` must lie in `(0, 1)` and decrease; the slope tends to
/// `weight(F, lambda)` as the samples approach 0.
pub fn slope_fit(f: &MultiPoly, lambda: &OnePS, t_values: &[f64]) -> Result<f64> {
    if t_values.len() < 2 {
        return Err(Error::InvalidArgument("slope fit needs at least two sample points".into()));
    }
    if t_values.iter().any(|&t| !(t > 0.0 && t < 1.0)) || t_values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("sample points must decrease inside (0, 1)".into()));
    }
    let dec = act_decompose(f, lambda)?;
    if dec.parts.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let xs: Vec<f64> = t_values.iter().map(|t| 2.0 * t.ln()).collect();
    let ys: Vec<f64> = t_values.iter().map(|&t| dec.log_norm_sq(t)).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// `count` points per decade from `t_max` down to `t_min`, both included.
pub fn log_spaced(t_max: f64, t_min: f64, per_decade: usize) -> Vec<f64> {
    let decades = (t_max / t_min).log10();
    let steps = ((decades * per_decade as f64).round() as usize).max(1);
    (0..=steps).map(|i| t_max * (t_min / t_max).powf(i as f64 / steps as f64)).collect()
}
