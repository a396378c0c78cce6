//! Sparse multivariate polynomials over the rationals.
//!
//! Terms live in a `BTreeMap` keyed by exponent vector; zero coefficients are
//! never stored. Printing and [`monomial_basis`] use one global monomial order,
//! graded-lex (higher total degree first, then lexicographic with `x0 > x1 > ...`).
//! Koszul boundary matrices are laid out in this order, so it also fixes the
//! sign of every torsion computed downstream.
//!
//! Text grammar: terms `[coef][*]x<k>[^e]...` joined by `+`/`-`, with `coef`
//! an integer or `p/q`. Whitespace is ignored. Any lowercase name followed by
//! an index is a variable (`x3`, `u0`, `w12`); only the index matters.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{self, Rational};

pub type ExponentVector = Vec<u32>;

pub fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// Graded-lex comparison; `Ordering::Greater` means "printed first".
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    total_degree(a).cmp(&total_degree(b)).then_with(|| a.cmp(b))
}

/// All exponent vectors of total degree `degree` in `var_count` variables,
/// in graded-lex order: `(2,0), (1,1), (0,2)` for two variables in degree 2.
pub fn monomial_basis(var_count: usize, degree: u32) -> Vec<ExponentVector> {
    fn fill(prefix: &mut Vec<u32>, left: usize, degree: u32, out: &mut Vec<ExponentVector>) {
        if left == 1 {
            prefix.push(degree);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e);
            fill(prefix, left - 1, degree - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if var_count == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    fill(&mut Vec::with_capacity(var_count), var_count, degree, &mut out);
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    var_count: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.var_count, self)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with("x"))
    }
}

impl MultiPoly {
    pub fn zero(var_count: usize) -> Self {
        MultiPoly { var_count, terms: BTreeMap::new() }
    }

    pub fn constant(var_count: usize, c: Rational) -> Self {
        MultiPoly::monomial(var_count, vec![0; var_count], c)
    }

    pub fn one(var_count: usize) -> Self {
        MultiPoly::constant(var_count, Rational::one())
    }

    /// The variable `x_index`.
    pub fn var(var_count: usize, index: usize) -> Result<Self> {
        if index >= var_count {
            return Err(Error::VariableOutOfRange { index, var_count });
        }
        let mut e = vec![0; var_count];
        e[index] = 1;
        Ok(MultiPoly::monomial(var_count, e, Rational::one()))
    }

    /// `c * x^exponents`; panics if the exponent vector has the wrong length.
    pub fn monomial(var_count: usize, exponents: ExponentVector, c: Rational) -> Self {
        assert_eq!(exponents.len(), var_count, "exponent vector length");
        let mut p = MultiPoly::zero(var_count);
        if !c.is_zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    pub fn from_terms(var_count: usize, terms: impl IntoIterator<Item = (ExponentVector, Rational)>) -> Result<Self> {
        let mut p = MultiPoly::zero(var_count);
        for (e, c) in terms {
            if e.len() != var_count {
                return Err(Error::Shape(format!("exponent vector of length {} for {var_count} variables", e.len())));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Linear form `sum_i coeffs[i] x_i`.
    pub fn linear_form(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = MultiPoly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in graded-lex order, leading term first.
    pub fn sorted_terms(&self) -> Vec<(&ExponentVector, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex_cmp(b.0, a.0));
        v
    }

    /// Leading term under graded-lex.
    pub fn leading_term(&self) -> Option<(&ExponentVector, &Rational)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    pub fn add_term(&mut self, e: ExponentVector, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same_vars(&self, other: &MultiPoly) -> Result<()> {
        if self.var_count != other.var_count {
            return Err(Error::Shape(format!("{} variables vs {}", self.var_count, other.var_count)));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same_vars(other)?;
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        Ok(p)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, s: &Rational) -> MultiPoly {
        if s.is_zero() {
            return MultiPoly::zero(self.var_count);
        }
        MultiPoly { var_count: self.var_count, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same_vars(other)?;
        let mut p = MultiPoly::zero(self.var_count);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                p.add_term(e, ca * cb);
            }
        }
        Ok(p)
    }

    /// Multiplies by the monomial `x^e`.
    pub fn mul_monomial(&self, e: &[u32]) -> MultiPoly {
        MultiPoly {
            var_count: self.var_count,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.iter().zip(e).map(|(x, y)| x + y).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.var_count);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same variables");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same variables");
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `x_var`.
    pub fn partial(&self, var: usize) -> Result<MultiPoly> {
        if var >= self.var_count {
            return Err(Error::VariableOutOfRange { index: var, var_count: self.var_count });
        }
        let mut p = MultiPoly::zero(self.var_count);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[var] -= 1;
            p.add_term(d, c * Rational::from_integer(BigInt::from(e[var])));
        }
        Ok(p)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).max()
    }

    /// The common total degree of all terms, or `None` when degrees are mixed.
    /// The zero polynomial reports degree 0.
    pub fn is_homogeneous(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| total_degree(e));
        let Some(first) = degrees.next() else {
            return Some(0);
        };
        degrees.all(|d| d == first).then_some(first)
    }

    /// Same polynomial viewed in more variables (new variables appended).
    pub fn with_var_count(&self, var_count: usize) -> Result<MultiPoly> {
        if var_count < self.var_count {
            if let Some(index) = self.terms.keys().flat_map(|e| e[var_count..].iter().position(|&x| x > 0)).next() {
                return Err(Error::VariableOutOfRange { index: index + var_count, var_count });
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e.resize(var_count, 0);
                (e, c.clone())
            })
            .collect();
        Ok(MultiPoly { var_count, terms })
    }

    /// Substitution `x -> A x`, i.e. the polynomial `x -> p(A x)`.
    ///
    /// With this convention `apply_linear(p, A B) = apply_linear(apply_linear(p, A), B)`.
    pub fn apply_linear(&self, a: &Matrix) -> Result<MultiPoly> {
        if a.rows() != self.var_count || a.cols() != self.var_count {
            return Err(Error::Shape(format!(
                "{}x{} matrix acting on {} variables",
                a.rows(),
                a.cols(),
                self.var_count
            )));
        }
        let images: Vec<MultiPoly> = (0..self.var_count).map(|i| MultiPoly::linear_form(a.row(i))).collect();
        let mut powers: HashMap<(usize, u32), MultiPoly> = HashMap::new();
        let mut out = MultiPoly::zero(self.var_count);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(self.var_count, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = powers.entry((i, k)).or_insert_with(|| images[i].pow(k));
                term = term.mul(pw)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.var_count {
            return Err(Error::Shape(format!("point of length {} for {} variables", point.len(), self.var_count)));
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .filter(|(k, _)| **k > 0)
                    .fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum())
    }

    /// Double-precision complex evaluation.
    pub fn eval_complex(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.var_count {
            return Err(Error::Shape(format!("point of length {} for {} variables", point.len(), self.var_count)));
        }
        Ok(self.float_terms().eval(point))
    }

    pub(crate) fn float_terms(&self) -> FloatPoly {
        FloatPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), rational::to_f64(c))).collect(),
        }
    }

    /// Sum of squared coefficients.
    pub fn coefficient_norm_sq(&self) -> Rational {
        self.terms.values().map(|c| c * c).sum()
    }

    /// Text form with the given variable prefix, e.g. `"w"` gives `w0^2 - w1`.
    pub fn format_with(&self, prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let abs = c.abs();
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("{prefix}{i}") } else { format!("{prefix}{i}^{k}") })
                .collect();
            if factors.is_empty() {
                out.push_str(&rational::format(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&rational::format(&abs));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    /// Parses the text grammar. With `var_count = None` the variable count is
    /// one more than the largest index used (0 for constants); otherwise any
    /// index at or beyond `var_count` is rejected.
    pub fn parse(text: &str, var_count: Option<usize>) -> Result<MultiPoly> {
        let raw = Parser { src: text.as_bytes(), pos: 0 }.polynomial()?;
        let used = raw.iter().flat_map(|(factors, _)| factors.iter().map(|(i, _, _)| i + 1)).max().unwrap_or(0);
        let n = match var_count {
            Some(n) => {
                if let Some((_, _, name)) = raw.iter().flat_map(|(f, _)| f.iter()).find(|(i, _, _)| *i >= n) {
                    return Err(Error::UnknownVariable { name: name.clone(), var_count: n });
                }
                n
            }
            None => used,
        };
        let mut p = MultiPoly::zero(n);
        for (factors, c) in raw {
            let mut e = vec![0; n];
            for (i, k, _) in factors {
                e[i] += k;
            }
            p.add_term(e, c);
        }
        Ok(p)
    }
}

/// Coefficients converted to `f64` for repeated complex evaluation.
#[derive(Debug, Clone)]
pub(crate) struct FloatPoly {
    terms: Vec<(ExponentVector, f64)>,
}

impl FloatPoly {
    pub(crate) fn eval(&self, point: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(point).filter(|(k, _)| **k > 0).fold(Complex64::new(*c, 0.0), |acc, (&k, z)| {
                    acc * z.powu(k)
                })
            })
            .sum()
    }
}

type RawTerm = (Vec<(usize, u32, String)>, Rational);

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn polynomial(mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            None => return Err(self.err("empty polynomial")),
            _ => 1,
        };
        loop {
            let (factors, c) = self.term()?;
            terms.push((factors, if sign < 0 { -c } else { c }));
            match self.peek() {
                None => break,
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                Some(ch) => return Err(self.err(format!("unexpected `{}`", ch as char))),
            }
            self.pos += 1;
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<RawTerm> {
        let mut coef = Rational::one();
        let mut factors = Vec::new();
        let mut first = true;
        loop {
            match self.peek() {
                Some(b'*') if !first => {
                    self.pos += 1;
                    if !matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
                        return Err(self.err("expected a factor after `*`"));
                    }
                }
                Some(c) if c.is_ascii_alphanumeric() => {}
                _ if first => return Err(self.err("expected a term")),
                _ => break,
            }
            first = false;
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coef *= self.number()?,
                Some(c) if c.is_ascii_lowercase() => factors.push(self.variable()?),
                _ => return Err(self.err("expected a number or a variable")),
            }
        }
        Ok((factors, coef))
    }

    fn number(&mut self) -> Result<Rational> {
        let Some(p) = self.digits() else {
            return Err(self.err("expected digits"));
        };
        let p: BigInt = p.parse().expect("digits");
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let Some(q) = self.digits() else {
                return Err(self.err("expected a denominator"));
            };
            let q: BigInt = q.parse().expect("digits");
            if q.is_zero() {
                return Err(self.err("zero denominator"));
            }
            return Ok(Rational::new(p, q));
        }
        Ok(Rational::from_integer(p))
    }

    fn variable(&mut self) -> Result<(usize, u32, String)> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_lowercase() {
            self.pos += 1;
        }
        let index: usize = match self.digits() {
            Some(d) => d.parse().map_err(|_| self.err("variable index too large"))?,
            None => return Err(self.err("variable name must end in an index")),
        };
        let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
        let mut exponent = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            exponent = match self.digits() {
                Some(d) => d.parse().map_err(|_| self.err("exponent too large"))?,
                None => return Err(self.err("expected an exponent")),
            };
        }
        Ok((index, exponent, name))
    }
}
