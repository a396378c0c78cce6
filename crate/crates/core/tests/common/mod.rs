#![allow(dead_code)]

use elim_core::linalg::{self, Matrix};
use elim_core::poly::monomial_basis;
use elim_core::rational::{from_frac, from_int};
use elim_core::{BasedComplex, FormSystem, MultiPoly, Rational, Result};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    from_frac(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let entries = (0..rows * cols).map(|_| small_rational(rng)).collect();
    Matrix::new(rows, cols, entries).unwrap()
}

pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, n, n);
        if !linalg::det(&m).unwrap().is_zero() {
            return m;
        }
    }
}

/// Integer matrix of determinant 1, a product of random transvections.
pub fn random_sl(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut m = Matrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let mut e = Matrix::identity(n);
        e[(i, j)] = from_int(rng.gen_range(-2..=2));
        m = m.mul(&e).unwrap();
    }
    m
}

/// An exact complex with at most `max_terms` terms, each of dimension at
/// most 6: a split complex conjugated by random basis changes.
pub fn random_exact_complex(rng: &mut ChaCha8Rng, max_terms: usize) -> BasedComplex {
    let terms = rng.gen_range(2..=max_terms);
    let ranks: Vec<usize> = (0..terms - 1).map(|_| rng.gen_range(1..=3)).collect();
    let dims: Vec<usize> = (0..terms)
        .map(|i| if i == 0 { 0 } else { ranks[i - 1] } + ranks.get(i).copied().unwrap_or(0))
        .collect();
    // Term i splits as [image of d_{i-1} | complement]; d_i sends the
    // complement onto the image block of term i + 1.
    let boundaries = (0..terms - 1)
        .map(|i| {
            let incoming = if i == 0 { 0 } else { ranks[i - 1] };
            let mut d = Matrix::zeros(dims[i + 1], dims[i]);
            for k in 0..ranks[i] {
                d[(k, incoming + k)] = from_int(1);
            }
            d
        })
        .collect();
    let mut c = BasedComplex::new(dims.clone(), boundaries).unwrap();
    for (i, &r) in dims.iter().enumerate() {
        c = c.change_basis(i, &random_invertible(rng, r)).unwrap();
    }
    c
}

/// Random choice of `S_i` for the torsion: general vectors, redrawn until
/// `[image | S_i]` is invertible.
pub fn random_choice(rng: &mut ChaCha8Rng) -> impl FnMut(usize, &Matrix, usize) -> Result<Matrix> + '_ {
    move |_, image, kappa| loop {
        let s = random_matrix(rng, image.rows(), kappa);
        if !linalg::det(&image.hstack(&s)?)?.is_zero() {
            return Ok(s);
        }
    }
}

pub fn random_form(rng: &mut ChaCha8Rng, var_count: usize, degree: u32, bound: i64) -> MultiPoly {
    loop {
        let terms = monomial_basis(var_count, degree).into_iter().map(|e| (e, from_int(rng.gen_range(-bound..=bound))));
        let f = MultiPoly::from_terms(var_count, terms).unwrap();
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_system(rng: &mut ChaCha8Rng, n: usize, degrees: &[u32], bound: i64) -> FormSystem {
    let forms = degrees.iter().map(|&d| random_form(rng, n + 1, d, bound)).collect();
    FormSystem::new(n, forms).unwrap()
}

/// Forms that all vanish at a random point `(1, p_1, ..., p_n)`.
pub fn common_root_system(rng: &mut ChaCha8Rng, n: usize, degrees: &[u32], bound: i64) -> FormSystem {
    let point: Vec<Rational> = std::iter::once(from_int(1)).chain((0..n).map(|_| from_int(rng.gen_range(-3..=3)))).collect();
    loop {
        let forms: Vec<MultiPoly> = degrees
            .iter()
            .map(|&d| {
                let g = random_form(rng, n + 1, d, bound);
                let mut x0 = vec![0; n + 1];
                x0[0] = d;
                g.sub(&MultiPoly::monomial(n + 1, x0, g.eval(&point).unwrap())).unwrap()
            })
            .collect();
        if forms.iter().all(|f| !f.is_zero()) {
            return FormSystem::new(n, forms).unwrap();
        }
    }
}

pub fn random_weights(rng: &mut ChaCha8Rng, len: usize, bound: i64) -> Vec<i64> {
    (0..len).map(|_| rng.gen_range(-bound..=bound)).collect()
}

/// Determinant of a square matrix of polynomials by the Leibniz formula.
pub fn symbolic_det(rows: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = rows.len();
    let var_count = rows[0][0].var_count();
    let mut total = MultiPoly::zero(var_count);
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        let sign = linalg::permutation_sign(p);
        let term = (0..n).fold(MultiPoly::one(var_count), |acc, i| acc.mul(&rows[i][p[i]]).unwrap());
        total = total.add(&term.scale(&from_int(sign as i64))).unwrap();
    });
    total
}

fn permutations(p: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}
