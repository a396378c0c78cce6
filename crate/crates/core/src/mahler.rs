//! Mahler measure of homogeneous polynomials against the Fubini-Study volume.
//!
//! `theta(f)` is the average over the unit sphere of `W` of
//! `log |f(w)|^2 - log ||f||_2^2`. The volume is normalized to mass 1, so
//! constants have measure 0 and Jensen gives `theta <= 0`.
//!
//! Sampling runs in fixed blocks of [`BLOCK_SIZE`] points. Block `b` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `b`. Shards take contiguous
//! runs of blocks and the per-block statistics are merged in block order, so
//! the estimate does not depend on the shard count.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational::{self, Rational};
use crate::stability::{self, OnePS};

pub const BLOCK_SIZE: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// `||f||_2^2 = sum_a |c_a|^2 a! l! / (d+l)!` for `f` of degree `d` in `l+1` variables.
pub fn l2_norm_sq(f: &MultiPoly) -> Result<Rational> {
    let d = f.is_homogeneous().ok_or(Error::NotHomogeneous)?;
    if f.var_count() == 0 {
        return Ok(f.coefficient_norm_sq());
    }
    let l = f.var_count() as u32 - 1;
    let denom = rational::factorial(d + l);
    let lf = rational::factorial(l);
    let mut total = Rational::zero();
    for (a, c) in f.terms() {
        let af = a.iter().fold(num_bigint::BigInt::one(), |acc, &k| acc * rational::factorial(k));
        total += c * c * Rational::new(af * &lf, denom.clone());
    }
    Ok(total)
}

/// A point uniform on the unit sphere of `C^{var_count}`.
pub fn sphere_point(rng: &mut ChaCha8Rng, var_count: usize) -> Vec<Complex64> {
    let mut w: Vec<Complex64> = (0..var_count)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut w {
        *z /= norm;
    }
    w
}

#[derive(Debug, Clone, Copy, Default)]
struct Stats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Stats {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Stats) -> Stats {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let (na, nb, n) = (self.count as f64, other.count as f64, count as f64);
        Stats {
            count,
            mean: self.mean + delta * nb / n,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n,
        }
    }
}

/// Monte-Carlo mean of `g` over the unit sphere of `C^{var_count}` with its
/// standard error.
pub fn sphere_average<G>(var_count: usize, samples: u64, seed: u64, shards: usize, g: G) -> Result<ThetaEstimate>
where
    G: Fn(&[Complex64]) -> f64 + Sync,
{
    if samples < 2 {
        return Err(Error::InvalidArgument("at least two samples are required".into()));
    }
    if shards == 0 {
        return Err(Error::InvalidArgument("shard count must be positive".into()));
    }
    let blocks = samples.div_ceil(BLOCK_SIZE);
    let per_shard = blocks.div_ceil(shards as u64).max(1);
    let ranges: Vec<(u64, u64)> = (0..blocks)
        .step_by(per_shard as usize)
        .map(|start| (start, (start + per_shard).min(blocks)))
        .collect();
    let run_block = |b: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b);
        let n = BLOCK_SIZE.min(samples - b * BLOCK_SIZE);
        let mut s = Stats::default();
        for _ in 0..n {
            s.push(g(&sphere_point(&mut rng, var_count)));
        }
        s
    };
    let per_block: Vec<Vec<Stats>> = ranges
        .par_iter()
        .map(|&(lo, hi)| (lo..hi).map(run_block).collect())
        .collect();
    let total = per_block.into_iter().flatten().fold(Stats::default(), Stats::merge);
    let variance = total.m2 / (total.count - 1) as f64;
    Ok(ThetaEstimate {
        mean: total.mean,
        stderr: (variance.max(0.0) / total.count as f64).sqrt(),
        samples,
        seed,
    })
}

/// Monte-Carlo estimate of the Mahler measure of `f`.
pub fn theta(f: &MultiPoly, samples: u64, seed: u64) -> Result<ThetaEstimate> {
    theta_sharded(f, samples, seed, 1)
}

/// As [`theta`], splitting the blocks over `shards` parallel workers.
pub fn theta_sharded(f: &MultiPoly, samples: u64, seed: u64, shards: usize) -> Result<ThetaEstimate> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = f.is_homogeneous().ok_or(Error::NotHomogeneous)?;
    if samples < 2 {
        return Err(Error::InvalidArgument("at least two samples are required".into()));
    }
    if d == 0 {
        return Ok(ThetaEstimate { mean: 0.0, stderr: 0.0, samples, seed });
    }
    // The integrand is invariant under f -> c f; fixing the leading coefficient
    // makes that hold bit for bit.
    let (_, lead) = f.leading_term().expect("nonzero");
    let normalized = f.scale(&lead.recip());
    let log_norm = rational::to_f64(&l2_norm_sq(&normalized)?).ln();
    let fp = normalized.float_terms();
    sphere_average(f.var_count(), samples, seed, shards, |w| fp.eval(w).norm_sqr().ln() - log_norm)
}

/// `theta(lambda(t) F)` for exact nonzero `t`.
pub fn theta_along_orbit(f: &MultiPoly, lambda: &OnePS, t: &Rational, samples: u64, seed: u64) -> Result<ThetaEstimate> {
    if !t.is_positive() && !t.is_negative() {
        return Err(Error::InvalidArgument("t must be nonzero".into()));
    }
    theta(&stability::act(f, lambda, t)?, samples, seed)
}
