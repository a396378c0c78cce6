//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::time::Instant;

use common::*;
use elim_core::complexes::{scaling_exponent, torsion, torsion_with};
use elim_core::elimination::{self, discriminant, resultant, resultant_symbolic, sylvester_resultant};
use elim_core::koszul::{self, KoszulSpec};
use elim_core::mahler::{theta, ThetaEstimate};
use elim_core::rational::{self, from_frac, from_int};
use elim_core::stability::{act_decompose, limit_polynomial, log_spaced, slope_fit, weight, OnePS};
use elim_core::{linalg, FormSystem, Matrix, MultiPoly, Rational};
use num_traits::{Signed, Zero};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn choice_independence() -> Outcome {
    let mut rng = rng(1);
    let mut choices = common::rng(101);
    for k in 0..200 {
        let c = random_exact_complex(&mut rng, 5);
        let greedy = torsion(&c).map_err(|e| e.to_string())?.value;
        for _ in 0..2 {
            let other = torsion_with(&c, random_choice(&mut choices)).map_err(|e| e.to_string())?.value;
            check(greedy == other, || format!("complex {k}: {greedy} vs {other}"))?;
        }
    }
    Ok("200 complexes, 2 random choices each".into())
}

fn scaling_law() -> Outcome {
    let mut rng = rng(1);
    let mus = [from_int(2), from_int(-3), from_frac(1, 2)];
    for k in 0..200 {
        let c = random_exact_complex(&mut rng, 5);
        let base = torsion(&c).unwrap().value;
        let e = scaling_exponent(c.dims());
        for mu in &mus {
            let scaled = torsion(&c.scaled(mu)).unwrap().value;
            check(scaled == rational::pow(mu, e) * &base, || format!("complex {k}, mu = {mu}"))?;
        }
    }
    Ok("200 complexes x 3 scalars".into())
}

fn resultant_vs_sylvester() -> Outcome {
    let mut rng = rng(3);
    let mut signs = Vec::new();
    for d0 in 1..=4 {
        for d1 in 1..=4 {
            let mut eps: Option<Rational> = None;
            for k in 0..100 {
                let sys = random_system(&mut rng, 1, &[d0, d1], 5);
                let r = resultant(&sys).unwrap();
                let s = sylvester_resultant(&sys.forms()[0], &sys.forms()[1]).unwrap();
                if s.is_zero() {
                    check(r.is_zero(), || format!("({d0},{d1}) #{k}: Sylvester 0 but resultant {r}"))?;
                    continue;
                }
                let ratio = &r / &s;
                check(ratio.abs() == from_int(1), || format!("({d0},{d1}) #{k}: ratio {ratio}"))?;
                match &eps {
                    None => eps = Some(ratio),
                    Some(e) => check(*e == ratio, || format!("({d0},{d1}) #{k}: sign flipped"))?,
                }
            }
            signs.push(format!("{d0}{d1}:{}", eps.map_or("?".into(), |e| rational::format(&e))));
        }
    }
    Ok(format!("signs {}", signs.join(" ")))
}

fn vanishing_criterion() -> Outcome {
    let mut rng = rng(4);
    for k in 0..100 {
        let n = 1 + k % 2;
        let degrees: Vec<u32> = (0..=n).map(|_| rng.gen_range(1..=3)).collect();
        let sys = if k < 50 { common_root_system(&mut rng, n, &degrees, 5) } else { random_system(&mut rng, n, &degrees, 9) };
        let spec = KoszulSpec::at_macaulay_bound(n, degrees.clone()).unwrap();
        let c = koszul::build_complex(&spec, sys.forms()).unwrap();
        let exact = elim_core::complexes::is_exact(&c).unwrap();
        let r = resultant(&sys).unwrap();
        if k < 50 {
            check(!exact && r.is_zero(), || format!("common-root system {k} reported {r}"))?;
        } else {
            check(exact && !r.is_zero(), || format!("generic system {k} ({degrees:?}) reported 0"))?;
        }
    }
    Ok("50 common-root systems vanish, 50 generic do not".into())
}

fn chi_equals_degree() -> Outcome {
    let mut cases = 0;
    for n in 1..=2usize {
        let mut degrees = vec![1u32; n + 1];
        loop {
            let spec = KoszulSpec::at_macaulay_bound(n, degrees.clone()).unwrap();
            let m0 = koszul::macaulay_bound(&spec);
            for m in m0..=m0 + 3 {
                let chi = koszul::chi(&spec.with_twist(m));
                let expected = elimination::resultant_degree(&degrees) as i64;
                check(chi == expected, || format!("n={n} d={degrees:?} m={m}: chi {chi} != {expected}"))?;
                cases += 1;
            }
            match degrees.iter().position(|&d| d < 3) {
                None => break,
                Some(i) => {
                    degrees[i] += 1;
                    degrees[..i].iter_mut().for_each(|d| *d = 1);
                }
            }
        }
    }
    Ok(format!("{cases} cases"))
}

fn discriminant_oracles() -> Outcome {
    let mut rng = rng(6);
    let mut eps2: Option<Rational> = None;
    for k in 0..20 {
        let (a, b, c) = (rng.gen_range(-6..=6i64), rng.gen_range(-6..=6i64), rng.gen_range(-6..=6i64));
        if a == 0 && b == 0 && c == 0 {
            continue;
        }
        let f = MultiPoly::from_terms(2, [(vec![2, 0], from_int(a)), (vec![1, 1], from_int(b)), (vec![0, 2], from_int(c))]).unwrap();
        let disc = discriminant(&f).unwrap();
        let oracle = from_int(4 * a * c - b * b);
        consistent_sign(&mut eps2, &disc, &oracle).map_err(|m| format!("binary #{k}: {m}"))?;
    }
    let mut eps3: Option<Rational> = None;
    for k in 0..20 {
        let mut a = Matrix::zeros(3, 3);
        for i in 0..3 {
            for j in i..3 {
                let v = from_int(rng.gen_range(-3..=3));
                a[(i, j)] = v.clone();
                a[(j, i)] = v;
            }
        }
        let mut f = MultiPoly::zero(3);
        for i in 0..3 {
            for j in 0..3 {
                let mut e = vec![0u32; 3];
                e[i] += 1;
                e[j] += 1;
                f = f.add(&MultiPoly::monomial(3, e, a[(i, j)].clone())).unwrap();
            }
        }
        if f.is_zero() {
            continue;
        }
        let disc = discriminant(&f).unwrap();
        let oracle = from_int(8) * linalg::det(&a).unwrap();
        consistent_sign(&mut eps3, &disc, &oracle).map_err(|m| format!("ternary #{k}: {m}"))?;
    }
    let show = |e: &Option<Rational>| e.as_ref().map_or("?".into(), rational::format);
    Ok(format!("sign {} on 4ac-b^2, sign {} on 8 det A", show(&eps2), show(&eps3)))
}

fn consistent_sign(eps: &mut Option<Rational>, value: &Rational, oracle: &Rational) -> Result<(), String> {
    if oracle.is_zero() {
        return check(value.is_zero(), || format!("oracle 0 but got {value}"));
    }
    let ratio = value / oracle;
    check(ratio.abs() == from_int(1), || format!("{value} vs oracle {oracle}"))?;
    match eps {
        None => *eps = Some(ratio),
        Some(e) => check(*e == ratio, || "sign flipped".into())?,
    }
    Ok(())
}

fn sl_equivariance() -> Outcome {
    let mut rng = rng(7);
    for k in 0..50 {
        let n = 1 + k % 2;
        let degrees: Vec<u32> = (0..=n).map(|_| rng.gen_range(1..=2)).collect();
        let sys = random_system(&mut rng, n, &degrees, 4);
        let a = random_sl(&mut rng, n + 1);
        let before = resultant(&sys).unwrap();
        let after = resultant(&sys.apply_linear(&a).unwrap()).unwrap();
        check(before == after, || format!("system {k}: {before} vs {after}"))?;
    }
    Ok("50 systems".into())
}

fn slope_asymptotics() -> Outcome {
    let mut rng = rng(8);
    let ts = log_spaced(1e-3, 1e-6, 1);
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let vars = rng.gen_range(2..=4);
        let degree = rng.gen_range(1..=3);
        let f = random_form(&mut rng, vars, degree, 5);
        let lambda = OnePS::new(random_weights(&mut rng, vars, 3));
        let w = weight(&f, &lambda).unwrap();
        let s = slope_fit(&f, &lambda, &ts).unwrap();
        worst = worst.max((s - w as f64).abs());
        check((s - w as f64).abs() <= 1e-3, || format!("case {k}: slope {s} vs weight {w}"))?;
        let oracle = MultiPoly::from_terms(
            vars,
            f.terms().filter(|(e, _)| lambda.exponent(e) == w).map(|(e, c)| (e.clone(), c.clone())),
        )
        .unwrap();
        check(limit_polynomial(&f, &lambda).unwrap() == oracle, || format!("case {k}: limit differs"))?;
        check(act_decompose(&f, &lambda).unwrap().min_exponent() == Some(w), || format!("case {k}: min exponent"))?;
    }
    Ok(format!("20 cases, worst |slope - weight| = {worst:.2e}"))
}

/// `theta(w0^d)` on the line by quadrature in the affine chart: the
/// Fubini-Study measure is `2r/(1+r^2)^2 dr`, and `u = 1/(1+r^2)`, `u = v^2`
/// turn the log term into `int_0^1 4 d v log v dv`.
fn radial_oracle(d: u32) -> f64 {
    let panels = 20_000;
    let h = 1.0 / panels as f64;
    let g = |v: f64| if v == 0.0 { 0.0 } else { 4.0 * d as f64 * v * v.ln() };
    let simpson: f64 = (0..panels)
        .map(|i| {
            let a = i as f64 * h;
            h / 6.0 * (g(a) + 4.0 * g(a + h / 2.0) + g(a + h))
        })
        .sum();
    simpson + (d as f64 + 1.0).ln()
}

fn mahler_measure() -> Outcome {
    let mut notes = Vec::new();
    for d in 1..=3u32 {
        let oracle = radial_oracle(d);
        check((oracle - (-(d as f64) + (d as f64 + 1.0).ln())).abs() < 1e-6, || format!("quadrature off for d={d}"))?;
        let f = MultiPoly::monomial(2, vec![d, 0], from_int(1));
        let e = theta(&f, 100_000, 11 + d as u64).unwrap();
        check((e.mean - oracle).abs() <= 3.0 * e.stderr, || format!("w0^{d}: {} +- {} vs {oracle}", e.mean, e.stderr))?;
        notes.push(format!("d={d}: {:.4}+-{:.4}", e.mean, e.stderr));
    }
    let mut rng = rng(9);
    for k in 0..20 {
        let vars = rng.gen_range(2..=3);
        let degree = rng.gen_range(1..=3);
        let f = random_form(&mut rng, vars, degree, 5);
        let e = theta(&f, 20_000, 100 + k).unwrap();
        check(e.mean <= 3.0 * e.stderr, || format!("Jensen fails for {f}: {e:?}"))?;
    }
    let f = MultiPoly::parse("x0^2 - 3*x0*x1 + x1*x2", Some(3)).unwrap();
    let small: ThetaEstimate = theta(&f, 10_000, 5).unwrap();
    let large = theta(&f, 40_000, 6).unwrap();
    let ratio = large.stderr / small.stderr;
    check((0.25..=0.75).contains(&ratio), || format!("stderr ratio {ratio} per 4x samples"))?;
    notes.push(format!("stderr ratio {ratio:.3}"));
    Ok(notes.join(", "))
}

fn symbolic_consistency() -> Outcome {
    let mut rng = rng(10);
    let configs: [(usize, Vec<u32>); 3] = [(1, vec![1, 1]), (1, vec![2, 1]), (2, vec![1, 1, 1])];
    let mut notes = Vec::new();
    for (n, degrees) in configs {
        let r = resultant_symbolic(n, &degrees, elimination::DEFAULT_MAX_GRID).map_err(|e| e.to_string())?;
        let layout = elimination::coefficient_layout(n, &degrees);
        let vars: usize = layout.iter().map(Vec::len).sum();
        let u = |k: usize| MultiPoly::var(vars, k).unwrap();
        let zero = MultiPoly::zero(vars);
        let rows: Vec<Vec<MultiPoly>> = if n == 1 && degrees == [2, 1] {
            // Sylvester matrix of u0 x0^2 + u1 x0 x1 + u2 x1^2 and u3 x0 + u4 x1.
            vec![vec![u(0), u(1), u(2)], vec![u(3), u(4), zero.clone()], vec![zero, u(3), u(4)]]
        } else {
            (0..=n).map(|i| (0..=n).map(|j| u(i * (n + 1) + j)).collect()).collect()
        };
        let oracle = symbolic_det(&rows);
        check(r == oracle || r == oracle.neg(), || format!("{degrees:?}: {r} vs oracle {oracle}"))?;
        let mut eps: Option<Rational> = None;
        for k in 0..20 {
            let coeffs: Vec<Rational> = (0..vars).map(|_| from_int(rng.gen_range(-7..=7))).collect();
            let Ok(sys) = FormSystem::from_coefficients(n, &degrees, &coeffs) else { continue };
            let numeric = resultant(&sys).unwrap();
            let symbolic = r.eval(&coeffs).unwrap();
            consistent_sign(&mut eps, &symbolic, &numeric).map_err(|m| format!("{degrees:?} #{k}: {m}"))?;
        }
        let sign = eps.as_ref().map_or("?".into(), rational::format);
        notes.push(format!("{degrees:?}: {} terms, sign {sign}", r.len()));
    }
    Ok(notes.join(", "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("torsion is independent of the basis choices", choice_independence),
        ("torsion scaling law", scaling_law),
        ("resultant equals Sylvester up to a sign per degree pair", resultant_vs_sylvester),
        ("resultant vanishes exactly on common roots", vanishing_criterion),
        ("chi equals the resultant degree", chi_equals_degree),
        ("discriminant oracles", discriminant_oracles),
        ("SL invariance of the resultant", sl_equivariance),
        ("weight, slope and limit agree", slope_asymptotics),
        ("Mahler measure estimator", mahler_measure),
        ("symbolic and numeric resultants agree", symbolic_consistency),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
