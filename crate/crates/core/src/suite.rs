//! Named invariant checks behind `pf check`: one deterministic, seeded pass
//! over every module's key properties. A failure is an internal invariant
//! violation (CLI exit 4), never silent.

use crate::algebra::{ActionSpec, AlgebraElement, CMat};
use crate::error::Result;
use crate::group::{BallIndex, GroupSpec, DEFAULT_MEM_CAP};
use crate::pnorm::{
    amplification_check, build_truncated, pnorm_anchor, pnorm_boyd, tensor_power_check,
    transpose_dual_check, BoydOptions, PExponent,
};
use crate::rademacher::{moment_ratio, moment_ratio_se, RademacherSample};
use crate::util::seeded_rng;
use crate::walk::{
    avez_entropy, criteria_report, furstenberg_entropy, gibbs_bound_check, harmonic_measure,
    psd_gram_check_weight, psd_gram_check_xi, xi_cylinder_sum, xi_function, AvezOptions, Measure,
    WeightFunction,
};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use std::sync::Arc;

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub suite: String,
    pub passed: bool,
    pub detail: String,
}

pub const SUITES: &[&str] = &["group", "algebra", "pnorm", "rademacher", "walk"];

type CheckFn = fn(u64) -> Result<String>;

fn checks_for(suite: &str) -> Vec<(&'static str, CheckFn)> {
    match suite {
        "group" => vec![
            ("reduction_confluence", check_reduction_confluence),
            ("ball_sphere_formula", check_ball_sphere_formula),
            ("ball_neighbor_resolution", check_ball_neighbors),
        ],
        "algebra" => vec![
            ("l1_submultiplicative_involutive", check_algebra_norms),
            ("action_consistency", check_action_consistency),
        ],
        "pnorm" => vec![
            ("estimate_sandwich", check_sandwich),
            ("anchor_duality", check_anchor_duality),
            ("matrix_riesz_thorin", check_matrix_rt),
            ("restriction_monotonicity", check_restriction_monotonicity),
            ("tensor_power_identity", check_tensor_power),
            ("amplification_p2_isometry", check_amplification_p2),
            ("self_adjoint_pq_agreement", check_self_adjoint_pq),
        ],
        "rademacher" => vec![
            ("power_mean_direction", check_power_mean),
            ("enumeration_agreement", check_enumeration_agreement),
            ("sample_determinism", check_sample_determinism),
        ],
        "walk" => vec![
            ("entropy_subadditive_fekete", check_entropy_fekete),
            ("furstenberg_maximality", check_maximality),
            ("boundary_stationarity", check_stationarity),
            ("furstenberg_scaling", check_furstenberg_scaling),
            ("xi_properties", check_xi),
            ("weight_gram_psd", check_gram_psd),
            ("gibbs_nonnegative", check_gibbs),
            ("criteria_endpoints", check_criteria_endpoints),
        ],
        _ => Vec::new(),
    }
}

/// Run one suite or "all". Outcomes carry pass/fail plus a short detail line.
pub fn run_suite(which: &str, seed: u64) -> Result<Vec<CheckOutcome>> {
    let suites: Vec<&str> = if which == "all" {
        SUITES.to_vec()
    } else {
        vec![which]
    };
    let mut out = Vec::new();
    for suite in suites {
        let checks = checks_for(suite);
        if checks.is_empty() {
            return Err(crate::error::Error::precondition(format!(
                "unknown suite {which:?}; expected one of {SUITES:?} or \"all\""
            )));
        }
        for (name, f) in checks {
            let outcome = match f(seed) {
                Ok(detail) => CheckOutcome {
                    name: name.into(),
                    suite: suite.into(),
                    passed: true,
                    detail,
                },
                Err(e) => CheckOutcome {
                    name: name.into(),
                    suite: suite.into(),
                    passed: false,
                    detail: e.to_string(),
                },
            };
            out.push(outcome);
        }
    }
    Ok(out)
}

fn fail(msg: String) -> crate::error::Error {
    crate::error::Error::Internal(msg)
}

fn random_word(
    spec: &GroupSpec,
    max_len: usize,
    rng: &mut rand_chacha::ChaCha12Rng,
) -> crate::group::GroupElement {
    let len = rng.gen_range(0..=max_len);
    let k = spec.num_generators();
    let mut g = spec.identity();
    for _ in 0..len {
        let i = rng.gen_range(1..=k);
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        g = spec.compose_unchecked(&g, &spec.generator(i, sign).expect("in range"));
    }
    g
}

fn random_scalar_element(
    spec: &GroupSpec,
    radius: usize,
    terms: usize,
    rng: &mut rand_chacha::ChaCha12Rng,
) -> AlgebraElement {
    let mut f = AlgebraElement::scalar(spec.clone());
    for _ in 0..terms {
        let g = random_word(spec, radius, rng);
        let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        f.add_term(g, CMat::scalar(v)).expect("term in spec");
    }
    if f.support_len() == 0 {
        f.add_term(spec.identity(), CMat::scalar(Complex64::new(1.0, 0.0)))
            .expect("identity in spec");
    }
    f
}

fn srw_f2() -> Measure {
    Measure::srw(&GroupSpec::free(2)).expect("srw is well formed")
}

fn check_reduction_confluence(seed: u64) -> Result<String> {
    let spec = GroupSpec::free(2);
    let mut rng = seeded_rng(seed, 101);
    for _ in 0..200 {
        let (a, b, c) = (
            random_word(&spec, 6, &mut rng),
            random_word(&spec, 6, &mut rng),
            random_word(&spec, 6, &mut rng),
        );
        let ab_c = spec.compose(&spec.compose(&a, &b)?, &c)?;
        let a_bc = spec.compose(&a, &spec.compose(&b, &c)?)?;
        if ab_c != a_bc {
            return Err(fail("association order changed a reduced product".into()));
        }
    }
    Ok("200 randomized triple products associate".into())
}

fn check_ball_sphere_formula(_seed: u64) -> Result<String> {
    for (k, r) in [(2usize, 10usize), (3, 6)] {
        let spec = GroupSpec::free(k);
        let ball = BallIndex::enumerate(&spec, r, DEFAULT_MEM_CAP)?;
        let mut expect = 1u128;
        for n in 1..=r {
            expect += crate::group::free_sphere_size(k, n);
        }
        if ball.len() as u128 != expect {
            return Err(fail(format!(
                "free({k}) ball({r}) has {} elements, formula gives {expect}",
                ball.len()
            )));
        }
    }
    Ok("ball sizes match 1 + sum 2k(2k-1)^(n-1) for free(2) R<=10, free(3) R<=6".into())
}

fn check_ball_neighbors(_seed: u64) -> Result<String> {
    let spec = GroupSpec::free(2);
    let ball = BallIndex::enumerate(&spec, 5, DEFAULT_MEM_CAP)?;
    let inner = BallIndex::enumerate(&spec, 4, DEFAULT_MEM_CAP)?;
    for i in 0..inner.len() {
        let e = inner.element(i);
        for g in 1..=2 {
            for sign in [1, -1] {
                let f = spec.compose_unchecked(&e, &spec.generator(g, sign)?);
                if ball.index_of(&f).is_none() {
                    return Err(fail(format!("neighbor of ball(4) element {i} unresolvable")));
                }
            }
        }
    }
    Ok("every one-step neighbor of ball(R-1) resolves in ball(R)".into())
}

fn check_algebra_norms(seed: u64) -> Result<String> {
    let spec = GroupSpec::free(2);
    let mut rng = seeded_rng(seed, 102);
    for _ in 0..30 {
        let f = random_scalar_element(&spec, 3, 4, &mut rng);
        let g = random_scalar_element(&spec, 3, 4, &mut rng);
        let fg = f.convolve(&g)?;
        if fg.l1_norm() > f.l1_norm() * g.l1_norm() + 1e-9 {
            return Err(fail("l1 submultiplicativity violated".into()));
        }
        if (f.involute().l1_norm() - f.l1_norm()).abs() > 1e-9 {
            return Err(fail("involution is not l1-isometric".into()));
        }
        let lhs = fg.involute();
        let rhs = g.involute().convolve(&f.involute())?;
        for (t, m) in lhs.terms() {
            let n = rhs
                .coeff(t)
                .ok_or_else(|| fail("involution anti-homomorphism support mismatch".into()))?;
            if m.sub(n).fro_norm() > 1e-9 {
                return Err(fail("involution anti-homomorphism coefficient mismatch".into()));
            }
        }
    }
    Ok("30 randomized elements: submultiplicative, isometric involution, anti-homomorphism".into())
}

fn check_action_consistency(seed: u64) -> Result<String> {
    let spec = GroupSpec::free(2);
    let swap = crate::algebra::SignedPerm::new(vec![1, 0], vec![1.0, 1.0])?;
    let flip = crate::algebra::SignedPerm::new(vec![0, 1], vec![1.0, -1.0])?;
    let action = ActionSpec::from_generators(&spec, 2, vec![swap, flip])?;
    let mut rng = seeded_rng(seed, 103);
    for _ in 0..50 {
        let s = random_word(&spec, 4, &mut rng);
        let t = random_word(&spec, 4, &mut rng);
        let mut m = CMat::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                m.set(
                    i,
                    j,
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                );
            }
        }
        let st = spec.compose_unchecked(&s, &t);
        let lhs = action.act(&spec, &s, &action.act(&spec, &t, &m));
        let rhs = action.act(&spec, &st, &m);
        if lhs.sub(&rhs).fro_norm() > 1e-12 {
            return Err(fail("alpha_s alpha_t != alpha_st".into()));
        }
    }
    Ok("alpha_s(alpha_t(M)) = alpha_st(M) on 50 randomized triples".into())
}

fn check_sandwich(seed: u64) -> Result<String> {
    let spec = GroupSpec::free(2);
    let mut rng = seeded_rng(seed, 104);
    for _ in 0..5 {
        let f = random_scalar_element(&spec, 2, 4, &mut rng);
        let ball = Arc::new(BallIndex::enumerate(&spec, 4, DEFAULT_MEM_CAP)?);
        let t = build_truncated(&f, ball, 1)?;
        for p in [1.3, 2.0, 2.7] {
            let est = pnorm_boyd(&t, &PExponent::new(p)?, &BoydOptions::default())?;
            if !(est.lower <= est.upper) {
                return Err(fail(format!("lower {} > upper {}", est.lower, est.upper)));
            }
            if est.upper > f.l1_norm() + 1e-12 {
                return Err(fail("upper exceeds the l1 bound".into()));
            }
        }
    }
    Ok("lower <= upper <= l1 on randomized estimates".into())
}

fn check_anchor_duality(seed: u64) -> Result<String> {
    let spec = GroupSpec::free(2);
    let mut rng = seeded_rng(seed, 105);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let f = random_scalar_element(&spec, 2, 5, &mut rng);
        let rep = transpose_dual_check(
            &f,
            &PExponent::new(1.0)?,
            4,
            1,
            &BoydOptions::default(),
            DEFAULT_MEM_CAP,
        )?;
        worst = worst.max(rep.difference);
        if rep.difference >= 1e-12 {
            return Err(fail(format!("anchor duality off by {}", rep.difference)));
        }
    }
    Ok(format!("max |col-sum(T_f) - row-sum(T_f*)| = {worst:.2e} < 1e-12"))
}

fn check_matrix_rt(seed: u64) -> Result<String> {
    let spec = GroupSpec::free(2);
    let mut rng = seeded_rng(seed, 106);
    for _ in 0..10 {
        let f = random_scalar_element(&spec, 2, 5, &mut rng);
        let ball = Arc::new(BallIndex::enumerate(&spec, 4, DEFAULT_MEM_CAP)?);
        let t = build_truncated(&f, ball, 1)?;
        let n1 = pnorm_anchor(&t, 1.0)?;
        let ninf = pnorm_anchor(&t, f64::INFINITY)?;
        let s2 = pnorm_anchor(&t, 2.0)?;
        if s2 > (n1 * ninf).sqrt() {
            return Err(fail(format!(
                "sigma_2 = {s2} exceeds sqrt(N1 Ninf) = {}",
                (n1 * ninf).sqrt()
            )));
        }
        if s2 > n1.max(ninf) {
            return Err(fail("sigma_2 exceeds max(N1, Ninf)".into()));
        }
    }
    Ok("sigma_2 <= sqrt(N1 Ninf) and <= max(N1, Ninf) on all truncations".into())
}

fn check_restriction_monotonicity(_seed: u64) -> Result<String> {
    let mu = srw_f2();
    let spec = GroupSpec::free(2);
    let mut f = AlgebraElement::scalar(spec.clone());
    for (g, m) in mu.terms() {
        f.add_term(g.clone(), CMat::scalar(Complex64::new(m, 0.0)))?;
    }
    let mut prev = 0.0;
    for r in [2usize, 4, 6] {
        let ball = Arc::new(BallIndex::enumerate(&spec, r, DEFAULT_MEM_CAP)?);
        let t = build_truncated(&f, ball, 1)?;
        let est = pnorm_boyd(&t, &PExponent::new(2.0)?, &BoydOptions::default())?;
        if est.lower < prev - 1e-9 {
            return Err(fail(format!("lower bound decreased at R={r}")));
        }
        prev = est.lower;
    }
    Ok("p=2 certified lower bounds nondecreasing over R in {2,4,6}".into())
}

fn check_tensor_power(seed: u64) -> Result<String> {
    let spec = GroupSpec::free(2);
    let mut rng = seeded_rng(seed, 107);
    for _ in 0..3 {
        let f = random_scalar_element(&spec, 2, 4, &mut rng);
        let mut xi = Vec::new();
        for _ in 0..3 {
            let g = random_word(&spec, 2, &mut rng);
            xi.push((
                g,
                vec![
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                ],
            ));
        }
        for p in [1.5, 3.0] {
            let rep = tensor_power_check(&f, &xi, &PExponent::new(p)?, DEFAULT_MEM_CAP)?;
            if (rep.eta_norm - 1.0).abs() > 1e-10 || rep.difference > 1e-10 {
                return Err(fail(format!(
                    "tensor identity off: eta {} diff {}",
                    rep.eta_norm, rep.difference
                )));
            }
        }
    }
    Ok("||x_2 eta_2|| = ||lambda(f) xi||^2 and ||eta_2|| = 1 to 1e-10".into())
}

fn check_amplification_p2(seed: u64) -> Result<String> {
    let spec = GroupSpec::free(2);
    let mut rng = seeded_rng(seed, 108);
    let f = random_scalar_element(&spec, 2, 4, &mut rng);
    let rep = amplification_check(
        &f,
        &[3],
        &PExponent::new(2.0)?,
        4,
        &BoydOptions::default(),
        DEFAULT_MEM_CAP,
    )?;
    let gap = (rep.points[0].lower - rep.base.lower).abs();
    if gap > 1e-9 {
        return Err(fail(format!("p=2 amplification gap {gap}")));
    }
    Ok(format!("p=2 amplification isometric to {gap:.2e}"))
}

fn check_self_adjoint_pq(_seed: u64) -> Result<String> {
    let spec = GroupSpec::free(2);
    let mu = srw_f2();
    let mut f = AlgebraElement::scalar(spec.clone());
    for (g, m) in mu.terms() {
        f.add_term(g.clone(), CMat::scalar(Complex64::new(m, 0.0)))?;
    }
    let ball = Arc::new(BallIndex::enumerate(&spec, 6, DEFAULT_MEM_CAP)?);
    let t = build_truncated(&f, ball, 1)?;
    let p = PExponent::new(1.5)?;
    let ep = pnorm_boyd(&t, &p, &BoydOptions::default())?;
    let eq = pnorm_boyd(&t, &p.conjugate(), &BoydOptions::default())?;
    let gap = (ep.lower - eq.lower).abs() / ep.lower.max(eq.lower);
    if gap > 0.05 {
        return Err(fail(format!("self-adjoint p/q estimates gap {gap:.3}")));
    }
    Ok(format!("p and q estimates of self-adjoint SRW within {gap:.3} relative"))
}

fn check_power_mean(seed: u64) -> Result<String> {
    let mut rng = seeded_rng(seed, 109);
    let vectors: Vec<Vec<Complex64>> = (0..6)
        .map(|_| {
            (0..4)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    let s = RademacherSample::draw(&vectors, 1, 1.5, 3000, seed, 5)?;
    let r12 = moment_ratio(&s, 1.0, 2.0)?;
    let r21 = moment_ratio(&s, 2.0, 1.0)?;
    if r12 < 1.0 - 1e-12 || r21 > 1.0 + 1e-12 {
        return Err(fail("power-mean direction violated on the sample".into()));
    }
    Ok(format!("ratio(1->2) = {r12:.4} >= 1 >= ratio(2->1) = {r21:.4}"))
}

fn check_enumeration_agreement(seed: u64) -> Result<String> {
    let vectors: Vec<Vec<Complex64>> = (0..8).map(|_| vec![Complex64::new(1.0, 0.0)]).collect();
    let oracle = RademacherSample::enumerate(&vectors, 1, 2.0)?;
    let exact = moment_ratio(&oracle, 1.0, 2.0)?;
    let mc = RademacherSample::draw(&vectors, 1, 2.0, 100_000, seed, 6)?;
    let est = moment_ratio(&mc, 1.0, 2.0)?;
    let se = moment_ratio_se(&mc, 1.0, 2.0);
    if (est - exact).abs() > 3.0 * se {
        return Err(fail(format!(
            "Monte Carlo ratio {est} vs exact {exact} outside 3 SE ({se:.2e})"
        )));
    }
    Ok(format!("MC {est:.5} vs exact {exact:.5} within 3 SE"))
}

fn check_sample_determinism(seed: u64) -> Result<String> {
    let vectors = vec![
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)],
        vec![Complex64::new(0.5, 0.5), Complex64::new(2.0, 0.0)],
    ];
    let a = RademacherSample::draw(&vectors, 1, 2.0, 500, seed, 7)?;
    let b = RademacherSample::draw(&vectors, 1, 2.0, 500, seed, 7)?;
    if a.signs() != b.signs()
        || a.norms()
            .iter()
            .zip(b.norms())
            .any(|(x, y)| x.to_bits() != y.to_bits())
    {
        return Err(fail("identical seeds produced different samples".into()));
    }
    Ok("identical seed reproduces the sample bit for bit".into())
}

fn check_entropy_fekete(_seed: u64) -> Result<String> {
    let mu = srw_f2();
    let rep = avez_entropy(
        &mu,
        &AvezOptions {
            n_max: 8,
            mc_samples: 0,
            seed: 0,
            cap: DEFAULT_MEM_CAP,
        },
    )?;
    if !rep.ratio_nonincreasing {
        return Err(fail("H_n/n is not nonincreasing".into()));
    }
    if rep.max_subadditivity_defect > 1e-9 {
        return Err(fail(format!(
            "subadditivity defect {}",
            rep.max_subadditivity_defect
        )));
    }
    Ok(format!(
        "H_n/n nonincreasing; max subadditivity defect {:.2e}",
        rep.max_subadditivity_defect
    ))
}

fn check_maximality(_seed: u64) -> Result<String> {
    let mu = srw_f2();
    let nu = harmonic_measure(&mu)?;
    let h_x = furstenberg_entropy(&mu, &nu)?;
    let rep = avez_entropy(
        &mu,
        &AvezOptions {
            n_max: 8,
            mc_samples: 0,
            seed: 0,
            cap: DEFAULT_MEM_CAP,
        },
    )?;
    if h_x > rep.fekete_upper + 1e-9 {
        return Err(fail(format!(
            "Furstenberg entropy {h_x} exceeds the Fekete upper bound {}",
            rep.fekete_upper
        )));
    }
    Ok(format!("h_mu(X, nu) = {h_x:.6} <= H_8/8 = {:.6}", rep.fekete_upper))
}

fn check_stationarity(_seed: u64) -> Result<String> {
    let spec = GroupSpec::free(2);
    let srw = srw_f2();
    let biased = Measure::new(
        spec.clone(),
        vec![
            (spec.parse_word("a")?, 0.5),
            (spec.parse_word("A")?, 1.0 / 6.0),
            (spec.parse_word("b")?, 1.0 / 6.0),
            (spec.parse_word("B")?, 1.0 / 6.0),
        ],
    )?;
    let mut worst = 0.0f64;
    for mu in [&srw, &biased] {
        let nu = harmonic_measure(mu)?;
        worst = worst.max(nu.stationarity_residual(mu)?);
    }
    if worst > 1e-12 {
        return Err(fail(format!("stationarity residual {worst}")));
    }
    Ok(format!("max depth-1 stationarity residual {worst:.2e}"))
}

fn check_furstenberg_scaling(_seed: u64) -> Result<String> {
    let mu = srw_f2();
    let nu = harmonic_measure(&mu)?;
    let mu2 = mu.convolve(&mu, DEFAULT_MEM_CAP)?;
    let h1 = furstenberg_entropy(&mu, &nu)?;
    let h2 = furstenberg_entropy(&mu2, &nu)?;
    if (h2 - 2.0 * h1).abs() > 1e-10 {
        return Err(fail(format!("h(mu*mu) = {h2} vs 2 h(mu) = {}", 2.0 * h1)));
    }
    Ok("h_{mu*mu} = 2 h_mu to 1e-10".into())
}

fn check_xi(seed: u64) -> Result<String> {
    let spec = GroupSpec::free(2);
    let mu = srw_f2();
    let nu = harmonic_measure(&mu)?;
    if xi_function(&spec.identity(), &nu)? != 1.0 {
        return Err(fail("Xi(e) != 1".into()));
    }
    let mut rng = seeded_rng(seed, 110);
    for _ in 0..10 {
        let g = random_word(&spec, 4, &mut rng);
        let xi = xi_function(&g, &nu)?;
        if !(xi > 0.0 && xi <= 1.0 + 1e-12) {
            return Err(fail(format!("Xi out of (0, 1]: {xi}")));
        }
        let brute = xi_cylinder_sum(&g, &nu)?;
        if (xi - brute).abs() > 1e-12 {
            return Err(fail(format!("Xi fast path {xi} vs cylinder sum {brute}")));
        }
    }
    Ok("Xi(e) = 1; Xi in (0, 1]; fast path matches the cylinder sum".into())
}

fn check_gram_psd(_seed: u64) -> Result<String> {
    let spec = GroupSpec::free(2);
    let mu = srw_f2();
    let nu = harmonic_measure(&mu)?;
    let phi = WeightFunction::phi_beta(0.5)?;
    let g1 = psd_gram_check_weight(&phi, &spec, 3, DEFAULT_MEM_CAP)?;
    let g2 = psd_gram_check_xi(&nu, 2, DEFAULT_MEM_CAP)?;
    if !g1.psd || !g2.psd {
        return Err(fail(format!(
            "Gram not PSD: phi min {} xi min {}",
            g1.min_eigenvalue, g2.min_eigenvalue
        )));
    }
    Ok(format!(
        "phi_0.5 ball(3) min eig {:.2e}; Xi ball(2) min eig {:.2e}",
        g1.min_eigenvalue, g2.min_eigenvalue
    ))
}

fn check_gibbs(_seed: u64) -> Result<String> {
    let mu = srw_f2();
    let nu = harmonic_measure(&mu)?;
    let weights = [
        WeightFunction::omega_alpha(0.0)?,
        WeightFunction::omega_alpha(2.0)?,
        WeightFunction::xi_power(-2.0, &nu, 4)?,
    ];
    for w in &weights {
        let rep = gibbs_bound_check(&mu, 4, w, DEFAULT_MEM_CAP)?;
        if rep.kl < 0.0 {
            return Err(fail(format!("negative KL for {}", rep.weight)));
        }
    }
    Ok("D(mu^{*4} || eta) >= 0 for uniform, omega_alpha(2), Xi^{-2}".into())
}

fn check_criteria_endpoints(_seed: u64) -> Result<String> {
    let h = 0.5 * 3f64.ln();
    let rep = criteria_report(2, h, 0.5, 0.1, 4.0)?;
    if rep.endpoint_residual_ii > 1e-12 {
        return Err(fail(format!("endpoint (ii) residual {}", rep.endpoint_residual_ii)));
    }
    if let Some(r) = rep.endpoint_residual_iii {
        if r > 1e-12 {
            return Err(fail(format!("endpoint (iii) residual {r}")));
        }
    }
    Ok("interval endpoints satisfy the defining inequalities to 1e-12".into())
}
