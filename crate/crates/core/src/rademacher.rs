//! Empirical Kahane-Khintchine machinery: Rademacher sums of vectors in the
//! same l^p block geometry the operator module uses, moment-comparison
//! ratios, and the amplification-constant scan.
//!
//! The exhaustive 2^n enumeration is the ground-truth oracle for n <= 12;
//! Monte Carlo covers larger families. Only the power-mean direction is
//! asserted; the Kahane constants themselves are reported as empirical
//! lower estimates.

use crate::error::{Error, Result};
use crate::pnorm::lp_block_norm;
use crate::util::seeded_rng;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

pub const ENUMERATION_LIMIT: usize = 12;

/// A family x_1..x_n with a trials x n sign matrix and the per-trial norms
/// ||sum_k eps_k x_k|| in the l^p(positions; C^block) geometry.
#[derive(Debug, Clone)]
pub struct RademacherSample {
    n: usize,
    trials: usize,
    seed: u64,
    signs: Vec<Vec<i8>>,
    norms: Vec<f64>,
}

impl RademacherSample {
    /// Draw `trials` iid uniform sign patterns from the seeded generator and
    /// record the norm of each signed sum.
    pub fn draw(
        vectors: &[Vec<Complex64>],
        block: usize,
        space_p: f64,
        trials: usize,
        seed: u64,
        stream: u64,
    ) -> Result<Self> {
        let n = vectors.len();
        if n == 0 || trials == 0 {
            return Err(Error::precondition("need at least one vector and one trial"));
        }
        let len = vectors[0].len();
        if vectors.iter().any(|v| v.len() != len) || len == 0 || !len.is_multiple_of(block) {
            return Err(Error::precondition("vectors must share a blocked length"));
        }
        let mut rng = seeded_rng(seed, stream);
        let mut signs = Vec::with_capacity(trials);
        let mut norms = Vec::with_capacity(trials);
        let mut sum = vec![Complex64::new(0.0, 0.0); len];
        for _ in 0..trials {
            let eps: Vec<i8> = (0..n)
                .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
                .collect();
            sum.fill(Complex64::new(0.0, 0.0));
            for (e, v) in eps.iter().zip(vectors) {
                let s = *e as f64;
                for (acc, c) in sum.iter_mut().zip(v) {
                    *acc += c * s;
                }
            }
            norms.push(lp_block_norm(&sum, block, space_p));
            signs.push(eps);
        }
        Ok(RademacherSample {
            n,
            trials,
            seed,
            signs,
            norms,
        })
    }

    /// All 2^n sign patterns, exactly. Oracle for n <= ENUMERATION_LIMIT.
    pub fn enumerate(vectors: &[Vec<Complex64>], block: usize, space_p: f64) -> Result<Self> {
        let n = vectors.len();
        if n == 0 {
            return Err(Error::precondition("need at least one vector"));
        }
        if n > ENUMERATION_LIMIT {
            return Err(Error::precondition(format!(
                "exhaustive enumeration capped at n={ENUMERATION_LIMIT}, got {n}"
            )));
        }
        let len = vectors[0].len();
        if vectors.iter().any(|v| v.len() != len) || len == 0 || !len.is_multiple_of(block) {
            return Err(Error::precondition("vectors must share a blocked length"));
        }
        let total = 1usize << n;
        let mut signs = Vec::with_capacity(total);
        let mut norms = Vec::with_capacity(total);
        let mut sum = vec![Complex64::new(0.0, 0.0); len];
        for mask in 0..total {
            let eps: Vec<i8> = (0..n)
                .map(|k| if mask >> k & 1 == 1 { -1 } else { 1 })
                .collect();
            sum.fill(Complex64::new(0.0, 0.0));
            for (e, v) in eps.iter().zip(vectors) {
                let s = *e as f64;
                for (acc, c) in sum.iter_mut().zip(v) {
                    *acc += c * s;
                }
            }
            norms.push(lp_block_norm(&sum, block, space_p));
            signs.push(eps);
        }
        Ok(RademacherSample {
            n,
            trials: total,
            seed: 0,
            signs,
            norms,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn signs(&self) -> &[Vec<i8>] {
        &self.signs
    }

    fn moment(&self, p: f64) -> f64 {
        crate::util::kahan_sum(self.norms.iter().map(|&x| x.powf(p))) / self.trials as f64
    }
}

/// (mean ||.||^q)^{1/q} / (mean ||.||^p)^{1/p} over the sample. By power-mean
/// monotonicity the ratio is >= 1 when q >= p and <= 1 when q <= p.
pub fn moment_ratio(sample: &RademacherSample, p: f64, q: f64) -> Result<f64> {
    if !(p >= 1.0) || !(q >= 1.0) {
        return Err(Error::precondition("moment exponents must be >= 1"));
    }
    if sample.trials == 0 {
        return Err(Error::precondition("empty sample"));
    }
    Ok(sample.moment(q).powf(1.0 / q) / sample.moment(p).powf(1.0 / p))
}

/// Delta-method standard error of the ratio (mean X^q)^{1/q}/(mean X^p)^{1/p}.
pub fn moment_ratio_se(sample: &RademacherSample, p: f64, q: f64) -> f64 {
    let t = sample.trials as f64;
    let a = sample.moment(q);
    let b = sample.moment(p);
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let r = a.powf(1.0 / q) / b.powf(1.0 / p);
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    let mut cov = 0.0;
    for &x in &sample.norms {
        let da = x.powf(q) - a;
        let db = x.powf(p) - b;
        var_a += da * da;
        var_b += db * db;
        cov += da * db;
    }
    var_a /= t;
    var_b /= t;
    cov /= t;
    let ga = r / (q * a);
    let gb = -r / (p * b);
    let v = (ga * ga * var_a + gb * gb * var_b + 2.0 * ga * gb * cov) / t;
    v.max(0.0).sqrt()
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyRow {
    pub name: String,
    pub n: usize,
    pub dim: usize,
    pub trials: usize,
    /// (E||.||^2)^{1/2} / (E||.||^p)^{1/p}
    pub ratio_p_to_2: f64,
    /// (E||.||^p)^{1/p} / (E||.||^2)^{1/2}
    pub ratio_2_to_p: f64,
    pub se_p_to_2: f64,
    /// exact all-patterns value when n <= 12
    pub exact_ratio_p_to_2: Option<f64>,
    pub within_3se: Option<bool>,
    /// power-mean direction on this very sample (up to fp slack)
    pub direction_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KahaneReport {
    pub p: f64,
    pub seed: u64,
    pub trials: usize,
    pub families: Vec<FamilyRow>,
    /// max observed (E^2)^{1/2}/(E^p)^{1/p}: empirical K_{p,2}
    pub k_hat_p2: f64,
    /// max observed (E^p)^{1/p}/(E^2)^{1/2}: empirical K_{2,p}
    pub k_hat_2p: f64,
    /// empirical lower estimate of the amplification constant C_p
    pub c_p_estimate: f64,
}

fn standard_families(dim: usize, n: usize, seed: u64) -> Vec<(String, Vec<Vec<Complex64>>)> {
    let mut fams = Vec::new();
    // disjointly supported basis vectors: constant sums, ratio 1
    let basis: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n.max(dim))
                .map(|j| {
                    if j == i {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    fams.push(("basis".to_string(), basis));
    // n copies of one vector: the scalar Khintchine case
    let repeated: Vec<Vec<Complex64>> = (0..n)
        .map(|_| vec![Complex64::new(1.0, 0.0); 1])
        .collect();
    fams.push(("repeated".to_string(), repeated));
    // seeded random complex vectors in C^dim
    let mut rng = seeded_rng(seed, 1000);
    let random: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..dim)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    fams.push(("random".to_string(), random));
    fams
}

/// Scan the standard families: report the max observed moment ratios and
/// their product as an empirical lower estimate of C_p = K_{p,2} K_{2,p}.
pub fn kahane_constant_scan(
    dim: usize,
    n: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<KahaneReport> {
    if !(p >= 1.0) {
        return Err(Error::precondition("p must be >= 1"));
    }
    if dim == 0 || n == 0 || trials == 0 {
        return Err(Error::precondition("dim, n, trials must be >= 1"));
    }
    let mut families = Vec::new();
    let mut k_p2 = 0.0f64;
    let mut k_2p = 0.0f64;
    for (fi, (name, vectors)) in standard_families(dim, n, seed).into_iter().enumerate() {
        // the space norm is the same l^p ball geometry (block 1)
        let sample = RademacherSample::draw(&vectors, 1, p, trials, seed, fi as u64)?;
        let r_p2 = moment_ratio(&sample, p, 2.0)?;
        let r_2p = moment_ratio(&sample, 2.0, p)?;
        let se = moment_ratio_se(&sample, p, 2.0);
        let (exact, within) = if n <= ENUMERATION_LIMIT {
            let oracle = RademacherSample::enumerate(&vectors, 1, p)?;
            let ex = moment_ratio(&oracle, p, 2.0)?;
            (Some(ex), Some((r_p2 - ex).abs() <= 3.0 * se + 1e-12))
        } else {
            (None, None)
        };
        let direction_ok = if p <= 2.0 {
            r_p2 >= 1.0 - 1e-12 && r_2p <= 1.0 + 1e-12
        } else {
            r_p2 <= 1.0 + 1e-12 && r_2p >= 1.0 - 1e-12
        };
        k_p2 = k_p2.max(r_p2);
        k_2p = k_2p.max(r_2p);
        families.push(FamilyRow {
            name,
            n,
            dim,
            trials,
            ratio_p_to_2: r_p2,
            ratio_2_to_p: r_2p,
            se_p_to_2: se,
            exact_ratio_p_to_2: exact,
            within_3se: within,
            direction_ok,
        });
    }
    Ok(KahaneReport {
        p,
        seed,
        trials,
        families,
        k_hat_p2: k_p2,
        k_hat_2p: k_2p,
        c_p_estimate: k_p2 * k_2p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_vector_family_has_ratio_one() {
        let v = vec![vec![c(2.0), c(1.0)]];
        let s = RademacherSample::draw(&v, 1, 2.0, 100, 1, 0).unwrap();
        for (p, q) in [(1.0, 2.0), (2.0, 3.0), (1.5, 1.5)] {
            let r = moment_ratio(&s, p, q).unwrap();
            assert!((r - 1.0).abs() < 1e-12, "({p},{q}): {r}");
        }
    }

    #[test]
    fn equal_pair_ratio_is_sqrt_two_by_enumeration() {
        // x1 = x2: |eps1 + eps2| in {0, 2}: (E^2)^{1/2}/E = sqrt(2)/1
        let v = vec![vec![c(1.0)], vec![c(1.0)]];
        let oracle = RademacherSample::enumerate(&v, 1, 2.0).unwrap();
        let r = moment_ratio(&oracle, 1.0, 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12, "{r}");
    }

    #[test]
    fn orthogonal_equal_norm_pair_has_constant_sums() {
        // disjoint supports give |Sigma| constant: ratio exactly 1
        let v = vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]];
        let oracle = RademacherSample::enumerate(&v, 1, 2.0).unwrap();
        let r = moment_ratio(&oracle, 1.0, 2.0).unwrap();
        assert!((r - 1.0).abs() < 1e-12, "{r}");
    }

    #[test]
    fn power_mean_direction_exact_per_sample() {
        let vs: Vec<Vec<Complex64>> = (0..6)
            .map(|i| (0..4).map(|j| c(((i * 7 + j * 3) % 5) as f64 - 2.0)).collect())
            .collect();
        let s = RademacherSample::draw(&vs, 1, 1.5, 2000, 3, 0).unwrap();
        let r12 = moment_ratio(&s, 1.0, 2.0).unwrap();
        let r21 = moment_ratio(&s, 2.0, 1.0).unwrap();
        assert!(r12 >= 1.0 - 1e-12);
        assert!(r21 <= 1.0 + 1e-12);
        assert!((moment_ratio(&s, 1.7, 1.7).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn determinism_bit_for_bit() {
        let vs = vec![vec![c(1.0), c(-1.0)], vec![c(0.5), c(2.0)]];
        let a = RademacherSample::draw(&vs, 1, 2.0, 500, 9, 4).unwrap();
        let b = RademacherSample::draw(&vs, 1, 2.0, 500, 9, 4).unwrap();
        assert_eq!(a.signs(), b.signs());
        for (x, y) in a.norms().iter().zip(b.norms()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn monte_carlo_matches_enumeration_within_3se() {
        // the repeated family at n = 8 has a genuinely nontrivial ratio
        let vs: Vec<Vec<Complex64>> = (0..8).map(|_| vec![c(1.0)]).collect();
        let oracle = RademacherSample::enumerate(&vs, 1, 2.0).unwrap();
        let exact = moment_ratio(&oracle, 1.0, 2.0).unwrap();
        assert!(exact > 1.0 && exact <= 2f64.sqrt() + 1e-12);
        let mc = RademacherSample::draw(&vs, 1, 2.0, 100_000, 7, 0).unwrap();
        let est = moment_ratio(&mc, 1.0, 2.0).unwrap();
        let se = moment_ratio_se(&mc, 1.0, 2.0);
        assert!(
            (est - exact).abs() <= 3.0 * se,
            "est {est} exact {exact} se {se}"
        );
    }

    #[test]
    fn scan_reports_directions_and_product() {
        let rep = kahane_constant_scan(8, 8, 1.5, 5000, 7).unwrap();
        assert!(rep.families.iter().all(|f| f.direction_ok));
        assert!(rep.k_hat_p2 >= 1.0 - 1e-12);
        assert!(rep.c_p_estimate >= 1.0 - 1e-12);
        for f in &rep.families {
            if let Some(w) = f.within_3se {
                assert!(w, "family {} outside 3 SE", f.name);
            }
        }
        // p = 2 degenerates to ratios 1
        let rep2 = kahane_constant_scan(4, 4, 2.0, 1000, 7).unwrap();
        assert!((rep2.c_p_estimate - 1.0).abs() < 1e-12);
        assert!((rep2.k_hat_p2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_inputs_rejected() {
        assert!(RademacherSample::draw(&[], 1, 2.0, 10, 0, 0).is_err());
        let v = vec![vec![c(1.0)]];
        assert!(RademacherSample::draw(&v, 1, 2.0, 0, 0, 0).is_err());
        let s = RademacherSample::draw(&v, 1, 2.0, 10, 0, 0).unwrap();
        assert!(moment_ratio(&s, 0.5, 2.0).is_err());
    }
}
