//! Gibbs-inequality checks: D(mu^{*n} || eta) >= 0 for eta = C / omega
//! normalized on a finite superset of the support, and the per-n entropy
//! bound H_n/n <= (1/n)(sum mu^{*n} log omega + log Z).
//!
//! The normalizer runs over ball(r n) (r = support radius of mu) rather
//! than all of G; KL nonnegativity is exact on any common finite support.

use super::measure::Measure;
use super::weights::WeightFunction;
use crate::error::{Error, Result};
use crate::group::BallIndex;
use crate::util::KahanSum;
use serde::Serialize;

/// Relative entropy D(p || q) = sum p log(p/q) over a common support.
/// Precondition: supp(p) subseteq supp(q).
pub fn relative_entropy(p: &Measure, q: &Measure) -> Result<f64> {
    if p.spec() != q.spec() {
        return Err(Error::structural("relative entropy: specs differ"));
    }
    let mut acc = KahanSum::new();
    for (g, mp) in p.terms() {
        let mq = q.mass(g);
        if mq == 0.0 {
            return Err(Error::precondition(
                "relative entropy undefined: q vanishes on supp(p)",
            ));
        }
        acc.add(mp * (mp / mq).ln());
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, Serialize)]
pub struct GibbsReport {
    pub n: usize,
    pub weight: String,
    /// D(mu^{*n} || eta), nonnegative by Gibbs' inequality
    pub kl: f64,
    pub h_n_over_n: f64,
    /// (1/n)(sum mu^{*n} log omega + log Z): upper bound for H_n/n
    pub bound_per_n: f64,
    /// bound / (H_n/n): near-tightness diagnostic for omega = Xi^{-2}
    pub tightness_ratio: f64,
    pub support_size: usize,
    pub normalizer_size: usize,
    pub log_normalizer: f64,
}

/// Evaluate the Gibbs bound at the n-th convolution power against the
/// weight omega. eta = omega^{-1} / Z on ball(r n).
pub fn gibbs_bound_check(
    mu: &Measure,
    n: usize,
    omega: &WeightFunction,
    cap: usize,
) -> Result<GibbsReport> {
    if n < 1 {
        return Err(Error::precondition("gibbs check needs n >= 1"));
    }
    if mu.is_degenerate() {
        return Err(Error::precondition("measure is degenerate"));
    }
    let spec = mu.spec().clone();
    let mut power = mu.clone();
    for _ in 2..=n {
        power = power.convolve(mu, cap)?;
    }
    let radius = mu.support_radius() * n;
    let ball = BallIndex::enumerate(&spec, radius, cap)?;
    // Z = sum over the ball of 1/omega, by spheres
    let mut z_acc = KahanSum::new();
    let offs = ball.sphere_offsets();
    for len in 0..=radius {
        let count = (offs[len + 1] - offs[len]) as f64;
        if count > 0.0 {
            z_acc.add(count / omega.eval_length(len)?);
        }
    }
    let z = z_acc.value();
    let log_z = z.ln();
    // KL and the bound
    let mut kl = KahanSum::new();
    let mut avg_log_omega = KahanSum::new();
    let mut h = KahanSum::new();
    for (g, m) in power.terms() {
        let lw = omega.eval(&spec, g)?.ln();
        // log eta = -log omega - log Z
        kl.add(m * (m.ln() + lw + log_z));
        avg_log_omega.add(m * lw);
        h.add(-m * m.ln());
    }
    let h_n_over_n = h.value() / n as f64;
    let bound_per_n = (avg_log_omega.value() + log_z) / n as f64;
    Ok(GibbsReport {
        n,
        weight: omega.name(),
        kl: kl.value(),
        h_n_over_n,
        bound_per_n,
        tightness_ratio: bound_per_n / h_n_over_n,
        support_size: power.support_len(),
        normalizer_size: ball.len(),
        log_normalizer: log_z,
    })
}
