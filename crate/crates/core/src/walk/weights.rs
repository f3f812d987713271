//! Weight functions on free groups evaluated through the word length:
//! phi_beta = beta^L, omega_alpha = (1+L)^alpha, and radial powers of the
//! Xi-function; l^p-membership via sphere sums and positive-definiteness
//! Gram checks over Cayley balls.

use super::boundary::{xi_function, BoundaryMeasure};
use crate::error::{Error, Result};
use crate::group::{BallIndex, GroupElement, GroupSpec};
use crate::util::KahanSum;
use serde::Serialize;

#[derive(Debug, Clone)]
pub enum WeightFunction {
    /// beta^L, beta in (0, 1)
    PhiBeta { beta: f64 },
    /// (1 + L)^alpha, alpha >= 0
    OmegaAlpha { alpha: f64 },
    /// Xi^exponent for a radial boundary measure, tabulated per length
    XiPower { exponent: f64, radial: Vec<f64> },
}

impl WeightFunction {
    pub fn phi_beta(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::precondition("phi_beta needs beta in (0, 1)"));
        }
        Ok(WeightFunction::PhiBeta { beta })
    }

    pub fn omega_alpha(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0) {
            return Err(Error::precondition("omega_alpha needs alpha >= 0"));
        }
        Ok(WeightFunction::OmegaAlpha { alpha })
    }

    /// Xi^exponent as a radial weight. The boundary measure must be radial
    /// (all first-letter masses equal); the table covers lengths 0..=max_len.
    pub fn xi_power(exponent: f64, nu: &BoundaryMeasure, max_len: usize) -> Result<Self> {
        let first = nu.first_letter_masses();
        let radial_ok = first
            .iter()
            .all(|&m| (m - first[0]).abs() <= 1e-12);
        if !radial_ok {
            return Err(Error::precondition(
                "xi_power weight needs a radial boundary measure",
            ));
        }
        let spec = GroupSpec::free(nu.rank());
        let mut radial = Vec::with_capacity(max_len + 1);
        let mut w = String::new();
        for n in 0..=max_len {
            let g = spec.parse_word(&w)?;
            radial.push(xi_function(&g, nu)?);
            w.push(if n % 2 == 0 { 'a' } else { 'b' });
        }
        Ok(WeightFunction::XiPower { exponent, radial })
    }

    pub fn name(&self) -> String {
        match self {
            WeightFunction::PhiBeta { beta } => format!("phi_beta({beta})"),
            WeightFunction::OmegaAlpha { alpha } => format!("omega_alpha({alpha})"),
            WeightFunction::XiPower { exponent, .. } => format!("xi_power({exponent})"),
        }
    }

    /// Value at word length n.
    pub fn eval_length(&self, n: usize) -> Result<f64> {
        Ok(match self {
            WeightFunction::PhiBeta { beta } => beta.powi(n as i32),
            WeightFunction::OmegaAlpha { alpha } => (1.0 + n as f64).powf(*alpha),
            WeightFunction::XiPower { exponent, radial } => {
                let xi = radial.get(n).ok_or_else(|| {
                    Error::precondition(format!("xi_power table covers lengths < {}", radial.len()))
                })?;
                xi.powf(*exponent)
            }
        })
    }

    pub fn eval(&self, spec: &GroupSpec, g: &GroupElement) -> Result<f64> {
        self.eval_length(spec.length(g))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MembershipReport {
    pub weight: String,
    pub p: f64,
    pub rank: usize,
    /// exact verdict from the closed threshold rule
    pub convergent: bool,
    /// the threshold beta for phi_beta (informational)
    pub phi_threshold: Option<f64>,
    /// limit of consecutive sphere-term ratios
    pub term_ratio_limit: f64,
    /// partial sums of sum_{|s| <= n} w(s)^p
    pub partial_sums: Vec<f64>,
    /// geometric closed form when available (phi_beta convergent case)
    pub closed_sum: Option<f64>,
}

/// l^p-membership of a radial weight on F_k via sphere sums: the sphere
/// terms are 2k(2k-1)^{n-1} w(n)^p, a geometric-type series. The verdict
/// uses the exact threshold rule of each weight family (for phi_beta:
/// beta < (2k-1)^{-1/p}, with the boundary case divergent), so it flips
/// exactly at the threshold; the reported ratio is informational.
pub fn weight_membership(
    w: &WeightFunction,
    p: f64,
    rank: usize,
    n_terms: usize,
) -> Result<MembershipReport> {
    if rank < 2 {
        return Err(Error::precondition("weight membership needs free rank k >= 2"));
    }
    if !(p >= 1.0) {
        return Err(Error::precondition("p must be >= 1"));
    }
    let q = (2 * rank - 1) as f64;
    let (convergent, phi_threshold, closed_sum) = match w {
        WeightFunction::PhiBeta { beta } => {
            let threshold = q.powf(-1.0 / p);
            let rho = q * beta.powf(p);
            let closed = if *beta < threshold {
                Some(1.0 + (2 * rank) as f64 * beta.powf(p) / (1.0 - rho))
            } else {
                None
            };
            (*beta < threshold, Some(threshold), closed)
        }
        WeightFunction::OmegaAlpha { .. } => (false, None, None),
        WeightFunction::XiPower { exponent, .. } => (exponent * p > 2.0, None, None),
    };
    let mut partial_sums = Vec::with_capacity(n_terms + 1);
    let mut acc = KahanSum::new();
    acc.add(w.eval_length(0)?.powf(p));
    partial_sums.push(acc.value());
    let mut last_term = 0.0f64;
    let mut prev_term = 0.0f64;
    let max_n = match w {
        WeightFunction::XiPower { radial, .. } => n_terms.min(radial.len().saturating_sub(1)),
        _ => n_terms,
    };
    for n in 1..=max_n {
        // sphere sizes in f64: exact for small n, saturating for the long
        // divergent tails where only the trend matters
        let sphere = (2 * rank) as f64 * q.powi(n as i32 - 1);
        let term = sphere * w.eval_length(n)?.powf(p);
        prev_term = last_term;
        last_term = term;
        acc.add(term);
        partial_sums.push(acc.value());
        if !acc.value().is_finite() {
            break;
        }
    }
    let term_ratio_limit = if prev_term > 0.0 {
        last_term / prev_term
    } else {
        f64::INFINITY
    };
    Ok(MembershipReport {
        weight: w.name(),
        p,
        rank,
        convergent,
        phi_threshold,
        term_ratio_limit,
        partial_sums,
        closed_sum,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    pub size: usize,
    pub min_eigenvalue: f64,
    /// min eigenvalue >= -1e-8
    pub psd: bool,
}

/// Build the Gram matrix [w(s^{-1} t)] over ball(R) and check positive
/// semidefiniteness via a dense symmetric eigensolve.
pub fn psd_gram_check(
    eval: impl Fn(&GroupElement) -> Result<f64>,
    spec: &GroupSpec,
    radius: usize,
    cap: usize,
) -> Result<GramReport> {
    let ball = BallIndex::enumerate(spec, radius, cap)?;
    let n = ball.len();
    if n * n > cap {
        return Err(Error::Resource {
            what: format!("dense Gram matrix over ball({radius})"),
            required: n * n,
            cap,
        });
    }
    let mut gram = nalgebra::DMatrix::<f64>::zeros(n, n);
    let elements: Vec<GroupElement> = (0..n).map(|i| ball.element(i)).collect();
    for i in 0..n {
        let si = spec.invert_unchecked(&elements[i]);
        for j in i..n {
            let g = spec.compose_unchecked(&si, &elements[j]);
            let v = eval(&g)?;
            gram[(i, j)] = v;
            gram[(j, i)] = v;
        }
    }
    let eigen = gram.symmetric_eigenvalues();
    let min_eigenvalue = eigen.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(GramReport {
        size: n,
        min_eigenvalue,
        psd: min_eigenvalue >= -1e-8,
    })
}

/// Convenience: Gram check for a radial weight function.
pub fn psd_gram_check_weight(
    w: &WeightFunction,
    spec: &GroupSpec,
    radius: usize,
    cap: usize,
) -> Result<GramReport> {
    psd_gram_check(|g| w.eval(spec, g), spec, radius, cap)
}

/// Convenience: Gram check for the Xi-function of a boundary measure
/// (works for non-radial harmonic measures as well).
pub fn psd_gram_check_xi(
    nu: &BoundaryMeasure,
    radius: usize,
    cap: usize,
) -> Result<GramReport> {
    let spec = GroupSpec::free(nu.rank());
    psd_gram_check(|g| xi_function(g, nu), &spec, radius, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_MEM_CAP;
    use crate::walk::{harmonic_measure, Measure};

    #[test]
    fn phi_beta_threshold_flips_exactly() {
        for (k, p) in [(2usize, 2.0f64), (2, 4.0), (3, 2.0)] {
            let threshold = ((2 * k - 1) as f64).powf(-1.0 / p);
            let at = WeightFunction::phi_beta(threshold).unwrap();
            assert!(!weight_membership(&at, p, k, 50).unwrap().convergent);
            let below = WeightFunction::phi_beta(threshold * (1.0 - 1e-12)).unwrap();
            assert!(weight_membership(&below, p, k, 50).unwrap().convergent);
            let above = WeightFunction::phi_beta(threshold * (1.0 + 1e-12)).unwrap();
            assert!(!weight_membership(&above, p, k, 50).unwrap().convergent);
        }
    }

    #[test]
    fn phi_half_k2_p2_sums_to_five() {
        // geometric series oracle: 1 + sum 4*3^{n-1} (1/4)^n = 5
        let w = WeightFunction::phi_beta(0.5).unwrap();
        let rep = weight_membership(&w, 2.0, 2, 200).unwrap();
        assert!(rep.convergent);
        assert!((rep.closed_sum.unwrap() - 5.0).abs() < 1e-12);
        let last = *rep.partial_sums.last().unwrap();
        assert!((last - 5.0).abs() < 1e-9, "{last}");
        assert!((rep.term_ratio_limit - 0.75).abs() < 1e-9);
    }

    #[test]
    fn omega_alpha_always_diverges() {
        for alpha in [0.0, 1.0, 5.0] {
            let w = WeightFunction::omega_alpha(alpha).unwrap();
            let rep = weight_membership(&w, 2.0, 2, 30).unwrap();
            assert!(!rep.convergent);
            assert!(rep.term_ratio_limit > 1.0);
        }
    }

    #[test]
    fn xi_power_membership_threshold() {
        let spec = GroupSpec::free(2);
        let mu = Measure::srw(&spec).unwrap();
        let nu = harmonic_measure(&mu).unwrap();
        // Xi^r in l^p iff r p > 2
        let w = WeightFunction::xi_power(2.0, &nu, 12).unwrap();
        assert!(weight_membership(&w, 2.0, 2, 12).unwrap().convergent);
        let w1 = WeightFunction::xi_power(1.0, &nu, 12).unwrap();
        assert!(!weight_membership(&w1, 2.0, 2, 12).unwrap().convergent);
    }

    #[test]
    fn all_ones_gram_is_psd_with_zero_eigenvalue() {
        let spec = GroupSpec::free(2);
        let w = WeightFunction::omega_alpha(0.0).unwrap(); // constant 1
        let rep = psd_gram_check_weight(&w, &spec, 2, DEFAULT_MEM_CAP).unwrap();
        assert!(rep.psd);
        assert!(rep.min_eigenvalue.abs() < 1e-10);
        assert_eq!(rep.size, 17);
    }

    #[test]
    fn phi_half_gram_psd_on_ball3() {
        let spec = GroupSpec::free(2);
        let w = WeightFunction::phi_beta(0.5).unwrap();
        let rep = psd_gram_check_weight(&w, &spec, 3, DEFAULT_MEM_CAP).unwrap();
        assert!(rep.psd, "min eigenvalue {}", rep.min_eigenvalue);
        assert_eq!(rep.size, 53);
    }

    #[test]
    fn xi_gram_psd_on_ball2() {
        let spec = GroupSpec::free(2);
        let mu = Measure::srw(&spec).unwrap();
        let nu = harmonic_measure(&mu).unwrap();
        let rep = psd_gram_check_xi(&nu, 2, DEFAULT_MEM_CAP).unwrap();
        assert!(rep.psd, "min eigenvalue {}", rep.min_eigenvalue);
    }

    #[test]
    fn weight_values() {
        let w = WeightFunction::phi_beta(0.5).unwrap();
        assert_eq!(w.eval_length(0).unwrap(), 1.0);
        let om = WeightFunction::omega_alpha(2.0).unwrap();
        assert_eq!(om.eval_length(0).unwrap(), 1.0);
        assert_eq!(om.eval_length(2).unwrap(), 9.0);
        assert!(WeightFunction::phi_beta(1.0).is_err());
        assert!(WeightFunction::omega_alpha(-1.0).is_err());
    }
}
