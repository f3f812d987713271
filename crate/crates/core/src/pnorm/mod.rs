//! Truncated covariant convolution operators on l^p(ball; C^d (x) C^m) and
//! certified estimation of their p->p norms, together with the duality,
//! interpolation, monotonicity, amplification, and tensor-power checks.

mod anchor;
mod boyd;
mod checks;
mod operator;

pub use anchor::{pnorm_anchor, Anchor, Anchor2Result};
pub use boyd::{pf_norm, pnorm_boyd, BoydOptions};
pub use checks::{
    amplification_check, interpolation_bound, monotonicity_scan, tensor_power_check,
    transpose_dual_check, AmplificationReport, DualityReport, MonotonicityPoint,
    MonotonicityReport, TensorPowerReport,
};
pub use operator::{build_truncated, lp_block_norm, TruncatedOperator};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// An exponent p in [1, oo] with its precomputed Hoelder conjugate.
/// Conjugation swaps the stored pair, so conjugate(conjugate(p)) is exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PExponent {
    p: f64,
    q: f64,
}

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::precondition(format!("exponent p={p} must be >= 1")));
        }
        let q = if p == 1.0 {
            f64::INFINITY
        } else if p.is_infinite() {
            1.0
        } else {
            p / (p - 1.0)
        };
        Ok(PExponent { p, q })
    }

    pub fn value(&self) -> f64 {
        self.p
    }

    pub fn conjugate_value(&self) -> f64 {
        self.q
    }

    pub fn conjugate(&self) -> PExponent {
        PExponent {
            p: self.q,
            q: self.p,
        }
    }

    pub fn is_interior(&self) -> bool {
        self.p > 1.0 && self.p.is_finite()
    }

    /// Exact anchor marker, when p is one of 1, 2, oo.
    pub fn anchor(&self) -> Option<Anchor> {
        if self.p == 1.0 {
            Some(Anchor::One)
        } else if self.p == 2.0 {
            Some(Anchor::Two)
        } else if self.p.is_infinite() {
            Some(Anchor::Infinity)
        } else {
            None
        }
    }
}

/// Certified two-sided estimate of an operator p-norm.
///
/// `lower` is an exact Rayleigh quotient of the truncated operator at a
/// witness supported in ball(R - r), hence also a valid lower bound for the
/// untruncated group operator. `upper` comes from the l^1 norm and exact
/// anchor interpolation only, never from the power method.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormEstimate {
    pub p: f64,
    pub q: f64,
    pub lower: f64,
    pub upper: f64,
    pub radius: usize,
    pub method: Vec<String>,
    pub witness_seed: u64,
    pub converged: bool,
    pub iterations: usize,
}

impl NormEstimate {
    pub fn zero(p: &PExponent, radius: usize, seed: u64) -> Self {
        NormEstimate {
            p: p.value(),
            q: p.conjugate_value(),
            lower: 0.0,
            upper: 0.0,
            radius,
            method: vec!["zero_element".into()],
            witness_seed: seed,
            converged: true,
            iterations: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_round_trip_is_exact() {
        for p in [1.0, 1.2, 1.5, 2.0, 3.0, 17.0, f64::INFINITY] {
            let e = PExponent::new(p).unwrap();
            let back = e.conjugate().conjugate();
            assert_eq!(back.value().to_bits(), e.value().to_bits());
            assert_eq!(back.conjugate_value().to_bits(), e.conjugate_value().to_bits());
        }
    }

    #[test]
    fn conjugate_values() {
        let e = PExponent::new(1.5).unwrap();
        assert!((e.conjugate_value() - 3.0).abs() < 1e-15);
        assert_eq!(PExponent::new(1.0).unwrap().conjugate_value(), f64::INFINITY);
        assert_eq!(PExponent::new(f64::INFINITY).unwrap().conjugate_value(), 1.0);
        assert!(PExponent::new(0.5).is_err());
        assert_eq!(PExponent::new(2.0).unwrap().anchor(), Some(Anchor::Two));
        assert_eq!(PExponent::new(1.7).unwrap().anchor(), None);
    }
}
