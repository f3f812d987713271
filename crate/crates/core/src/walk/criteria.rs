//! Exoticness criteria for PF_p crossed products on F_k from entropy data:
//! given the Avez entropy h, the speed ell, a stationary-space Furstenberg
//! entropy h_X, and an exponent p >= 2, evaluate
//!
//!   (ii)  h_X < (2/p) h              (completion differs from universal)
//!   (iii) h_X < h - (2 log(2k-1)/p) ell   (completion differs from reduced)
//!
//! and solve for the p-intervals where each holds.

use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CriteriaReport {
    pub rank: usize,
    pub h: f64,
    pub ell: f64,
    pub h_x: f64,
    pub p: f64,
    /// h_X < (2/p) h at the given p
    pub crit_ii: bool,
    /// h_X < h - (2 log(2k-1)/p) ell at the given p
    pub crit_iii: bool,
    /// (ii) holds iff p < this (infinite when h_X = 0)
    pub p_max_ii: f64,
    /// (iii) holds iff p > this; None when h <= h_X (never holds)
    pub p_min_iii: Option<f64>,
    /// interval of p >= 2 where both hold, when nonempty
    pub both_hold: Option<(f64, f64)>,
    /// least p >= 2 at which (iii)'s right side is positive for some h_X > 0
    pub p0: f64,
    /// |h_X - (2/p_max_ii) h|: the defining inequality at its endpoint
    pub endpoint_residual_ii: f64,
    /// |h_X - (h - (2 log(2k-1)/p_min_iii) ell)| at the endpoint
    pub endpoint_residual_iii: Option<f64>,
}

pub fn criteria_report(rank: usize, h: f64, ell: f64, h_x: f64, p: f64) -> Result<CriteriaReport> {
    if rank < 2 {
        return Err(Error::precondition("criteria need free rank k >= 2"));
    }
    if !(h > 0.0) || !(ell > 0.0) {
        return Err(Error::precondition("criteria need h > 0 and ell > 0"));
    }
    if !(h_x >= 0.0) {
        return Err(Error::precondition("criteria need h_X >= 0"));
    }
    if !(p >= 2.0) {
        return Err(Error::precondition("criteria are stated for p >= 2"));
    }
    let log_q = ((2 * rank - 1) as f64).ln();
    let crit_ii = h_x < 2.0 / p * h;
    let crit_iii = h_x < h - 2.0 * log_q / p * ell;
    let p_max_ii = if h_x == 0.0 { f64::INFINITY } else { 2.0 * h / h_x };
    let p_min_iii = if h > h_x {
        Some(2.0 * ell * log_q / (h - h_x))
    } else {
        None
    };
    let both_hold = p_min_iii.and_then(|lo| {
        let lo = lo.max(2.0);
        if lo < p_max_ii {
            Some((lo, p_max_ii))
        } else {
            None
        }
    });
    let p0 = (2.0 * ell * log_q / h).max(2.0);
    let endpoint_residual_ii = if p_max_ii.is_finite() {
        (h_x - 2.0 / p_max_ii * h).abs()
    } else {
        0.0
    };
    let endpoint_residual_iii =
        p_min_iii.map(|pm| (h_x - (h - 2.0 * log_q / pm * ell)).abs());
    Ok(CriteriaReport {
        rank,
        h,
        ell,
        h_x,
        p,
        crit_ii,
        crit_iii,
        p_max_ii,
        p_min_iii,
        both_hold,
        p0,
        endpoint_residual_ii,
        endpoint_residual_iii,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn srw_f2_inputs() -> (f64, f64) {
        (0.5 * 3f64.ln(), 0.5)
    }

    #[test]
    fn zero_boundary_entropy_limiting_case() {
        let (h, ell) = srw_f2_inputs();
        let rep = criteria_report(2, h, ell, 0.0, 4.0).unwrap();
        assert!(rep.crit_ii);
        assert_eq!(rep.p_max_ii, f64::INFINITY);
        // (iii) holds iff p > 2 ell log 3 / h = 2
        let pm = rep.p_min_iii.unwrap();
        assert!((pm - 2.0).abs() < 1e-12, "{pm}");
        assert!(rep.crit_iii); // 4 > 2
        assert!((rep.p0 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn srw_intervals_match_closed_form_arithmetic() {
        let (h, ell) = srw_f2_inputs();
        let rep = criteria_report(2, h, ell, 0.1, 4.0).unwrap();
        // p < 2h/h_X = log3/0.1
        assert!((rep.p_max_ii - 3f64.ln() / 0.1).abs() < 1e-12);
        assert!((rep.p_max_ii - 10.986).abs() < 1e-3);
        // p > log3/(h - 0.1)
        let pm = rep.p_min_iii.unwrap();
        assert!((pm - 3f64.ln() / (h - 0.1)).abs() < 1e-12);
        assert!((pm - 2.445).abs() < 1e-3);
        let (lo, hi) = rep.both_hold.unwrap();
        assert!((lo - pm).abs() < 1e-12);
        assert!((hi - rep.p_max_ii).abs() < 1e-12);
        assert!(rep.crit_ii && rep.crit_iii); // p = 4 inside (2.445, 10.986)
        // endpoints satisfy the defining inequalities as equalities
        assert!(rep.endpoint_residual_ii < 1e-12);
        assert!(rep.endpoint_residual_iii.unwrap() < 1e-12);
    }

    #[test]
    fn thresholds_coincide_at_p4_for_quarter_log3() {
        // solve (2/p) h = h - (2 log3 / p) ell: p = 4, h_X = log3/4
        let (h, ell) = srw_f2_inputs();
        let h_x = 3f64.ln() / 4.0;
        let rep = criteria_report(2, h, ell, h_x, 4.0).unwrap();
        assert!((rep.p_max_ii - 4.0).abs() < 1e-12);
        assert!((rep.p_min_iii.unwrap() - 4.0).abs() < 1e-12);
        assert!(rep.both_hold.is_none());
        // at p = 4 exactly, both inequalities are equalities, hence false
        assert!(!rep.crit_ii && !rep.crit_iii);
    }

    #[test]
    fn iii_never_holds_when_h_x_exceeds_h() {
        let (h, ell) = srw_f2_inputs();
        let rep = criteria_report(2, h, ell, h + 0.1, 4.0).unwrap();
        assert!(rep.p_min_iii.is_none());
        assert!(!rep.crit_iii);
        assert!(rep.both_hold.is_none());
    }

    #[test]
    fn domain_violations_rejected() {
        let (h, ell) = srw_f2_inputs();
        assert!(criteria_report(1, h, ell, 0.1, 4.0).is_err());
        assert!(criteria_report(2, 0.0, ell, 0.1, 4.0).is_err());
        assert!(criteria_report(2, h, ell, -0.1, 4.0).is_err());
        assert!(criteria_report(2, h, ell, 0.1, 1.5).is_err());
    }
}
