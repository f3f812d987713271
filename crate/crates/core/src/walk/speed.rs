//! Speed of the walk: limit of E|X_n| / n.
//!
//! Radially symmetric nearest-neighbor measures (with optional lazy mass)
//! reduce to an exact 1-D birth-death chain on word lengths, computed to
//! large n. General finitely supported measures fall back to exact
//! convolution powers up to the memory cap.

use super::measure::Measure;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::util::richardson_increment;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct SpeedReport {
    /// (n, E|X_n| / n); subsampled to at most ~200 rows for large n
    pub sequence: Vec<(usize, f64)>,
    /// value at n_max
    pub final_value: f64,
    /// Richardson extrapolation of the increments of E|X_n|
    pub extrapolated: f64,
    pub n_max: usize,
    pub method: String,
}

/// Expected-length sequence and extrapolated speed.
pub fn speed(mu: &Measure, n_max: usize) -> Result<SpeedReport> {
    if n_max < 2 {
        return Err(Error::precondition("speed needs n_max >= 2"));
    }
    if mu.is_degenerate() {
        return Err(Error::precondition(
            "measure is degenerate: support does not touch every generator direction",
        ));
    }
    if matches!(mu.spec(), GroupSpec::Free { .. }) && mu.is_radial_nearest_neighbor() {
        return Ok(birth_death_speed(mu, n_max));
    }
    convolution_speed(mu, n_max)
}

fn birth_death_speed(mu: &Measure, n_max: usize) -> SpeedReport {
    let k = mu.spec().num_generators();
    let lazy = mu.mass(&mu.spec().identity());
    let step = 1.0 - lazy;
    let q = (2 * k - 1) as f64 / (2 * k) as f64; // away-probability per move
    // dist[j] = P(|X_n| = j)
    let mut dist = vec![0.0f64; n_max + 2];
    dist[0] = 1.0;
    let mut expectations = Vec::with_capacity(n_max);
    let mut scratch = vec![0.0f64; n_max + 2];
    for n in 1..=n_max {
        scratch[..=n + 1].fill(0.0);
        for j in 0..=n {
            let m = dist[j];
            if m == 0.0 {
                continue;
            }
            if lazy > 0.0 {
                scratch[j] += m * lazy;
            }
            if j == 0 {
                scratch[1] += m * step;
            } else {
                scratch[j + 1] += m * step * q;
                scratch[j - 1] += m * step * (1.0 - q);
            }
        }
        dist[..=n + 1].copy_from_slice(&scratch[..=n + 1]);
        let e: f64 = dist[..=n].iter().enumerate().map(|(j, &m)| j as f64 * m).sum();
        expectations.push(e);
    }
    finish(expectations, n_max, "birth_death_exact")
}

/// Support bound for the exact-convolution fallback: the sequence is
/// reported as far as it stays cheap; the radial fast path has no such cut.
const CONVOLUTION_SUPPORT_BOUND: usize = 200_000;

fn convolution_speed(mu: &Measure, n_max: usize) -> Result<SpeedReport> {
    let cap = crate::group::DEFAULT_MEM_CAP.min(CONVOLUTION_SUPPORT_BOUND);
    let mut power = mu.clone();
    let mut expectations = Vec::new();
    let spec = mu.spec().clone();
    let expect = |m: &Measure| -> f64 {
        crate::util::kahan_sum(m.terms().map(|(g, mass)| spec.length(g) as f64 * mass))
    };
    expectations.push(expect(&power));
    for _ in 2..=n_max {
        match power.convolve(mu, cap) {
            Ok(next) => {
                power = next;
                expectations.push(expect(&power));
            }
            Err(Error::Resource { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let n = expectations.len();
    Ok(finish(expectations, n, "convolution_exact"))
}

fn finish(expectations: Vec<f64>, n_max: usize, method: &str) -> SpeedReport {
    let extrapolated = richardson_increment(&expectations).unwrap_or(0.0);
    let stride = (expectations.len() / 200).max(1);
    let mut sequence: Vec<(usize, f64)> = expectations
        .iter()
        .enumerate()
        .filter(|(i, _)| (i + 1) % stride == 0 || *i + 1 == expectations.len())
        .map(|(i, &e)| (i + 1, e / (i + 1) as f64))
        .collect();
    sequence.dedup_by_key(|&mut (n, _)| n);
    let final_value = *expectations.last().unwrap() / expectations.len() as f64;
    SpeedReport {
        sequence,
        final_value,
        extrapolated,
        n_max,
        method: method.to_string(),
    }
}
