//! Small numeric helpers shared across modules.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Kahan compensated summation. Order-stable and accurate for the long
/// nonnegative sums in entropy and norm accumulations.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

pub fn kahan_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = KahanSum::new();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Seeded generator for a named substream. The label keeps streams for
/// different purposes (restarts, trials, chunks) independent while staying
/// reproducible from a single user seed.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Aitken delta-squared applied to the last three terms of a sequence.
/// Falls back to the last term when the second difference vanishes.
pub fn aitken_last(seq: &[f64]) -> Option<f64> {
    if seq.len() < 3 {
        return seq.last().copied();
    }
    let n = seq.len();
    let (x0, x1, x2) = (seq[n - 3], seq[n - 2], seq[n - 1]);
    let den = (x2 - x1) - (x1 - x0);
    if den.abs() < 1e-300 {
        Some(x2)
    } else {
        Some(x2 - (x2 - x1).powi(2) / den)
    }
}

/// Richardson extrapolation in 1/n of the increments of a cumulative
/// sequence A_1..A_n: assuming A_n - A_{n-1} = limit + c/n, returns
/// n*(A_n - A_{n-1}) - (n-1)*(A_{n-1} - A_{n-2}).
///
/// `cumulative[i]` holds A_{i+1}; A_0 = 0 is implicit.
pub fn richardson_increment(cumulative: &[f64]) -> Option<f64> {
    let n = cumulative.len();
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some(cumulative[0]);
    }
    let a_n = cumulative[n - 1];
    let a_n1 = cumulative[n - 2];
    let a_n2 = if n >= 3 { cumulative[n - 3] } else { 0.0 };
    let d_n = a_n - a_n1;
    let d_n1 = a_n1 - a_n2;
    Some(n as f64 * d_n - (n as f64 - 1.0) * d_n1)
}
