//! Harmonic measure on the boundary of a free group for nearest-neighbor
//! walks, with the cylinder evaluator, Furstenberg entropy, and the
//! Harish-Chandra Xi-function of the boundary Koopman representation.
//!
//! For a nearest-neighbor mu the hitting probabilities F_x of the distance-1
//! vertices solve F_x = mu(x) + F_x * sum_{y != x} mu(y) F_{y^{-1}} (paths
//! to x either step there or detour and must pass the origin again). The
//! first-letter masses follow as nu_x = F_x (1 - F_{x^{-1}}) /
//! (1 - F_x F_{x^{-1}}), and the measure is Markov over letters with
//! transition t(prev, x) = nu_x / (1 - nu_{prev^{-1}}).

use super::measure::Measure;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, Letter};
use crate::util::KahanSum;
use serde::Serialize;

const FIXED_POINT_TOL: f64 = 1e-14;
const MAX_CYLINDER_DEPTH: usize = 14;

/// Harmonic (stationary) boundary measure of a nearest-neighbor walk on
/// F_k, k >= 2, determined by the first-letter hitting distribution.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryMeasure {
    k: usize,
    /// first-letter masses nu(C_x), indexed by letter key (a, A, b, B, ...)
    first: Vec<f64>,
    /// hitting probabilities F_x of the distance-1 vertices
    hitting: Vec<f64>,
}

impl BoundaryMeasure {
    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn first_letter_masses(&self) -> &[f64] {
        &self.first
    }

    pub fn hitting_probabilities(&self) -> &[f64] {
        &self.hitting
    }

    fn first_of(&self, l: Letter) -> f64 {
        self.first[crate::group::letter_index(l)]
    }

    /// Transition mass into letter `next` after `prev` (next != prev^{-1}).
    pub fn transition(&self, prev: Letter, next: Letter) -> f64 {
        debug_assert!(next != -prev);
        self.first_of(next) / (1.0 - self.first_of(-prev))
    }

    /// nu(C_w) for a reduced word w; 1 for the empty word.
    pub fn cylinder(&self, word: &[Letter]) -> f64 {
        if word.is_empty() {
            return 1.0;
        }
        let mut mass = self.first_of(word[0]);
        for pair in word.windows(2) {
            mass *= self.transition(pair[0], pair[1]);
        }
        mass
    }

    /// Max over depth-1 cylinders of |(mu * nu)(C_x) - nu(C_x)|.
    pub fn stationarity_residual(&self, mu: &Measure) -> Result<f64> {
        let letters = all_letters(self.k);
        let spec = mu.spec();
        let mut worst = 0.0f64;
        for &x in &letters {
            let mut total = 0.0;
            for (s, m) in mu.terms() {
                let w = match s {
                    GroupElement::Word(w) => w,
                    _ => return Err(Error::structural("boundary measure needs free-group atoms")),
                };
                if w.len() != 1 {
                    return Err(Error::precondition(
                        "stationarity check needs a nearest-neighbor measure",
                    ));
                }
                let s_letter = w[0];
                if s_letter == x {
                    // s^{-1} C_x = everything not starting with x^{-1}
                    total += m * (1.0 - self.first_of(-x));
                } else {
                    // s^{-1} C_x = C_{s^{-1} x}
                    total += m * self.cylinder(&[-s_letter, x]);
                }
            }
            worst = worst.max((total - self.first_of(x)).abs());
            let _ = spec;
        }
        Ok(worst)
    }
}

fn all_letters(k: usize) -> Vec<Letter> {
    let mut v = Vec::with_capacity(2 * k);
    for i in 1..=k as i16 {
        v.push(i);
        v.push(-i);
    }
    // key order: a, A, b, B, ...
    v.sort_by_key(|&l| crate::group::letter_index(l));
    v
}

/// Solve the first-passage identities for a nearest-neighbor measure on
/// F_k (k >= 2) by monotone fixed-point iteration to 1e-14, and return the
/// boundary measure. Depth-1 stationarity holds to ~1e-12 by construction
/// and is re-checked by callers.
pub fn harmonic_measure(mu: &Measure) -> Result<BoundaryMeasure> {
    let k = match mu.spec() {
        GroupSpec::Free { rank } => *rank,
        other => {
            return Err(Error::precondition(format!(
                "harmonic measure is defined on free groups, got {other}"
            )))
        }
    };
    if k < 2 {
        return Err(Error::precondition(
            "harmonic measure needs k >= 2 (the walk on Z is recurrent and the boundary degenerates to two points)",
        ));
    }
    if !mu.is_nearest_neighbor() {
        return Err(Error::precondition(
            "harmonic measure needs a nearest-neighbor measure (support in generators and inverses)",
        ));
    }
    if mu.is_degenerate() {
        return Err(Error::precondition("measure is degenerate"));
    }
    let letters = all_letters(k);
    let spec = mu.spec().clone();
    let mass_of = |l: Letter| -> f64 {
        let g = spec
            .generator(l.unsigned_abs() as usize, l.signum() as i8)
            .expect("letter in range");
        mu.mass(&g)
    };
    let masses: Vec<f64> = letters.iter().map(|&l| mass_of(l)).collect();
    let n = 2 * k;
    let mut f = vec![0.0f64; n];
    let mut next = vec![0.0f64; n];
    for _ in 0..1_000_000 {
        let mut delta = 0.0f64;
        for (i, &x) in letters.iter().enumerate() {
            let mut detour = 0.0;
            for (j, &y) in letters.iter().enumerate() {
                if y == x {
                    continue;
                }
                let y_inv_idx = crate::group::letter_index(-y);
                detour += masses[j] * f[y_inv_idx];
                let _ = j;
            }
            let denom = 1.0 - detour;
            next[i] = if denom > 0.0 { masses[i] / denom } else { 1.0 };
            delta = delta.max((next[i] - f[i]).abs());
        }
        std::mem::swap(&mut f, &mut next);
        if delta < FIXED_POINT_TOL {
            break;
        }
    }
    let mut first = vec![0.0f64; n];
    for (i, &x) in letters.iter().enumerate() {
        let fx = f[i];
        let fxi = f[crate::group::letter_index(-x)];
        first[i] = fx * (1.0 - fxi) / (1.0 - fx * fxi);
    }
    let total: f64 = first.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::Internal(format!(
            "first-letter masses sum to {total}, expected 1"
        )));
    }
    Ok(BoundaryMeasure {
        k,
        first,
        hitting: f,
    })
}

fn word_of(e: &GroupElement) -> Result<&[Letter]> {
    match e {
        GroupElement::Word(w) => Ok(w),
        _ => Err(Error::structural("expected a free-group element")),
    }
}

/// Enumerate all reduced words of exact length `depth` over 2k letters,
/// calling `visit(word)` for each.
fn for_each_cylinder(k: usize, depth: usize, mut visit: impl FnMut(&[Letter])) {
    let letters = all_letters(k);
    let mut word: Vec<Letter> = Vec::with_capacity(depth);
    fn rec(
        letters: &[Letter],
        depth: usize,
        word: &mut Vec<Letter>,
        visit: &mut impl FnMut(&[Letter]),
    ) {
        if word.len() == depth {
            visit(word);
            return;
        }
        for &l in letters {
            if let Some(&last) = word.last() {
                if l == -last {
                    continue;
                }
            }
            word.push(l);
            rec(letters, depth, word, visit);
            word.pop();
        }
    }
    rec(&letters, depth, &mut word, &mut visit);
}

fn reduce_concat(s: &[Letter], w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = s.to_vec();
    for &l in w {
        if let Some(&last) = out.last() {
            if last == -l {
                out.pop();
                continue;
            }
        }
        out.push(l);
    }
    out
}

/// Furstenberg entropy of (boundary, nu) with respect to mu:
/// -sum_s mu(s) sum_{|w| = |s|+1} nu(C_w) log(nu(C_{red(s w)}) / nu(C_w)).
///
/// At depth |s|+1 the translate s C_w is again a clean cylinder (the
/// cancellation can consume at most |s| letters), so the sum is exact.
/// `mu` may be any finitely supported measure on F_k; `nu` must come from
/// `harmonic_measure` of a nearest-neighbor measure.
pub fn furstenberg_entropy(mu: &Measure, nu: &BoundaryMeasure) -> Result<f64> {
    let k = nu.rank();
    let mut total = KahanSum::new();
    for (s, m) in mu.terms() {
        let sw = word_of(s)?;
        let depth = sw.len() + 1;
        if sw.is_empty() {
            continue; // log 1 = 0
        }
        if depth > MAX_CYLINDER_DEPTH {
            return Err(Error::precondition(format!(
                "cylinder depth {depth} exceeds the exact-summation cap {MAX_CYLINDER_DEPTH}"
            )));
        }
        let mut inner = KahanSum::new();
        for_each_cylinder(k, depth, |w| {
            let cw = nu.cylinder(w);
            let translated = reduce_concat(sw, w);
            let csw = nu.cylinder(&translated);
            inner.add(cw * (csw / cw).ln());
        });
        total.add(-m * inner.value());
    }
    Ok(total.value())
}

/// The Harish-Chandra Xi-function at s: the diagonal Koopman coefficient
/// integral of sqrt(d(s nu)/d nu), evaluated by the exact regrouped
/// depth-(|s|+1) cylinder sum in O(|s| k) time.
///
/// Writing s = x_1..x_n and grouping cylinders w by the longest common
/// prefix j with s, the continuation factors beyond the divergence letter
/// cancel inside the square root, leaving
/// Xi(s) = sum_j sqrt(P_j Q_j) * sum_y sqrt(t_j(y) t'_j(y)) with P_j, Q_j
/// the prefix masses of s and s^{-1}.
pub fn xi_function(s: &GroupElement, nu: &BoundaryMeasure) -> Result<f64> {
    let sw = word_of(s)?;
    let n = sw.len();
    if n == 0 {
        return Ok(1.0);
    }
    let k = nu.rank();
    let letters = all_letters(k);
    // Xi uses d(s nu)/d nu, i.e. translation by s^{-1} of cylinders; the
    // grouping below works with the word u = s^{-1} so that red(u w) is
    // clean: u = inverse word of s.
    let u: Vec<Letter> = sw.iter().rev().map(|&l| -l).collect();
    // P_j = nu(prefix_j of u reversed-inverse ... ) -- prefix masses of the
    // word whose common prefix with w we track: that word is u^{-1} = s.
    // Keep the derivation concrete: cylinders w share prefix j with s? No:
    // red(u w) cancels letters of u against w when w starts with letters of
    // u^{-1} = s... u = x_n^{-1}..x_1^{-1}; u w cancels while w matches
    // s = x_1..x_n. So the grouping is by the common prefix of w with s.
    let mut p = vec![1.0f64; n + 1];
    for j in 1..=n {
        p[j] = nu.cylinder(&sw[..j]);
    }
    let mut q = vec![1.0f64; n + 1];
    // q[j] = nu(C of first (n - j) letters of u)
    for j in 0..n {
        q[j] = nu.cylinder(&u[..n - j]);
    }
    let mut total = KahanSum::new();
    for j in 0..n {
        // w = s_1..s_j y z..., y != x_{j+1}, and y != x_j^{-1} when j >= 1
        let forbidden_next = sw[j];
        let prev_w: Option<Letter> = if j >= 1 { Some(sw[j - 1]) } else { None };
        // in red(u w) = x_n^{-1}..x_{j+1}^{-1} y z..., y follows x_{j+1}^{-1}
        let prev_red = -sw[j];
        let mut s_j = KahanSum::new();
        for &y in &letters {
            if y == forbidden_next {
                continue;
            }
            if let Some(pw) = prev_w {
                if y == -pw {
                    continue;
                }
            }
            let t_w = match prev_w {
                Some(pw) => nu.transition(pw, y),
                None => nu.first_of(y),
            };
            let t_red = nu.transition(prev_red, y);
            s_j.add((t_w * t_red).sqrt());
        }
        total.add((p[j] * q[j]).sqrt() * s_j.value());
    }
    // j = n: w = s y, y != x_n^{-1}; red(u w) = y
    let mut s_n = KahanSum::new();
    for &y in &letters {
        if y == -sw[n - 1] {
            continue;
        }
        s_n.add((nu.transition(sw[n - 1], y) * nu.first_of(y)).sqrt());
    }
    total.add(p[n].sqrt() * s_n.value());
    Ok(total.value())
}

/// Defining cylinder sum for Xi, by brute enumeration at depth |s| + 1.
/// Ground truth for `xi_function`; cost grows like (2k-1)^{|s|}.
pub fn xi_cylinder_sum(s: &GroupElement, nu: &BoundaryMeasure) -> Result<f64> {
    let sw = word_of(s)?;
    let n = sw.len();
    if n == 0 {
        return Ok(1.0);
    }
    let depth = n + 1;
    if depth > MAX_CYLINDER_DEPTH {
        return Err(Error::precondition(format!(
            "cylinder depth {depth} exceeds the exact-summation cap {MAX_CYLINDER_DEPTH}"
        )));
    }
    let u: Vec<Letter> = sw.iter().rev().map(|&l| -l).collect();
    let mut total = KahanSum::new();
    for_each_cylinder(nu.rank(), depth, |w| {
        let cw = nu.cylinder(w);
        let translated = reduce_concat(&u, w);
        let cuw = nu.cylinder(&translated);
        total.add((cw * cuw).sqrt());
    });
    Ok(total.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn srw2() -> (GroupSpec, Measure, BoundaryMeasure) {
        let spec = GroupSpec::free(2);
        let mu = Measure::srw(&spec).unwrap();
        let nu = harmonic_measure(&mu).unwrap();
        (spec, mu, nu)
    }

    #[test]
    fn srw_harmonic_measure_is_uniform() {
        let (_, mu, nu) = srw2();
        for &m in nu.first_letter_masses() {
            assert!((m - 0.25).abs() < 1e-12, "{m}");
        }
        for &f in nu.hitting_probabilities() {
            assert!((f - 1.0 / 3.0).abs() < 1e-13, "{f}");
        }
        assert!(nu.stationarity_residual(&mu).unwrap() < 1e-12);
        // cylinder masses (1/4)(1/3)^{|w|-1}
        let w = [1i16, 2, -1];
        assert!((nu.cylinder(&w) - 0.25 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn cylinder_additivity() {
        let (_, _, nu) = srw2();
        // nu(C_w) = sum over non-cancelling extensions
        let w = [1i16, 2];
        let mut sum = 0.0;
        for l in [1i16, -1, 2, -2] {
            if l == -2 {
                continue;
            }
            sum += nu.cylinder(&[1, 2, l]);
        }
        assert!((nu.cylinder(&w) - sum).abs() < 1e-15);
    }

    #[test]
    fn biased_walk_fixed_point_and_stationarity() {
        let spec = GroupSpec::free(2);
        let mu = Measure::new(
            spec.clone(),
            vec![
                (spec.parse_word("a").unwrap(), 0.5),
                (spec.parse_word("A").unwrap(), 1.0 / 6.0),
                (spec.parse_word("b").unwrap(), 1.0 / 6.0),
                (spec.parse_word("B").unwrap(), 1.0 / 6.0),
            ],
        )
        .unwrap();
        let nu = harmonic_measure(&mu).unwrap();
        // oracle values from an independent fixed-point solve
        let expect_first = [0.5502690371062599, 0.0907213760400744, 0.17950479342683284, 0.17950479342683284];
        for (a, b) in nu.first_letter_masses().iter().zip(expect_first) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert!(nu.stationarity_residual(&mu).unwrap() < 1e-12);
        let total: f64 = nu.first_letter_masses().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn free_one_rejected() {
        let spec = GroupSpec::free(1);
        let mu = Measure::srw(&spec).unwrap();
        assert!(matches!(
            harmonic_measure(&mu),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn non_nearest_neighbor_rejected() {
        let spec = GroupSpec::free(2);
        let mu = Measure::new(
            spec.clone(),
            vec![
                (spec.parse_word("aa").unwrap(), 0.25),
                (spec.parse_word("A").unwrap(), 0.25),
                (spec.parse_word("b").unwrap(), 0.25),
                (spec.parse_word("B").unwrap(), 0.25),
            ],
        )
        .unwrap();
        assert!(harmonic_measure(&mu).is_err());
    }

    #[test]
    fn srw_furstenberg_entropy_is_half_log3() {
        // hand computation: (3/4) log 3 - (1/4) log 3 = (1/2) log 3
        let (_, mu, nu) = srw2();
        let h = furstenberg_entropy(&mu, &nu).unwrap();
        assert!((h - 0.5 * 3f64.ln()).abs() < 1e-12, "{h}");
    }

    #[test]
    fn furstenberg_scaling_doubles_under_convolution_square() {
        let (_, mu, nu) = srw2();
        let mu2 = mu.convolve(&mu, 1 << 20).unwrap();
        let h1 = furstenberg_entropy(&mu, &nu).unwrap();
        let h2 = furstenberg_entropy(&mu2, &nu).unwrap();
        assert!((h2 - 2.0 * h1).abs() < 1e-10, "{h2} vs {}", 2.0 * h1);
    }

    #[test]
    fn invariant_measure_gives_zero_entropy() {
        // single-atom derivative case: mu = delta_e contributes log 1 = 0
        let spec = GroupSpec::free(2);
        let (_, _, nu) = srw2();
        let mu = Measure::new(spec.clone(), vec![(spec.identity(), 1.0)]).unwrap();
        assert_eq!(furstenberg_entropy(&mu, &nu).unwrap(), 0.0);
    }

    #[test]
    fn xi_identity_is_exactly_one() {
        let (spec, _, nu) = srw2();
        assert_eq!(xi_function(&spec.identity(), &nu).unwrap(), 1.0);
    }

    #[test]
    fn xi_srw_length_one_and_two_closed_forms() {
        let (spec, _, nu) = srw2();
        let a = spec.parse_word("a").unwrap();
        let xi1 = xi_function(&a, &nu).unwrap();
        assert!((xi1 - 3f64.sqrt() / 2.0).abs() < 1e-12, "{xi1}");
        let ab = spec.parse_word("ab").unwrap();
        let xi2 = xi_function(&ab, &nu).unwrap();
        assert!((xi2 - 2.0 / 3.0).abs() < 1e-12, "{xi2}");
    }

    #[test]
    fn xi_matches_closed_form_for_srw_all_lengths() {
        // (1 + n/2) 3^{-n/2} on F_2, cross-check only (cylinder sum is the
        // ground truth)
        let (spec, _, nu) = srw2();
        let mut w = String::new();
        for n in 0..=8 {
            let g = spec.parse_word(&w).unwrap();
            let closed = (1.0 + n as f64 / 2.0) * 3f64.powf(-(n as f64) / 2.0);
            let xi = xi_function(&g, &nu).unwrap();
            assert!((xi - closed).abs() < 1e-12, "n={n}: {xi} vs {closed}");
            // extend the geodesic without cancellation: a b a b ...
            w.push(if n % 2 == 0 { 'a' } else { 'b' });
        }
    }

    #[test]
    fn xi_dp_agrees_with_brute_cylinder_sum() {
        use rand::Rng;
        let spec = GroupSpec::free(2);
        let mu = Measure::new(
            spec.clone(),
            vec![
                (spec.parse_word("a").unwrap(), 0.4),
                (spec.parse_word("A").unwrap(), 0.2),
                (spec.parse_word("b").unwrap(), 0.25),
                (spec.parse_word("B").unwrap(), 0.15),
            ],
        )
        .unwrap();
        let nu = harmonic_measure(&mu).unwrap();
        let mut rng = crate::util::seeded_rng(17, 0);
        for _ in 0..30 {
            let len = rng.gen_range(0..5);
            let mut g = spec.identity();
            while spec.length(&g) < len {
                let i = rng.gen_range(1..=2);
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                g = spec.compose_unchecked(&g, &spec.generator(i, sign).unwrap());
            }
            let fast = xi_function(&g, &nu).unwrap();
            let brute = xi_cylinder_sum(&g, &nu).unwrap();
            assert!((fast - brute).abs() < 1e-12, "{fast} vs {brute}");
            assert!(fast > 0.0 && fast <= 1.0 + 1e-12);
            // symmetry Xi(s) = Xi(s^{-1})
            let gi = spec.invert(&g).unwrap();
            let fast_inv = xi_function(&gi, &nu).unwrap();
            assert!((fast - fast_inv).abs() < 1e-12);
        }
    }
}
