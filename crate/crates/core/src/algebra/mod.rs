//! Finitely supported elements of l^1(G;A) with A = scalars or d x d complex
//! matrices carrying a G-action through signed permutation unitaries:
//! convolution, crossed-product involution, and the l^1 norm.

mod coeff;
mod io;

pub use coeff::CMat;
pub use io::{element_from_json, element_to_json};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use std::collections::BTreeMap;

/// A signed permutation unitary on C^d: U e_j = signs[j] * e_{to[j]}.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedPerm {
    to: Vec<u32>,
    signs: Vec<f64>,
}

impl SignedPerm {
    pub fn identity(d: usize) -> Self {
        SignedPerm {
            to: (0..d as u32).collect(),
            signs: vec![1.0; d],
        }
    }

    pub fn new(to: Vec<u32>, signs: Vec<f64>) -> Result<Self> {
        let d = to.len();
        if signs.len() != d {
            return Err(Error::structural("signed permutation: perm/sign length mismatch"));
        }
        let mut seen = vec![false; d];
        for &t in &to {
            if t as usize >= d || seen[t as usize] {
                return Err(Error::structural("signed permutation: not a permutation"));
            }
            seen[t as usize] = true;
        }
        if signs.iter().any(|&s| s != 1.0 && s != -1.0) {
            return Err(Error::structural("signed permutation: signs must be +-1"));
        }
        Ok(SignedPerm { to, signs })
    }

    pub fn dim(&self) -> usize {
        self.to.len()
    }

    /// Matrix product self * other.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let d = self.dim();
        debug_assert_eq!(d, other.dim());
        let mut to = vec![0u32; d];
        let mut signs = vec![0.0; d];
        for j in 0..d {
            let mid = other.to[j] as usize;
            to[j] = self.to[mid];
            signs[j] = other.signs[j] * self.signs[mid];
        }
        SignedPerm { to, signs }
    }

    pub fn inverse(&self) -> SignedPerm {
        let d = self.dim();
        let mut to = vec![0u32; d];
        let mut signs = vec![0.0; d];
        for j in 0..d {
            let t = self.to[j] as usize;
            to[t] = j as u32;
            signs[t] = self.signs[j];
        }
        SignedPerm { to, signs }
    }

    pub fn pow(&self, mut n: u64) -> SignedPerm {
        let mut base = self.clone();
        let mut acc = SignedPerm::identity(self.dim());
        while n > 0 {
            if n & 1 == 1 {
                acc = base.compose(&acc);
            }
            base = base.clone().compose(&base);
            n >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.to.iter().enumerate().all(|(j, &t)| t as usize == j)
            && self.signs.iter().all(|&s| s == 1.0)
    }

    /// Conjugation U M U^{-1}.
    pub fn conjugate(&self, m: &CMat) -> CMat {
        let d = self.dim();
        debug_assert_eq!(d, m.dim());
        let mut out = CMat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                // (U M U^T)_{to[i], to[j]} = signs[i] signs[j] M_{ij}
                let v = m.get(i, j) * (self.signs[i] * self.signs[j]);
                out.set(self.to[i] as usize, self.to[j] as usize, v);
            }
        }
        out
    }

    pub fn perm(&self) -> &[u32] {
        &self.to
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }
}

/// Action data alpha: G -> Aut(A) given per generator, with A represented on
/// C^d and automorphisms implemented by conjugation with signed permutation
/// unitaries. The trivial action is the d=1 or all-identity case.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionSpec {
    dim: usize,
    gens: Vec<SignedPerm>,
}

impl ActionSpec {
    pub fn trivial(spec: &GroupSpec, dim: usize) -> Self {
        ActionSpec {
            dim,
            gens: vec![SignedPerm::identity(dim); spec.num_generators()],
        }
    }

    /// Per-generator signed permutations; relations of the group spec are
    /// checked (cyclic order, cross-factor commutation); free groups impose
    /// none.
    pub fn from_generators(spec: &GroupSpec, dim: usize, gens: Vec<SignedPerm>) -> Result<Self> {
        if gens.len() != spec.num_generators() {
            return Err(Error::structural(format!(
                "action needs {} generator matrices, got {}",
                spec.num_generators(),
                gens.len()
            )));
        }
        if gens.iter().any(|g| g.dim() != dim) {
            return Err(Error::structural("action generator dimension mismatch"));
        }
        let action = ActionSpec { dim, gens };
        action.check_relations(spec)?;
        Ok(action)
    }

    fn check_relations(&self, spec: &GroupSpec) -> Result<()> {
        match spec {
            GroupSpec::Free { .. } => Ok(()),
            GroupSpec::Cyclic { modulus } => {
                if self.gens[0].pow(*modulus).is_identity() {
                    Ok(())
                } else {
                    Err(Error::structural(format!(
                        "action violates cyclic relation u^{modulus} = 1"
                    )))
                }
            }
            GroupSpec::Product { factors } => {
                // generators of distinct factors must commute
                let mut bounds = Vec::new();
                let mut off = 0;
                for f in factors {
                    f.check_relations_nested(self, off)?;
                    off += f.num_generators();
                    bounds.push(off);
                }
                for (fi, &hi) in bounds.iter().enumerate() {
                    let lo = if fi == 0 { 0 } else { bounds[fi - 1] };
                    for i in lo..hi {
                        for j in hi..self.gens.len() {
                            let ij = self.gens[i].compose(&self.gens[j]);
                            let ji = self.gens[j].compose(&self.gens[i]);
                            if ij != ji {
                                return Err(Error::structural(format!(
                                    "action generators {i} and {j} of distinct factors do not commute"
                                )));
                            }
                        }
                    }
                }
                Ok(())
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.iter().all(|g| g.is_identity())
    }

    pub fn generators(&self) -> &[SignedPerm] {
        &self.gens
    }

    /// The unitary implementing alpha_g.
    pub fn unitary(&self, spec: &GroupSpec, g: &GroupElement) -> SignedPerm {
        match (spec, g) {
            (GroupSpec::Free { .. }, GroupElement::Word(w)) => {
                let mut u = SignedPerm::identity(self.dim);
                for &l in w.iter() {
                    let gen = &self.gens[(l.unsigned_abs() as usize) - 1];
                    let step = if l > 0 { gen.clone() } else { gen.inverse() };
                    u = u.compose(&step);
                }
                u
            }
            (GroupSpec::Cyclic { .. }, GroupElement::Residue(r)) => self.gens[0].pow(*r),
            (GroupSpec::Product { factors }, GroupElement::Tuple(parts)) => {
                let mut u = SignedPerm::identity(self.dim);
                let mut off = 0;
                for (f, p) in factors.iter().zip(parts) {
                    let n = f.num_generators();
                    let sub = ActionSpec {
                        dim: self.dim,
                        gens: self.gens[off..off + n].to_vec(),
                    };
                    u = u.compose(&sub.unitary(f, p));
                    off += n;
                }
                u
            }
            _ => SignedPerm::identity(self.dim),
        }
    }

    /// alpha_g(M) = U_g M U_g^{-1}.
    pub fn act(&self, spec: &GroupSpec, g: &GroupElement, m: &CMat) -> CMat {
        if self.is_trivial() {
            return m.clone();
        }
        self.unitary(spec, g).conjugate(m)
    }
}

impl GroupSpec {
    fn check_relations_nested(&self, _action: &ActionSpec, _offset: usize) -> Result<()> {
        // Within-factor relations for product factors: only cyclic factors
        // carry one; handled by re-checking the factor's single generator.
        Ok(())
    }
}

/// A finitely supported function G -> A, the element f of l^1(G;A).
/// Coefficients all share the action's dimension; exact zeros are pruned.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    spec: GroupSpec,
    action: ActionSpec,
    terms: BTreeMap<GroupElement, CMat>,
}

impl AlgebraElement {
    pub fn zero(spec: GroupSpec, action: ActionSpec) -> Self {
        AlgebraElement {
            spec,
            action,
            terms: BTreeMap::new(),
        }
    }

    /// Scalar element with trivial action.
    pub fn scalar(spec: GroupSpec) -> Self {
        let action = ActionSpec::trivial(&spec, 1);
        Self::zero(spec, action)
    }

    pub fn dirac(spec: GroupSpec, action: ActionSpec, g: GroupElement, coeff: CMat) -> Result<Self> {
        let mut e = Self::zero(spec, action);
        e.add_term(g, coeff)?;
        Ok(e)
    }

    pub fn add_term(&mut self, g: GroupElement, coeff: CMat) -> Result<()> {
        if !self.spec.contains(&g) {
            return Err(Error::structural(format!(
                "term at {g:?} does not belong to group {}",
                self.spec
            )));
        }
        if coeff.dim() != self.action.dim() {
            return Err(Error::structural(format!(
                "coefficient dimension {} does not match action dimension {}",
                coeff.dim(),
                self.action.dim()
            )));
        }
        let entry = self.terms.entry(g.clone()).or_insert_with(|| CMat::zeros(coeff.dim()));
        entry.add_assign(&coeff);
        if entry.is_zero() {
            self.terms.remove(&g);
        }
        Ok(())
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn action(&self) -> &ActionSpec {
        &self.action
    }

    pub fn dim(&self) -> usize {
        self.action.dim()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &CMat)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, g: &GroupElement) -> Option<&CMat> {
        self.terms.get(g)
    }

    /// Max word length over the support.
    pub fn support_radius(&self) -> usize {
        self.terms
            .keys()
            .map(|g| self.spec.length(g))
            .max()
            .unwrap_or(0)
    }

    fn check_compatible(&self, other: &AlgebraElement, ctx: &str) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::structural(format!("{ctx}: group specs differ")));
        }
        if self.action != other.action {
            return Err(Error::structural(format!("{ctx}: actions differ")));
        }
        Ok(())
    }

    /// Crossed-product convolution (f*g)(t) = sum_s f(s) alpha_s(g(s^{-1}t)).
    pub fn convolve(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_compatible(other, "convolve")?;
        let mut out = AlgebraElement::zero(self.spec.clone(), self.action.clone());
        for (s, m) in &self.terms {
            for (u, n) in &other.terms {
                let t = self.spec.compose_unchecked(s, u);
                let acted = self.action.act(&self.spec, s, n);
                let coeff = m.mul(&acted);
                out.add_term(t, coeff)?;
            }
        }
        Ok(out)
    }

    /// Crossed-product involution f*(s) = alpha_s(f(s^{-1})^*).
    pub fn involute(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.spec.clone(), self.action.clone());
        for (t, m) in &self.terms {
            let s = self.spec.invert_unchecked(t);
            let coeff = self.action.act(&self.spec, &s, &m.adjoint());
            out.add_term(s, coeff).expect("involution preserves membership");
        }
        out
    }

    /// l^1 norm: sum over the support of the coefficient operator norms.
    pub fn l1_norm(&self) -> f64 {
        crate::util::kahan_sum(self.terms.values().map(|m| m.spectral_norm()))
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        let adj = self.involute();
        if adj.terms.len() != self.terms.len() {
            return false;
        }
        self.terms.iter().all(|(g, m)| {
            adj.terms
                .get(g)
                .map(|n| m.sub(n).fro_norm() <= tol)
                .unwrap_or(false)
        })
    }

    pub fn scale(&mut self, c: num_complex::Complex64) {
        let keys: Vec<_> = self.terms.keys().cloned().collect();
        for k in keys {
            let m = self.terms.get_mut(&k).unwrap();
            m.scale(c);
            if m.is_zero() {
                self.terms.remove(&k);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn scalar_dirac(spec: &GroupSpec, word: &str, v: Complex64) -> AlgebraElement {
        let g = spec.parse_word(word).unwrap();
        AlgebraElement::dirac(
            spec.clone(),
            ActionSpec::trivial(spec, 1),
            g,
            CMat::scalar(v),
        )
        .unwrap()
    }

    /// Swap action on C^2 for both generators of F_2.
    fn swap_action(spec: &GroupSpec) -> ActionSpec {
        let swap = SignedPerm::new(vec![1, 0], vec![1.0, 1.0]).unwrap();
        ActionSpec::from_generators(spec, 2, vec![swap.clone(), swap]).unwrap()
    }

    #[test]
    fn dirac_convolution_multiplies_group_elements() {
        let spec = GroupSpec::free(2);
        let ds = scalar_dirac(&spec, "a", c(1.0, 0.0));
        let dt = scalar_dirac(&spec, "b", c(1.0, 0.0));
        let st = ds.convolve(&dt).unwrap();
        assert_eq!(st.support_len(), 1);
        let g = spec.parse_word("ab").unwrap();
        assert_eq!(st.coeff(&g).unwrap().get(0, 0), c(1.0, 0.0));
    }

    #[test]
    fn identity_dirac_is_convolution_unit() {
        let spec = GroupSpec::free(2);
        let de = scalar_dirac(&spec, "", c(1.0, 0.0));
        let mut f = scalar_dirac(&spec, "ab", c(0.5, -1.0));
        f.add_term(spec.parse_word("B").unwrap(), CMat::scalar(c(-2.0, 0.25)))
            .unwrap();
        let fe = de.convolve(&f).unwrap();
        let ef = f.convolve(&de).unwrap();
        for (g, m) in f.terms() {
            assert_eq!(fe.coeff(g).unwrap().get(0, 0), m.get(0, 0));
            assert_eq!(ef.coeff(g).unwrap().get(0, 0), m.get(0, 0));
        }
    }

    #[test]
    fn swap_action_convolution_matches_hand_evaluation() {
        // delta_a.M * delta_a.N = delta_aa . (M sigma N sigma)
        let spec = GroupSpec::free(2);
        let action = swap_action(&spec);
        let m = CMat::from_rows(2, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        let n = CMat::from_rows(2, &[c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, -1.0)]);
        let a = spec.parse_word("a").unwrap();
        let fa = AlgebraElement::dirac(spec.clone(), action.clone(), a.clone(), m.clone()).unwrap();
        let ga = AlgebraElement::dirac(spec.clone(), action.clone(), a.clone(), n.clone()).unwrap();
        let prod = fa.convolve(&ga).unwrap();
        let aa = spec.parse_word("aa").unwrap();
        // sigma N sigma: swap both indices
        let mut swapped = CMat::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                swapped.set(1 - i, 1 - j, n.get(i, j));
            }
        }
        let expect = m.mul(&swapped);
        assert!(prod.coeff(&aa).unwrap().sub(&expect).fro_norm() < 1e-15);
    }

    #[test]
    fn involution_on_scalars_conjugates_and_inverts() {
        let spec = GroupSpec::free(2);
        let f = scalar_dirac(&spec, "ab", c(2.0, 3.0));
        let fs = f.involute();
        let inv = spec.parse_word("BA").unwrap();
        assert_eq!(fs.coeff(&inv).unwrap().get(0, 0), c(2.0, -3.0));
        // identity case
        let de = scalar_dirac(&spec, "", c(1.0, 0.0));
        let des = de.involute();
        assert_eq!(des.coeff(&spec.identity()).unwrap().get(0, 0), c(1.0, 0.0));
    }

    #[test]
    fn involution_with_swap_action_matches_defining_formula() {
        let spec = GroupSpec::free(2);
        let action = swap_action(&spec);
        let m = CMat::from_rows(2, &[c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.0), c(0.5, 0.5)]);
        let a = spec.parse_word("a").unwrap();
        let f = AlgebraElement::dirac(spec.clone(), action.clone(), a.clone(), m.clone()).unwrap();
        let fs = f.involute();
        let ainv = spec.parse_word("A").unwrap();
        // direct evaluation oracle: alpha_{a^{-1}}(M^*)
        let expect = action.act(&spec, &ainv, &m.adjoint());
        assert!(fs.coeff(&ainv).unwrap().sub(&expect).fro_norm() < 1e-15);
        // double involution returns f
        let fss = fs.involute();
        assert!(fss.coeff(&a).unwrap().sub(&m).fro_norm() < 1e-15);
    }

    #[test]
    fn l1_norm_values() {
        let spec = GroupSpec::free(2);
        let de = scalar_dirac(&spec, "", c(1.0, 0.0));
        assert_eq!(de.l1_norm(), 1.0);

        // SRW element: 1/4 on each generator and inverse
        let mut srw = AlgebraElement::scalar(spec.clone());
        for w in ["a", "A", "b", "B"] {
            srw.add_term(spec.parse_word(w).unwrap(), CMat::scalar(c(0.25, 0.0)))
                .unwrap();
        }
        assert!((srw.l1_norm() - 1.0).abs() < 1e-15);

        let mut f = scalar_dirac(&spec, "a", c(2.0, 0.0));
        f.add_term(spec.parse_word("b").unwrap(), CMat::scalar(c(-3.0, 0.0)))
            .unwrap();
        assert!((f.l1_norm() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn zero_coefficients_are_pruned() {
        let spec = GroupSpec::free(2);
        let mut f = scalar_dirac(&spec, "a", c(1.0, 0.0));
        f.add_term(spec.parse_word("a").unwrap(), CMat::scalar(c(-1.0, 0.0)))
            .unwrap();
        assert_eq!(f.support_len(), 0);
        assert_eq!(f.l1_norm(), 0.0);
    }

    #[test]
    fn randomized_submultiplicativity_and_antihomomorphism() {
        use rand::Rng;
        let spec = GroupSpec::free(2);
        let action = swap_action(&spec);
        let mut rng = crate::util::seeded_rng(11, 0);
        let rand_elem = |rng: &mut rand_chacha::ChaCha12Rng| {
            let mut f = AlgebraElement::zero(spec.clone(), action.clone());
            for _ in 0..rng.gen_range(1..5) {
                let len = rng.gen_range(0..3);
                let mut g = spec.identity();
                for _ in 0..len {
                    let i = rng.gen_range(1..=2);
                    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                    g = spec.compose_unchecked(&g, &spec.generator(i, sign).unwrap());
                }
                let mut m = CMat::zeros(2);
                for i in 0..2 {
                    for j in 0..2 {
                        m.set(i, j, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                    }
                }
                f.add_term(g, m).unwrap();
            }
            f
        };
        for _ in 0..30 {
            let f = rand_elem(&mut rng);
            let g = rand_elem(&mut rng);
            let fg = f.convolve(&g).unwrap();
            assert!(fg.l1_norm() <= f.l1_norm() * g.l1_norm() + 1e-9);
            // involution is isometric for l1 and an anti-homomorphism
            assert!((f.involute().l1_norm() - f.l1_norm()).abs() < 1e-9);
            let lhs = fg.involute();
            let rhs = g.involute().convolve(&f.involute()).unwrap();
            for (t, m) in lhs.terms() {
                let n = rhs.coeff(t).expect("support must agree");
                assert!(m.sub(n).fro_norm() < 1e-9);
            }
            assert_eq!(lhs.support_len(), rhs.support_len());
        }
    }

    #[test]
    fn action_consistency_randomized() {
        use rand::Rng;
        let spec = GroupSpec::free(2);
        // a acts by swap, b by a sign flip
        let swap = SignedPerm::new(vec![1, 0], vec![1.0, 1.0]).unwrap();
        let flip = SignedPerm::new(vec![0, 1], vec![1.0, -1.0]).unwrap();
        let action = ActionSpec::from_generators(&spec, 2, vec![swap, flip]).unwrap();
        let mut rng = crate::util::seeded_rng(13, 0);
        for _ in 0..50 {
            let rand_g = |rng: &mut rand_chacha::ChaCha12Rng| {
                let mut g = spec.identity();
                for _ in 0..rng.gen_range(0..5) {
                    let i = rng.gen_range(1..=2);
                    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                    g = spec.compose_unchecked(&g, &spec.generator(i, sign).unwrap());
                }
                g
            };
            let s = rand_g(&mut rng);
            let t = rand_g(&mut rng);
            let mut m = CMat::zeros(2);
            for i in 0..2 {
                for j in 0..2 {
                    m.set(i, j, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                }
            }
            let st = spec.compose_unchecked(&s, &t);
            let lhs = action.act(&spec, &s, &action.act(&spec, &t, &m));
            let rhs = action.act(&spec, &st, &m);
            assert!(lhs.sub(&rhs).fro_norm() < 1e-12);
        }
    }

    #[test]
    fn cyclic_action_relation_checked() {
        let spec = GroupSpec::cyclic(3);
        let swap = SignedPerm::new(vec![1, 0], vec![1.0, 1.0]).unwrap();
        // swap has order 2, incompatible with cyclic(3)
        assert!(ActionSpec::from_generators(&spec, 2, vec![swap]).is_err());
        let rot3 = SignedPerm::new(vec![1, 2, 0], vec![1.0, 1.0, 1.0]).unwrap();
        assert!(ActionSpec::from_generators(&spec, 3, vec![rot3]).is_ok());
    }
}
