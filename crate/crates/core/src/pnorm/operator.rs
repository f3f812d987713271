//! The compression of the covariant convolution operator to a Cayley ball.
//!
//! For f in l^1(G;A) the operator acts on xi: ball -> C^d (x) C^m by
//!
//!   (T xi)(h) = sum_g pi(alpha_{h^{-1}}(f(g))) xi(g^{-1} h),
//!
//! terms leaving the ball dropped. Storage is one source-index permutation
//! per support element plus the coefficient matrices; nothing dense is
//! materialized. Blocks are d x m row-major; the block norm is Euclidean
//! (Frobenius), the outer norm over ball positions is l^p.

use crate::algebra::{AlgebraElement, CMat, SignedPerm};
use crate::error::{Error, Result};
use crate::group::BallIndex;
use num_complex::Complex64;
use std::sync::Arc;

const MISS: u32 = u32::MAX;

/// l^p norm of a blocked vector: l^p over positions of Euclidean block
/// norms. This is the norm of l^p(ball; C^d (x) C^m); the Rademacher lab
/// measures its sums in the same geometry.
pub fn lp_block_norm(x: &[Complex64], block: usize, p: f64) -> f64 {
    debug_assert!(block > 0 && x.len().is_multiple_of(block));
    let n = x.len() / block;
    let bn = |h: usize| -> f64 {
        x[h * block..(h + 1) * block]
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    if p.is_infinite() {
        return (0..n).map(bn).fold(0.0, f64::max);
    }
    let mut acc = crate::util::KahanSum::new();
    if p == 2.0 {
        for c in x {
            acc.add(c.norm_sqr());
        }
        return acc.value().sqrt();
    }
    if p == 1.0 {
        for h in 0..n {
            acc.add(bn(h));
        }
        return acc.value();
    }
    for h in 0..n {
        let b = bn(h);
        if b > 0.0 {
            acc.add(b.powf(p));
        }
    }
    acc.value().powf(1.0 / p)
}

struct OpTerm {
    coeff: CMat,
    coeff_adj: CMat,
    coeff_norm: f64,
    /// src[h] = ball index of g^{-1} h, or MISS when it leaves the ball.
    src: Vec<u32>,
}

pub struct TruncatedOperator {
    ball: Arc<BallIndex>,
    dim: usize,
    amp: usize,
    support_radius: usize,
    l1_norm: f64,
    terms: Vec<OpTerm>,
    /// u_{h^{-1}} per ball element; None for trivial actions.
    unitaries: Option<Vec<SignedPerm>>,
}

/// Build the ball compression of the covariant operator of `f` with
/// amplification dimension `m`. Requires R >= max support length of f.
pub fn build_truncated(
    f: &AlgebraElement,
    ball: Arc<BallIndex>,
    amp: usize,
) -> Result<TruncatedOperator> {
    if f.spec() != ball.spec() {
        return Err(Error::structural(
            "element and ball belong to different groups",
        ));
    }
    if amp == 0 {
        return Err(Error::precondition("amplification dimension must be >= 1"));
    }
    let support_radius = f.support_radius();
    if ball.radius() < support_radius {
        return Err(Error::precondition(format!(
            "ball radius {} below max support length {}",
            ball.radius(),
            support_radius
        )));
    }
    let spec = f.spec().clone();
    let n = ball.len();
    let mut terms = Vec::with_capacity(f.support_len());
    for (g, coeff) in f.terms() {
        let g_inv = spec.invert_unchecked(g);
        let mut src = vec![MISS; n];
        for (h, slot) in src.iter_mut().enumerate() {
            let e = ball.element(h);
            let s = spec.compose_unchecked(&g_inv, &e);
            if let Some(i) = ball.index_of(&s) {
                *slot = i as u32;
            }
        }
        terms.push(OpTerm {
            coeff: coeff.clone(),
            coeff_adj: coeff.adjoint(),
            coeff_norm: coeff.spectral_norm(),
            src,
        });
    }
    let unitaries = if f.action().is_trivial() {
        None
    } else {
        let mut us = Vec::with_capacity(n);
        for h in 0..n {
            let e = ball.element(h);
            let h_inv = spec.invert_unchecked(&e);
            us.push(f.action().unitary(&spec, &h_inv));
        }
        Some(us)
    };
    Ok(TruncatedOperator {
        ball,
        dim: f.dim(),
        amp,
        support_radius,
        l1_norm: f.l1_norm(),
        terms,
        unitaries,
    })
}

impl TruncatedOperator {
    pub fn ball(&self) -> &BallIndex {
        &self.ball
    }

    pub fn ball_arc(&self) -> Arc<BallIndex> {
        Arc::clone(&self.ball)
    }

    pub fn coeff_dim(&self) -> usize {
        self.dim
    }

    pub fn amplification(&self) -> usize {
        self.amp
    }

    pub fn support_radius(&self) -> usize {
        self.support_radius
    }

    pub fn l1_norm(&self) -> f64 {
        self.l1_norm
    }

    pub fn block_size(&self) -> usize {
        self.dim * self.amp
    }

    pub fn vec_len(&self) -> usize {
        self.ball.len() * self.block_size()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// out = T x.
    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.vec_len());
        debug_assert_eq!(out.len(), self.vec_len());
        out.fill(Complex64::new(0.0, 0.0));
        let bs = self.block_size();
        for term in &self.terms {
            if self.dim == 1 && self.unitaries.is_none() {
                let c = term.coeff.get(0, 0);
                for (h, &s) in term.src.iter().enumerate() {
                    if s == MISS {
                        continue;
                    }
                    let src_off = s as usize * bs;
                    let dst_off = h * bs;
                    for k in 0..bs {
                        out[dst_off + k] += c * x[src_off + k];
                    }
                }
            } else {
                self.apply_blocks(term, x, out, false);
            }
        }
    }

    /// out = T^* x (conjugate-transpose block matrix).
    pub fn apply_adjoint(&self, x: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.vec_len());
        debug_assert_eq!(out.len(), self.vec_len());
        out.fill(Complex64::new(0.0, 0.0));
        let bs = self.block_size();
        for term in &self.terms {
            if self.dim == 1 && self.unitaries.is_none() {
                let c = term.coeff.get(0, 0).conj();
                for (h, &s) in term.src.iter().enumerate() {
                    if s == MISS {
                        continue;
                    }
                    let src_off = h * bs;
                    let dst_off = s as usize * bs;
                    for k in 0..bs {
                        out[dst_off + k] += c * x[src_off + k];
                    }
                }
            } else {
                self.apply_blocks(term, x, out, true);
            }
        }
    }

    /// Shared block path: forward gathers from src[h] into h, adjoint
    /// scatters from h into src[h] with the adjoint coefficient. The block
    /// matrix at (h, src[h]) is u_{h^{-1}} f(g) u_{h^{-1}}^{-1} acting
    /// columnwise on d x m blocks.
    fn apply_blocks(&self, term: &OpTerm, x: &[Complex64], out: &mut [Complex64], adjoint: bool) {
        let d = self.dim;
        let m = self.amp;
        let bs = d * m;
        let mat = if adjoint { &term.coeff_adj } else { &term.coeff };
        let mut col_in = vec![Complex64::new(0.0, 0.0); d];
        let mut col_mid = vec![Complex64::new(0.0, 0.0); d];
        for (h, &s) in term.src.iter().enumerate() {
            if s == MISS {
                continue;
            }
            let (in_off, out_off) = if adjoint {
                (h * bs, s as usize * bs)
            } else {
                (s as usize * bs, h * bs)
            };
            match &self.unitaries {
                None => {
                    for col in 0..m {
                        for r in 0..d {
                            col_in[r] = x[in_off + r * m + col];
                        }
                        col_mid.fill(Complex64::new(0.0, 0.0));
                        mat.apply_add(&col_in, &mut col_mid);
                        for r in 0..d {
                            out[out_off + r * m + col] += col_mid[r];
                        }
                    }
                }
                Some(us) => {
                    let u = &us[h];
                    let to = u.perm();
                    let signs = u.signs();
                    for col in 0..m {
                        // w = u^{-1} x_col : w[j] = signs[j] * x[to[j]]
                        for j in 0..d {
                            col_in[j] = x[in_off + to[j] as usize * m + col] * signs[j];
                        }
                        col_mid.fill(Complex64::new(0.0, 0.0));
                        mat.apply_add(&col_in, &mut col_mid);
                        // y = u * (...) : y[to[j]] = signs[j] * v[j]
                        for j in 0..d {
                            out[out_off + to[j] as usize * m + col] += col_mid[j] * signs[j];
                        }
                    }
                }
            }
        }
    }

    /// Frobenius norm of the block at ball position h.
    pub fn block_norm(&self, x: &[Complex64], h: usize) -> f64 {
        let bs = self.block_size();
        x[h * bs..(h + 1) * bs]
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// l^p norm over ball positions of block Frobenius norms.
    pub fn lp_norm(&self, x: &[Complex64], p: f64) -> f64 {
        lp_block_norm(x, self.block_size(), p)
    }

    /// Blockwise duality map psi_p(x)_h = |x_h|^{p-2} x_h (norming vector of
    /// the l^p(ball; H) norm for Hilbert blocks).
    pub fn duality_map(&self, x: &mut [Complex64], p: f64) {
        if p == 2.0 {
            return;
        }
        let n = self.ball.len();
        let bs = self.block_size();
        for h in 0..n {
            let b = self.block_norm(x, h);
            let scale = if b > 0.0 { b.powf(p - 2.0) } else { 0.0 };
            for k in 0..bs {
                x[h * bs + k] *= scale;
            }
        }
    }

    /// Zero every block outside ball(R - r); the remaining witness certifies
    /// a lower bound for the untruncated operator. Returns false when the
    /// projection annihilates the vector.
    pub fn project_to_inner_ball(&self, x: &mut [Complex64]) -> bool {
        let keep = self.ball.radius() - self.support_radius;
        let bs = self.block_size();
        let cut = self.ball.sphere_offsets()[keep + 1];
        let mut nonzero = false;
        for h in 0..self.ball.len() {
            if h >= cut {
                for k in 0..bs {
                    x[h * bs + k] = Complex64::new(0.0, 0.0);
                }
            } else if !nonzero {
                nonzero = x[h * bs..(h + 1) * bs]
                    .iter()
                    .any(|c| c.re != 0.0 || c.im != 0.0);
            }
        }
        nonzero
    }

    pub(crate) fn term_norms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|t| (t.src.as_slice(), t.coeff_norm))
    }
}
