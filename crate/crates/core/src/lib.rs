//! Numerical library for l^p-pseudofunction norms of group-algebra elements.
//!
//! Computes truncated covariant convolution operators on Cayley balls of
//! finitely generated groups (free groups primarily), certifies two-sided
//! bounds on their p -> p operator norms, verifies the norm inequalities
//! relating the p and conjugate exponents (duality, Riesz-Thorin
//! interpolation, monotonicity, Hilbert-space amplification, tensor powers),
//! runs empirical Kahane-Khintchine moment comparisons, and evaluates the
//! random-walk entropy criteria (Avez entropy, speed, harmonic measure,
//! Furstenberg entropy, Harish-Chandra Xi-function) that certify exoticness
//! thresholds for the associated crossed-product completions.

// negated comparisons like `!(p >= 1.0)` are deliberate: they reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod error;
pub mod group;
pub mod pnorm;
pub mod rademacher;
pub mod suite;
pub mod util;
pub mod walk;

pub use error::{Error, Result};
