//! Random walks on free groups: exact convolution powers, Avez entropy and
//! speed, harmonic measure on the boundary, Furstenberg entropy, the
//! Harish-Chandra Xi-function, weight functions, Gibbs-inequality checks,
//! and the exoticness-criteria evaluation.

mod boundary;
mod criteria;
mod entropy;
mod gibbs;
mod measure;
mod speed;
mod weights;

pub use boundary::{furstenberg_entropy, harmonic_measure, xi_cylinder_sum, xi_function, BoundaryMeasure};
pub use criteria::{criteria_report, CriteriaReport};
pub use entropy::{avez_entropy, shannon_entropy, AvezOptions, AvezReport, McEntropy};
pub use gibbs::{gibbs_bound_check, relative_entropy, GibbsReport};
pub use measure::Measure;
pub use speed::{speed, SpeedReport};
pub use weights::{
    psd_gram_check, psd_gram_check_weight, psd_gram_check_xi, weight_membership, GramReport,
    MembershipReport, WeightFunction,
};
