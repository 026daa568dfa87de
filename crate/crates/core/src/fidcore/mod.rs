//! Fiducial models and the generic samplers built on them.

mod diagnostic;
mod empirical;
mod model;
pub(crate) mod posterior;
mod sampler;

pub use diagnostic::{fiducial_posterior_diagnostic, ks_critical_value};
pub use empirical::EmpiricalDistribution;
pub use model::{FiducialModel, ModelFlags};
pub use posterior::{
    joint_density, posterior_sample, posterior_sample_checked, sigma_finiteness_check,
    PosteriorProblem, ReferenceMeasure, SigmaFiniteness, Support,
};
pub use sampler::{sample_fiducial, simulate_model, SOLVER_FAILURE_BUDGET};
