//! The lower-triangular location-scale group, the multivariate normal
//! fiducial built on it, and finite and smooth loops.

pub mod locscale;
pub mod loops;
pub mod mvn;
pub mod smooth;

pub use locscale::{group_inv, group_mul, LocScaleElement};
pub use loops::{finite_loop_invariant_measure, quasigroup_check, InvariantMeasure, LoopTable, QuasigroupCheck};
pub use mvn::{
    correlation_fiducial, correlation_fiducial_from, mvn_fiducial_draw, mvn_fiducial_sample,
    mvn_sufficient_statistic, MAX_REDRAWS,
};
pub use smooth::{
    check_loop_laws, pivotal_to_loop, smooth_loop_invariance_residual, InvarianceResidual,
    LoopLawCheck, SmoothLoop1D,
};
