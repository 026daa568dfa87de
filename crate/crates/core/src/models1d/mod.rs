//! Scalar worked models and Lindley's separability criterion.

pub mod cdf;
pub mod correlation;
pub mod gamma_scale;
pub mod gamma_shape;
pub mod lindley;
pub mod location;
pub mod normal;
pub mod two_point;

pub use cdf::{
    fisher_fiducial_from_cdf, solve_cdf_t, solve_cdf_theta, Cdf1D, Domain, FisherModel, FnCdf,
    Monotonicity, NormalLocationCdf,
};
pub use correlation::{CorrelationCdf, CorrelationModel, CrossProducts};
pub use gamma_scale::{
    gamma_scale_best_equivariant, gamma_scale_fiducial, BestEquivariant, GammaScaleCdf,
    GammaScaleModel, GammaScaleSpec, InverseGamma,
};
pub use gamma_shape::{gamma_shape_fiducial, GammaShapeModel, GammaShapeSpec, SHAPE_RANGE};
pub use lindley::{lindley_separability_test, Separability, Separation, SEPARABILITY_THRESHOLD};
pub use location::{location_posterior_density, LocationModel};
pub use normal::{normal_mean_fiducial, NormalMeanFiducial, NormalMeanModel, COVERAGE_FACTOR_95};
pub use two_point::{two_point_posterior, TwoAtomPosterior, TwoPointModel};
