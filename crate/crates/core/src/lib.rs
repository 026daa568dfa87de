//! Monte Carlo fiducial inference.
//!
//! A fiducial model is a pair `(U, tau)`: a Monte Carlo law for `U` and a map
//! `tau(u, theta)` such that `tau(U, theta)` reproduces the sampling law of an
//! observation. Solving `tau(u, theta) = t` for `theta` over draws of `U`
//! yields the fiducial distribution. This crate provides
//!
//! * [`numerics`]: special functions, triangular linear algebra, monotone root
//!   finding and reproducible random streams,
//! * [`fidcore`]: the model abstraction, fiducial and posterior samplers and
//!   the fiducial-equals-posterior diagnostic,
//! * [`models1d`]: scalar worked models (location, two-point, normal, gamma
//!   scale and shape, CDF inversion, correlation) and the separability test,
//! * [`group`]: the lower-triangular location-scale group, the multivariate
//!   normal fiducial, and finite/smooth loop machinery,
//! * [`inference`]: summaries, intervals, estimators and coverage simulation.

pub mod error;
pub mod fidcore;
pub mod group;
pub mod inference;
pub mod models1d;
pub mod numerics;

pub use error::{Error, Result};
pub use fidcore::{EmpiricalDistribution, FiducialModel, ModelFlags};
pub use group::{LocScaleElement, LoopTable};
pub use numerics::{LowerTriangular, RandomStream};
