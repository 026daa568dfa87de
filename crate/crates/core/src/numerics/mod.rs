//! Numerical building blocks shared by every sampler.

mod linalg;
mod random;
mod root;
mod special;

pub use linalg::{cholesky, tri_solve, LowerTriangular};
pub use random::RandomStream;
pub use root::{find_root_monotone, MonotoneRoot, Start};
pub use special::{
    digamma, gamma_cdf, gamma_inv_cdf, gamma_ln_cdf, gamma_ln_inv_cdf, gamma_ln_sf, ln_gamma,
    normal_cdf, normal_pdf,
};
