use crate::error::{Error, Result};
use crate::numerics::RandomStream;

/// Structural properties of a fiducial model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ModelFlags {
    /// The Monte Carlo law of `U` does not depend on the parameter.
    pub conventional: bool,
    /// `tau(u, theta) = t` has a unique solution `theta` for all `(u, t)`.
    pub simple: bool,
    /// Additionally `tau(u, theta) = t` has a unique solution `u` for all `(theta, t)`.
    pub pivotal: bool,
}

impl ModelFlags {
    pub const SIMPLE: Self = Self {
        conventional: true,
        simple: true,
        pivotal: false,
    };
    pub const PIVOTAL: Self = Self {
        conventional: true,
        simple: true,
        pivotal: true,
    };
}

/// A fiducial model `(U, tau)`: a Monte Carlo law on `Noise`, and a map
/// `tau: Noise × Param → Obs` such that `tau(U, theta)` has the sampling law
/// of the observation given `theta`.
pub trait FiducialModel: Sync {
    type Noise: Clone + Send + Sync;
    type Param: Clone + Send + Sync;
    type Obs: Clone + Send + Sync;

    fn flags(&self) -> ModelFlags;

    /// One draw from the Monte Carlo law of `U`.
    fn draw_noise(&self, stream: &mut RandomStream) -> Self::Noise;

    fn tau(&self, u: &Self::Noise, theta: &Self::Param) -> Result<Self::Obs>;

    /// The solution `theta^t(u)` of the fiducial equation.
    fn solve_theta(&self, _u: &Self::Noise, _t: &Self::Obs) -> Result<Self::Param> {
        Err(Error::Unsupported("model has no fiducial equation solver".into()))
    }

    /// The solution `u` of `tau(u, theta) = t` for pivotal models.
    fn solve_u(&self, _theta: &Self::Param, _t: &Self::Obs) -> Result<Self::Noise> {
        Err(Error::Unsupported("model is not pivotal".into()))
    }

    /// Atoms and probabilities when the Monte Carlo law is finitely supported.
    fn noise_atoms(&self) -> Option<Vec<(Self::Noise, f64)>> {
        None
    }
}

impl<M: FiducialModel + ?Sized> FiducialModel for &M {
    type Noise = M::Noise;
    type Param = M::Param;
    type Obs = M::Obs;

    fn flags(&self) -> ModelFlags {
        (**self).flags()
    }
    fn draw_noise(&self, stream: &mut RandomStream) -> Self::Noise {
        (**self).draw_noise(stream)
    }
    fn tau(&self, u: &Self::Noise, theta: &Self::Param) -> Result<Self::Obs> {
        (**self).tau(u, theta)
    }
    fn solve_theta(&self, u: &Self::Noise, t: &Self::Obs) -> Result<Self::Param> {
        (**self).solve_theta(u, t)
    }
    fn solve_u(&self, theta: &Self::Param, t: &Self::Obs) -> Result<Self::Noise> {
        (**self).solve_u(theta, t)
    }
    fn noise_atoms(&self) -> Option<Vec<(Self::Noise, f64)>> {
        (**self).noise_atoms()
    }
}
