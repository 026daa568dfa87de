use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fidcore::{EmpiricalDistribution, FiducialModel, ModelFlags, PosteriorProblem, ReferenceMeasure};
use crate::numerics::RandomStream;

type Prior = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Location model `x = u + theta` with `U` on two atoms `u_1 ≠ u_2` with
/// probabilities `p_1 + p_2 = 1`, and a prior density `pi` on the parameter
/// (possibly improper).
#[derive(Clone)]
pub struct TwoPointModel {
    u: [f64; 2],
    p: [f64; 2],
    prior: Prior,
}

impl std::fmt::Debug for TwoPointModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TwoPointModel")
            .field("u", &self.u)
            .field("p", &self.p)
            .finish_non_exhaustive()
    }
}

/// Exact posterior on the two values `theta_i = x − u_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoAtomPosterior {
    pub theta: [f64; 2],
    pub mass: [f64; 2],
}

impl TwoAtomPosterior {
    pub fn to_empirical(&self) -> Result<EmpiricalDistribution> {
        EmpiricalDistribution::weighted(self.theta.to_vec(), self.mass.to_vec())
    }
}

impl TwoPointModel {
    /// `p_2` is taken as `1 − p_1`.
    pub fn new<P>(u: [f64; 2], p1: f64, prior: P) -> Result<Self>
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(u[0].is_finite() && u[1].is_finite()) || u[0] == u[1] {
            return Err(Error::Argument(format!("atoms must be distinct reals, got {u:?}")));
        }
        if !(p1 > 0.0 && p1 < 1.0) {
            return Err(Error::Argument(format!("p_1 must lie in (0, 1), got {p1}")));
        }
        Ok(Self {
            u,
            p: [p1, 1.0 - p1],
            prior: Arc::new(prior),
        })
    }

    pub fn atoms(&self) -> [f64; 2] {
        self.u
    }

    pub fn probabilities(&self) -> [f64; 2] {
        self.p
    }

    pub fn prior(&self, theta: f64) -> f64 {
        (self.prior)(theta)
    }

    /// Unnormalized masses `q_i = pi(x − u_i) p_i`.
    pub fn q(&self, x: f64) -> [f64; 2] {
        [0, 1].map(|i| self.prior(x - self.u[i]) * self.p[i])
    }

    /// The same model as a [`PosteriorProblem`] with counting measure on the atoms.
    pub fn posterior_problem(&self) -> PosteriorProblem<TwoPointModel> {
        let (u, p) = (self.u, self.p);
        let prior = self.prior.clone();
        PosteriorProblem::new(
            self.clone(),
            move |x: &f64| {
                if *x == u[0] {
                    p[0]
                } else if *x == u[1] {
                    p[1]
                } else {
                    0.0
                }
            },
            ReferenceMeasure::Counting,
            move |t: &f64, x: &f64| prior(t - x),
            ReferenceMeasure::Lebesgue,
        )
    }
}

impl FiducialModel for TwoPointModel {
    type Noise = f64;
    type Param = f64;
    type Obs = f64;

    fn flags(&self) -> ModelFlags {
        ModelFlags::PIVOTAL
    }

    fn draw_noise(&self, stream: &mut RandomStream) -> f64 {
        if stream.open01() < self.p[0] {
            self.u[0]
        } else {
            self.u[1]
        }
    }

    fn tau(&self, u: &f64, theta: &f64) -> Result<f64> {
        Ok(u + theta)
    }

    fn solve_theta(&self, u: &f64, t: &f64) -> Result<f64> {
        Ok(t - u)
    }

    fn solve_u(&self, theta: &f64, t: &f64) -> Result<f64> {
        Ok(t - theta)
    }

    fn noise_atoms(&self) -> Option<Vec<(f64, f64)>> {
        Some(vec![(self.u[0], self.p[0]), (self.u[1], self.p[1])])
    }
}

/// Posterior given `x`: mass `q_i / (q_1 + q_2)` on `theta_i = x − u_i`.
///
/// When the prior takes equal values at both atoms the masses are returned as
/// `(p_1, p_2)` without division, so a flat prior reproduces the fiducial exactly.
pub fn two_point_posterior(m: &TwoPointModel, x: f64) -> Result<TwoAtomPosterior> {
    let theta = [x - m.u[0], x - m.u[1]];
    let pi = theta.map(|th| m.prior(th));
    if let Some(v) = pi.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::Domain(format!("prior density evaluated to {v}")));
    }
    if pi[0] == pi[1] && pi[0] > 0.0 {
        return Ok(TwoAtomPosterior { theta, mass: m.p });
    }
    let q = [pi[0] * m.p[0], pi[1] * m.p[1]];
    let total = q[0] + q[1];
    if !(total > 0.0) {
        return Err(Error::DegeneratePosterior(format!(
            "prior vanishes at both candidate values {theta:?}"
        )));
    }
    Ok(TwoAtomPosterior {
        theta,
        mass: [q[0] / total, q[1] / total],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fidcore::{joint_density, posterior_sample, sigma_finiteness_check, Support};

    #[test]
    fn flat_prior_gives_fiducial() {
        let m = TwoPointModel::new([0.0, 1.0], 0.5, |_| 1.0).unwrap();
        let post = two_point_posterior(&m, 4.0).unwrap();
        assert_eq!(post.theta, [4.0, 3.0]);
        assert_eq!(post.mass, [0.5, 0.5]);
    }

    #[test]
    fn truncated_prior_removes_an_atom() {
        let m = TwoPointModel::new([0.0, 1.0], 0.5, |th| if th >= 4.0 { 1.0 } else { 0.0 }).unwrap();
        let post = two_point_posterior(&m, 4.0).unwrap();
        assert_eq!(post.mass, [1.0, 0.0]);
    }

    #[test]
    fn exponential_prior_by_hand() {
        let m = TwoPointModel::new([0.0, 1.0], 0.3, |th: f64| {
            if th > 0.0 {
                (-th).exp()
            } else {
                0.0
            }
        })
        .unwrap();
        let post = two_point_posterior(&m, 2.0).unwrap();
        let (a, b) = (0.3 * (-2.0f64).exp(), 0.7 * (-1.0f64).exp());
        assert!((post.mass[0] - a / (a + b)).abs() < 1e-15);
        assert!((post.mass[0] - 0.136_1).abs() < 1e-4);
        assert!((post.mass[1] - 0.863_8).abs() < 1e-4);
    }

    #[test]
    fn vanishing_prior_is_degenerate() {
        let m = TwoPointModel::new([0.0, 1.0], 0.5, |_| 0.0).unwrap();
        assert!(matches!(two_point_posterior(&m, 0.0), Err(Error::DegeneratePosterior(_))));
    }

    #[test]
    fn generic_machinery_agrees() {
        let m = TwoPointModel::new([0.0, 1.0], 0.3, |th: f64| (-th.abs()).exp()).unwrap();
        let problem = m.posterior_problem();
        let x = 0.25;
        let q = m.q(x);
        assert_eq!(joint_density(&problem, &0.0, &x), q[0]);
        let check = sigma_finiteness_check(&problem, &x, &Support::Atoms(vec![0.0, 1.0])).unwrap();
        assert_eq!(check.normalizer, q[0] + q[1]);
        let mut s = RandomStream::new(1, 0);
        let d = posterior_sample(&problem, &x, 10, 10, &mut s).unwrap();
        let exact = two_point_posterior(&m, x).unwrap();
        assert!((d.cdf(exact.theta[1]) - exact.mass[1]).abs() < 1e-15);
    }
}
