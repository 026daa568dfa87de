use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fidcore::posterior::integrate_with_doubling;
use crate::fidcore::{FiducialModel, ModelFlags, PosteriorProblem, ReferenceMeasure};
use crate::numerics::{normal_pdf, RandomStream};

type Sampler = Arc<dyn Fn(&mut RandomStream) -> f64 + Send + Sync>;
type Density = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Location model `t = u + theta` with a known noise law.
#[derive(Clone)]
pub struct LocationModel {
    sampler: Sampler,
    density: Option<(Density, ReferenceMeasure)>,
}

impl std::fmt::Debug for LocationModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LocationModel")
            .field("density", &self.density.as_ref().map(|d| d.1))
            .finish_non_exhaustive()
    }
}

impl LocationModel {
    pub fn new<S>(sampler: S) -> Self
    where
        S: Fn(&mut RandomStream) -> f64 + Send + Sync + 'static,
    {
        Self {
            sampler: Arc::new(sampler),
            density: None,
        }
    }

    pub fn with_density<F>(mut self, density: F, measure: ReferenceMeasure) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.density = Some((Arc::new(density), measure));
        self
    }

    /// `Normal(0, sigma²)` noise.
    pub fn normal(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::Domain(format!("noise sd must be positive, got {sigma}")));
        }
        Ok(Self::new(move |s| sigma * s.sample::<f64, _>(StandardNormal))
            .with_density(move |u| normal_pdf(u / sigma) / sigma, ReferenceMeasure::Lebesgue))
    }

    /// Cauchy noise with the given scale, drawn by inversion.
    pub fn cauchy(scale: f64) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::Domain(format!("noise scale must be positive, got {scale}")));
        }
        Ok(Self::new(move |s| scale * (PI * (s.open01() - 0.5)).tan()).with_density(
            move |u| 1.0 / (PI * scale * (1.0 + (u / scale).powi(2))),
            ReferenceMeasure::Lebesgue,
        ))
    }

    /// Noise degenerate at `c`.
    pub fn point_mass(c: f64) -> Self {
        Self::new(move |_| c)
            .with_density(move |u| if u == c { 1.0 } else { 0.0 }, ReferenceMeasure::Counting)
    }

    pub fn noise_density(&self, u: f64) -> Option<f64> {
        self.density.as_ref().map(|(f, _)| f(u))
    }

    pub fn density_measure(&self) -> Option<ReferenceMeasure> {
        self.density.as_ref().map(|d| d.1)
    }

    /// Posterior problem for prior density `prior` (possibly improper): the
    /// weight of `tau(u, Theta) = t` is `prior(t − u)`.
    pub fn posterior_problem<P>(&self, prior: P) -> Result<PosteriorProblem<LocationModel>>
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let (f, measure) = self
            .density
            .clone()
            .ok_or_else(|| Error::Unsupported("location model has no noise density".into()))?;
        Ok(PosteriorProblem::new(
            self.clone(),
            move |u: &f64| f(*u),
            measure,
            move |t: &f64, u: &f64| prior(t - u),
            ReferenceMeasure::Lebesgue,
        ))
    }
}

impl FiducialModel for LocationModel {
    type Noise = f64;
    type Param = f64;
    type Obs = f64;

    fn flags(&self) -> ModelFlags {
        ModelFlags::PIVOTAL
    }

    fn draw_noise(&self, stream: &mut RandomStream) -> f64 {
        (self.sampler)(stream)
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
}

/// Posterior density `C_t f(t − theta) prior(theta)` on `theta_grid`,
/// normalized by the trapezoid rule over the grid.
///
/// The normalizer is first checked for convergence by integrating over the
/// grid span and its doublings.
pub fn location_posterior_density<P: Fn(f64) -> f64>(
    m: &LocationModel,
    t: f64,
    prior: P,
    theta_grid: &[f64],
) -> Result<Vec<f64>> {
    let (f, _) = m
        .density
        .as_ref()
        .ok_or_else(|| Error::Unsupported("location model has no noise density".into()))?;
    if theta_grid.len() < 2 || theta_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Argument(
            "theta grid must be strictly increasing with at least two points".into(),
        ));
    }
    let h = |theta: f64| {
        let p = prior(theta);
        if p == 0.0 {
            0.0
        } else {
            f(t - theta) * p
        }
    };
    let (lo, hi) = (theta_grid[0], theta_grid[theta_grid.len() - 1]);
    let check = integrate_with_doubling(h, lo, hi, theta_grid.len())?;
    if !check.finite {
        return Err(Error::NotSigmaFinite(format!(
            "∫ f(t − θ) π(θ) dθ did not converge after {} doublings of [{lo}, {hi}]",
            check.doublings
        )));
    }
    let values: Vec<f64> = theta_grid.iter().map(|&x| h(x)).collect();
    let mass: f64 = theta_grid
        .windows(2)
        .zip(values.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum();
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::DegeneratePosterior(format!(
            "posterior mass on the grid is {mass}"
        )));
    }
    Ok(values.into_iter().map(|v| v / mass).collect())
}
