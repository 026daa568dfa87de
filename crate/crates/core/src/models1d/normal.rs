use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fidcore::{EmpiricalDistribution, FiducialModel, ModelFlags};
use crate::numerics::{normal_cdf, RandomStream};

/// Coverage factor of the 95% expanded uncertainty.
pub const COVERAGE_FACTOR_95: f64 = 1.96;

/// Mean of `n` observations from `Normal(theta, sigma0²)`: `t = theta + sigma V`
/// with `V` standard normal and `sigma = sigma0 / sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalMeanModel {
    pub sigma0: f64,
    pub n: usize,
}

impl NormalMeanModel {
    pub fn new(sigma0: f64, n: usize) -> Result<Self> {
        if !(sigma0 > 0.0 && sigma0.is_finite()) {
            return Err(Error::Domain(format!("sigma0 must be positive, got {sigma0}")));
        }
        if n == 0 {
            return Err(Error::Domain("sample size must be at least 1".into()));
        }
        Ok(Self { sigma0, n })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma0 / (self.n as f64).sqrt()
    }
}

impl FiducialModel for NormalMeanModel {
    type Noise = f64;
    type Param = f64;
    type Obs = f64;

    fn flags(&self) -> ModelFlags {
        ModelFlags::PIVOTAL
    }

    fn draw_noise(&self, stream: &mut RandomStream) -> f64 {
        stream.sample(StandardNormal)
    }

    fn tau(&self, v: &f64, theta: &f64) -> Result<f64> {
        Ok(theta + self.sigma() * v)
    }

    fn solve_theta(&self, v: &f64, t: &f64) -> Result<f64> {
        Ok(t - self.sigma() * v)
    }

    fn solve_u(&self, theta: &f64, t: &f64) -> Result<f64> {
        Ok((t - theta) / self.sigma())
    }
}

/// The fiducial `Normal(t, sigma0² / n)` of the normal mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalMeanFiducial {
    pub mean: f64,
    pub sd: f64,
    pub model: NormalMeanModel,
}

impl NormalMeanFiducial {
    pub fn cdf(&self, theta: f64) -> f64 {
        normal_cdf((theta - self.mean) / self.sd)
    }

    /// `mean ± k sd`.
    pub fn expanded_interval(&self, k: f64) -> (f64, f64) {
        (self.mean - k * self.sd, self.mean + k * self.sd)
    }

    pub fn sample(&self, n: usize, stream: &mut RandomStream) -> Result<EmpiricalDistribution> {
        crate::fidcore::sample_fiducial(&self.model, &self.mean, n, stream)
    }
}

pub fn normal_mean_fiducial(t: f64, sigma0: f64, n: usize) -> Result<NormalMeanFiducial> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("observation must be finite, got {t}")));
    }
    let model = NormalMeanModel::new(sigma0, n)?;
    Ok(NormalMeanFiducial {
        mean: t,
        sd: model.sigma(),
        model,
    })
}
