use rand::Rng;
use rand_distr::Gamma;

use crate::error::{Error, Result};
use crate::fidcore::{FiducialModel, ModelFlags};
use crate::models1d::cdf::{Cdf1D, Domain, Monotonicity};
use crate::numerics::{digamma, gamma_cdf, gamma_inv_cdf, RandomStream};

/// Mean `t` of `n` observations from `Gamma(alpha, theta)` with known shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaScaleSpec {
    pub alpha: f64,
    pub n: usize,
    pub t: f64,
}

impl GammaScaleSpec {
    pub fn new(alpha: f64, n: usize, t: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!("shape must be positive, got {alpha}")));
        }
        if n == 0 {
            return Err(Error::Domain("sample size must be at least 1".into()));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("observed mean must be positive, got {t}")));
        }
        Ok(Self { alpha, n, t })
    }

    /// Shape `n alpha` of the sum.
    pub fn total_shape(&self) -> f64 {
        self.n as f64 * self.alpha
    }
}

/// `t = theta V` with `V ~ Gamma(n alpha, scale 1/n)`.
#[derive(Debug, Clone)]
pub struct GammaScaleModel {
    pub alpha: f64,
    pub n: usize,
    law: Gamma<f64>,
}

impl GammaScaleModel {
    pub fn new(alpha: f64, n: usize) -> Result<Self> {
        GammaScaleSpec::new(alpha, n, 1.0)?;
        let law = Gamma::new(n as f64 * alpha, 1.0 / n as f64)
            .map_err(|e| Error::Domain(e.to_string()))?;
        Ok(Self { alpha, n, law })
    }
}

impl FiducialModel for GammaScaleModel {
    type Noise = f64;
    type Param = f64;
    type Obs = f64;

    fn flags(&self) -> ModelFlags {
        ModelFlags::PIVOTAL
    }

    fn draw_noise(&self, stream: &mut RandomStream) -> f64 {
        stream.sample(self.law)
    }

    fn tau(&self, v: &f64, theta: &f64) -> Result<f64> {
        Ok(theta * v)
    }

    fn solve_theta(&self, v: &f64, t: &f64) -> Result<f64> {
        if !(*v > 0.0) {
            return Err(Error::Domain(format!("noise draw {v} is not positive")));
        }
        Ok(t / v)
    }

    fn solve_u(&self, theta: &f64, t: &f64) -> Result<f64> {
        Ok(t / theta)
    }
}

/// Closed-form fiducial `InvGamma(n alpha, n t)` of the gamma scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseGamma {
    pub shape: f64,
    pub scale: f64,
}

impl InverseGamma {
    pub fn cdf(&self, theta: f64) -> f64 {
        if theta <= 0.0 {
            return 0.0;
        }
        1.0 - gamma_cdf(self.scale / theta, self.shape).unwrap_or(1.0)
    }

    /// Finite for `shape > 1`.
    pub fn mean(&self) -> f64 {
        if self.shape > 1.0 {
            self.scale / (self.shape - 1.0)
        } else {
            f64::INFINITY
        }
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        Ok(self.scale / gamma_inv_cdf(1.0 - p, self.shape)?)
    }
}

pub fn gamma_scale_fiducial(spec: &GammaScaleSpec) -> Result<(GammaScaleModel, InverseGamma)> {
    let model = GammaScaleModel::new(spec.alpha, spec.n)?;
    let n = spec.n as f64;
    Ok((
        model,
        InverseGamma {
            shape: spec.total_shape(),
            scale: n * spec.t,
        },
    ))
}

/// Best equivariant estimate under the scale-invariant loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestEquivariant {
    /// `(t / alpha) exp(ln(n alpha) − psi(n alpha))`.
    pub theta_tilde: f64,
    /// `ln(n t) − psi(n alpha)`, the estimate of `ln theta`.
    pub log_estimate: f64,
    /// `exp(ln(n alpha) − psi(n alpha))`.
    pub correction: f64,
}

pub fn gamma_scale_best_equivariant(spec: &GammaScaleSpec) -> Result<BestEquivariant> {
    let na = spec.total_shape();
    let psi = digamma(na)?;
    let correction = (na.ln() - psi).exp();
    Ok(BestEquivariant {
        theta_tilde: spec.t / spec.alpha * correction,
        log_estimate: (spec.n as f64 * spec.t).ln() - psi,
        correction,
    })
}

/// `F(t | theta) = P(n alpha, n t / theta)`, the law of the mean of `n`
/// `Gamma(alpha, theta)` observations; decreasing in `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaScaleCdf {
    pub alpha: f64,
    pub n: usize,
}

impl Cdf1D for GammaScaleCdf {
    fn cdf(&self, t: f64, theta: f64) -> f64 {
        let n = self.n as f64;
        gamma_cdf(n * t / theta, n * self.alpha).unwrap_or(f64::NAN)
    }
    fn direction(&self) -> Monotonicity {
        Monotonicity::Decreasing
    }
    fn t_domain(&self) -> Domain {
        Domain::Positive
    }
    fn theta_domain(&self) -> Domain {
        Domain::Positive
    }
    fn theta_guess(&self, t: f64) -> f64 {
        t / self.alpha
    }
    fn t_guess(&self, theta: f64) -> f64 {
        theta * self.alpha
    }
}
