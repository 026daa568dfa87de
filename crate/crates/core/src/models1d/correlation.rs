use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fidcore::{FiducialModel, ModelFlags};
use crate::models1d::cdf::{Cdf1D, Domain, Monotonicity};
use crate::numerics::RandomStream;

/// Centered cross-products of `n` standard normal pairs `(z1, z2)`, stored
/// as the coordinates of `z1` and `z2` in an orthonormal basis of their span:
/// `|z1|`, and `z2 = c1 e1 + c2 e2` with `c2 > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossProducts {
    pub a: f64,
    pub c1: f64,
    pub c2: f64,
}

impl CrossProducts {
    pub fn from_sums(s11: f64, s12: f64, s22: f64) -> Result<Self> {
        let resid = s22 - s12 * s12 / s11;
        if !(s11 > 0.0 && resid > 0.0) {
            return Err(Error::SingularData(format!(
                "cross-product matrix [[{s11}, {s12}], [{s12}, {s22}]] is singular"
            )));
        }
        let a = s11.sqrt();
        Ok(Self {
            a,
            c1: s12 / a,
            c2: resid.sqrt(),
        })
    }

    pub fn draw(n_obs: usize, stream: &mut RandomStream) -> Self {
        loop {
            let (mut m1, mut m2) = (0.0, 0.0);
            let z: Vec<(f64, f64)> = (0..n_obs)
                .map(|_| {
                    let p: (f64, f64) = (stream.sample(StandardNormal), stream.sample(StandardNormal));
                    m1 += p.0;
                    m2 += p.1;
                    p
                })
                .collect();
            let n = n_obs as f64;
            let (m1, m2) = (m1 / n, m2 / n);
            let (mut s11, mut s12, mut s22) = (0.0, 0.0, 0.0);
            for (x, y) in z {
                let (x, y) = (x - m1, y - m2);
                s11 += x * x;
                s12 += x * y;
                s22 += y * y;
            }
            if let Ok(c) = Self::from_sums(s11, s12, s22) {
                return c;
            }
        }
    }

    /// Sample correlation of `z1` and `rho z1 + sqrt(1 − rho²) z2`.
    #[inline]
    pub fn r(&self, rho: f64) -> f64 {
        let s = (1.0 - rho * rho).sqrt();
        let b1 = rho * self.a + s * self.c1;
        let b2 = s * self.c2;
        b1 / b1.hypot(b2)
    }

    /// The `rho` with `self.r(rho) = r`.
    pub fn rho(&self, r: f64) -> f64 {
        let k = (self.c2 * r / (1.0 - r * r).sqrt() - self.c1) / self.a;
        k / (1.0 + k * k).sqrt()
    }
}

fn check_r(r: f64) -> Result<()> {
    if r.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::Argument(format!("correlation must lie in (-1, 1), got {r}")))
    }
}

/// Sample correlation `r` of `n_obs` bivariate normal pairs as a fiducial
/// model in `rho`. Simple: `r` increases strictly in `rho` for every draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationModel {
    pub n_obs: usize,
}

impl CorrelationModel {
    pub fn new(n_obs: usize) -> Result<Self> {
        if n_obs < 3 {
            return Err(Error::Argument(format!("need at least 3 pairs, got {n_obs}")));
        }
        Ok(Self { n_obs })
    }
}

impl FiducialModel for CorrelationModel {
    type Noise = CrossProducts;
    type Param = f64;
    type Obs = f64;

    fn flags(&self) -> ModelFlags {
        ModelFlags::SIMPLE
    }

    fn draw_noise(&self, stream: &mut RandomStream) -> CrossProducts {
        CrossProducts::draw(self.n_obs, stream)
    }

    fn tau(&self, u: &CrossProducts, rho: &f64) -> Result<f64> {
        check_r(*rho)?;
        Ok(u.r(*rho))
    }

    fn solve_theta(&self, u: &CrossProducts, r: &f64) -> Result<f64> {
        check_r(*r)?;
        Ok(u.rho(*r))
    }
}

/// Monte Carlo CDF of `r` given `rho`, smoothed by a logistic kernel.
///
/// The same replicates are reused at every `rho`, so the estimate is smooth
/// in both arguments and finite differences see no fresh noise.
#[derive(Debug, Clone)]
pub struct CorrelationCdf {
    pub n_obs: usize,
    pub bandwidth: f64,
    replicates: Vec<CrossProducts>,
}

impl CorrelationCdf {
    pub const DEFAULT_BANDWIDTH: f64 = 0.02;

    pub fn new(
        n_obs: usize,
        replicates: usize,
        bandwidth: f64,
        stream: &mut RandomStream,
    ) -> Result<Self> {
        CorrelationModel::new(n_obs)?;
        if replicates == 0 || !(bandwidth > 0.0) {
            return Err(Error::Argument(
                "need a positive replicate count and bandwidth".into(),
            ));
        }
        Ok(Self {
            n_obs,
            bandwidth,
            replicates: (0..replicates)
                .map(|_| CrossProducts::draw(n_obs, stream))
                .collect(),
        })
    }

    pub fn replicates(&self) -> usize {
        self.replicates.len()
    }
}

impl Cdf1D for CorrelationCdf {
    fn cdf(&self, r: f64, rho: f64) -> f64 {
        let inv_b = 1.0 / self.bandwidth;
        let s: f64 = self
            .replicates
            .iter()
            .map(|c| 1.0 / (1.0 + ((c.r(rho) - r) * inv_b).exp()))
            .sum();
        s / self.replicates.len() as f64
    }
    fn direction(&self) -> Monotonicity {
        Monotonicity::Decreasing
    }
    fn t_domain(&self) -> Domain {
        Domain::Interval(-1.0, 1.0)
    }
    fn theta_domain(&self) -> Domain {
        Domain::Interval(-1.0, 1.0)
    }
    fn theta_guess(&self, r: f64) -> f64 {
        r
    }
    fn t_guess(&self, rho: f64) -> f64 {
        rho
    }
}
