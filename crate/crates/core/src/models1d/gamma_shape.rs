use crate::error::{Error, Result};
use crate::fidcore::{sample_fiducial, EmpiricalDistribution, FiducialModel, ModelFlags};
use crate::numerics::{gamma_ln_inv_cdf, MonotoneRoot, RandomStream, Start};

/// Shapes outside this range are reported as unsolvable draws.
pub const SHAPE_RANGE: (f64, f64) = (1e-8, 1e8);

/// Mean log `t` of `n` observations from `Gamma(theta, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaShapeSpec {
    pub n: usize,
    pub t: f64,
}

impl GammaShapeSpec {
    pub fn new(n: usize, t: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("sample size must be at least 1".into()));
        }
        if !t.is_finite() {
            return Err(Error::Domain(format!("observed log-mean must be finite, got {t}")));
        }
        Ok(Self { n, t })
    }
}

/// `t = mean_i ln F⁻¹(u_i; theta)` with `u_1, …, u_n` uniform and `F` the
/// `Gamma(theta, 1)` CDF. Each term increases in `theta`, so the model is
/// simple; it is not pivotal for `n > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaShapeModel {
    pub n: usize,
}

impl GammaShapeModel {
    pub fn new(n: usize) -> Result<Self> {
        GammaShapeSpec::new(n, 0.0)?;
        Ok(Self { n })
    }
}

/// Rough inverse of the digamma function, used as a starting shape.
fn digamma_inverse_guess(y: f64) -> f64 {
    if y >= -2.22 {
        y.exp() + 0.5
    } else {
        -1.0 / (y + 0.577_215_664_901_532_9)
    }
}

fn mean_log_quantile(u: &[f64], theta: f64) -> Result<f64> {
    let mut s = 0.0;
    for &ui in u {
        s += gamma_ln_inv_cdf(ui, theta)?;
    }
    Ok(s / u.len() as f64)
}

impl FiducialModel for GammaShapeModel {
    type Noise = Vec<f64>;
    type Param = f64;
    type Obs = f64;

    fn flags(&self) -> ModelFlags {
        ModelFlags::SIMPLE
    }

    fn draw_noise(&self, stream: &mut RandomStream) -> Vec<f64> {
        (0..self.n).map(|_| stream.open01()).collect()
    }

    fn tau(&self, u: &Vec<f64>, theta: &f64) -> Result<f64> {
        if u.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: u.len(),
            });
        }
        mean_log_quantile(u, *theta)
    }

    /// Monotone search in `ln theta`, started at the inverse digamma of `t`
    /// and expanded geometrically up to [`SHAPE_RANGE`].
    fn solve_theta(&self, u: &Vec<f64>, t: &f64) -> Result<f64> {
        if u.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: u.len(),
            });
        }
        let (zmin, zmax) = (SHAPE_RANGE.0.ln(), SHAPE_RANGE.1.ln());
        let g = |z: f64| mean_log_quantile(u, z.exp()).map(|v| v - t);
        let z0 = digamma_inverse_guess(*t).ln().clamp(zmin, zmax);
        let g0 = g(z0)?;
        if g0 == 0.0 {
            return Ok(z0.exp());
        }
        let dir = if g0 < 0.0 { 1.0 } else { -1.0 };
        let (mut near, mut step) = (z0, 0.25);
        let far = loop {
            let z = (near + dir * step).clamp(zmin, zmax);
            let gz = g(z)?;
            if (gz < 0.0) != (g0 < 0.0) || gz == 0.0 {
                break z;
            }
            if z == zmin || z == zmax {
                return Err(Error::NoRoot(format!(
                    "shape solving the fiducial equation at t = {t} lies outside [{}, {}]",
                    SHAPE_RANGE.0, SHAPE_RANGE.1
                )));
            }
            near = z;
            step *= 2.0;
        };
        let (a, b) = if near < far { (near, far) } else { (far, near) };
        let z = MonotoneRoot::new(Start::Bracket(a, b))
            .ftol(1e-13)
            .xtol(1e-13)
            .solve(|z| g(z).unwrap_or(f64::NAN), 0.0)?;
        Ok(z.exp())
    }
}

/// Fiducial sample of the gamma shape from the log-mean statistic.
pub fn gamma_shape_fiducial(
    spec: &GammaShapeSpec,
    n_samples: usize,
    stream: &mut RandomStream,
) -> Result<EmpiricalDistribution> {
    let model = GammaShapeModel::new(spec.n)?;
    sample_fiducial(&model, &spec.t, n_samples, stream)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::digamma;

    #[test]
    fn round_trip() {
        let model = GammaShapeModel::new(10).unwrap();
        let mut s = RandomStream::new(8, 0);
        for &theta in &[0.01, 0.3, 2.0, 17.0, 500.0] {
            for _ in 0..20 {
                let u = model.draw_noise(&mut s);
                let t = model.tau(&u, &theta).unwrap();
                let back = model.solve_theta(&u, &t).unwrap();
                assert!((back / theta - 1.0).abs() < 1e-8, "{theta} {back}");
            }
        }
    }

    #[test]
    fn guess_is_close_to_inverse_digamma() {
        for &x in &[0.05, 0.5, 1.0, 3.0, 40.0] {
            let g = digamma_inverse_guess(digamma(x).unwrap());
            assert!((g / x - 1.0).abs() < 0.3, "{x} {g}");
        }
    }

    #[test]
    fn out_of_range_is_flagged() {
        let model = GammaShapeModel::new(2).unwrap();
        assert!(model.solve_theta(&vec![0.5, 0.5], &1e3).is_err());
    }

    #[test]
    fn sample_is_positive_and_estimators_finite() {
        let spec = GammaShapeSpec::new(10, digamma(2.0).unwrap()).unwrap();
        let d = gamma_shape_fiducial(&spec, 2000, &mut RandomStream::new(9, 0)).unwrap();
        assert!(d.values().iter().all(|&x| x > 0.0));
        let med = d.quantile(0.5).unwrap();
        assert!(med > 1.0 && med < 4.0, "{med}");
    }
}
