use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fidcore::EmpiricalDistribution;
use crate::group::locscale::{group_inv, group_mul, LocScaleElement};
use crate::numerics::{cholesky, LowerTriangular, RandomStream};

/// Redraws allowed per fiducial sample when the simulated statistic is singular.
pub const MAX_REDRAWS: usize = 10;

/// `[x̄, L_x]` with `L_x` the Cholesky factor of the empirical covariance
/// (divisor `n`) of the columns of `x`, given as `p` rows of `n` values.
pub fn mvn_sufficient_statistic(x: &[Vec<f64>]) -> Result<LocScaleElement> {
    let p = x.len();
    if p == 0 {
        return Err(Error::Argument("data matrix has no rows".into()));
    }
    let n = x[0].len();
    if let Some(row) = x.iter().find(|r| r.len() != n) {
        return Err(Error::Dimension {
            expected: n,
            got: row.len(),
        });
    }
    if n < p + 1 {
        return Err(Error::Argument(format!(
            "need at least {} observations for dimension {p}, got {n}",
            p + 1
        )));
    }
    let nf = n as f64;
    let mean: Vec<f64> = x.iter().map(|r| r.iter().sum::<f64>() / nf).collect();
    let mut cov = vec![vec![0.0; p]; p];
    for i in 0..p {
        for j in 0..=i {
            let s: f64 = x[i]
                .iter()
                .zip(&x[j])
                .map(|(a, b)| (a - mean[i]) * (b - mean[j]))
                .sum();
            cov[i][j] = s / nf;
            cov[j][i] = cov[i][j];
        }
    }
    let l = cholesky(&cov).map_err(|e| {
        Error::SingularData(format!("empirical covariance is not positive definite: {e}"))
    })?;
    LocScaleElement::new(mean, l)
}

fn standard_normal_matrix(p: usize, n: usize, stream: &mut RandomStream) -> Vec<Vec<f64>> {
    (0..p)
        .map(|_| (0..n).map(|_| stream.sample(StandardNormal)).collect())
        .collect()
}

/// One fiducial draw `(Theta, V)` with `Theta = t V⁻¹` and `V` the statistic
/// of a standard normal `p × n_obs` sample.
pub fn mvn_fiducial_draw(
    t: &LocScaleElement,
    n_obs: usize,
    stream: &mut RandomStream,
) -> Result<(LocScaleElement, LocScaleElement)> {
    let p = t.dim();
    if n_obs < p + 1 {
        return Err(Error::Argument(format!(
            "need n_obs >= {} for dimension {p}, got {n_obs}",
            p + 1
        )));
    }
    let mut last = None;
    for _ in 0..=MAX_REDRAWS {
        match mvn_sufficient_statistic(&standard_normal_matrix(p, n_obs, stream)) {
            Ok(v) => {
                let theta = group_mul(t, &group_inv(&v)?)?;
                return Ok((theta, v));
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// `m` draws from the fiducial `t V⁻¹`, which is also the posterior under the
/// right Haar prior.
pub fn mvn_fiducial_sample(
    t: &LocScaleElement,
    n_obs: usize,
    m: usize,
    stream: &mut RandomStream,
) -> Result<Vec<LocScaleElement>> {
    (0..m)
        .map(|_| mvn_fiducial_draw(t, n_obs, stream).map(|(theta, _)| theta))
        .collect()
}

/// Fiducial cloud of the correlation `rho` given a sample correlation `r`
/// from `n_obs` bivariate normal pairs.
///
/// The location and scales of the data do not affect the cloud, so the
/// statistic is taken as `[0, chol([[1, r], [r, 1]])]`.
pub fn correlation_fiducial(
    r: f64,
    n_obs: usize,
    m: usize,
    stream: &mut RandomStream,
) -> Result<EmpiricalDistribution> {
    if !(r.abs() < 1.0) {
        return Err(Error::Argument(format!("sample correlation must lie in (-1, 1), got {r}")));
    }
    let l = LowerTriangular::from_packed(2, vec![1.0, r, (1.0 - r * r).sqrt()])?;
    let t = LocScaleElement::new(vec![0.0, 0.0], l)?;
    correlation_fiducial_from(&t, n_obs, m, stream)
}

/// Correlation cloud for a general bivariate statistic `t`.
pub fn correlation_fiducial_from(
    t: &LocScaleElement,
    n_obs: usize,
    m: usize,
    stream: &mut RandomStream,
) -> Result<EmpiricalDistribution> {
    if t.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: t.dim(),
        });
    }
    let rho = mvn_fiducial_sample(t, n_obs, m, stream)?
        .iter()
        .map(|theta| theta.correlation(1, 0))
        .collect();
    Ok(EmpiricalDistribution::uniform(rho))
}
