use crate::error::{Error, Result};
use crate::fidcore::{EmpiricalDistribution, FiducialModel};
use crate::numerics::RandomStream;

/// Asymptotic two-sample Kolmogorov–Smirnov critical value at level `alpha`
/// for sample sizes `n` and `m`.
pub fn ks_critical_value(alpha: f64, n: usize, m: usize) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    let (n, m) = (n as f64, m as f64);
    c * ((n + m) / (n * m)).sqrt()
}

/// Largest pairwise two-sample KS distance between the laws of
/// `tau(u, Theta)`, `Theta ~ prior`, across the probe values of `u`.
///
/// If the prior makes `tau(u, Theta)` free of `u`, the fiducial coincides with
/// the posterior. Small values are consistent with that; large values refute
/// it. A finite sample cannot prove invariance.
pub fn fiducial_posterior_diagnostic<M, P>(
    model: &M,
    prior: P,
    u_probe: &[M::Noise],
    n: usize,
    stream: &mut RandomStream,
) -> Result<f64>
where
    M: FiducialModel<Obs = f64>,
    P: Fn(&mut RandomStream) -> M::Param,
{
    if u_probe.len() < 2 {
        return Err(Error::Argument("need at least two probe values of u".into()));
    }
    if n == 0 {
        return Err(Error::Argument("need at least one prior draw per probe".into()));
    }
    let clouds = u_probe
        .iter()
        .map(|u| {
            let ts = (0..n)
                .map(|_| {
                    let theta = prior(stream);
                    model.tau(u, &theta)
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(EmpiricalDistribution::uniform(ts))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for (i, a) in clouds.iter().enumerate() {
        for b in &clouds[i + 1..] {
            worst = worst.max(a.ks_distance(b));
        }
    }
    Ok(worst)
}
