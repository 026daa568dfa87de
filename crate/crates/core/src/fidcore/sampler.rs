use crate::error::{Error, Result};
use crate::fidcore::{EmpiricalDistribution, FiducialModel};
use crate::numerics::RandomStream;

/// Largest tolerated fraction of draws whose fiducial equation fails to solve.
pub const SOLVER_FAILURE_BUDGET: f64 = 1e-3;

/// `n` independent draws of `tau(U, theta)`.
pub fn simulate_model<M: FiducialModel>(
    model: &M,
    theta: &M::Param,
    n: usize,
    stream: &mut RandomStream,
) -> Result<Vec<M::Obs>> {
    (0..n)
        .map(|_| {
            let u = model.draw_noise(stream);
            model.tau(&u, theta)
        })
        .collect()
}

/// Fiducial distribution of `theta^t(U)`: `n` draws of `U`, each mapped
/// through the fiducial equation solver.
///
/// Draws whose equation fails to solve are dropped and counted; more than
/// [`SOLVER_FAILURE_BUDGET`] of them aborts the run.
pub fn sample_fiducial<M: FiducialModel>(
    model: &M,
    t: &M::Obs,
    n: usize,
    stream: &mut RandomStream,
) -> Result<EmpiricalDistribution<M::Param>> {
    let flags = model.flags();
    if !(flags.conventional && flags.simple) {
        return Err(Error::Unsupported(
            "fiducial sampling needs a conventional simple model".into(),
        ));
    }
    let mut out = Vec::with_capacity(n);
    let mut failed = 0usize;
    for _ in 0..n {
        let u = model.draw_noise(stream);
        match model.solve_theta(&u, t) {
            Ok(theta) => out.push(theta),
            Err(e @ Error::Unsupported(_)) => return Err(e),
            Err(_) => failed += 1,
        }
    }
    if failed as f64 > SOLVER_FAILURE_BUDGET * n as f64 {
        return Err(Error::SolverBudget { failed, total: n });
    }
    let d = EmpiricalDistribution::uniform(out);
    Ok(if failed > 0 {
        d.with_warning(format!("{failed} of {n} draws had no solution and were dropped"))
    } else {
        d
    })
}
