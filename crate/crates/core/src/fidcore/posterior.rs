use rand::distr::{weighted::WeightedIndex, Distribution};

use crate::error::{Error, Result};
use crate::fidcore::{EmpiricalDistribution, FiducialModel};
use crate::numerics::RandomStream;

/// Reference measure a density is taken with respect to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceMeasure {
    Counting,
    Lebesgue,
}

type UDensity<U> = Box<dyn Fn(&U) -> f64 + Send + Sync>;
type TauWeight<T, U> = Box<dyn Fn(&T, &U) -> f64 + Send + Sync>;

/// Posterior sampling problem for a conventional fiducial model.
///
/// `u_density` is the density `f` of the Monte Carlo law of `U`, and
/// `tau_weight(t, u)` is the density `w` of `tau(u, Theta)` under the prior,
/// so that `(U, T)` has joint density `f(u) w(t, u)`. Improper priors enter
/// only through `w`; the prior itself is never sampled.
pub struct PosteriorProblem<M: FiducialModel> {
    pub model: M,
    u_density: UDensity<M::Noise>,
    pub u_measure: ReferenceMeasure,
    tau_weight: TauWeight<M::Obs, M::Noise>,
    pub t_measure: ReferenceMeasure,
}

impl<M: FiducialModel> PosteriorProblem<M> {
    pub fn new<F, W>(
        model: M,
        u_density: F,
        u_measure: ReferenceMeasure,
        tau_weight: W,
        t_measure: ReferenceMeasure,
    ) -> Self
    where
        F: Fn(&M::Noise) -> f64 + Send + Sync + 'static,
        W: Fn(&M::Obs, &M::Noise) -> f64 + Send + Sync + 'static,
    {
        Self {
            model,
            u_density: Box::new(u_density),
            u_measure,
            tau_weight: Box::new(tau_weight),
            t_measure,
        }
    }

    pub fn u_density(&self, u: &M::Noise) -> f64 {
        (self.u_density)(u)
    }

    pub fn tau_weight(&self, t: &M::Obs, u: &M::Noise) -> f64 {
        (self.tau_weight)(t, u)
    }
}

/// Joint density `f(u) w(t, u)` of `(U, T)`.
pub fn joint_density<M: FiducialModel>(
    problem: &PosteriorProblem<M>,
    u: &M::Noise,
    t: &M::Obs,
) -> f64 {
    let f = problem.u_density(u);
    if f == 0.0 {
        return 0.0;
    }
    f * problem.tau_weight(t, u)
}

/// Where `u ↦ f(u) w(t, u)` is integrated for the sigma-finiteness check.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    /// Atoms of a counting reference measure.
    Atoms(Vec<f64>),
    /// Uniform grid on `[lo, hi]` with `points` nodes for the trapezoid rule.
    Grid { lo: f64, hi: f64, points: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaFiniteness {
    /// Estimate of `∫ f(u) w(t, u) ν(du)`.
    pub normalizer: f64,
    pub finite: bool,
    /// Number of support doublings performed.
    pub doublings: u32,
}

const MAX_DOUBLINGS: u32 = 10;
const TAIL_FRACTION: f64 = 0.01;

/// Checks that `∫ f(u) w(t, u) ν(du)` is finite at `t`.
///
/// Atom supports are summed exactly. Grid supports are integrated by the
/// trapezoid rule and doubled about their midpoint, at fixed spacing, until
/// the added tail carries less than 1% of the total; non-decaying tails after
/// ten doublings, or overflow, are reported as not sigma-finite.
pub fn sigma_finiteness_check<M>(
    problem: &PosteriorProblem<M>,
    t: &M::Obs,
    support: &Support,
) -> Result<SigmaFiniteness>
where
    M: FiducialModel<Noise = f64>,
{
    let h = |u: f64| joint_density(problem, &u, t);
    match support {
        Support::Atoms(atoms) => {
            let normalizer: f64 = atoms.iter().map(|&u| h(u)).sum();
            Ok(SigmaFiniteness {
                normalizer,
                finite: normalizer.is_finite(),
                doublings: 0,
            })
        }
        &Support::Grid { lo, hi, points } => integrate_with_doubling(h, lo, hi, points),
    }
}

/// Trapezoid integral of `h` on a uniform `points`-node grid over `[lo, hi]`,
/// doubling the span about its midpoint at fixed spacing until the added tail
/// carries less than 1% of the total.
pub(crate) fn integrate_with_doubling<H: Fn(f64) -> f64>(
    h: H,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<SigmaFiniteness> {
    if !(hi > lo) || points < 2 {
        return Err(Error::Argument(format!(
            "grid support needs lo < hi and at least two points, got [{lo}, {hi}] x {points}"
        )));
    }
    let step = (hi - lo) / (points - 1) as f64;
    let trapezoid = |lo: f64, n: usize| -> f64 {
        let mut s = 0.5 * (h(lo) + h(lo + (n - 1) as f64 * step));
        for k in 1..n - 1 {
            s += h(lo + k as f64 * step);
        }
        s * step
    };
    let mid = 0.5 * (lo + hi);
    let mut n = points;
    let mut current = trapezoid(lo, n);
    for doubling in 1..=MAX_DOUBLINGS {
        n = 2 * n - 1;
        let new_lo = mid - 0.5 * (n - 1) as f64 * step;
        let next = trapezoid(new_lo, n);
        if !next.is_finite() {
            return Ok(SigmaFiniteness {
                normalizer: next,
                finite: false,
                doublings: doubling,
            });
        }
        let tail = (next - current).abs();
        if tail <= TAIL_FRACTION * next.abs() {
            return Ok(SigmaFiniteness {
                normalizer: next,
                finite: true,
                doublings: doubling,
            });
        }
        current = next;
    }
    Ok(SigmaFiniteness {
        normalizer: current,
        finite: false,
        doublings: MAX_DOUBLINGS,
    })
}

/// Posterior sample of `Theta` given `T = t` from a fiducial model.
///
/// A finitely supported `U` is reweighted exactly: atom `u_i` gets mass
/// proportional to `p_i w(t, u_i)` and maps to `theta^t(u_i)`. Otherwise
/// `n_proposals` draws of `U` are weighted by `w(t, u)` and `n_out` of them
/// are resampled multinomially before solving the fiducial equation. An
/// effective sample size below 1% of the proposals attaches a warning.
pub fn posterior_sample<M: FiducialModel>(
    problem: &PosteriorProblem<M>,
    t: &M::Obs,
    n_proposals: usize,
    n_out: usize,
    stream: &mut RandomStream,
) -> Result<EmpiricalDistribution<M::Param>> {
    let model = &problem.model;
    let flags = model.flags();
    if !flags.conventional {
        return Err(Error::Unsupported(
            "posterior sampling needs a conventional model".into(),
        ));
    }
    if !flags.simple {
        return Err(Error::Unsupported(
            "conditioning on tau(u, Theta) = t is only implemented for simple models".into(),
        ));
    }

    if let Some(atoms) = model.noise_atoms() {
        let mut thetas = Vec::with_capacity(atoms.len());
        let mut masses = Vec::with_capacity(atoms.len());
        for (u, p) in &atoms {
            let q = p * problem.tau_weight(t, u);
            if q > 0.0 {
                thetas.push(model.solve_theta(u, t)?);
                masses.push(q);
            }
        }
        if masses.is_empty() {
            return Err(Error::DegeneratePosterior(
                "every atom has zero weight at this observation".into(),
            ));
        }
        return EmpiricalDistribution::weighted(thetas, masses);
    }

    if n_proposals == 0 || n_out == 0 {
        return Err(Error::Argument("proposal and output counts must be positive".into()));
    }
    let proposals: Vec<M::Noise> = (0..n_proposals).map(|_| model.draw_noise(stream)).collect();
    let weights: Vec<f64> = proposals.iter().map(|u| problem.tau_weight(t, u)).collect();
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::Domain(format!("prior weight evaluated to {w}")));
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::DegeneratePosterior(
            "all proposal weights are zero; T may not be sigma-finite at this observation".into(),
        ));
    }
    let sum_sq: f64 = weights.iter().map(|w| w * w).sum();
    let ess = total * total / sum_sq;

    let index = WeightedIndex::new(&weights)
        .map_err(|e| Error::DegeneratePosterior(e.to_string()))?;
    let mut solved: Vec<Option<M::Param>> = vec![None; n_proposals];
    let mut out = Vec::with_capacity(n_out);
    for _ in 0..n_out {
        let i = index.sample(stream);
        if solved[i].is_none() {
            solved[i] = Some(model.solve_theta(&proposals[i], t)?);
        }
        out.push(solved[i].clone().expect("solved above"));
    }
    let d = EmpiricalDistribution::uniform(out);
    Ok(if ess < 0.01 * n_proposals as f64 {
        d.with_warning(format!(
            "effective sample size {ess:.1} is below 1% of {n_proposals} proposals"
        ))
    } else {
        d
    })
}

/// [`posterior_sample`] for scalar `U`, refusing to run unless
/// [`sigma_finiteness_check`] finds a finite normalizer on `support`.
pub fn posterior_sample_checked<M>(
    problem: &PosteriorProblem<M>,
    t: &M::Obs,
    support: &Support,
    n_proposals: usize,
    n_out: usize,
    stream: &mut RandomStream,
) -> Result<EmpiricalDistribution<M::Param>>
where
    M: FiducialModel<Noise = f64>,
{
    let check = sigma_finiteness_check(problem, t, support)?;
    if !check.finite {
        return Err(Error::NotSigmaFinite(format!(
            "∫ f(u) w(t, u) du did not converge after {} support doublings",
            check.doublings
        )));
    }
    if check.normalizer == 0.0 {
        return Err(Error::DegeneratePosterior(
            "zero normalizer at this observation".into(),
        ));
    }
    posterior_sample(problem, t, n_proposals, n_out, stream)
}
