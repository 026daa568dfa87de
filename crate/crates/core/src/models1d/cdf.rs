use crate::error::{Error, Result};
use crate::fidcore::{EmpiricalDistribution, FiducialModel, ModelFlags};
use crate::numerics::{normal_cdf, MonotoneRoot, RandomStream, Start};

/// Direction of `theta ↦ F(t | theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// Scalar domain of an observation or parameter, with a bijection onto the
/// real line used for unconstrained root searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Real,
    Positive,
    /// Open interval `(lo, hi)`.
    Interval(f64, f64),
}

impl Domain {
    pub fn to_free(&self, x: f64) -> f64 {
        match *self {
            Domain::Real => x,
            Domain::Positive => x.ln(),
            Domain::Interval(lo, hi) => {
                let s = (x - lo) / (hi - lo);
                (s / (1.0 - s)).ln()
            }
        }
    }

    pub fn from_free(&self, z: f64) -> f64 {
        match *self {
            Domain::Real => z,
            Domain::Positive => z.exp(),
            Domain::Interval(lo, hi) => {
                let s = if z >= 0.0 {
                    1.0 / (1.0 + (-z).exp())
                } else {
                    let e = z.exp();
                    e / (1.0 + e)
                };
                lo + (hi - lo) * s
            }
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match *self {
            Domain::Real => x.is_finite(),
            Domain::Positive => x > 0.0 && x.is_finite(),
            Domain::Interval(lo, hi) => x > lo && x < hi,
        }
    }

    fn center(&self) -> f64 {
        match *self {
            Domain::Real => 0.0,
            Domain::Positive => 1.0,
            Domain::Interval(lo, hi) => 0.5 * (lo + hi),
        }
    }
}

/// A continuous one-parameter family of CDFs `F(t | theta)`, nondecreasing
/// in `t` and monotone in `theta`.
pub trait Cdf1D: Sync {
    fn cdf(&self, t: f64, theta: f64) -> f64;
    fn direction(&self) -> Monotonicity;
    fn t_domain(&self) -> Domain;
    fn theta_domain(&self) -> Domain;

    /// Starting point for searches over `theta`.
    fn theta_guess(&self, _t: f64) -> f64 {
        self.theta_domain().center()
    }

    /// Starting point for searches over `t`.
    fn t_guess(&self, _theta: f64) -> f64 {
        self.t_domain().center()
    }
}

impl<C: Cdf1D + ?Sized> Cdf1D for &C {
    fn cdf(&self, t: f64, theta: f64) -> f64 {
        (**self).cdf(t, theta)
    }
    fn direction(&self) -> Monotonicity {
        (**self).direction()
    }
    fn t_domain(&self) -> Domain {
        (**self).t_domain()
    }
    fn theta_domain(&self) -> Domain {
        (**self).theta_domain()
    }
    fn theta_guess(&self, t: f64) -> f64 {
        (**self).theta_guess(t)
    }
    fn t_guess(&self, theta: f64) -> f64 {
        (**self).t_guess(theta)
    }
}

fn search(guess_free: f64) -> MonotoneRoot {
    MonotoneRoot::new(Start::Guess {
        x0: guess_free,
        step: 0.25,
    })
    .ftol(1e-14)
    .xtol(1e-13)
}

/// `theta` with `F(t | theta) = p`.
pub fn solve_cdf_theta<C: Cdf1D + ?Sized>(c: &C, t: f64, p: f64) -> Result<f64> {
    let dom = c.theta_domain();
    let z = search(dom.to_free(c.theta_guess(t)))
        .solve(|z| c.cdf(t, dom.from_free(z)), p)
        .map_err(|e| Error::Domain(format!("no parameter solves F(t | theta) = {p} at t = {t}: {e}")))?;
    Ok(dom.from_free(z))
}

/// `t` with `F(t | theta) = p`.
pub fn solve_cdf_t<C: Cdf1D + ?Sized>(c: &C, theta: f64, p: f64) -> Result<f64> {
    let dom = c.t_domain();
    let z = search(dom.to_free(c.t_guess(theta)))
        .solve(|z| c.cdf(dom.from_free(z), theta), p)
        .map_err(|e| Error::Domain(format!("no observation solves F(t | {theta}) = {p}: {e}")))?;
    Ok(dom.from_free(z))
}

/// Fisher fiducial from a CDF: `u ~ Uniform(0, 1)` and `theta` solving
/// `F(t | theta) = u` when `F` increases in `theta`, or `F(t | theta) = 1 − u`
/// when it decreases, so that `1 − F(t | theta)` is the fiducial CDF in the
/// decreasing case.
pub fn fisher_fiducial_from_cdf<C: Cdf1D + ?Sized>(
    c: &C,
    t: f64,
    n: usize,
    stream: &mut RandomStream,
) -> Result<EmpiricalDistribution> {
    let values = (0..n)
        .map(|_| {
            let u = stream.open01();
            let target = match c.direction() {
                Monotonicity::Increasing => u,
                Monotonicity::Decreasing => 1.0 - u,
            };
            solve_cdf_theta(c, t, target)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(EmpiricalDistribution::uniform(values))
}

/// The inversion-method fiducial model `t = F⁻¹(u | theta)` with `U` uniform.
/// Simple, conventional and pivotal.
#[derive(Debug, Clone)]
pub struct FisherModel<C> {
    pub cdf: C,
}

impl<C: Cdf1D> FisherModel<C> {
    pub fn new(cdf: C) -> Self {
        Self { cdf }
    }
}

impl<C: Cdf1D> FiducialModel for FisherModel<C> {
    type Noise = f64;
    type Param = f64;
    type Obs = f64;

    fn flags(&self) -> ModelFlags {
        ModelFlags::PIVOTAL
    }

    fn draw_noise(&self, stream: &mut RandomStream) -> f64 {
        stream.open01()
    }

    fn tau(&self, u: &f64, theta: &f64) -> Result<f64> {
        solve_cdf_t(&self.cdf, *theta, *u)
    }

    fn solve_theta(&self, u: &f64, t: &f64) -> Result<f64> {
        solve_cdf_theta(&self.cdf, *t, *u)
    }

    fn solve_u(&self, theta: &f64, t: &f64) -> Result<f64> {
        Ok(self.cdf.cdf(*t, *theta))
    }
}

/// `F(t | theta) = Φ((t − theta) / sigma)`.
#[derive(Debug, Clone, Copy)]
pub struct NormalLocationCdf {
    pub sigma: f64,
}

impl Cdf1D for NormalLocationCdf {
    fn cdf(&self, t: f64, theta: f64) -> f64 {
        normal_cdf((t - theta) / self.sigma)
    }
    fn direction(&self) -> Monotonicity {
        Monotonicity::Decreasing
    }
    fn t_domain(&self) -> Domain {
        Domain::Real
    }
    fn theta_domain(&self) -> Domain {
        Domain::Real
    }
    fn theta_guess(&self, t: f64) -> f64 {
        t
    }
    fn t_guess(&self, theta: f64) -> f64 {
        theta
    }
}

/// Closure-backed CDF family.
pub struct FnCdf<F> {
    pub f: F,
    pub direction: Monotonicity,
    pub t_domain: Domain,
    pub theta_domain: Domain,
}

impl<F: Fn(f64, f64) -> f64 + Sync> Cdf1D for FnCdf<F> {
    fn cdf(&self, t: f64, theta: f64) -> f64 {
        (self.f)(t, theta)
    }
    fn direction(&self) -> Monotonicity {
        self.direction
    }
    fn t_domain(&self) -> Domain {
        self.t_domain
    }
    fn theta_domain(&self) -> Domain {
        self.theta_domain
    }
}
