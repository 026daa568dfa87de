use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fidcore::FiducialModel;
use crate::numerics::cholesky;

type BinOp = Arc<dyn Fn(f64, f64) -> Result<f64> + Send + Sync>;

/// A loop on a real interval: a binary operation with unique left and right
/// divisions and a two-sided identity.
#[derive(Clone)]
pub struct SmoothLoop1D {
    op: BinOp,
    left_div: BinOp,
    right_div: BinOp,
    pub identity: f64,
    /// Closed interval carrying the grid.
    pub domain: (f64, f64),
    /// Identify the endpoints of `domain`, making it a circle.
    pub periodic: bool,
}

impl std::fmt::Debug for SmoothLoop1D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothLoop1D")
            .field("identity", &self.identity)
            .field("domain", &self.domain)
            .field("periodic", &self.periodic)
            .finish_non_exhaustive()
    }
}

impl SmoothLoop1D {
    /// `op(x, y) = x ∘ y`; `left_div(x, z)` solves `x ∘ y = z` for `y` and
    /// `right_div(z, y)` solves `x ∘ y = z` for `x`.
    pub fn new<O, L, R>(op: O, left_div: L, right_div: R, identity: f64, domain: (f64, f64)) -> Self
    where
        O: Fn(f64, f64) -> Result<f64> + Send + Sync + 'static,
        L: Fn(f64, f64) -> Result<f64> + Send + Sync + 'static,
        R: Fn(f64, f64) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            op: Arc::new(op),
            left_div: Arc::new(left_div),
            right_div: Arc::new(right_div),
            identity,
            domain,
            periodic: false,
        }
    }

    pub fn periodic(mut self) -> Self {
        self.periodic = true;
        self
    }

    pub fn with_domain(mut self, domain: (f64, f64)) -> Self {
        self.domain = domain;
        self
    }

    /// Addition modulo the length of `[lo, hi)`, identity `lo`.
    pub fn additive_torus(lo: f64, hi: f64) -> Self {
        let len = hi - lo;
        let wrap = move |x: f64| lo + (x - lo).rem_euclid(len);
        Self::new(
            move |x, y| Ok(wrap(x + y - lo)),
            move |x, z| Ok(wrap(z - x + lo)),
            move |z, y| Ok(wrap(z - y + lo)),
            lo,
            (lo, hi),
        )
        .periodic()
    }

    pub fn op(&self, x: f64, y: f64) -> Result<f64> {
        (self.op)(x, y)
    }

    pub fn left_div(&self, x: f64, z: f64) -> Result<f64> {
        (self.left_div)(x, z)
    }

    pub fn right_div(&self, z: f64, y: f64) -> Result<f64> {
        (self.right_div)(z, y)
    }
}

/// Largest violations of the identity and division laws on `grid`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopLawCheck {
    pub identity: f64,
    pub division: f64,
}

pub fn check_loop_laws(lp: &SmoothLoop1D, grid: &[f64]) -> Result<LoopLawCheck> {
    let e = lp.identity;
    let mut identity: f64 = 0.0;
    let mut division: f64 = 0.0;
    for &x in grid {
        identity = identity
            .max((lp.op(e, x)? - x).abs())
            .max((lp.op(x, e)? - x).abs());
        for &y in grid.iter().step_by((grid.len() / 8).max(1)) {
            let z = lp.op(x, y)?;
            division = division
                .max((lp.left_div(x, z)? - y).abs())
                .max((lp.right_div(z, y)? - x).abs());
        }
    }
    Ok(LoopLawCheck { identity, division })
}

/// Relabels a pivotal scalar model as a loop on the observation space.
///
/// With `u0` solving `tau(u0, theta0) = t0`, the bijections `u ↦ tau(u, theta0)`
/// and `theta ↦ tau(u0, theta)` carry the noise and the parameter onto the
/// observation space, where `tau` becomes `x ∘ y = tau(û(x), θ̂(y))` with
/// `û(x) = solve_u(theta0, x)` and `θ̂(y) = solve_theta(u0, y)`. Then `t0` is a
/// two-sided identity.
pub fn pivotal_to_loop<M>(model: M, base_t: f64, base_theta: f64) -> Result<SmoothLoop1D>
where
    M: FiducialModel<Noise = f64, Param = f64, Obs = f64> + Send + 'static,
{
    if !model.flags().pivotal {
        return Err(Error::Unsupported("only pivotal models reduce to loops".into()));
    }
    let u0 = model.solve_u(&base_theta, &base_t)?;
    let m = Arc::new(model);
    let (m1, m2, m3) = (m.clone(), m.clone(), m);
    let theta0 = base_theta;
    Ok(SmoothLoop1D::new(
        move |x, y| {
            let u = m1.solve_u(&theta0, &x)?;
            let th = m1.solve_theta(&u0, &y)?;
            m1.tau(&u, &th)
        },
        move |x, z| {
            let u = m2.solve_u(&theta0, &x)?;
            let th = m2.solve_theta(&u, &z)?;
            m2.tau(&u0, &th)
        },
        move |z, y| {
            let th = m3.solve_theta(&u0, &y)?;
            let u = m3.solve_u(&th, &z)?;
            m3.tau(&u, &theta0)
        },
        base_t,
        (f64::NEG_INFINITY, f64::INFINITY),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceResidual {
    /// Root mean square of the discretized invariance equations at the
    /// least-squares optimum.
    pub residual: f64,
    /// Best log density at the grid nodes, normalized to mean zero.
    pub log_density: Vec<f64>,
    pub rows_used: usize,
    /// Translations that left the grid and were dropped.
    pub rows_clipped: usize,
}

/// Least-squares probe for a right-invariant density.
///
/// A density `m = exp(l)` is right invariant when, for every translation
/// `g`, `l(x ∘ g) + ln|∂_x(x ∘ g)| − l(x) = 0`. This is imposed for every
/// grid node `x` and every translation `g` in `translations`, with `l`
/// interpolated linearly between nodes and the gauge `Σ l = 0`. The returned
/// residual is near zero when an invariant density exists at grid resolution.
///
/// On a periodic loop the grid must be uniform on `[lo, hi)`; otherwise
/// equations whose image `x ∘ g` leaves `[grid_0, grid_last]` are dropped and
/// counted.
pub fn smooth_loop_invariance_residual(
    lp: &SmoothLoop1D,
    grid: &[f64],
    translations: &[f64],
) -> Result<InvarianceResidual> {
    let n = grid.len();
    if n < 3 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Argument(
            "grid must be strictly increasing with at least three points".into(),
        ));
    }
    let (lo, hi) = lp.domain;
    if grid[0] < lo || grid[n - 1] > hi {
        return Err(Error::Argument("grid exceeds the loop domain".into()));
    }
    let span = hi - lo;
    let spacing = (grid[n - 1] - grid[0]) / (n - 1) as f64;
    let h = 1e-5 * spacing;

    // interpolation weights of a point on the grid
    let locate = |y: f64| -> Option<[(usize, f64); 2]> {
        if lp.periodic {
            let s = (y - lo).rem_euclid(span) / spacing;
            let k = s.floor();
            let w = s - k;
            let k = (k as usize) % n;
            Some([(k, 1.0 - w), ((k + 1) % n, w)])
        } else {
            if y < grid[0] || y > grid[n - 1] {
                return None;
            }
            let k = grid.partition_point(|&g| g <= y).clamp(1, n - 1);
            let w = (y - grid[k - 1]) / (grid[k] - grid[k - 1]);
            Some([(k - 1, 1.0 - w), (k, w)])
        }
    };

    let mut normal = vec![vec![0.0; n]; n];
    let mut rhs = vec![0.0; n];
    let mut rows: Vec<([(usize, f64); 3], f64)> = Vec::new();
    let mut clipped = 0usize;
    for (i, &x) in grid.iter().enumerate() {
        for &g in translations {
            let y = lp.op(x, g)?;
            let Some(at) = locate(y) else {
                clipped += 1;
                continue;
            };
            let (xp, xm) = (x + h, x - h);
            let (a, b) = if lp.periodic || (xm >= lo && xp <= hi) {
                (xm, xp)
            } else if xm < lo {
                (x, xp)
            } else {
                (xm, x)
            };
            let mut dy = lp.op(b, g)? - lp.op(a, g)?;
            if lp.periodic {
                // undo a wrap between the two evaluations
                dy -= span * (dy / span).round();
            }
            let jac = (dy / (b - a)).abs();
            if !(jac > 0.0 && jac.is_finite()) {
                return Err(Error::Domain(format!(
                    "translation by {g} is not locally invertible at {x}"
                )));
            }
            // l(y) − l(x) = −ln jac
            let coeffs = [at[0], at[1], (i, -1.0)];
            let target = -jac.ln();
            for &(p, cp) in &coeffs {
                rhs[p] += cp * target;
                for &(q, cq) in &coeffs {
                    normal[p][q] += cp * cq;
                }
            }
            rows.push((coeffs, target));
        }
    }
    if rows.is_empty() {
        return Err(Error::Domain("every translation left the grid".into()));
    }
    // gauge row Σ l = 0
    for p in 0..n {
        for q in 0..n {
            normal[p][q] += 1.0;
        }
    }
    let l = cholesky(&normal)?;
    let z = crate::numerics::tri_solve(&l, &rhs, false)?;
    let ell = crate::numerics::tri_solve(&l, &z, true)?;
    let sum_sq: f64 = rows
        .iter()
        .map(|(c, t)| {
            let v: f64 = c.iter().map(|&(p, cp)| cp * ell[p]).sum::<f64>() - t;
            v * v
        })
        .sum();
    Ok(InvarianceResidual {
        residual: (sum_sq / rows.len() as f64).sqrt(),
        log_density: ell,
        rows_used: rows.len(),
        rows_clipped: clipped,
    })
}
