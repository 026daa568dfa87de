use crate::error::{Error, Result};
use crate::models1d::cdf::{Cdf1D, Domain};

/// Residuals at or below this value are treated as separable.
pub const SEPARABILITY_THRESHOLD: f64 = 0.01;

/// Relative finite-difference step, as a fraction of the local grid spacing.
const FD_FRACTION: f64 = 1e-3;

/// `F(t | theta) = S(G(t) − H(theta))` recovered on the grid; `G` and `H`
/// vanish at the first grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    pub g: Vec<f64>,
    pub h: Vec<f64>,
    pub big_g: Vec<f64>,
    pub big_h: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Separability {
    /// Largest absolute second mixed difference of `ln R` over grid cells.
    pub max_residual: f64,
    /// `ln R(t_i, theta_j)`.
    pub ln_ratio: Vec<Vec<f64>>,
    /// Present when `max_residual <= SEPARABILITY_THRESHOLD`.
    pub separation: Option<Separation>,
}

fn check_grid(grid: &[f64], domain: Domain, name: &str) -> Result<()> {
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Argument(format!(
            "{name} grid must be strictly increasing with at least two points"
        )));
    }
    if let Some(x) = grid.iter().find(|&&x| !domain.contains(x)) {
        return Err(Error::Argument(format!("{name} grid point {x} is outside {domain:?}")));
    }
    Ok(())
}

/// Step at node `i`: a fraction of the smaller adjacent spacing.
fn steps(grid: &[f64]) -> Vec<f64> {
    let n = grid.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { grid[i] - grid[i - 1] } else { f64::INFINITY };
            let right = if i + 1 < n { grid[i + 1] - grid[i] } else { f64::INFINITY };
            FD_FRACTION * left.min(right)
        })
        .collect()
}

fn cumulative_trapezoid(x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len());
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..x.len() {
        acc += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
        out.push(acc);
    }
    out
}

/// Lindley's criterion for a fiducial distribution to be a Bayes posterior:
/// `R = −∂_θF / ∂_tF` must factor as `h(theta) / g(t)`, which holds iff every
/// second mixed difference of `ln R` vanishes.
///
/// Derivatives are central differences with steps adapted to the grid. The
/// mixed difference over a cell is invariant to reparameterizing `t` or
/// `theta`, so the residual is comparable across coordinate choices.
pub fn lindley_separability_test<C: Cdf1D + ?Sized>(
    c: &C,
    t_grid: &[f64],
    theta_grid: &[f64],
) -> Result<Separability> {
    check_grid(t_grid, c.t_domain(), "t")?;
    check_grid(theta_grid, c.theta_domain(), "theta")?;
    let (dt, dth) = (steps(t_grid), steps(theta_grid));
    let mut ln_ratio = vec![vec![0.0; theta_grid.len()]; t_grid.len()];
    for (i, &t) in t_grid.iter().enumerate() {
        for (j, &th) in theta_grid.iter().enumerate() {
            let ft = (c.cdf(t + dt[i], th) - c.cdf(t - dt[i], th)) / (2.0 * dt[i]);
            let fth = (c.cdf(t, th + dth[j]) - c.cdf(t, th - dth[j])) / (2.0 * dth[j]);
            if !(ft > 0.0) {
                return Err(Error::NonMonotone(format!(
                    "∂F/∂t = {ft} at (t, theta) = ({t}, {th})"
                )));
            }
            let r = -fth / ft;
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::NonMonotone(format!(
                    "R = {r} at (t, theta) = ({t}, {th}); F must decrease in theta"
                )));
            }
            ln_ratio[i][j] = r.ln();
        }
    }
    let mut max_residual: f64 = 0.0;
    for i in 0..t_grid.len() - 1 {
        for j in 0..theta_grid.len() - 1 {
            let d = ln_ratio[i + 1][j + 1] - ln_ratio[i + 1][j] - ln_ratio[i][j + 1]
                + ln_ratio[i][j];
            max_residual = max_residual.max(d.abs());
        }
    }
    let separation = (max_residual <= SEPARABILITY_THRESHOLD).then(|| {
        // ln R = ln h(theta) − ln g(t): row means give −ln g up to a constant,
        // column means then give ln h on the same normalization
        let (nt, nth) = (t_grid.len() as f64, theta_grid.len() as f64);
        let row: Vec<f64> = ln_ratio.iter().map(|r| r.iter().sum::<f64>() / nth).collect();
        let ln_g: Vec<f64> = row.iter().map(|a| row[0] - a).collect();
        let mean_ln_g = ln_g.iter().sum::<f64>() / nt;
        let ln_h: Vec<f64> = (0..theta_grid.len())
            .map(|j| ln_ratio.iter().map(|r| r[j]).sum::<f64>() / nt + mean_ln_g)
            .collect();
        let g: Vec<f64> = ln_g.iter().map(|v| v.exp()).collect();
        let h: Vec<f64> = ln_h.iter().map(|v| v.exp()).collect();
        Separation {
            big_g: cumulative_trapezoid(t_grid, &g),
            big_h: cumulative_trapezoid(theta_grid, &h),
            g,
            h,
        }
    });
    Ok(Separability {
        max_residual,
        ln_ratio,
        separation,
    })
}
