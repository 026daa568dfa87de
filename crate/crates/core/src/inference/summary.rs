use crate::error::{Error, Result};
use crate::fidcore::EmpiricalDistribution;

/// Probability levels reported by [`summarize`].
pub const SUMMARY_LEVELS: [f64; 7] = [0.025, 0.05, 0.25, 0.5, 0.75, 0.95, 0.975];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    /// Equal mass `(1 − level) / 2` cut from each tail.
    Symmetric,
    /// Narrowest window holding at least `level`.
    Shortest,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalSpec {
    pub level: f64,
    pub kind: IntervalKind,
}

impl IntervalSpec {
    pub fn new(level: f64, kind: IntervalKind) -> Result<Self> {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::Argument(format!("level must lie in (0, 1), got {level}")));
        }
        Ok(Self { level, kind })
    }

    pub fn symmetric(level: f64) -> Result<Self> {
        Self::new(level, IntervalKind::Symmetric)
    }

    pub fn shortest(level: f64) -> Result<Self> {
        Self::new(level, IntervalKind::Shortest)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub sd: f64,
    /// `(p, quantile(p))` for each of [`SUMMARY_LEVELS`].
    pub quantiles: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
    /// Mass of the closed interval `[lo, hi]`.
    pub mass: f64,
    /// The requested level could not be met exactly with the available atoms,
    /// so the interval holds more.
    pub superset: bool,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivariantEstimates {
    /// Mean, optimal under squared error on the direct scale.
    pub mean: f64,
    /// `exp(E ln Theta)`, optimal under squared error on the log scale.
    pub log_scale: f64,
}

pub fn summarize(d: &EmpiricalDistribution) -> Result<Summary> {
    if d.is_empty() {
        return Err(Error::Argument("cannot summarize an empty distribution".into()));
    }
    let quantiles = SUMMARY_LEVELS
        .iter()
        .map(|&p| d.quantile(p).map(|q| (p, q)))
        .collect::<Result<_>>()?;
    Ok(Summary {
        mean: d.mean()?,
        sd: d.sd()?,
        quantiles,
    })
}

/// Interval from the left-continuous quantiles of `d`.
pub fn interval(d: &EmpiricalDistribution, spec: &IntervalSpec) -> Result<Interval> {
    if d.is_empty() {
        return Err(Error::Argument("empty distribution".into()));
    }
    let values = d.sorted_values();
    let cum = d.cumulative();
    // mass strictly below values[i]
    let below = |i: usize| if i == 0 { 0.0 } else { cum[i - 1] };
    let (i, j) = match spec.kind {
        IntervalKind::Symmetric => {
            let a = (1.0 - spec.level) / 2.0;
            let lo = d.quantile(a)?;
            let hi = d.quantile(1.0 - a)?;
            (
                values.partition_point(|&v| v < lo),
                values.partition_point(|&v| v <= hi) - 1,
            )
        }
        IntervalKind::Shortest => {
            let n = values.len();
            let mut best: Option<(f64, usize, usize)> = None;
            let mut j = 0;
            for i in 0..n {
                j = j.max(i);
                while j < n && cum[j] - below(i) < spec.level - 1e-12 {
                    j += 1;
                }
                if j == n {
                    break;
                }
                let w = values[j] - values[i];
                if best.is_none_or(|(bw, _, _)| w < bw) {
                    best = Some((w, i, j));
                }
            }
            let (_, i, j) = best.ok_or_else(|| {
                Error::Argument(format!("no window reaches mass {}", spec.level))
            })?;
            (i, j)
        }
    };
    let mass = cum[j] - below(i);
    Ok(Interval {
        lo: values[i],
        hi: values[j],
        level: spec.level,
        mass,
        superset: mass > spec.level + 1e-12,
    })
}

pub fn equivariant_estimates(d: &EmpiricalDistribution) -> Result<EquivariantEstimates> {
    let mean = d.mean()?;
    if let Some(x) = d.sorted_values().first().filter(|&&x| x <= 0.0) {
        return Err(Error::Domain(format!(
            "log-scale estimate needs positive support, found {x}"
        )));
    }
    let log_mean = d.map(|x| x.ln()).mean()?;
    Ok(EquivariantEstimates {
        mean,
        log_scale: log_mean.exp(),
    })
}
