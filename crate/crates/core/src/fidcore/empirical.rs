use std::sync::OnceLock;

use crate::error::{Error, Result};

/// A weighted cloud of parameter points.
///
/// Weights are normalized on construction; `None` means uniform. Scalar
/// clouds lazily build a sorted index used by every CDF, quantile and moment
/// query, so results do not depend on the order the points were added in.
#[derive(Debug, Clone)]
pub struct EmpiricalDistribution<T = f64> {
    values: Vec<T>,
    weights: Option<Vec<f64>>,
    warnings: Vec<String>,
    sorted: OnceLock<Sorted>,
}

/// Positive-weight atoms in increasing order with cumulative masses.
#[derive(Debug, Clone)]
struct Sorted {
    values: Vec<f64>,
    weights: Vec<f64>,
    cum: Vec<f64>,
}

impl<T> EmpiricalDistribution<T> {
    pub fn uniform(values: Vec<T>) -> Self {
        Self {
            values,
            weights: None,
            warnings: Vec::new(),
            sorted: OnceLock::new(),
        }
    }

    /// Weighted cloud. Weights must be finite and nonnegative with a positive
    /// sum; they are rescaled unless they already sum to 1 within 1e-12.
    pub fn weighted(values: Vec<T>, weights: Vec<f64>) -> Result<Self> {
        if values.len() != weights.len() {
            return Err(Error::Dimension {
                expected: values.len(),
                got: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::Argument(format!("invalid weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Argument("weights sum to zero".into()));
        }
        let weights = if (total - 1.0).abs() > 1e-12 {
            weights.into_iter().map(|w| w / total).collect()
        } else {
            weights
        };
        Ok(Self {
            values,
            weights: Some(weights),
            warnings: Vec::new(),
            sorted: OnceLock::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.is_none()
    }

    pub fn weight(&self, i: usize) -> f64 {
        match &self.weights {
            Some(w) => w[i],
            None => 1.0 / self.values.len() as f64,
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.weight(i)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, f64)> + '_ {
        self.values.iter().enumerate().map(move |(i, v)| (v, self.weight(i)))
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn with_warning(mut self, warning: impl Into<String>) -> Self {
        self.warnings.push(warning.into());
        self
    }

    /// Pushes every point through `f`, keeping weights and warnings.
    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> EmpiricalDistribution<U> {
        EmpiricalDistribution {
            values: self.values.iter().map(f).collect(),
            weights: self.weights.clone(),
            warnings: self.warnings.clone(),
            sorted: OnceLock::new(),
        }
    }
}

impl EmpiricalDistribution<f64> {
    fn sorted(&self) -> &Sorted {
        self.sorted.get_or_init(|| {
            let mut atoms: Vec<(f64, f64)> = self
                .iter()
                .filter(|(_, w)| *w > 0.0)
                .map(|(v, w)| (*v, w))
                .collect();
            atoms.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
            let n = atoms.len();
            let mut cum = Vec::with_capacity(n);
            if self.is_uniform() {
                cum.extend((1..=n).map(|k| k as f64 / n as f64));
            } else {
                let mut acc = 0.0;
                for (_, w) in &atoms {
                    acc += w;
                    cum.push(acc);
                }
                if let Some(last) = cum.last_mut() {
                    *last = 1.0;
                }
            }
            let (values, weights) = atoms.into_iter().unzip();
            Sorted {
                values,
                weights,
                cum,
            }
        })
    }

    /// Support points with positive weight, in increasing order.
    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted().values
    }

    /// `(value, weight)` atoms in increasing order of value.
    pub fn sorted_atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let s = self.sorted();
        s.values.iter().copied().zip(s.weights.iter().copied())
    }

    /// Cumulative masses aligned with [`Self::sorted_values`].
    pub fn cumulative(&self) -> &[f64] {
        &self.sorted().cum
    }

    /// Mass at or below `x`.
    pub fn cdf(&self, x: f64) -> f64 {
        let s = self.sorted();
        let k = s.values.partition_point(|&v| v <= x);
        if k == 0 {
            0.0
        } else {
            s.cum[k - 1]
        }
    }

    /// Left-continuous generalized inverse: the smallest support point `v`
    /// with `cdf(v) >= p`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Argument(format!("quantile level {p} outside [0, 1]")));
        }
        let s = self.sorted();
        if s.values.is_empty() {
            return Err(Error::Argument("empty distribution".into()));
        }
        let k = s.cum.partition_point(|&c| c < p).min(s.values.len() - 1);
        Ok(s.values[k])
    }

    pub fn mean(&self) -> Result<f64> {
        let s = self.sorted();
        if s.values.is_empty() {
            return Err(Error::Argument("empty distribution".into()));
        }
        if self.is_uniform() {
            Ok(s.values.iter().sum::<f64>() / s.values.len() as f64)
        } else {
            Ok(s.values.iter().zip(&s.weights).map(|(v, w)| v * w).sum())
        }
    }

    /// Weighted standard deviation (divisor: total mass).
    pub fn sd(&self) -> Result<f64> {
        let m = self.mean()?;
        let s = self.sorted();
        let var: f64 = if self.is_uniform() {
            s.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / s.values.len() as f64
        } else {
            s.values
                .iter()
                .zip(&s.weights)
                .map(|(v, w)| w * (v - m) * (v - m))
                .sum()
        };
        Ok(var.sqrt())
    }

    /// Kolmogorov–Smirnov distance to another scalar cloud.
    pub fn ks_distance(&self, other: &EmpiricalDistribution<f64>) -> f64 {
        let (a, b) = (self.sorted(), other.sorted());
        let (mut i, mut j) = (0usize, 0usize);
        let mut d: f64 = 0.0;
        while i < a.values.len() && j < b.values.len() {
            let x = a.values[i].min(b.values[j]);
            while i < a.values.len() && a.values[i] <= x {
                i += 1;
            }
            while j < b.values.len() && b.values[j] <= x {
                j += 1;
            }
            let fa = if i == 0 { 0.0 } else { a.cum[i - 1] };
            let fb = if j == 0 { 0.0 } else { b.cum[j - 1] };
            d = d.max((fa - fb).abs());
        }
        d
    }

    /// Kolmogorov–Smirnov distance to a continuous CDF.
    pub fn ks_to_cdf<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let s = self.sorted();
        let mut d: f64 = 0.0;
        let mut prev = 0.0;
        for (v, c) in s.values.iter().zip(&s.cum) {
            let f = cdf(*v);
            d = d.max((f - prev).abs()).max((c - f).abs());
            prev = *c;
        }
        d
    }
}
