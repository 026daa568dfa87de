use crate::error::{Error, Result};
use crate::numerics::LowerTriangular;

/// Element `[mu, L]` of the location-scale group acting by `u ↦ mu + L u`,
/// with `L` lower triangular with positive diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct LocScaleElement {
    mu: Vec<f64>,
    l: LowerTriangular,
}

impl LocScaleElement {
    pub fn new(mu: Vec<f64>, l: LowerTriangular) -> Result<Self> {
        if mu.len() != l.dim() {
            return Err(Error::Dimension {
                expected: l.dim(),
                got: mu.len(),
            });
        }
        if !l.has_positive_diagonal() {
            return Err(Error::Argument("scale factor needs a positive diagonal".into()));
        }
        Ok(Self { mu, l })
    }

    /// `[mu, sigma]` for `p = 1`.
    pub fn scalar(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(vec![mu], LowerTriangular::diagonal(&[sigma]))
    }

    pub fn identity(p: usize) -> Self {
        Self {
            mu: vec![0.0; p],
            l: LowerTriangular::identity(p),
        }
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn l(&self) -> &LowerTriangular {
        &self.l
    }

    /// `mu + L u`.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        self.l.mul_vec(u).iter().zip(&self.mu).map(|(a, b)| a + b).collect()
    }

    /// `Sigma = L Lᵀ`.
    pub fn covariance(&self) -> Vec<Vec<f64>> {
        self.l.gram()
    }

    /// Correlation `Sigma_ij / sqrt(Sigma_ii Sigma_jj)`.
    pub fn correlation(&self, i: usize, j: usize) -> f64 {
        let s = self.covariance();
        s[i][j] / (s[i][i] * s[j][j]).sqrt()
    }
}

/// `[mu1, L1][mu2, L2] = [mu1 + L1 mu2, L1 L2]`.
pub fn group_mul(a: &LocScaleElement, b: &LocScaleElement) -> Result<LocScaleElement> {
    if a.dim() != b.dim() {
        return Err(Error::Argument(format!(
            "cannot multiply elements of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(LocScaleElement {
        mu: a.apply(&b.mu),
        l: a.l.matmul(&b.l),
    })
}

/// `[mu, L]⁻¹ = [−L⁻¹ mu, L⁻¹]`.
pub fn group_inv(a: &LocScaleElement) -> Result<LocScaleElement> {
    let scale = a.l.diag().fold(0.0f64, |m, d| m.max(d.abs()));
    if let Some(i) = (0..a.dim()).find(|&i| a.l.get(i, i) <= 1e-300_f64.max(1e-14 * scale)) {
        return Err(Error::Singular(i));
    }
    let inv = a.l.inverse()?;
    let mu = inv.mul_vec(&a.mu).into_iter().map(|x| -x).collect();
    Ok(LocScaleElement { mu, l: inv })
}
