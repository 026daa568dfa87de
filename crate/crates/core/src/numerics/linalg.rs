use crate::error::{Error, Result};

/// Dense lower-triangular matrix in packed row-major storage:
/// row `i` holds entries `(i, 0..=i)` starting at offset `i(i+1)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerTriangular {
    dim: usize,
    entries: Vec<f64>,
}

impl LowerTriangular {
    pub fn from_packed(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Argument("dimension must be positive".into()));
        }
        let expected = dim * (dim + 1) / 2;
        if entries.len() != expected {
            return Err(Error::Dimension {
                expected,
                got: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    /// Lower triangle of a row-major square matrix; the upper triangle is ignored.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * (dim + 1) / 2);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: row.len(),
                });
            }
            entries.extend_from_slice(&row[..=i]);
        }
        Self::from_packed(dim, entries)
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub(crate) fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn packed(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    fn offset(i: usize) -> usize {
        i * (i + 1) / 2
    }

    /// Entry `(i, j)`; zero above the diagonal.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j > i {
            0.0
        } else {
            self.entries[Self::offset(i) + j]
        }
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(j <= i);
        self.entries[Self::offset(i) + j] = v;
    }

    pub fn diag(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim).map(move |i| self.get(i, i))
    }

    pub fn has_positive_diagonal(&self) -> bool {
        self.diag().all(|d| d > 0.0)
    }

    /// `self * v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let row = &self.entries[Self::offset(i)..Self::offset(i) + i + 1];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// `self * other`, again lower triangular.
    pub fn matmul(&self, other: &LowerTriangular) -> LowerTriangular {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..=i {
                let s: f64 = (j..=i).map(|k| self.get(i, k) * other.get(k, j)).sum();
                out.set(i, j, s);
            }
        }
        out
    }

    /// `self * selfᵀ` as a dense row-major matrix.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        let p = self.dim;
        let mut out = vec![vec![0.0; p]; p];
        for i in 0..p {
            for j in 0..=i {
                let s: f64 = (0..=j).map(|k| self.get(i, k) * self.get(j, k)).sum();
                out[i][j] = s;
                out[j][i] = s;
            }
        }
        out
    }

    /// Inverse, lower triangular, by forward substitution on unit vectors.
    pub fn inverse(&self) -> Result<LowerTriangular> {
        let p = self.dim;
        let mut out = Self::zeros(p);
        let mut e = vec![0.0; p];
        for j in 0..p {
            e.iter_mut().for_each(|x| *x = 0.0);
            e[j] = 1.0;
            let col = tri_solve(self, &e, false)?;
            for (i, &v) in col.iter().enumerate().skip(j) {
                out.set(i, j, v);
            }
        }
        Ok(out)
    }
}

/// Cholesky factor `L` with `L Lᵀ = s` for a symmetric positive-definite `s`
/// (row-major, only the lower triangle is read).
///
/// Pivots at or below `1e-12 × max diagonal` are rejected rather than regularized.
pub fn cholesky(s: &[Vec<f64>]) -> Result<LowerTriangular> {
    let p = s.len();
    if p == 0 {
        return Err(Error::Argument("empty matrix".into()));
    }
    for row in s {
        if row.len() != p {
            return Err(Error::Dimension {
                expected: p,
                got: row.len(),
            });
        }
    }
    let max_diag = (0..p).map(|i| s[i][i]).fold(0.0f64, f64::max);
    let tol = 1e-12 * max_diag;
    let mut l = LowerTriangular::zeros(p);
    for i in 0..p {
        for j in 0..=i {
            let mut sum = s[i][j];
            for k in 0..j {
                sum -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if !(sum > tol) {
                    return Err(Error::NotPositiveDefinite { row: i, pivot: sum });
                }
                l.set(i, i, sum.sqrt());
            } else {
                l.set(i, j, sum / l.get(j, j));
            }
        }
    }
    Ok(l)
}

/// Solves `L x = b`, or `Lᵀ x = b` when `transposed`.
pub fn tri_solve(l: &LowerTriangular, b: &[f64], transposed: bool) -> Result<Vec<f64>> {
    let p = l.dim();
    if b.len() != p {
        return Err(Error::Dimension {
            expected: p,
            got: b.len(),
        });
    }
    if let Some(i) = (0..p).find(|&i| l.get(i, i) == 0.0) {
        return Err(Error::Singular(i));
    }
    let mut x = b.to_vec();
    if !transposed {
        for i in 0..p {
            let mut s = x[i];
            for k in 0..i {
                s -= l.get(i, k) * x[k];
            }
            x[i] = s / l.get(i, i);
        }
    } else {
        for i in (0..p).rev() {
            let mut s = x[i];
            for k in i + 1..p {
                s -= l.get(k, i) * x[k];
            }
            x[i] = s / l.get(i, i);
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RandomStream;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn frob(a: &[Vec<f64>]) -> f64 {
        a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn random_spd(p: usize, rng: &mut RandomStream) -> Vec<Vec<f64>> {
        let a: Vec<Vec<f64>> = (0..p)
            .map(|_| (0..p).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        let mut s = vec![vec![0.0; p]; p];
        for i in 0..p {
            for j in 0..p {
                s[i][j] = (0..p).map(|k| a[i][k] * a[j][k]).sum::<f64>();
            }
            s[i][i] += 1e-3;
        }
        s
    }

    #[test]
    fn identity_factor() {
        let s = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        assert_eq!(cholesky(&s).unwrap(), LowerTriangular::identity(3));
    }

    #[test]
    fn two_by_two_by_hand() {
        let l = cholesky(&[vec![4.0, 2.0], vec![2.0, 5.0]]).unwrap();
        assert_eq!(l.packed(), &[2.0, 1.0, 2.0]);
    }

    #[test]
    fn rejects_indefinite_and_singular() {
        assert!(matches!(
            cholesky(&[vec![1.0, 2.0], vec![2.0, 1.0]]),
            Err(Error::NotPositiveDefinite { row: 1, .. })
        ));
        assert!(cholesky(&[vec![1.0, 1.0], vec![1.0, 1.0]]).is_err());
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = RandomStream::new(11, 0);
        for trial in 0..1000 {
            let p = 1 + trial % 8;
            let s = random_spd(p, &mut rng);
            let l = cholesky(&s).unwrap();
            assert!(l.has_positive_diagonal());
            let g = l.gram();
            let diff: Vec<Vec<f64>> = (0..p)
                .map(|i| (0..p).map(|j| g[i][j] - s[i][j]).collect())
                .collect();
            assert!(frob(&diff) / frob(&s) < 1e-10);
        }
    }

    #[test]
    fn solve_identity_and_by_hand() {
        let b = [3.0, -1.0, 2.5];
        assert_eq!(tri_solve(&LowerTriangular::identity(3), &b, false).unwrap(), b.to_vec());
        let l = LowerTriangular::from_rows(&[vec![2.0, 0.0], vec![1.0, 2.0]]).unwrap();
        assert_eq!(tri_solve(&l, &[2.0, 3.0], false).unwrap(), vec![1.0, 1.0]);
        // Lᵀ = [[2,1],[0,2]]: x = (0.25, 1.5) solves Lᵀx = (2, 3)
        assert_eq!(tri_solve(&l, &[2.0, 3.0], true).unwrap(), vec![0.25, 1.5]);
    }

    #[test]
    fn solve_random_round_trip() {
        let mut rng = RandomStream::new(12, 0);
        for p in 1..=8 {
            for _ in 0..50 {
                let mut l = LowerTriangular::zeros(p);
                for i in 0..p {
                    for j in 0..i {
                        l.set(i, j, rng.sample(StandardNormal));
                    }
                    l.set(i, i, 0.5 + rng.random::<f64>());
                }
                let x0: Vec<f64> = (0..p).map(|_| rng.sample(StandardNormal)).collect();
                let b = l.mul_vec(&x0);
                let x = tri_solve(&l, &b, false).unwrap();
                for (a, b) in x.iter().zip(&x0) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn zero_diagonal_is_singular() {
        let l = LowerTriangular::from_rows(&[vec![1.0, 0.0], vec![3.0, 0.0]]).unwrap();
        assert_eq!(tri_solve(&l, &[1.0, 1.0], false), Err(Error::Singular(1)));
    }

    #[test]
    fn inverse_times_self_is_identity() {
        let l = LowerTriangular::from_rows(&[
            vec![2.0, 0.0, 0.0],
            vec![-1.0, 0.5, 0.0],
            vec![0.3, 4.0, 1.5],
        ])
        .unwrap();
        let prod = l.matmul(&l.inverse().unwrap());
        for i in 0..3 {
            for j in 0..=i {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((prod.get(i, j) - e).abs() < 1e-14);
            }
        }
    }
}
