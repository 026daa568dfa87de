use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::numerics::RandomStream;

/// Operation table of a finite binary operation on `{0, …, n−1}`:
/// `a ∘ b = table[a][b]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopTable {
    table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuasigroupCheck {
    /// Every row and column is a permutation.
    pub is_quasigroup: bool,
    /// Quasigroup with a two-sided identity.
    pub is_loop: bool,
    pub identity: Option<usize>,
    pub is_associative: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantMeasure {
    /// Right-invariant weights normalized to total mass 1.
    pub weights: Vec<f64>,
    /// Dimension of the space of right-invariant measures.
    pub nullspace_dim: usize,
    pub is_uniform: bool,
}

impl LoopTable {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Argument("table is empty".into()));
        }
        for row in &table {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: row.len(),
                });
            }
            if let Some(x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::Argument(format!("entry {x} out of range for order {n}")));
            }
        }
        Ok(Self { table })
    }

    /// Addition modulo `n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect())
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// A random Latin square of order `n`, filled cell by cell with shuffled
    /// candidates and backtracking.
    pub fn random_latin_square(n: usize, stream: &mut RandomStream) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("order must be positive".into()));
        }
        let mut t = vec![vec![usize::MAX; n]; n];
        let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); n * n];
        let mut cell = 0;
        let mut fresh = true;
        while cell < n * n {
            let (i, j) = (cell / n, cell % n);
            if fresh {
                let mut c: Vec<usize> = (0..n)
                    .filter(|&s| !t[i][..j].contains(&s) && !(0..i).any(|k| t[k][j] == s))
                    .collect();
                c.shuffle(stream);
                candidates[cell] = c;
            }
            match candidates[cell].pop() {
                Some(s) => {
                    t[i][j] = s;
                    cell += 1;
                    fresh = true;
                }
                None => {
                    t[i][j] = usize::MAX;
                    if cell == 0 {
                        return Err(Error::Argument("latin square search exhausted".into()));
                    }
                    cell -= 1;
                    fresh = false;
                }
            }
        }
        Self::new(t)
    }
}

impl fmt::Display for LoopTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.order())?;
        for row in &self.table {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for LoopTable {
    type Err = Error;

    /// First line the order `n`, then `n` rows of `n` whitespace-separated
    /// zero-based indices.
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("missing order line".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("order: {e}")))?;
        let table = (0..n)
            .map(|i| {
                let line = lines
                    .next()
                    .ok_or_else(|| Error::Parse(format!("missing row {i}")))?;
                line.split_whitespace()
                    .map(|x| x.parse().map_err(|e| Error::Parse(format!("row {i}: {e}"))))
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if lines.next().is_some() {
            return Err(Error::Parse(format!("more than {n} rows")));
        }
        Self::new(table)
    }
}

pub fn quasigroup_check(tbl: &LoopTable) -> QuasigroupCheck {
    let n = tbl.order();
    let is_perm = |f: &dyn Fn(usize) -> usize| {
        let mut seen = vec![false; n];
        (0..n).all(|k| !std::mem::replace(&mut seen[f(k)], true))
    };
    let is_quasigroup = (0..n).all(|a| is_perm(&|b| tbl.op(a, b)))
        && (0..n).all(|b| is_perm(&|a| tbl.op(a, b)));
    let identity = (0..n).find(|&e| (0..n).all(|x| tbl.op(e, x) == x && tbl.op(x, e) == x));
    let is_associative = (0..n).all(|a| {
        (0..n).all(|b| (0..n).all(|c| tbl.op(tbl.op(a, b), c) == tbl.op(a, tbl.op(b, c))))
    });
    QuasigroupCheck {
        is_quasigroup,
        is_loop: is_quasigroup && identity.is_some(),
        identity,
        is_associative,
    }
}

/// Solves `m[x ∘ g] = m[x]` for all `x, g` by Gaussian elimination and
/// returns a normalized solution with the dimension of the solution space.
pub fn finite_loop_invariant_measure(tbl: &LoopTable) -> Result<InvariantMeasure> {
    if !quasigroup_check(tbl).is_quasigroup {
        return Err(Error::Argument("table is not a quasigroup".into()));
    }
    let n = tbl.order();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n * n);
    for x in 0..n {
        for g in 0..n {
            let y = tbl.op(x, g);
            if y != x {
                let mut r = vec![0.0; n];
                r[y] = 1.0;
                r[x] = -1.0;
                rows.push(r);
            }
        }
    }
    // reduced row echelon form
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs())) else {
            break;
        };
        if rows[p][col].abs() < 1e-12 {
            continue;
        }
        rows.swap(rank, p);
        let pv = rows[rank][col];
        rows[rank].iter_mut().for_each(|v| *v /= pv);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0.0 {
                let f = rows[r][col];
                let (src, dst) = if r < rank {
                    let (a, b) = rows.split_at_mut(rank);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = rows.split_at_mut(r);
                    (&a[rank], &mut b[0])
                };
                dst.iter_mut().zip(src).for_each(|(d, s)| *d -= f * s);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let nullspace_dim = n - rank;
    // one basis vector: first free variable set to 1
    let free = (0..n).find(|c| !pivots.contains(c));
    let mut m = vec![0.0; n];
    if let Some(f) = free {
        m[f] = 1.0;
        for (k, &c) in pivots.iter().enumerate() {
            m[c] = -rows[k][f];
        }
    }
    let total: f64 = m.iter().sum();
    if total != 0.0 {
        m.iter_mut().for_each(|v| *v /= total);
    }
    let is_uniform = m.iter().all(|v| (v - 1.0 / n as f64).abs() < 1e-12);
    Ok(InvariantMeasure {
        weights: m,
        nullspace_dim,
        is_uniform,
    })
}
