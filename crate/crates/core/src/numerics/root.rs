use crate::error::{Error, Result};

/// Where the search for a root begins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Start {
    /// Endpoints expected to straddle the target. Expanded outward if they do not.
    Bracket(f64, f64),
    /// A single guess; the bracket grows geometrically from `x0` with initial width `step`.
    Guess { x0: f64, step: f64 },
}

/// Solver for `f(x) = target` with `f` monotone.
///
/// The bracket is grown by doubling until it straddles the target, then
/// shrunk by Illinois-modified false position, falling back to bisection
/// whenever three steps fail to halve the bracket.
#[derive(Debug, Clone, Copy)]
pub struct MonotoneRoot {
    pub start: Start,
    /// Accept `x` once `|f(x) - target| <= ftol * max(1, |target|)`.
    pub ftol: f64,
    /// Accept once the bracket width is `<= xtol * max(1, |x|)`.
    pub xtol: f64,
    pub max_expansions: u32,
    pub max_iter: u32,
}

impl Default for MonotoneRoot {
    fn default() -> Self {
        Self {
            start: Start::Guess { x0: 0.0, step: 1.0 },
            ftol: 1e-10,
            xtol: 1e-12,
            max_expansions: 60,
            max_iter: 400,
        }
    }
}

impl MonotoneRoot {
    pub fn new(start: Start) -> Self {
        Self {
            start,
            ..Self::default()
        }
    }

    pub fn ftol(mut self, ftol: f64) -> Self {
        self.ftol = ftol;
        self
    }

    pub fn xtol(mut self, xtol: f64) -> Self {
        self.xtol = xtol;
        self
    }

    pub fn solve<F: FnMut(f64) -> f64>(&self, mut f: F, target: f64) -> Result<f64> {
        let fscale = self.ftol * target.abs().max(1.0);
        let mut g = |x: f64| -> Result<f64> {
            let v = f(x) - target;
            if v.is_nan() {
                Err(Error::NoRoot(format!("function is not finite at x = {x}")))
            } else {
                Ok(v)
            }
        };

        let (mut a, mut b) = match self.start {
            Start::Bracket(a, b) if a <= b => (a, b),
            Start::Bracket(a, b) => (b, a),
            Start::Guess { x0, step } => {
                let step = if step > 0.0 { step } else { 1.0 };
                (x0, x0 + step)
            }
        };
        if !(a.is_finite() && b.is_finite()) || a == b {
            return Err(Error::Argument(format!("bad initial bracket [{a}, {b}]")));
        }
        let mut ga = g(a)?;
        if ga == 0.0 {
            return Ok(a);
        }
        let mut gb = g(b)?;
        if gb == 0.0 {
            return Ok(b);
        }

        let mut width = b - a;
        let mut expansions = 0;
        while ga.signum() == gb.signum() {
            if expansions == self.max_expansions {
                return Err(Error::NoRoot(format!(
                    "target {target} not bracketed after {expansions} doublings, last bracket [{a}, {b}]"
                )));
            }
            expansions += 1;
            width *= 2.0;
            if ga.abs() < gb.abs() {
                b = a;
                gb = ga;
                a = b - width;
                ga = g(a)?;
            } else if gb.abs() < ga.abs() {
                a = b;
                ga = gb;
                b = a + width;
                gb = g(b)?;
            } else {
                // flat: grow both ends
                a -= width / 2.0;
                b += width / 2.0;
                ga = g(a)?;
                gb = g(b)?;
            }
            if ga == 0.0 {
                return Ok(a);
            }
            if gb == 0.0 {
                return Ok(b);
            }
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::NoRoot(format!("bracket overflowed searching for {target}")));
            }
        }

        // Illinois iteration; `side` remembers which end was kept last time.
        let mut side = 0i8;
        let mut checkpoint = b - a;
        for iter in 0..self.max_iter {
            let w = b - a;
            let best = if ga.abs() < gb.abs() { a } else { b };
            if w <= self.xtol * best.abs().max(1.0) {
                return Ok(best);
            }
            let mut x = if iter % 3 == 2 && w > 0.5 * checkpoint {
                0.5 * (a + b)
            } else {
                b - gb * (b - a) / (gb - ga)
            };
            if iter % 3 == 2 {
                checkpoint = w;
            }
            if !(x > a && x < b) {
                x = 0.5 * (a + b);
                if !(x > a && x < b) {
                    return Ok(best);
                }
            }
            let gx = g(x)?;
            if gx.abs() <= fscale {
                return Ok(x);
            }
            if gx.signum() == ga.signum() {
                a = x;
                ga = gx;
                if side == -1 {
                    gb *= 0.5;
                }
                side = -1;
            } else {
                b = x;
                gb = gx;
                if side == 1 {
                    ga *= 0.5;
                }
                side = 1;
            }
        }
        Ok(if ga.abs() < gb.abs() { a } else { b })
    }
}

/// Solves `f(x) = target` for monotone `f` with default tolerances.
///
/// Without a bracket the search starts from `[0, 1]` and doubles outward.
pub fn find_root_monotone<F: FnMut(f64) -> f64>(
    f: F,
    target: f64,
    bracket: Option<(f64, f64)>,
) -> Result<f64> {
    let start = match bracket {
        Some((a, b)) => Start::Bracket(a, b),
        None => Start::Guess { x0: 0.0, step: 1.0 },
    };
    MonotoneRoot::new(start).solve(f, target)
}
