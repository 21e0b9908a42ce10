//! Adaptive Simpson quadrature with Richardson correction.
//!
//! Deterministic and tolerance-controlled: the same integrand, interval and
//! tolerance always produce the same evaluation sequence.

use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("integrand is not finite at u = {0}")]
    NonFinite(f64),
    #[error("no convergence on [{a}, {b}] after {depth} bisection levels")]
    NoConvergence { a: f64, b: f64, depth: u32 },
    #[error("invalid integration bounds [{0}, {1}]")]
    BadBounds(f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptiveSimpson {
    /// Absolute tolerance on the whole integral.
    pub tol: f64,
    pub max_depth: u32,
}

impl Default for AdaptiveSimpson {
    fn default() -> Self {
        Self::new(DEFAULT_TOL)
    }
}

struct Panel {
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl AdaptiveSimpson {
    pub fn new(tol: f64) -> Self {
        Self { tol, max_depth: MAX_DEPTH }
    }

    /// Integrates `f` over `[a, b]`. Reversed bounds give the negated integral.
    pub fn integrate<F>(&self, f: F, a: f64, b: f64) -> Result<f64, QuadratureError>
    where
        F: Fn(f64) -> f64,
    {
        if !a.is_finite() || !b.is_finite() {
            return Err(QuadratureError::BadBounds(a, b));
        }
        if a == b {
            return Ok(0.0);
        }
        if a > b {
            return self.integrate(f, b, a).map(|v| -v);
        }
        let eval = |x: f64| {
            let y = f(x);
            if y.is_finite() {
                Ok(y)
            } else {
                Err(QuadratureError::NonFinite(x))
            }
        };
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (eval(a)?, eval(m)?, eval(b)?);
        let whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0;
        // Roundoff floor: asking for less than a few ulps of the integrand
        // scale can never be met and would only exhaust the depth budget.
        let scale = (b - a) * (fa.abs() + 4.0 * fm.abs() + fb.abs()) / 6.0;
        let floor = 64.0 * f64::EPSILON * scale;
        let panel = Panel { a, m, b, fa, fm, fb, whole };
        self.refine(&eval, panel, self.tol.max(floor), floor, self.max_depth)
    }

    fn refine<E>(&self, eval: &E, p: Panel, eps: f64, floor: f64, depth: u32) -> Result<f64, QuadratureError>
    where
        E: Fn(f64) -> Result<f64, QuadratureError>,
    {
        let Panel { a, m, b, fa, fm, fb, whole } = p;
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let (flm, frm) = (eval(lm)?, eval(rm)?);
        let left = (m - a) * (fa + 4.0 * flm + fm) / 6.0;
        let right = (b - m) * (fm + 4.0 * frm + fb) / 6.0;
        let both = left + right;
        let delta = both - whole;
        if delta.abs() <= 15.0 * eps {
            return Ok(both + delta / 15.0);
        }
        if depth == 0 || lm <= a || rm >= b {
            return Err(QuadratureError::NoConvergence { a, b, depth: self.max_depth - depth });
        }
        let half = (0.5 * eps).max(floor);
        let l =
            self.refine(eval, Panel { a, m: lm, b: m, fa, fm: flm, fb: fm, whole: left }, half, floor, depth - 1)?;
        let r =
            self.refine(eval, Panel { a: m, m: rm, b, fa: fm, fm: frm, fb, whole: right }, half, floor, depth - 1)?;
        Ok(l + r)
    }

    /// Cumulative integral `F(x_i) = \int_{x_0}^{x_i} f` on a strictly
    /// increasing grid. Each cell gets a share of the tolerance proportional
    /// to its width so the total error stays within `tol`.
    pub fn cumulative<F>(&self, f: F, grid: &[f64]) -> Result<Vec<f64>, QuadratureError>
    where
        F: Fn(f64) -> f64,
    {
        let mut out = Vec::with_capacity(grid.len());
        let Some(&first) = grid.first() else {
            return Ok(out);
        };
        let span = grid.last().copied().unwrap_or(first) - first;
        out.push(0.0);
        let mut acc = 0.0;
        for w in grid.windows(2) {
            let share = if span > 0.0 { self.tol * (w[1] - w[0]) / span } else { self.tol };
            let cell = AdaptiveSimpson { tol: share, max_depth: self.max_depth };
            acc += cell.integrate(&f, w[0], w[1])?;
            out.push(acc);
        }
        Ok(out)
    }
}
