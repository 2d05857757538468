//! Scalar root finders shared by the polynomial and decomposition code.

use crate::error::{Error, Result};

/// Newton iteration that falls back to bisection whenever a step would leave
/// the current sign-change bracket.
///
/// `fdf` returns `(f(x), f'(x))`. The bracket `[lo, hi]` must straddle a sign
/// change. Iteration stops once a step is at most `step_tol`.
pub(crate) fn safeguarded_newton<F>(
    fdf: F,
    mut lo: f64,
    mut hi: f64,
    x0: f64,
    step_tol: f64,
    max_iter: usize,
) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    let (f_lo, _) = fdf(lo);
    let (f_hi, _) = fdf(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NumericFailure(format!(
            "no sign change on [{lo}, {hi}]"
        )));
    }
    let lo_sign = f_lo.signum();
    let mut x = if x0 > lo && x0 < hi { x0 } else { 0.5 * (lo + hi) };
    for _ in 0..max_iter {
        let (f, df) = fdf(x);
        if f == 0.0 {
            return Ok(x);
        }
        if f.signum() == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - f / df;
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        let step = (next - x).abs();
        x = next;
        if step <= step_tol || hi - lo <= step_tol {
            return Ok(x);
        }
    }
    Err(Error::NumericFailure(format!(
        "Newton iteration did not converge in {max_iter} steps near {x}"
    )))
}

/// Moves a converged root to the double within `radius` ulps that minimises
/// `|f|`. Newton stops on step size, which near steep roots can leave the
/// result a few ulps off the best representable value.
pub(crate) fn polish_root<F: Fn(f64) -> f64>(f: F, x: f64, radius: u32) -> f64 {
    let mut best = (f(x).abs(), x);
    let mut up = x;
    let mut down = x;
    for _ in 0..radius {
        up = up.next_up();
        down = down.next_down();
        for y in [up, down] {
            let v = f(y).abs();
            if v < best.0 {
                best = (v, y);
            }
        }
    }
    best.1
}

/// Plain bisection for `f(x) = 0` on a bracket with `f(lo)` and `f(hi)` of
/// opposite sign. Stops when the bracket is narrower than `width_tol`.
pub(crate) fn bisect<F>(f: F, mut lo: f64, mut hi: f64, width_tol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NumericFailure(format!(
            "bisection bracket [{lo}, {hi}] has no sign change"
        )));
    }
    let lo_sign = f_lo.signum();
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= width_tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if hi - lo <= width_tol {
        Ok(0.5 * (lo + hi))
    } else {
        Err(Error::NumericFailure(format!(
            "bisection did not reach width {width_tol} in {max_iter} steps"
        )))
    }
}
