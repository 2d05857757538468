//! Legendre polynomials on [-1, 1].
//!
//! Values come from the three-term recurrence
//! `(k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}` and derivatives from
//! `P'_{k+1} = P'_{k-1} + (2k+1) P_k`, both of which stay well behaved at the
//! endpoints. Roots of `P_n` and `P_n'` are located by safeguarded Newton
//! iteration on the non-negative half of the interval and mirrored, so the
//! returned lists are exactly symmetric about zero.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::solve::{polish_root, safeguarded_newton};

const POLISH_ULPS: u32 = 32;

const STEP_TOL: f64 = 1e-15;
const MAX_ITER: usize = 100;

/// `(P_n(x), P_{n-1}(x))`, with `P_{-1}` taken as zero.
pub fn eval_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// `P_n(x)`.
pub fn eval(n: usize, x: f64) -> f64 {
    eval_pair(n, x).0
}

/// `(P_n(x), P_n'(x))` in a single pass.
pub fn eval_with_deriv(n: usize, x: f64) -> (f64, f64) {
    // p0/p1 hold P_{k-1}, P_k; d0/d1 hold P'_{k-1}, P'_k.
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    let (mut d0, mut d1) = (0.0, 1.0);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        let d2 = d0 + (2.0 * kf + 1.0) * p1;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
    }
    (p1, d1)
}

/// `P_n'(x)`; `P_0` has no meaningful derivative here, so `n = 0` is rejected.
pub fn eval_deriv(n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::DegreeTooLow {
            operation: "eval_deriv",
            n,
            min: 1,
        });
    }
    Ok(eval_with_deriv(n, x).1)
}

/// `(P_n'(x), P_n''(x))` for `|x| < 1`, using the Legendre differential equation.
fn deriv_and_second(n: usize, x: f64) -> (f64, f64) {
    let (p, d) = eval_with_deriv(n, x);
    let nf = n as f64;
    let dd = (2.0 * x * d - nf * (nf + 1.0) * p) / (1.0 - x * x);
    (d, dd)
}

/// The `n` roots of `P_n`, strictly increasing in (-1, 1).
pub fn roots(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::DegreeTooLow {
            operation: "roots",
            n,
            min: 1,
        });
    }
    let nf = n as f64;
    let half = n / 2;
    // Positive roots, largest first: root nu (1-based, from the right) has
    // angle theta in ((nu - 1/2) pi / (n + 1/2), nu pi / (n + 1/2)).
    let mut positive = Vec::with_capacity(half);
    for nu in 1..=half {
        let nuf = nu as f64;
        let guess = (PI * (nuf - 0.25) / (nf + 0.5)).cos();
        let lo = (PI * nuf / (nf + 0.5)).cos().max(0.0);
        let hi = (PI * (nuf - 0.5) / (nf + 0.5)).cos();
        let r = safeguarded_newton(|x| eval_with_deriv(n, x), lo, hi, guess, STEP_TOL, MAX_ITER)?;
        positive.push(r);
    }
    Ok(mirror(&positive, n % 2 == 1))
}

/// The `n - 1` roots of `P_n'`, strictly increasing in (-1, 1). These are the
/// interior Lobatto nodes.
pub fn deriv_roots(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::DegreeTooLow {
            operation: "deriv_roots",
            n,
            min: 2,
        });
    }
    let zeros = roots(n)?;
    // P_n' has exactly one root between consecutive roots of P_n.
    let mut positive = Vec::new();
    for w in zeros.windows(2).rev() {
        let (lo, hi) = (w[0], w[1]);
        if lo < 0.0 {
            break;
        }
        let guess = 0.5 * (lo + hi);
        let r = safeguarded_newton(|x| deriv_and_second(n, x), lo, hi, guess, STEP_TOL, MAX_ITER)?;
        positive.push(polish_root(|x| eval_with_deriv(n, x).1, r, POLISH_ULPS).clamp(lo, hi));
    }
    let count = n - 1;
    Ok(mirror(&positive, count % 2 == 1))
}

/// Builds a sorted symmetric list from positive values given largest first.
pub(crate) fn mirror(positive_desc: &[f64], with_zero: bool) -> Vec<f64> {
    let mut out: Vec<f64> = positive_desc.iter().map(|&r| -r).collect();
    if with_zero {
        out.push(0.0);
    }
    out.extend(positive_desc.iter().rev());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        assert_eq!(eval(0, 0.7), 1.0);
        assert!((eval(3, 1.0) - 1.0).abs() < 1e-15);
        assert!((eval(2, 0.5) + 0.125).abs() < 1e-15);
    }

    #[test]
    fn deriv_examples() {
        assert_eq!(eval_deriv(1, 0.3).unwrap(), 1.0);
        assert!((eval_deriv(2, 0.5).unwrap() - 1.5).abs() < 1e-15);
        assert!((eval_deriv(3, 0.0).unwrap() + 1.5).abs() < 1e-15);
        assert!(matches!(eval_deriv(0, 0.1), Err(Error::DegreeTooLow { .. })));
    }

    #[test]
    fn endpoint_derivative_matches_closed_form() {
        // P_n'(1) = n(n+1)/2
        for n in 1..30 {
            let d = eval_deriv(n, 1.0).unwrap();
            let expect = (n * (n + 1)) as f64 / 2.0;
            assert!((d - expect).abs() <= 1e-12 * expect, "n={n}");
        }
    }

    #[test]
    fn small_root_sets() {
        assert_eq!(roots(1).unwrap(), vec![0.0]);
        let r2 = roots(2).unwrap();
        assert!((r2[1] - 0.5773502691896258).abs() < 1e-15);
        assert_eq!(r2[0], -r2[1]);
        let r3 = roots(3).unwrap();
        assert_eq!(r3[1], 0.0);
        assert!((r3[2] - 0.7745966692414834).abs() < 1e-15);
        assert!(matches!(roots(0), Err(Error::DegreeTooLow { .. })));
    }

    #[test]
    fn small_deriv_root_sets() {
        assert_eq!(deriv_roots(2).unwrap(), vec![0.0]);
        let r3 = deriv_roots(3).unwrap();
        assert!((r3[1] - 0.4472135954999579).abs() < 1e-15);
        let r4 = deriv_roots(4).unwrap();
        assert_eq!(r4.len(), 3);
        assert_eq!(r4[1], 0.0);
        assert!(matches!(deriv_roots(1), Err(Error::DegreeTooLow { .. })));
    }

    #[test]
    fn roots_hold_residual_bound_for_large_n() {
        for n in 1..=40 {
            let r = roots(n).unwrap();
            assert_eq!(r.len(), n);
            for &x in &r {
                assert!(eval(n, x).abs() <= 1e-13, "n={n} x={x}");
            }
            assert!(r.windows(2).all(|w| w[0] < w[1]));
            assert!(r[0] > -1.0 && r[n - 1] < 1.0);
        }
        for n in 2..=40 {
            let r = deriv_roots(n).unwrap();
            assert_eq!(r.len(), n - 1);
            // |P_n'| reaches n(n+1)/2 at the endpoints, so past small n the
            // attainable residual grows with it.
            let scale = if n <= 16 { 1.0 } else { (n * (n + 1)) as f64 / 2.0 };
            for &x in &r {
                assert!(eval_deriv(n, x).unwrap().abs() <= 1e-13 * scale, "n={n} x={x}");
            }
            assert!(r.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
