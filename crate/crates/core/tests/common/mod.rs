//! Independent reference computations shared by the integration tests. None
//! of these call into the library's numerical routines.
#![allow(dead_code)]

use extremal_moments::measure::{Measure, Segment};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `int_{-1}^{1} x^k dx`.
pub fn lebesgue(k: usize) -> f64 {
    if k % 2 == 0 {
        2.0 / (k + 1) as f64
    } else {
        0.0
    }
}

/// Explicit `P_0..P_4`.
pub fn legendre_explicit(n: usize, x: f64) -> f64 {
    let x2 = x * x;
    match n {
        0 => 1.0,
        1 => x,
        2 => (3.0 * x2 - 1.0) / 2.0,
        3 => (5.0 * x2 * x - 3.0 * x) / 2.0,
        4 => (35.0 * x2 * x2 - 30.0 * x2 + 3.0) / 8.0,
        _ => panic!("explicit form only for n <= 4"),
    }
}

/// Rows `[xi_j^k]_j` for `k = 0..=order`.
pub fn vandermonde(nodes: &[f64], order: usize) -> Vec<Vec<f64>> {
    (0..=order)
        .map(|k| nodes.iter().map(|&x| x.powi(k as i32)).collect())
        .collect()
}

/// Rank by Gaussian elimination with full pivoting; pivots at or below
/// `pivot_tol` count as zero.
pub fn rank(rows: &[Vec<f64>], pivot_tol: f64) -> usize {
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let n = a[0].len();
    let mut r = 0;
    let mut cols: Vec<usize> = (0..n).collect();
    while r < m && r < n {
        let mut best = (0.0, r, r);
        for i in r..m {
            for (cpos, &c) in cols.iter().enumerate().skip(r) {
                if a[i][c].abs() > best.0 {
                    best = (a[i][c].abs(), i, cpos);
                }
            }
        }
        if best.0 <= pivot_tol {
            break;
        }
        a.swap(r, best.1);
        cols.swap(r, best.2);
        let pc = cols[r];
        for i in r + 1..m {
            let f = a[i][pc] / a[r][pc];
            for &c in &cols[r..] {
                a[i][c] -= f * a[r][c];
            }
        }
        r += 1;
    }
    r
}

/// Square solve by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-300 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for k in c..n {
                a[i][k] -= f * a[c][k];
            }
            b[i] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

/// Weights making `nodes` exact on `e_0..e_{len-1}` for Lebesgue measure.
pub fn exact_weights(nodes: &[f64]) -> Option<Vec<f64>> {
    let n = nodes.len();
    let rhs = (0..n).map(lebesgue).collect();
    solve(vandermonde(nodes, n - 1), rhs)
}

/// A small rule with one free parameter `t`, solved from the moment
/// equations alone: `nodes_of(t)` gives the nodes, weights come from the
/// first `len` equations and `t` is the root of the next equation's residual
/// on `(lo, hi)`, found by a sign scan and bisection.
pub fn solve_one_parameter_rule<F>(nodes_of: F, lo: f64, hi: f64, extra_degree: usize) -> (Vec<f64>, Vec<f64>)
where
    F: Fn(f64) -> Vec<f64>,
{
    let residual = |t: f64| {
        let nodes = nodes_of(t);
        let w = exact_weights(&nodes).expect("distinct nodes");
        let q: f64 = nodes.iter().zip(&w).map(|(x, w)| w * x.powi(extra_degree as i32)).sum();
        q - lebesgue(extra_degree)
    };
    let steps = 2000;
    let mut prev = lo + (hi - lo) / steps as f64;
    for i in 2..steps {
        let t = lo + (hi - lo) * i as f64 / steps as f64;
        if residual(prev).signum() != residual(t).signum() {
            let (mut a, mut b) = (prev, t);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if residual(a).signum() == residual(mid).signum() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let t = 0.5 * (a + b);
            let nodes = nodes_of(t);
            let w = exact_weights(&nodes).unwrap();
            return (nodes, w);
        }
        prev = t;
    }
    panic!("no sign change for the free parameter");
}

fn simpson_step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Continuous piecewise-linear density through `(knots[i], values[i])` on
/// `[0, 1]`, mirrored to `[-1, 0]`, not normalized.
pub fn symmetric_pl_density(knots: &[f64], values: &[f64]) -> Measure {
    let right: Vec<Segment> = knots
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| {
            let slope = (v[1] - v[0]) / (t[1] - t[0]);
            Segment {
                lo: t[0],
                hi: t[1],
                coeffs: vec![v[0] - slope * t[0], slope],
            }
        })
        .collect();
    Measure::symmetrize_from_right(right).expect("valid density")
}

/// Random knots on `[0, 1]` (2 to 6 pieces) with positive values, normalized
/// to a probability measure.
pub fn random_symmetric_density<R: Rng>(rng: &mut R) -> Measure {
    let pieces = rng.gen_range(2..=6);
    let mut inner: Vec<f64> = (0..pieces - 1).map(|_| rng.gen_range(0.05..0.95)).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup_by(|a, b| (*a - *b).abs() < 0.02);
    let mut knots = vec![0.0];
    knots.extend(inner);
    knots.push(1.0);
    let values: Vec<f64> = knots.iter().map(|_| rng.gen_range(0.05..2.0)).collect();
    symmetric_pl_density(&knots, &values).normalize().unwrap()
}

/// Density of a measure built only from segments, by direct lookup.
pub fn density_at(mu: &Measure, x: f64) -> f64 {
    mu.segments()
        .iter()
        .filter(|s| s.lo <= x && x < s.hi)
        .map(|s| s.coeffs.iter().enumerate().map(|(j, c)| c * x.powi(j as i32)).sum::<f64>())
        .sum()
}
