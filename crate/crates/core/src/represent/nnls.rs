//! Nonnegative least squares with one linear equality constraint.
//!
//! Minimizes `|A x - t|_2` over `x >= 0` with `r . x = c`, using a
//! Lawson-Hanson style active-set iteration. The passive-set subproblem
//! eliminates one variable through the equality and solves the remaining
//! unconstrained least-squares problem with an SVD.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Dual-feasibility threshold used to stop the outer loop.
pub const KKT_TOL: f64 = 1e-12;

/// Relative singular-value cutoff inside the subproblem.
const SVD_RCOND: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct NnlsSolution {
    pub x: Vec<f64>,
    /// `|A x - t|_2`.
    pub residual_norm: f64,
    /// Largest violation of the KKT conditions at termination.
    pub kkt_residual: f64,
    pub iterations: usize,
}

struct Problem<'a> {
    cols: Vec<Vec<f64>>,
    target: &'a [f64],
    eq_row: &'a [f64],
    eq_value: f64,
}

impl Problem<'_> {
    fn rows(&self) -> usize {
        self.target.len()
    }

    fn residual(&self, x: &[f64]) -> Vec<f64> {
        let mut r = self.target.to_vec();
        for (col, &xj) in self.cols.iter().zip(x) {
            if xj != 0.0 {
                for (ri, &aij) in r.iter_mut().zip(col) {
                    *ri -= aij * xj;
                }
            }
        }
        r
    }

    /// `w_j = a_j . res - lambda r_j`.
    fn dual(&self, res: &[f64], lambda: f64) -> Vec<f64> {
        self.cols
            .iter()
            .zip(self.eq_row)
            .map(|(col, &rj)| dot(col, res) - lambda * rj)
            .collect()
    }

    /// Least squares on the passive set subject to the equality. Returns the
    /// passive values (in `passive` order) and the equality multiplier.
    fn subproblem(&self, passive: &[usize]) -> Result<(Vec<f64>, f64)> {
        let (pivot_pos, &pivot) = passive
            .iter()
            .enumerate()
            .max_by(|a, b| self.eq_row[*a.1].abs().total_cmp(&self.eq_row[*b.1].abs()))
            .ok_or_else(|| Error::NumericFailure("empty passive set".into()))?;
        let r0 = self.eq_row[pivot];
        if r0 == 0.0 {
            return Err(Error::NumericFailure("equality row vanishes on the passive set".into()));
        }
        let m = self.rows();
        let a0 = &self.cols[pivot];
        let rhs = DVector::from_iterator(m, (0..m).map(|i| self.target[i] - a0[i] * self.eq_value / r0));
        let others: Vec<usize> = passive.iter().copied().filter(|&j| j != pivot).collect();
        let mut u = vec![0.0; others.len()];
        if !others.is_empty() {
            let b = DMatrix::from_fn(m, others.len(), |i, k| {
                let j = others[k];
                self.cols[j][i] - a0[i] * self.eq_row[j] / r0
            });
            let svd = b.svd(true, true);
            let smax = svd.singular_values.max();
            let sol = svd
                .solve(&rhs, smax * SVD_RCOND * (m.max(others.len()) as f64))
                .map_err(|e| Error::NumericFailure(e.to_string()))?;
            u.copy_from_slice(sol.as_slice());
        }
        let constrained: f64 = others.iter().zip(&u).map(|(&j, &uj)| self.eq_row[j] * uj).sum();
        let z0 = (self.eq_value - constrained) / r0;
        let mut z = Vec::with_capacity(passive.len());
        let mut k = 0;
        for (pos, _) in passive.iter().enumerate() {
            if pos == pivot_pos {
                z.push(z0);
            } else {
                z.push(u[k]);
                k += 1;
            }
        }
        let mut x = vec![0.0; self.cols.len()];
        for (&j, &zj) in passive.iter().zip(&z) {
            x[j] = zj;
        }
        let res = self.residual(&x);
        let lambda = dot(a0, &res) / r0;
        Ok((z, lambda))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `min |A x - target|` subject to `x >= 0`, `equality_row . x = equality_value`.
///
/// `a` is given as rows. `equality_value` must be positive and at least one
/// entry of `equality_row` positive. Fails with [`Error::NumericFailure`] after
/// `10 * columns` iterations.
pub fn solve_nnls(a: &[Vec<f64>], target: &[f64], equality_row: &[f64], equality_value: f64) -> Result<NnlsSolution> {
    let m = a.len();
    if m == 0 || m != target.len() {
        return Err(Error::InvalidArgument(format!(
            "matrix has {m} rows but target has {} entries",
            target.len()
        )));
    }
    let n = a[0].len();
    if n == 0 || a.iter().any(|row| row.len() != n) || equality_row.len() != n {
        return Err(Error::InvalidArgument("inconsistent column counts".into()));
    }
    if !(equality_value > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "equality value {equality_value} must be positive"
        )));
    }
    let cols: Vec<Vec<f64>> = (0..n).map(|j| a.iter().map(|row| row[j]).collect()).collect();
    let prob = Problem {
        cols,
        target,
        eq_row: equality_row,
        eq_value: equality_value,
    };

    // Start from the best single column that can carry the equality.
    let start = (0..n)
        .filter(|&j| equality_row[j] > 0.0)
        .map(|j| {
            let mut x = vec![0.0; n];
            x[j] = equality_value / equality_row[j];
            let r = prob.residual(&x);
            (j, dot(&r, &r))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(j, _)| j)
        .ok_or_else(|| Error::InvalidArgument("equality row has no positive entry".into()))?;

    let mut x = vec![0.0; n];
    x[start] = equality_value / equality_row[start];
    let mut passive = vec![start];
    let mut in_passive = vec![false; n];
    in_passive[start] = true;
    let mut blocked = vec![false; n];
    let (_, mut lambda) = prob.subproblem(&passive)?;

    let max_iter = 10 * n;
    let mut iterations = 0;
    loop {
        let res = prob.residual(&x);
        let w = prob.dual(&res, lambda);
        let candidate = (0..n)
            .filter(|&j| !in_passive[j] && !blocked[j])
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(enter) = candidate.filter(|&j| w[j] > KKT_TOL) else {
            let kkt = (0..n)
                .map(|j| if in_passive[j] { w[j].abs() } else { w[j].max(0.0) })
                .fold(0.0, f64::max);
            return Ok(NnlsSolution {
                residual_norm: dot(&res, &res).sqrt(),
                x,
                kkt_residual: kkt,
                iterations,
            });
        };
        passive.push(enter);
        in_passive[enter] = true;

        loop {
            iterations += 1;
            if iterations > max_iter {
                return Err(Error::NumericFailure(format!(
                    "active-set iteration exceeded {max_iter} steps"
                )));
            }
            let (z, lam) = prob.subproblem(&passive)?;
            if z.iter().all(|&v| v > 0.0) {
                for (&j, &zj) in passive.iter().zip(&z) {
                    x[j] = zj;
                }
                lambda = lam;
                blocked.iter_mut().for_each(|b| *b = false);
                break;
            }
            // Step from x towards z until the first passive coordinate hits zero.
            let mut step = f64::INFINITY;
            let mut hit = passive[0];
            for (&j, &zj) in passive.iter().zip(&z) {
                if zj <= 0.0 {
                    let t = if x[j] <= 0.0 { 0.0 } else { x[j] / (x[j] - zj) };
                    if t < step {
                        step = t;
                        hit = j;
                    }
                }
            }
            for (&j, &zj) in passive.iter().zip(&z) {
                x[j] += step * (zj - x[j]);
            }
            x[hit] = 0.0;
            let newly_added_rejected = step == 0.0 && hit == enter;
            passive.retain(|&j| {
                let keep = j != hit && x[j] > 0.0;
                if !keep {
                    x[j] = 0.0;
                    in_passive[j] = false;
                }
                keep
            });
            if newly_added_rejected {
                blocked[enter] = true;
                let (z, lam) = prob.subproblem(&passive)?;
                if z.iter().all(|&v| v > 0.0) {
                    for (&j, &zj) in passive.iter().zip(&z) {
                        x[j] = zj;
                    }
                    lambda = lam;
                }
                break;
            }
            if passive.is_empty() {
                return Err(Error::NumericFailure("passive set collapsed".into()));
            }
        }
    }
}
