//! Numerical mixing measures over the extreme family.
//!
//! Every `sigma` in `P^0([-1,1], b)` is a barycenter of a probability measure
//! `gamma` on `[0, b] x [b, 1]` pushed through `(x, y) -> mu_(x,y)`. Here
//! `gamma` is sought on a uniform grid by matching the even moments
//! `e_0, e_2, ..., e_K` of `sigma` in least squares with nonnegative,
//! normalized weights. Odd moments vanish on both sides by symmetry.
//!
//! The grid lines `x = b` and `y = b` all map to `mu_(b,b)`, so they are
//! collapsed to the single point `(b, b)`.

mod nnls;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kfamily::KPoint;
use crate::measure::{Atom, Measure, SecondMomentParam, CLASS_TOL};

pub use nnls::{solve_nnls, NnlsSolution, KKT_TOL};

pub const DEFAULT_MAX_DEGREE: usize = 12;
pub const DEFAULT_GRID: Grid = Grid { nx: 101, ny: 101 };

/// Weights above `-NEGATIVE_CLAMP` but below zero are clamped to zero.
const NEGATIVE_CLAMP: f64 = 1e-14;

/// Even monomials `e_0, e_2, ..., e_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TestBasis {
    max_degree: usize,
}

impl TestBasis {
    pub fn new(max_degree: usize) -> Result<Self> {
        if max_degree < 2 || max_degree % 2 == 1 {
            return Err(Error::InvalidArgument(format!(
                "max degree {max_degree} must be even and at least 2"
            )));
        }
        Ok(Self { max_degree })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> {
        (0..=self.max_degree).step_by(2)
    }

    pub fn len(&self) -> usize {
        self.max_degree / 2 + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl Default for TestBasis {
    fn default() -> Self {
        Self {
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

/// Grid resolution over `[0, b] x [b, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid {nx}x{ny} needs at least 2 points per axis"
            )));
        }
        Ok(Self { nx, ny })
    }

    /// Grid points, `(b, b)` first, then `x` ascending with `y` ascending inside.
    pub fn points(&self, b: f64) -> Vec<(f64, f64)> {
        let xs: Vec<f64> = (0..self.nx - 1)
            .map(|i| b * i as f64 / (self.nx - 1) as f64)
            .collect();
        let ys: Vec<f64> = (1..self.ny)
            .map(|j| {
                if j == self.ny - 1 {
                    1.0
                } else {
                    b + (1.0 - b) * j as f64 / (self.ny - 1) as f64
                }
            })
            .collect();
        let mut out = Vec::with_capacity(xs.len() * ys.len() + 1);
        out.push((b, b));
        for &x in &xs {
            for &y in &ys {
                out.push((x, y));
            }
        }
        out
    }
}

impl std::str::FromStr for Grid {
    type Err = Error;

    /// Parses `NXxNY`, e.g. `101x101`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| Error::InvalidArgument(format!("grid {s:?} is not of the form NXxNY")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("grid {s:?} is not of the form NXxNY")))
        };
        Grid::new(parse(a)?, parse(b)?)
    }
}

/// Discrete probability measure on `[0, b] x [b, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingMeasure {
    b: f64,
    points: Vec<(f64, f64)>,
    weights: Vec<f64>,
}

impl MixingMeasure {
    pub fn new(b: f64, points: Vec<(f64, f64)>, weights: Vec<f64>) -> Result<Self> {
        if !(b > 0.0 && b < 1.0) {
            return Err(Error::InvalidArgument(format!("b = {b} outside (0, 1)")));
        }
        if points.len() != weights.len() || points.is_empty() {
            return Err(Error::InvalidArgument("points and weights must be non-empty and equal length".into()));
        }
        for (i, &(x, y)) in points.iter().enumerate() {
            if !(0.0 <= x && x <= b && b <= y && y <= 1.0) {
                return Err(Error::validation(format!("points[{i}]"), format!("({x}, {y}) outside [0, b] x [b, 1]")));
            }
        }
        if let Some(i) = weights.iter().position(|&w| !(w >= 0.0)) {
            return Err(Error::validation(format!("weights[{i}]"), "must be nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::validation("weights", format!("sum to {total}, not 1")));
        }
        Ok(Self { b, points, weights })
    }

    /// Point mass at `(x, y)`.
    pub fn dirac(b: f64, x: f64, y: f64) -> Result<Self> {
        Self::new(b, vec![(x, y)], vec![1.0])
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The parametrized extreme measures carrying each weight.
    pub fn components(&self) -> Result<Vec<(KPoint, f64)>> {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&(x, y), &w)| Ok((kpoint_at(self.b, x, y)?, w)))
            .collect()
    }

    /// The mixture `sum_j w_j mu_(x_j, y_j)` as an atom measure.
    pub fn mixture_measure(&self) -> Result<Measure> {
        let mut atoms = Vec::new();
        for (k, w) in self.components()? {
            for a in k.to_measure().atoms() {
                atoms.push(Atom { x: a.x, mass: w * a.mass });
            }
        }
        Measure::from_atoms(atoms)
    }
}

/// `mu_(x,y)`, reading both degenerate boundary lines as `(b, b)`.
fn kpoint_at(b: f64, x: f64, y: f64) -> Result<KPoint> {
    if x == b || y == b {
        KPoint::new(b, b, b)
    } else {
        KPoint::new(b, x, y)
    }
}

/// `int u^k d(sum_j w_j mu_(x_j,y_j)) = sum_j w_j (p_j x_j^k + q_j y_j^k)`.
pub fn mixture_moment(gamma: &MixingMeasure, k: usize) -> Result<f64> {
    Ok(gamma.components()?.iter().map(|(kp, w)| w * kp.moment(k)).sum())
}

/// A solved mixing measure and its fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Representation {
    pub gamma: MixingMeasure,
    pub grid: Grid,
    pub max_degree: usize,
    /// Euclidean norm of the moment residuals.
    pub residual: f64,
    /// `mixture_moment(gamma, k) - moment(sigma, k)` for each basis degree.
    pub residuals: Vec<f64>,
    pub kkt_residual: f64,
}

#[derive(Serialize)]
struct CsvHeader {
    b: f64,
    grid: [usize; 2],
    residual: f64,
    max_degree: usize,
}

impl Representation {
    /// JSON header line, then `x,y,weight` rows at full precision.
    pub fn to_csv(&self) -> String {
        let header = CsvHeader {
            b: self.gamma.b,
            grid: [self.grid.nx, self.grid.ny],
            residual: self.residual,
            max_degree: self.max_degree,
        };
        let mut out = serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        out.push_str("x,y,weight\n");
        for (&(x, y), w) in self.gamma.points.iter().zip(&self.gamma.weights) {
            out.push_str(&format!("{x:?},{y:?},{w:?}\n"));
        }
        out
    }
}

/// Finds `gamma` on `grid` minimizing the even-moment residual against `sigma`.
pub fn represent(sigma: &Measure, b: SecondMomentParam, grid: Grid, basis: TestBasis) -> Result<Representation> {
    if !sigma.in_class(b, CLASS_TOL) {
        return Err(Error::Membership(format!(
            "target is not a symmetric probability measure with second moment {}^2",
            b.value()
        )));
    }
    let bv = b.value();
    let points = grid.points(bv);
    if basis.len() > points.len() {
        return Err(Error::InvalidArgument(format!(
            "{} basis functions exceed {} grid points",
            basis.len(),
            points.len()
        )));
    }
    let kpoints: Vec<KPoint> = points
        .iter()
        .map(|&(x, y)| kpoint_at(bv, x, y))
        .collect::<Result<_>>()?;
    let degrees: Vec<usize> = basis.degrees().collect();
    let rows: Vec<Vec<f64>> = degrees
        .iter()
        .map(|&k| kpoints.iter().map(|kp| kp.moment(k)).collect())
        .collect();
    let target: Vec<f64> = degrees.iter().map(|&k| sigma.moment(k)).collect();
    let ones = vec![1.0; points.len()];
    let sol = solve_nnls(&rows, &target, &ones, 1.0)?;

    let mut support = Vec::new();
    let mut weights = Vec::new();
    for (j, &w) in sol.x.iter().enumerate() {
        if w < -NEGATIVE_CLAMP {
            return Err(Error::NumericFailure(format!("solver returned negative weight {w}")));
        }
        if w > 0.0 {
            support.push(points[j]);
            weights.push(w);
        }
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let gamma = MixingMeasure::new(bv, support, weights)?;
    let residuals: Vec<f64> = degrees
        .iter()
        .zip(&target)
        .map(|(&k, &t)| Ok(mixture_moment(&gamma, k)? - t))
        .collect::<Result<_>>()?;
    let residual = residuals.iter().map(|r| r * r).sum::<f64>().sqrt();
    Ok(Representation {
        gamma,
        grid,
        max_degree: basis.max_degree(),
        residual,
        residuals,
        kkt_residual: sol.kkt_residual,
    })
}

/// A named real function used to probe a representation.
pub struct TestFunction {
    pub name: String,
    pub f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl TestFunction {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Box::new(f),
        }
    }

    /// `e_0, e_2, ..., e_K`.
    pub fn even_monomials(basis: TestBasis) -> Vec<TestFunction> {
        basis
            .degrees()
            .map(|k| TestFunction::new(format!("x^{k}"), move |x: f64| x.powi(k as i32)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    /// `(name, mixture integral - sigma integral)`.
    pub gaps: Vec<(String, f64)>,
    pub max_gap: f64,
    pub pass: bool,
}

/// Compares `int f d sigma` with `sum_j w_j int f d mu_(x_j, y_j)` for each function.
pub fn verify_representation(
    sigma: &Measure,
    gamma: &MixingMeasure,
    funcs: &[TestFunction],
    tol: f64,
) -> Result<VerificationReport> {
    let components = gamma.components()?;
    let gaps: Vec<(String, f64)> = funcs
        .iter()
        .map(|t| {
            let mixed: f64 = components.iter().map(|(k, w)| w * k.integrate(&t.f)).sum();
            (t.name.clone(), mixed - sigma.integrate(&t.f))
        })
        .collect();
    let max_gap = gaps.iter().map(|g| g.1.abs()).fold(0.0, f64::max);
    Ok(VerificationReport {
        pass: max_gap <= tol,
        gaps,
        max_gap,
    })
}
