//! Finite measures on [-1, 1]: a list of atoms plus a piecewise-polynomial
//! density.
//!
//! Measurable sets are finite unions of intervals ([`IntervalUnion`]), which is
//! enough for every restriction the decomposition produces and keeps moments
//! in closed form. A measure is continuous exactly when its atom list is empty.

use std::cmp::Ordering;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, Quadrature};

/// Highest polynomial degree allowed on a single density segment.
pub const MAX_SEGMENT_DEGREE: usize = 8;

/// Interior sample count used to check density nonnegativity.
pub const POSITIVITY_SAMPLES: usize = 256;

/// Default tolerance for membership in `P^0([-1,1], a)`.
pub const CLASS_TOL: f64 = 1e-10;

/// Masses at or below this are treated as zero by the concentration predicates.
const NEGLIGIBLE_MASS: f64 = 1e-15;

/// A point mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub mass: f64,
}

/// Density `sum_j coeffs[j] x^j` on `[lo, hi]` (global variable, ascending degree).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub coeffs: Vec<f64>,
}

impl Segment {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// `int_{lo}^{hi} x^k p(x) dx` over a sub-interval of the segment.
    fn power_integral(&self, k: usize, lo: f64, hi: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                let m = (k + j + 1) as i32;
                c * (hi.powi(m) - lo.powi(m)) / m as f64
            })
            .sum()
    }

    pub fn mass(&self) -> f64 {
        self.power_integral(0, self.lo, self.hi)
    }

    pub fn moment(&self, k: usize) -> f64 {
        self.power_integral(k, self.lo, self.hi)
    }

    fn clip(&self, lo: f64, hi: f64) -> Option<Segment> {
        let (l, h) = (self.lo.max(lo), self.hi.min(hi));
        (l < h).then(|| Segment {
            lo: l,
            hi: h,
            coeffs: self.coeffs.clone(),
        })
    }

    fn scaled(&self, c: f64) -> Segment {
        Segment {
            lo: self.lo,
            hi: self.hi,
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
        }
    }

    /// Reflection `x -> -x`: coefficient j picks up `(-1)^j`.
    fn reflected(&self) -> Segment {
        Segment {
            lo: -self.hi,
            hi: -self.lo,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| if j % 2 == 0 { c } else { -c })
                .collect(),
        }
    }
}

/// One interval with independently open or closed ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    fn reflected(&self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
            lo_closed: self.hi_closed,
            hi_closed: self.lo_closed,
        }
    }
}

/// Ordered, pairwise disjoint intervals inside [-1, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

impl IntervalUnion {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        let intervals: Vec<Interval> = intervals.into_iter().filter(|i| !i.is_empty()).collect();
        for (i, iv) in intervals.iter().enumerate() {
            if !(iv.lo >= -1.0 && iv.hi <= 1.0) {
                return Err(Error::validation(
                    format!("intervals[{i}]"),
                    format!("[{}, {}] leaves [-1, 1]", iv.lo, iv.hi),
                ));
            }
            if i > 0 {
                let prev = &intervals[i - 1];
                let touching = prev.hi == iv.lo && prev.hi_closed && iv.lo_closed;
                if prev.hi > iv.lo || touching {
                    return Err(Error::validation(
                        format!("intervals[{i}]"),
                        "intervals must be ordered and disjoint",
                    ));
                }
            }
        }
        Ok(Self { intervals })
    }

    /// The whole of [-1, 1].
    pub fn full() -> Self {
        Self {
            intervals: vec![Interval::closed(-1.0, 1.0)],
        }
    }

    /// `[-hi, -lo] U [lo, hi]` for `0 < lo < hi <= 1`.
    pub fn symmetric_pair(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0 < lo && lo < hi && hi <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "symmetric pair needs 0 < lo < hi <= 1, got lo={lo}, hi={hi}"
            )));
        }
        Self::new(vec![Interval::closed(-hi, -lo), Interval::closed(lo, hi)])
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    /// Complement within [-1, 1].
    pub fn complement(&self) -> IntervalUnion {
        let mut out = Vec::new();
        let mut cursor = -1.0;
        let mut cursor_closed = true;
        for iv in &self.intervals {
            out.push(Interval {
                lo: cursor,
                hi: iv.lo,
                lo_closed: cursor_closed,
                hi_closed: !iv.lo_closed,
            });
            cursor = iv.hi;
            cursor_closed = !iv.hi_closed;
        }
        out.push(Interval {
            lo: cursor,
            hi: 1.0,
            lo_closed: cursor_closed,
            hi_closed: true,
        });
        IntervalUnion::new(out).expect("complement of a valid union is valid")
    }

    /// Union of two disjoint unions.
    pub fn union(&self, other: &IntervalUnion) -> Result<IntervalUnion> {
        let mut all = self.intervals.clone();
        all.extend_from_slice(&other.intervals);
        all.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        IntervalUnion::new(all)
    }

    pub fn is_disjoint(&self, other: &IntervalUnion) -> bool {
        self.union(other).is_ok()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.intervals.len();
        (0..n).all(|i| self.intervals[i] == self.intervals[n - 1 - i].reflected())
    }
}

/// Admissible second-moment parameter `a` in (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SecondMomentParam(f64);

impl SecondMomentParam {
    pub fn new(a: f64) -> Result<Self> {
        if a > 0.0 && a < 1.0 {
            Ok(Self(a))
        } else {
            Err(Error::InvalidArgument(format!("second-moment parameter {a} outside (0, 1)")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn squared(self) -> f64 {
        self.0 * self.0
    }
}

/// A finite measure on [-1, 1].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measure {
    atoms: Vec<Atom>,
    segments: Vec<Segment>,
}

#[derive(Deserialize)]
struct RawMeasure {
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    segments: Vec<Segment>,
}

impl<'de> Deserialize<'de> for Measure {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let raw = RawMeasure::deserialize(deserializer)?;
        Measure::new(raw.atoms, raw.segments).map_err(serde::de::Error::custom)
    }
}

/// Result of [`Measure::split_continuous_discrete`]: `sigma = beta * continuous + (1 - beta) * discrete`.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub beta: f64,
    /// Normalized density part, or the zero measure when `beta == 0`.
    pub continuous: Measure,
    /// Normalized atom part, or the zero measure when `beta == 1`.
    pub discrete: Measure,
}

/// Outcome of the concentration / second-moment predicates for one `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaOneReport {
    pub a: f64,
    pub m2: f64,
    /// Concentrated on `[-a, a]`.
    pub on_inner: bool,
    /// Concentrated on `[-1, -a] U [a, 1]`.
    pub on_outer: bool,
    /// Concentrated on `{-a, a}`.
    pub on_pair: bool,
    /// `mu((-a, a)) > 0`.
    pub inner_open_mass: bool,
    /// `mu([-1, 1] \ [-a, a]) > 0`.
    pub outer_open_mass: bool,
    /// `m2` compared with `a^2`, equality within `1e-12`.
    pub comparison: Ordering,
}

impl LemmaOneReport {
    /// Whether the reported comparison agrees with every implication of the
    /// concentration lemma.
    pub fn consistent(&self) -> bool {
        use Ordering::*;
        let c = self.comparison;
        let a = !self.on_inner || c != Greater;
        let b = !self.on_outer || c != Less;
        let pair = !self.on_pair || c == Equal;
        let d = !(self.on_inner && self.inner_open_mass) || c == Less;
        let e = !(self.on_outer && self.outer_open_mass) || c == Greater;
        let f = !self.on_inner || ((c == Equal) == self.on_pair);
        let g = !self.on_outer || ((c == Equal) == self.on_pair);
        a && b && pair && d && e && f && g
    }
}

fn gauss_panel() -> &'static Quadrature {
    static RULE: OnceLock<Quadrature> = OnceLock::new();
    RULE.get_or_init(|| quadrature::gauss(24).expect("24-point Gauss rule"))
}

/// Sums sorted per-piece contributions pairing the outermost terms first, so
/// mirror-image pieces cancel exactly and odd moments of symmetric measures
/// come out as exactly zero.
fn outside_in_sum(terms: &[f64]) -> f64 {
    let n = terms.len();
    let pairs = (0..n / 2).map(|i| terms[i] + terms[n - 1 - i]);
    let middle = (n % 2 == 1).then(|| terms[n / 2]);
    quadrature::neumaier_sum(pairs.chain(middle))
}

impl Measure {
    /// Validates atoms (strictly increasing, positive mass, inside [-1, 1]) and
    /// segments (ordered, non-overlapping, degree <= 8, nonnegative at 256
    /// interior samples plus endpoints).
    pub fn new(atoms: Vec<Atom>, segments: Vec<Segment>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            if !a.x.is_finite() || !(-1.0..=1.0).contains(&a.x) {
                return Err(Error::validation(format!("atoms[{i}].x"), format!("{} outside [-1, 1]", a.x)));
            }
            if !a.mass.is_finite() || a.mass <= 0.0 {
                return Err(Error::validation(format!("atoms[{i}].mass"), format!("{} is not positive", a.mass)));
            }
            if i > 0 && atoms[i - 1].x >= a.x {
                return Err(Error::validation(format!("atoms[{i}].x"), "positions must be strictly increasing"));
            }
        }
        for (i, s) in segments.iter().enumerate() {
            if !(s.lo.is_finite() && s.lo >= -1.0) {
                return Err(Error::validation(format!("segments[{i}].lo"), format!("{} outside [-1, 1]", s.lo)));
            }
            if !(s.hi.is_finite() && s.hi <= 1.0) {
                return Err(Error::validation(format!("segments[{i}].hi"), format!("{} outside [-1, 1]", s.hi)));
            }
            if s.lo >= s.hi {
                return Err(Error::validation(format!("segments[{i}].hi"), "hi must exceed lo"));
            }
            if i > 0 && segments[i - 1].hi > s.lo {
                return Err(Error::validation(format!("segments[{i}].lo"), "segments must be ordered and non-overlapping"));
            }
            if s.coeffs.is_empty() || s.coeffs.len() > MAX_SEGMENT_DEGREE + 1 {
                return Err(Error::validation(
                    format!("segments[{i}].coeffs"),
                    format!("needs 1..={} coefficients, got {}", MAX_SEGMENT_DEGREE + 1, s.coeffs.len()),
                ));
            }
            if let Some(j) = s.coeffs.iter().position(|c| !c.is_finite()) {
                return Err(Error::validation(format!("segments[{i}].coeffs[{j}]"), "not finite"));
            }
            let scale = s.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs())).max(1.0);
            let n = POSITIVITY_SAMPLES;
            let samples = std::iter::once(s.lo)
                .chain((0..n).map(|j| s.lo + (j as f64 + 0.5) * (s.hi - s.lo) / n as f64))
                .chain(std::iter::once(s.hi));
            for x in samples {
                if s.eval(x) < -1e-12 * scale {
                    return Err(Error::validation(
                        format!("segments[{i}].coeffs"),
                        format!("density is negative at x = {x}"),
                    ));
                }
            }
        }
        Ok(Self { atoms, segments })
    }

    pub fn zero() -> Self {
        Self {
            atoms: Vec::new(),
            segments: Vec::new(),
        }
    }

    /// Atom-only measure; sorts, merges equal positions and drops zero masses.
    pub fn from_atoms(mut atoms: Vec<Atom>) -> Result<Self> {
        atoms.retain(|a| a.mass != 0.0);
        atoms.sort_by(|a, b| a.x.total_cmp(&b.x));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.x == a.x => last.mass += a.mass,
                _ => merged.push(a),
            }
        }
        Self::new(merged, Vec::new())
    }

    /// Constant density `value` on `[lo, hi]`.
    pub fn uniform(lo: f64, hi: f64, value: f64) -> Result<Self> {
        Self::new(Vec::new(), vec![Segment { lo, hi, coeffs: vec![value] }])
    }

    /// Quadrature as a discrete measure.
    pub fn from_quadrature(q: &Quadrature) -> Self {
        let atoms = q
            .nodes()
            .iter()
            .zip(q.weights())
            .map(|(&x, &mass)| Atom { x, mass })
            .collect();
        Self {
            atoms,
            segments: Vec::new(),
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// No atoms.
    pub fn is_continuous(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.segments.iter().all(|s| s.coeffs.iter().all(|&c| c == 0.0))
    }

    pub fn total_mass(&self) -> f64 {
        self.moment(0)
    }

    /// `int x^k d mu` in closed form.
    pub fn moment(&self, k: usize) -> f64 {
        let atoms: Vec<f64> = self.atoms.iter().map(|a| a.mass * a.x.powi(k as i32)).collect();
        let dens: Vec<f64> = self.segments.iter().map(|s| s.moment(k)).collect();
        outside_in_sum(&atoms) + outside_in_sum(&dens)
    }

    /// `(m_0, ..., m_max)`.
    pub fn moments(&self, max_degree: usize) -> Vec<f64> {
        (0..=max_degree).map(|k| self.moment(k)).collect()
    }

    /// `int x^k d mu` over `[lo, hi]` (closed).
    pub fn moment_on(&self, k: usize, lo: f64, hi: f64) -> f64 {
        let atoms: Vec<f64> = self
            .atoms
            .iter()
            .filter(|a| a.x >= lo && a.x <= hi)
            .map(|a| a.mass * a.x.powi(k as i32))
            .collect();
        let dens: Vec<f64> = self
            .segments
            .iter()
            .filter_map(|s| {
                let (l, h) = (s.lo.max(lo), s.hi.min(hi));
                (l < h).then(|| s.power_integral(k, l, h))
            })
            .collect();
        outside_in_sum(&atoms) + outside_in_sum(&dens)
    }

    /// `int f d mu`; density segments use a 24-point Gauss rule per segment.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.mass * f(a.x)).sum();
        let rule = gauss_panel();
        let dens: f64 = self
            .segments
            .iter()
            .map(|s| {
                let half = 0.5 * (s.hi - s.lo);
                let mid = 0.5 * (s.hi + s.lo);
                half * rule.apply(|t| {
                    let x = mid + half * t;
                    s.eval(x) * f(x)
                })
            })
            .sum();
        atoms + dens
    }

    /// Density value using the segment with `lo <= x < hi` (or `x == hi == 1`).
    pub fn density_right(&self, x: f64) -> f64 {
        self.segments
            .iter()
            .find(|s| s.lo <= x && (x < s.hi || (x == s.hi && s.hi == 1.0)))
            .map_or(0.0, |s| s.eval(x))
    }

    /// Density value using the segment with `lo < x <= hi` (or `x == lo == -1`).
    pub fn density_left(&self, x: f64) -> f64 {
        self.segments
            .iter()
            .find(|s| x <= s.hi && (s.lo < x || (x == s.lo && s.lo == -1.0)))
            .map_or(0.0, |s| s.eval(x))
    }

    /// `mu(-B) = mu(B)` within `tol`: atoms are mirror-paired in position and
    /// mass, and the density agrees with its reflection at sample points.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.atoms.len();
        let atoms_ok = (0..n).all(|i| {
            let (a, b) = (self.atoms[i], self.atoms[n - 1 - i]);
            (a.x + b.x).abs() <= tol && (a.mass - b.mass).abs() <= tol
        });
        if !atoms_ok {
            return false;
        }
        let samples = POSITIVITY_SAMPLES;
        self.segments.iter().all(|s| {
            let interior = (0..samples).map(|j| s.lo + (j as f64 + 0.5) * (s.hi - s.lo) / samples as f64);
            interior.chain([s.lo]).all(|x| (self.density_right(x) - self.density_left(-x)).abs() <= tol)
                && (self.density_left(s.hi) - self.density_right(-s.hi)).abs() <= tol
        })
    }

    /// `mu_E(B) = mu(B n E)`.
    pub fn restrict(&self, e: &IntervalUnion) -> Measure {
        let atoms = self.atoms.iter().copied().filter(|a| e.contains(a.x)).collect();
        let mut segments = Vec::new();
        for s in &self.segments {
            for iv in e.intervals() {
                if let Some(c) = s.clip(iv.lo, iv.hi) {
                    segments.push(c);
                }
            }
        }
        segments.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        Measure { atoms, segments }
    }

    pub fn scale(&self, c: f64) -> Result<Measure> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidArgument(format!("scale factor {c} must be positive")));
        }
        Ok(Measure {
            atoms: self.atoms.iter().map(|a| Atom { x: a.x, mass: a.mass * c }).collect(),
            segments: self.segments.iter().map(|s| s.scaled(c)).collect(),
        })
    }

    /// `mu / mu([-1, 1])`.
    pub fn normalize(&self) -> Result<Measure> {
        let mass = self.total_mass();
        if !(mass > 0.0) {
            return Err(Error::ZeroMass);
        }
        self.scale(1.0 / mass)
    }

    /// Sum of two measures; overlapping density pieces are added coefficient-wise.
    pub fn add(&self, other: &Measure) -> Result<Measure> {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        let atoms = Measure::from_atoms(atoms)?.atoms;

        let all: Vec<&Segment> = self.segments.iter().chain(&other.segments).collect();
        let mut cuts: Vec<f64> = all.iter().flat_map(|s| [s.lo, s.hi]).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut segments: Vec<Segment> = Vec::new();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let covering: Vec<&&Segment> = all.iter().filter(|s| s.lo <= lo && hi <= s.hi).collect();
            if covering.is_empty() {
                continue;
            }
            let len = covering.iter().map(|s| s.coeffs.len()).max().unwrap_or(1);
            let mut coeffs = vec![0.0; len];
            for s in covering {
                for (c, v) in coeffs.iter_mut().zip(&s.coeffs) {
                    *c += v;
                }
            }
            match segments.last_mut() {
                Some(last) if last.hi == lo && last.coeffs == coeffs => last.hi = hi,
                _ => segments.push(Segment { lo, hi, coeffs }),
            }
        }
        Ok(Measure { atoms, segments })
    }

    /// Equality as functionals within `tol`: atoms match pairwise, and on every
    /// piece of the common refinement the density coefficients agree.
    pub fn approx_eq(&self, other: &Measure, tol: f64) -> bool {
        if self.atoms.len() != other.atoms.len() {
            return false;
        }
        let atoms_ok = self
            .atoms
            .iter()
            .zip(&other.atoms)
            .all(|(a, b)| (a.x - b.x).abs() <= tol && (a.mass - b.mass).abs() <= tol);
        if !atoms_ok {
            return false;
        }
        let mut cuts: Vec<f64> = self
            .segments
            .iter()
            .chain(&other.segments)
            .flat_map(|s| [s.lo, s.hi])
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let coeffs_on = |m: &Measure, lo: f64, hi: f64| -> Vec<f64> {
            let mut out = vec![0.0; MAX_SEGMENT_DEGREE + 1];
            for s in m.segments.iter().filter(|s| s.lo <= lo && hi <= s.hi) {
                for (c, v) in out.iter_mut().zip(&s.coeffs) {
                    *c += v;
                }
            }
            out
        };
        cuts.windows(2).all(|w| {
            let a = coeffs_on(self, w[0], w[1]);
            let b = coeffs_on(other, w[0], w[1]);
            a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
        })
    }

    /// Lebesgue split of a probability measure into density and atom parts.
    pub fn split_continuous_discrete(&self) -> Result<Split> {
        let mass = self.total_mass();
        if (mass - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "split expects a probability measure, total mass is {mass}"
            )));
        }
        let dens = Measure {
            atoms: Vec::new(),
            segments: self.segments.clone(),
        };
        let disc = Measure {
            atoms: self.atoms.clone(),
            segments: Vec::new(),
        };
        let beta = dens.total_mass();
        let continuous = if beta > 0.0 { dens.normalize()? } else { Measure::zero() };
        let discrete = if self.atoms.is_empty() { Measure::zero() } else { disc.normalize()? };
        let beta = if self.atoms.is_empty() { 1.0 } else { beta };
        Ok(Split {
            beta,
            continuous,
            discrete,
        })
    }

    fn mass_in(&self, set: &IntervalUnion) -> f64 {
        self.restrict(set).total_mass()
    }

    fn concentrated_on(&self, set: &IntervalUnion) -> bool {
        self.mass_in(&set.complement()) <= NEGLIGIBLE_MASS
    }

    /// Concentration and second-moment predicates for the parameter `a`.
    pub fn lemma1_predicates(&self, a: SecondMomentParam) -> Result<LemmaOneReport> {
        let mass = self.total_mass();
        if (mass - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "predicates expect a probability measure, total mass is {mass}"
            )));
        }
        let av = a.value();
        let inner = IntervalUnion::new(vec![Interval::closed(-av, av)])?;
        let outer = IntervalUnion::new(vec![Interval::closed(-1.0, -av), Interval::closed(av, 1.0)])?;
        let pair = IntervalUnion::new(vec![Interval::closed(-av, -av), Interval::closed(av, av)])?;
        let inner_open = IntervalUnion::new(vec![Interval::open(-av, av)])?;
        let m2 = self.moment(2);
        let diff = m2 - a.squared();
        let comparison = if diff.abs() <= 1e-12 {
            Ordering::Equal
        } else if diff < 0.0 {
            Ordering::Less
        } else {
            Ordering::Greater
        };
        Ok(LemmaOneReport {
            a: av,
            m2,
            on_inner: self.concentrated_on(&inner),
            on_outer: self.concentrated_on(&outer),
            on_pair: self.concentrated_on(&pair),
            inner_open_mass: self.mass_in(&inner_open) > NEGLIGIBLE_MASS,
            outer_open_mass: self.mass_in(&inner.complement()) > NEGLIGIBLE_MASS,
            comparison,
        })
    }

    /// Membership in `P^0([-1,1], a)`: probability, symmetric, second moment `a^2`.
    pub fn in_class(&self, a: SecondMomentParam, tol: f64) -> bool {
        (self.total_mass() - 1.0).abs() <= tol
            && self.is_symmetric(tol)
            && (self.moment(2) - a.squared()).abs() <= tol
    }

    /// Symmetric measure from a density given on [0, 1] piecewise; each segment
    /// is mirrored onto [-1, 0].
    pub fn symmetrize_from_right(right: Vec<Segment>) -> Result<Measure> {
        let mut segments: Vec<Segment> = right.iter().rev().map(Segment::reflected).collect();
        segments.extend(right);
        Measure::new(Vec::new(), segments)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measure serializes")
    }

    pub fn from_json(text: &str) -> Result<Measure> {
        serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            match msg.split_once(": ") {
                Some((field, rest)) if field.contains('[') || field.contains('.') => {
                    Error::validation(field, rest.split(" at line").next().unwrap_or(rest))
                }
                _ => Error::validation("measure", msg),
            }
        })
    }
}
