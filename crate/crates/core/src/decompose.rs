//! Constructive splitting of a continuous symmetric probability measure with
//! second moment `a^2` into two restrictions that keep the same second-moment
//! ratio.
//!
//! With `g(x)` the second moment of `mu` normalized on `[-x, x]` and `h(x)` the
//! second moment of `mu` normalized on `[-b1, -x] U [x, b1]`, the construction
//! picks `b1 in (a, 1)` with `g(a) < g(b1) < a^2`, then `a1 in (0, a)` with
//! `h(a1) = a^2`. Both `E1 = [-b1, -a1] U [a1, b1]` and its complement carry
//! second moment `a^2` times their mass, so `mu = alpha nu1 + (1 - alpha) nu2`
//! with `alpha = mu(E1)` and `nu1 != nu2`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{IntervalUnion, Measure, SecondMomentParam, CLASS_TOL};
use crate::solve::bisect;

/// Bracket width at which the bisections stop.
pub const BISECT_WIDTH: f64 = 1e-13;
pub const BISECT_MAX_ITER: usize = 200;

/// Tolerance on the proportional second-moment identity of each part.
pub const PROPORTION_TOL: f64 = 1e-10;

/// How the intermediate level `g(b1)` is chosen inside `(g(a), a^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum TargetRule {
    /// `g(b1) = (g(a) + a^2) / 2`.
    #[default]
    Midpoint,
    /// `g(b1) = g(a) + theta (a^2 - g(a))` for `theta` in (0, 1).
    Fraction(f64),
}

impl TargetRule {
    fn level(self, low: f64, high: f64) -> Result<f64> {
        let theta = match self {
            TargetRule::Midpoint => 0.5,
            TargetRule::Fraction(t) if t > 0.0 && t < 1.0 => t,
            TargetRule::Fraction(t) => {
                return Err(Error::InvalidArgument(format!("target fraction {t} outside (0, 1)")))
            }
        };
        Ok(low + theta * (high - low))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionResult {
    pub a1: f64,
    pub b1: f64,
    #[serde(skip)]
    pub e1: IntervalUnion,
    #[serde(skip)]
    pub e2: IntervalUnion,
    /// `mu(E1)`.
    pub alpha: f64,
    pub nu1: Measure,
    pub nu2: Measure,
}

impl DecompositionResult {
    /// `alpha nu1 + (1 - alpha) nu2`.
    pub fn recombine(&self) -> Result<Measure> {
        let first = self.nu1.scale(self.alpha)?;
        let second = self.nu2.scale(1.0 - self.alpha)?;
        first.add(&second)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decomposition serializes")
    }
}

fn ratio(num: f64, den: f64, what: &str) -> Result<f64> {
    if den > 0.0 {
        Ok(num / den)
    } else {
        Err(Error::DivisionGuard(format!("{what}: restricted mass is {den}")))
    }
}

/// `g(x) = int_{-x}^{x} u^2 d mu / mu([-x, x])`.
pub fn g_fn(mu: &Measure, x: f64) -> Result<f64> {
    ratio(mu.moment_on(2, -x, x), mu.moment_on(0, -x, x), "g")
}

/// Second moment of `mu` normalized on `[-b1, -x] U [x, b1]`.
pub fn h_fn(mu: &Measure, b1: f64, x: f64) -> Result<f64> {
    let (num, den) = if x == 0.0 {
        (mu.moment_on(2, -b1, b1), mu.moment_on(0, -b1, b1))
    } else {
        (
            mu.moment_on(2, -b1, -x) + mu.moment_on(2, x, b1),
            mu.moment_on(0, -b1, -x) + mu.moment_on(0, x, b1),
        )
    };
    ratio(num, den, "h")
}

/// `b1 in (a, 1)` with `g(a) < g(b1) < a^2`, by bisection on `g = level`.
pub fn find_b1(mu: &Measure, a: SecondMomentParam, rule: TargetRule) -> Result<f64> {
    let av = a.value();
    let ga = g_fn(mu, av)?;
    let a2 = a.squared();
    if !(ga < a2) {
        return Err(Error::NumericFailure(format!(
            "g(a) = {ga} is not below a^2 = {a2}; the measure has no mass inside (-a, a)"
        )));
    }
    let level = rule.level(ga, a2)?;
    bisect(|x| Ok(g_fn(mu, x)? - level), av, 1.0, BISECT_WIDTH, BISECT_MAX_ITER)
}

/// `a1 in (0, a)` with `h(a1) = a^2`, by bisection.
pub fn find_a1(mu: &Measure, a: SecondMomentParam, b1: f64) -> Result<f64> {
    let a2 = a.squared();
    bisect(|x| Ok(h_fn(mu, b1, x)? - a2), 0.0, a.value(), BISECT_WIDTH, BISECT_MAX_ITER)
}

/// Splits a continuous member of `P^0([-1,1], a)` with the default rule.
pub fn decompose(mu: &Measure, a: SecondMomentParam) -> Result<DecompositionResult> {
    decompose_with(mu, a, TargetRule::default())
}

pub fn decompose_with(mu: &Measure, a: SecondMomentParam, rule: TargetRule) -> Result<DecompositionResult> {
    if !mu.is_continuous() {
        return Err(Error::NotContinuous(mu.atoms().len()));
    }
    if !mu.in_class(a, CLASS_TOL) {
        return Err(Error::Membership(format!(
            "measure is not a symmetric probability measure with second moment {}^2 (m2 = {})",
            a.value(),
            mu.moment(2)
        )));
    }
    let b1 = find_b1(mu, a, rule)?;
    let a1 = find_a1(mu, a, b1)?;
    let e1 = IntervalUnion::symmetric_pair(a1, b1)?;
    let e2 = e1.complement();
    let mu1 = mu.restrict(&e1);
    let mu2 = mu.restrict(&e2);
    let a2 = a.squared();
    for (i, part) in [&mu1, &mu2].into_iter().enumerate() {
        let gap = part.moment(2) - a2 * part.total_mass();
        if gap.abs() > PROPORTION_TOL {
            return Err(Error::NumericFailure(format!(
                "part {} misses the proportional second moment by {gap:e}",
                i + 1
            )));
        }
    }
    let alpha = mu1.total_mass();
    Ok(DecompositionResult {
        a1,
        b1,
        e1,
        e2,
        alpha,
        nu1: mu1.normalize()?,
        nu2: mu2.normalize()?,
    })
}
