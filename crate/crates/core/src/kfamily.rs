//! The extreme points of the symmetric probability measures on [-1, 1] with
//! moments `(1, 0, b^2, 0)`:
//!
//! `mu_(x,y) = p/2 (delta_x + delta_-x) + q/2 (delta_y + delta_-y)`
//!
//! with `0 <= x <= b <= y <= 1`, `p, q > 0`, `p + q = 1` and
//! `p x^2 + q y^2 = b^2`. For `x != y` the weights are forced:
//! `p = (y^2 - b^2) / (y^2 - x^2)` and `q = (b^2 - x^2) / (y^2 - x^2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Atom, Measure};

/// Default tolerance for [`is_member`].
pub const MEMBER_TOL: f64 = 1e-10;

/// Positions closer than this are paired as mirror images.
pub const PAIR_TOL: f64 = 1e-12;

/// Number of mass points of an extreme measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KClass {
    TwoPoint,
    ThreePoint,
    FourPoint,
}

/// A parametrized extreme measure `mu_(x,y)` with its weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KPoint {
    pub b: f64,
    pub x: f64,
    pub y: f64,
    pub p: f64,
    pub q: f64,
}

impl KPoint {
    /// Builds `mu_(x,y)`; `x = y = b` takes `p = q = 1/2`.
    ///
    /// Points where exactly one of `x`, `y` equals `b` would force a zero
    /// weight and are rejected with [`Error::DegenerateWeight`].
    pub fn new(b: f64, x: f64, y: f64) -> Result<KPoint> {
        if !(b > 0.0 && b < 1.0) {
            return Err(Error::InvalidArgument(format!("b = {b} outside (0, 1)")));
        }
        if !(0.0 <= x && x <= b && b <= y && y <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "need 0 <= x <= b <= y <= 1, got x = {x}, b = {b}, y = {y}"
            )));
        }
        if x == b && y == b {
            return Ok(KPoint { b, x, y, p: 0.5, q: 0.5 });
        }
        if x == b || y == b {
            return Err(Error::DegenerateWeight(format!(
                "x = {x}, y = {y} with b = {b} gives a zero weight"
            )));
        }
        let (b2, x2, y2) = (b * b, x * x, y * y);
        let denom = y2 - x2;
        let p = (y2 - b2) / denom;
        let q = (b2 - x2) / denom;
        Ok(KPoint { b, x, y, p, q })
    }

    /// Atom measure with coincident positions merged.
    pub fn to_measure(&self) -> Measure {
        let mut atoms = Vec::with_capacity(4);
        if self.x == self.y {
            atoms.push(Atom { x: -self.x, mass: 0.5 });
            atoms.push(Atom { x: self.x, mass: 0.5 });
        } else {
            atoms.push(Atom { x: -self.y, mass: 0.5 * self.q });
            if self.x == 0.0 {
                atoms.push(Atom { x: 0.0, mass: self.p });
            } else {
                atoms.push(Atom { x: -self.x, mass: 0.5 * self.p });
                atoms.push(Atom { x: self.x, mass: 0.5 * self.p });
            }
            atoms.push(Atom { x: self.y, mass: 0.5 * self.q });
        }
        Measure::new(atoms, Vec::new()).expect("K(b) atoms are ordered with positive masses")
    }

    pub fn classify(&self) -> KClass {
        if self.x == self.b && self.y == self.b {
            KClass::TwoPoint
        } else if self.x == 0.0 {
            KClass::ThreePoint
        } else {
            KClass::FourPoint
        }
    }

    /// `int u^k d mu_(x,y)`; zero for odd `k`.
    pub fn moment(&self, k: usize) -> f64 {
        if k % 2 == 1 {
            return 0.0;
        }
        if self.x == self.y {
            return self.x.powi(k as i32);
        }
        let xk = if k == 0 { 1.0 } else { self.x.powi(k as i32) };
        self.p * xk + self.q * self.y.powi(k as i32)
    }

    /// `int f d mu_(x,y)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        if self.x == self.y {
            return 0.5 * (f(-self.x) + f(self.x));
        }
        0.5 * self.p * (f(-self.x) + f(self.x)) + 0.5 * self.q * (f(-self.y) + f(self.y))
    }
}

/// Shorthand for [`KPoint::new`].
pub fn make(b: f64, x: f64, y: f64) -> Result<KPoint> {
    KPoint::new(b, x, y)
}

/// Recognizes `mu` as a member of the extreme family within `tol`.
///
/// Requires an atom-only symmetric probability measure with at most four
/// atoms whose second moment is `b^2`.
pub fn is_member(mu: &Measure, b: f64, tol: f64) -> Option<KPoint> {
    if !(b > 0.0 && b < 1.0) {
        return None;
    }
    if mu.segments().iter().any(|s| s.mass().abs() > tol) {
        return None;
    }
    let atoms = mu.atoms();
    if atoms.is_empty() || atoms.len() > 4 {
        return None;
    }
    if (mu.total_mass() - 1.0).abs() > tol || (mu.moment(2) - b * b).abs() > tol {
        return None;
    }
    let n = atoms.len();
    for i in 0..n {
        let (lo, hi) = (atoms[i], atoms[n - 1 - i]);
        if (lo.x + hi.x).abs() > PAIR_TOL || (lo.mass - hi.mass).abs() > tol {
            return None;
        }
    }
    // Non-negative half, ascending, with the full mass of each mirror pair.
    let mut half: Vec<(f64, f64)> = Vec::with_capacity(2);
    for a in &atoms[n / 2..] {
        if a.x.abs() <= PAIR_TOL {
            half.push((0.0, a.mass));
        } else {
            half.push((a.x, 2.0 * a.mass));
        }
    }
    if n % 2 == 0 && half.first().is_some_and(|h| h.0 == 0.0) {
        return None;
    }
    let k = match half.as_slice() {
        [(pos, _)] => {
            if (pos - b).abs() > tol {
                return None;
            }
            KPoint::new(b, b, b).ok()?
        }
        [(x, p_obs), (y, q_obs)] => {
            let k = KPoint::new(b, *x, *y).ok()?;
            if (k.p - p_obs).abs() > tol || (k.q - q_obs).abs() > tol {
                return None;
            }
            k
        }
        _ => return None,
    };
    Some(k)
}
