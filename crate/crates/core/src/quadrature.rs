//! Positive quadratures on [-1, 1].
//!
//! A [`Quadrature`] is integration against the discrete measure
//! `sum_k w_k delta_{xi_k}`. Classical rules (Gauss-Legendre, Lobatto, Radau)
//! are built from Legendre roots. [`is_extreme`] classifies extreme points of
//! the convex set of positive quadratures with a prescribed moment vector:
//! such a quadrature is extreme exactly when it has at most `order + 1`
//! distinct nodes. [`verify_extremality`] checks the sandwich
//! `G_n[f] <= T[f] <= Lob_{n+1}[f]` on a catalog of `(2n-1)`-convex functions.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::legendre;
use crate::solve::safeguarded_newton;

/// Nodes closer than this are merged by [`canonicalize`].
pub const MERGE_TOL: f64 = 1e-12;

/// Default tolerance for membership in the moment-constrained set.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// A positive quadrature with strictly increasing nodes in [-1, 1].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
struct RawQuadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl<'de> Deserialize<'de> for Quadrature {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let raw = RawQuadrature::deserialize(deserializer)?;
        Quadrature::new(raw.nodes, raw.weights).map_err(serde::de::Error::custom)
    }
}

impl Quadrature {
    /// Validates the canonical form: equal non-zero lengths, nodes strictly
    /// increasing inside [-1, 1], every weight positive and finite.
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::validation(
                "weights",
                format!("length {} differs from nodes length {}", weights.len(), nodes.len()),
            ));
        }
        if nodes.is_empty() {
            return Err(Error::validation("nodes", "at least one node is required"));
        }
        for (i, &x) in nodes.iter().enumerate() {
            if !x.is_finite() || !(-1.0..=1.0).contains(&x) {
                return Err(Error::validation(format!("nodes[{i}]"), format!("{x} outside [-1, 1]")));
            }
            if i > 0 && nodes[i - 1] >= x {
                return Err(Error::validation(format!("nodes[{i}]"), "nodes must be strictly increasing"));
            }
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::validation(format!("weights[{i}]"), format!("{w} is not positive")));
            }
        }
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of distinct nodes, `n(Q)`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Q[f] = sum_k w_k f(xi_k)`, with compensated summation.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        neumaier_sum(self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)))
    }

    /// `(Q[e_0], ..., Q[e_order])`.
    pub fn moment_vector(&self, order: usize) -> MomentVector {
        let mut values = vec![0.0; order + 1];
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let mut power = 1.0;
            for v in values.iter_mut() {
                *v += w * power;
                power *= x;
            }
        }
        MomentVector { values }
    }

    /// Re-merges nodes closer than [`MERGE_TOL`]. Idempotent.
    pub fn canonicalize(&self) -> Result<Quadrature> {
        canonicalize(&self.nodes, &self.weights)
    }

    /// `t * self + (1 - t) * other`, canonicalized.
    pub fn convex_combination(&self, other: &Quadrature, t: f64) -> Result<Quadrature> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!("mixing parameter {t} outside [0, 1]")));
        }
        let mut nodes = self.nodes.clone();
        nodes.extend_from_slice(&other.nodes);
        let mut weights: Vec<f64> = self.weights.iter().map(|w| t * w).collect();
        weights.extend(other.weights.iter().map(|w| (1.0 - t) * w));
        canonicalize(&nodes, &weights)
    }

    /// Mirror image `x -> -x`.
    pub fn reflect(&self) -> Quadrature {
        Quadrature {
            nodes: self.nodes.iter().rev().map(|x| -x).collect(),
            weights: self.weights.iter().rev().copied().collect(),
        }
    }
}

impl fmt::Display for Quadrature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>4}  {:>20}  {:>20}", "k", "node", "weight")?;
        for (k, (x, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            writeln!(f, "{:>4}  {:>20.12e}  {:>20.12e}", k + 1, x, w)?;
        }
        Ok(())
    }
}

/// Neumaier's compensated sum.
pub(crate) fn neumaier_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let next = sum + t;
        comp += if sum.abs() >= t.abs() { (sum - next) + t } else { (t - next) + sum };
        sum = next;
    }
    sum + comp
}

/// Sorts, drops zero weights and merges nodes closer than [`MERGE_TOL`]; the
/// merged node sits at the weight-averaged position.
pub fn canonicalize(nodes: &[f64], weights: &[f64]) -> Result<Quadrature> {
    if nodes.len() != weights.len() {
        return Err(Error::validation(
            "weights",
            format!("length {} differs from nodes length {}", weights.len(), nodes.len()),
        ));
    }
    for (i, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::validation(format!("weights[{i}]"), format!("{w} is negative")));
        }
    }
    let mut pairs: Vec<(f64, f64)> = nodes
        .iter()
        .copied()
        .zip(weights.iter().copied())
        .filter(|&(_, w)| w > 0.0)
        .collect();
    if pairs.is_empty() {
        return Err(Error::EmptyQuadrature);
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut out_nodes: Vec<f64> = Vec::with_capacity(pairs.len());
    let mut out_weights: Vec<f64> = Vec::with_capacity(pairs.len());
    let mut group_last = f64::NAN;
    for (x, w) in pairs {
        match (out_nodes.last_mut(), out_weights.last_mut()) {
            (Some(node), Some(weight)) if x - group_last < MERGE_TOL => {
                let total = *weight + w;
                *node = (*node * *weight + x * w) / total;
                *weight = total;
            }
            _ => {
                out_nodes.push(x);
                out_weights.push(w);
            }
        }
        group_last = x;
    }
    Quadrature::new(out_nodes, out_weights)
}

/// Prescribed moments `(m_0, ..., m_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    values: Vec<f64>,
}

impl MomentVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("moment vector needs at least m_0".into()));
        }
        Ok(Self { values })
    }

    /// Moments of Lebesgue measure on [-1, 1] up to degree `order`.
    pub fn lebesgue(order: usize) -> Self {
        let values = (0..=order)
            .map(|k| if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 })
            .collect();
        Self { values }
    }

    /// Highest prescribed degree `n`.
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Gauss-Legendre rule with `n` nodes, exact to degree `2n - 1`.
pub fn gauss(n: usize) -> Result<Quadrature> {
    let nodes = legendre::roots(n)?;
    let weights = nodes
        .iter()
        .map(|&x| {
            let d = legendre::eval_with_deriv(n, x).1;
            2.0 / ((1.0 - x * x) * d * d)
        })
        .collect();
    Quadrature::new(nodes, weights)
}

/// Lobatto rule with `points = n + 1` nodes including both endpoints, exact to
/// degree `2n - 1`.
pub fn lobatto(points: usize) -> Result<Quadrature> {
    if points < 2 {
        return Err(Error::InvalidArgument(format!(
            "Lobatto rule needs at least 2 points, got {points}"
        )));
    }
    let n = points - 1;
    let scale = 2.0 / (n * (n + 1)) as f64;
    let interior = if n >= 2 { legendre::deriv_roots(n)? } else { Vec::new() };
    let mut nodes = Vec::with_capacity(points);
    let mut weights = Vec::with_capacity(points);
    nodes.push(-1.0);
    weights.push(scale);
    for y in interior {
        let p = legendre::eval(n, y);
        nodes.push(y);
        weights.push(scale / (p * p));
    }
    nodes.push(1.0);
    weights.push(scale);
    Quadrature::new(nodes, weights)
}

/// Which endpoint a Radau rule includes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadauEnd {
    Left,
    Right,
}

impl std::str::FromStr for RadauEnd {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(RadauEnd::Left),
            "right" => Ok(RadauEnd::Right),
            other => Err(Error::InvalidArgument(format!("unknown Radau end {other:?}"))),
        }
    }
}

/// Radau rule with `n` nodes, one of them at the chosen endpoint; exact to
/// degree `2n - 2`.
///
/// For the left variant the free nodes are the roots of
/// `(P_{n-1} + P_n) / (1 + x)`, the endpoint weight is `2 / n^2` and the free
/// weights are `(1 - x) / (n^2 P_{n-1}(x)^2)`. The right variant is the mirror.
pub fn radau(n: usize, end: RadauEnd) -> Result<Quadrature> {
    if n == 0 {
        return Err(Error::InvalidArgument("Radau rule needs at least 1 node".into()));
    }
    let nf = n as f64;
    let mut nodes = vec![-1.0];
    let mut weights = vec![2.0 / (nf * nf)];
    for x in radau_free_nodes(n)? {
        let p = legendre::eval(n - 1, x);
        nodes.push(x);
        weights.push((1.0 - x) / (nf * nf * p * p));
    }
    let left = Quadrature::new(nodes, weights)?;
    Ok(match end {
        RadauEnd::Left => left,
        RadauEnd::Right => left.reflect(),
    })
}

/// Interior roots of `P_{n-1} + P_n`, located by a sign-change scan in the
/// angle variable and polished with safeguarded Newton.
fn radau_free_nodes(n: usize) -> Result<Vec<f64>> {
    if n == 1 {
        return Ok(Vec::new());
    }
    let fdf = |x: f64| {
        let (pn, dn) = legendre::eval_with_deriv(n, x);
        let (pm, dm) = legendre::eval_with_deriv(n - 1, x);
        (pn + pm, dn + dm)
    };
    let samples = 64 * (n + 1);
    let mut found = Vec::with_capacity(n - 1);
    // theta in (0, pi), x = -cos(theta), skipping the root at x = -1 itself.
    let at = |i: usize| -(std::f64::consts::PI * i as f64 / samples as f64).cos();
    let mut prev_x = at(1);
    let mut prev_f = fdf(prev_x).0;
    for i in 2..=samples {
        let x = at(i);
        let f = fdf(x).0;
        if prev_f == 0.0 {
            found.push(prev_x);
        } else if f != 0.0 && f.signum() != prev_f.signum() {
            found.push(safeguarded_newton(fdf, prev_x, x, 0.5 * (prev_x + x), 1e-15, 100)?);
        }
        prev_x = x;
        prev_f = f;
    }
    if found.len() != n - 1 {
        return Err(Error::NumericFailure(format!(
            "Radau scan found {} free nodes, expected {}",
            found.len(),
            n - 1
        )));
    }
    Ok(found)
}

/// `true` iff `|Q[e_k] - m_k| <= tol` for every prescribed degree.
pub fn is_exact(q: &Quadrature, m: &MomentVector, tol: f64) -> bool {
    q.moment_vector(m.order())
        .values()
        .iter()
        .zip(m.values())
        .all(|(a, b)| (a - b).abs() <= tol)
}

/// Extreme-point test in the set of positive quadratures with moments `m`:
/// true iff the canonical form has at most `order(m) + 1` nodes.
///
/// Errors with [`Error::Membership`] if `q` does not reproduce `m` within `tol`.
pub fn is_extreme(q: &Quadrature, m: &MomentVector, tol: f64) -> Result<bool> {
    let canonical = q.canonicalize()?;
    if !is_exact(&canonical, m, tol) {
        return Err(Error::Membership(format!(
            "quadrature does not reproduce the prescribed moments m_0..m_{} within {tol}",
            m.order()
        )));
    }
    Ok(canonical.len() <= m.order() + 1)
}

/// Test functions whose `(2n-2)`-nd derivative is convex on [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexTestFunction {
    /// `exp(c x)` with `c > 0`.
    Exponential { c: f64 },
    Cosh,
    /// `x^(2n-1)`.
    OddMonomial,
    /// `x^(2n)`.
    EvenMonomial,
    /// `(x - t)_+^(2n-1)` with `t` in (-1, 1).
    TruncatedPower { t: f64 },
}

impl ConvexTestFunction {
    /// Evaluates the function for convexity order `2n - 1`.
    pub fn eval(&self, n: usize, x: f64) -> f64 {
        let odd = (2 * n - 1) as i32;
        match *self {
            ConvexTestFunction::Exponential { c } => (c * x).exp(),
            ConvexTestFunction::Cosh => x.cosh(),
            ConvexTestFunction::OddMonomial => x.powi(odd),
            ConvexTestFunction::EvenMonomial => x.powi(odd + 1),
            ConvexTestFunction::TruncatedPower { t } => (x - t).max(0.0).powi(odd),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            ConvexTestFunction::Exponential { c } => format!("exp({c}x)"),
            ConvexTestFunction::Cosh => "cosh".into(),
            ConvexTestFunction::OddMonomial => "x^(2n-1)".into(),
            ConvexTestFunction::EvenMonomial => "x^(2n)".into(),
            ConvexTestFunction::TruncatedPower { t } if t < 0.0 => format!("(x+{})_+^(2n-1)", -t),
            ConvexTestFunction::TruncatedPower { t } => format!("(x-{t})_+^(2n-1)"),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ConvexTestFunction::Exponential { c } if !(c > 0.0) => {
                Err(Error::InvalidArgument(format!("exponential rate {c} must be positive")))
            }
            ConvexTestFunction::TruncatedPower { t } if !(t > -1.0 && t < 1.0) => {
                Err(Error::InvalidArgument(format!("truncation point {t} outside (-1, 1)")))
            }
            _ => Ok(()),
        }
    }

    /// A fixed catalog covering every kind.
    pub fn default_catalog() -> Vec<ConvexTestFunction> {
        let mut out = vec![
            ConvexTestFunction::Exponential { c: 1.0 },
            ConvexTestFunction::Exponential { c: 2.5 },
            ConvexTestFunction::Cosh,
            ConvexTestFunction::OddMonomial,
            ConvexTestFunction::EvenMonomial,
        ];
        out.extend(
            [-0.75, -0.3, 0.0, 0.2, 0.6, 0.9]
                .into_iter()
                .map(|t| ConvexTestFunction::TruncatedPower { t }),
        );
        out
    }
}

/// One row of an extremality check: `(G_n[f], T[f], Lob_{n+1}[f])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalityRow {
    pub function: ConvexTestFunction,
    pub gauss: f64,
    pub candidate: f64,
    pub lobatto: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalityReport {
    pub n: usize,
    pub slack: f64,
    pub rows: Vec<ExtremalityRow>,
}

impl ExtremalityReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Checks `G_n[f] - slack <= T[f] <= Lob_{n+1}[f] + slack` for each catalog
/// function. `t` must be exact on Lebesgue moments to degree `2n - 1`.
pub fn verify_extremality(
    n: usize,
    t: &Quadrature,
    catalog: &[ConvexTestFunction],
    slack: f64,
) -> Result<ExtremalityReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("extremality order n must be >= 1".into()));
    }
    let lebesgue = MomentVector::lebesgue(2 * n - 1);
    if !is_exact(t, &lebesgue, MEMBERSHIP_TOL) {
        return Err(Error::Membership(format!(
            "candidate is not exact on polynomials of degree {}",
            2 * n - 1
        )));
    }
    let g = gauss(n)?;
    let l = lobatto(n + 1)?;
    let mut rows = Vec::with_capacity(catalog.len());
    for f in catalog {
        f.validate()?;
        let eval = |x: f64| f.eval(n, x);
        let (gv, tv, lv) = (g.apply(eval), t.apply(eval), l.apply(eval));
        rows.push(ExtremalityRow {
            function: *f,
            gauss: gv,
            candidate: tv,
            lobatto: lv,
            pass: gv - slack <= tv && tv <= lv + slack,
        });
    }
    Ok(ExtremalityReport { n, slack, rows })
}

/// Classical rules exact on polynomials of degree `2n - 1`: Gauss with
/// `n..=2n` nodes, then Lobatto and both Radau variants with `n+1..=2n`.
pub fn exact_rule_pool(n: usize) -> Result<Vec<(String, Quadrature)>> {
    if n == 0 {
        return Err(Error::InvalidArgument("order n must be >= 1".into()));
    }
    let mut pool = Vec::new();
    for m in n..=2 * n {
        pool.push((format!("gauss({m})"), gauss(m)?));
    }
    for m in n + 1..=2 * n {
        pool.push((format!("lobatto({m})"), lobatto(m)?));
        pool.push((format!("radau({m},left)"), radau(m, RadauEnd::Left)?));
        pool.push((format!("radau({m},right)"), radau(m, RadauEnd::Right)?));
    }
    Ok(pool)
}

/// A random convex combination of two to four members of `pool`. Every
/// member being exact on the same moments, so is the result.
pub fn random_mixture<R: Rng + ?Sized>(pool: &[(String, Quadrature)], rng: &mut R) -> Result<(String, Quadrature)> {
    if pool.is_empty() {
        return Err(Error::InvalidArgument("empty rule pool".into()));
    }
    let parts = rng.gen_range(2..=4);
    let mut label = String::from("mix[");
    let mut acc: Option<(Quadrature, f64)> = None;
    for i in 0..parts {
        let (name, rule) = &pool[rng.gen_range(0..pool.len())];
        let w: f64 = rng.gen_range(0.05..1.0);
        if i > 0 {
            label.push_str(" + ");
        }
        label.push_str(&format!("{w:.3}*{name}"));
        acc = Some(match acc {
            None => (rule.clone(), w),
            Some((q, total)) => (q.convex_combination(rule, total / (total + w))?, total + w),
        });
    }
    label.push(']');
    let (q, _) = acc.expect("at least two parts");
    Ok((label, q))
}
