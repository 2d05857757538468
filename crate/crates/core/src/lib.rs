//! Moment-constrained positive quadratures and symmetric probability measures
//! on [-1, 1].
//!
//! - [`legendre`]: Legendre polynomials, derivatives and roots.
//! - [`quadrature`]: Gauss, Lobatto and Radau rules, the extreme-point
//!   classifier for moment-constrained quadratures, and the Gauss/Lobatto
//!   sandwich on `(2n-1)`-convex functions.
//! - [`measure`]: atoms plus piecewise-polynomial densities, restriction,
//!   normalization, symmetry and second-moment predicates.
//! - [`kfamily`]: the extreme points `mu_(x,y)` of the symmetric probability
//!   measures with moments `(1, 0, b^2, 0)`.
//! - [`decompose`]: constructive splitting of a continuous member into a
//!   proper convex combination of two members.
//! - [`represent`]: numerical mixing measures over the extreme family.
//! - [`cli`]: the command-line front end.

pub mod cli;
pub mod decompose;
pub mod error;
pub mod kfamily;
pub mod legendre;
pub mod measure;
pub mod quadrature;
pub mod represent;
mod solve;

pub use error::{Error, Result};
pub use kfamily::{KClass, KPoint};
pub use measure::{Atom, Interval, IntervalUnion, Measure, SecondMomentParam, Segment};
pub use quadrature::{ConvexTestFunction, MomentVector, Quadrature, RadauEnd};
