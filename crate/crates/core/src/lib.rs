//! Numerics for composition operators and Volterra-type integral operators on
//! spaces of holomorphic functions on the unit disk.
//!
//! The crate evaluates the operators `C_φ f = f∘φ`,
//! `J_g f(z) = ∫₀^z f g′` and `I_g f(z) = ∫₀^z f′ g`, their commutators with
//! `C_φ`, Bloch and `H∞` norm estimates, and the pointwise criterion fields
//! whose suprema and boundary limits decide boundedness, compactness and
//! essential commutation. Suprema are grid maxima over a disk grid refined
//! exponentially toward the boundary, so every estimate is a lower bound of
//! the true supremum and every verdict is stated with that one-sidedness.
//!
//! Module map:
//!
//! - [`series`]: truncated power series and discrete Cauchy coefficient recovery.
//! - [`expr`]: the expression language used to define `φ`, `g`, `f`.
//! - [`analytic`]: [`AnalyticFn`], an expression with its symbolic derivative.
//! - [`quadrature`]: adaptive Gauss–Legendre along radial segments.
//! - [`diskgeom`]: grids, self-maps, Schwarz derivative.
//! - [`operators`]: `J_g`, `I_g`, commutators, seminorms.
//! - [`criteria`]: criterion fields, shell reports and verdicts.
//! - [`testfns`]: test-function families and finite interpolation families.
//! - [`harness`]: panels, suites, reports and the command-line front end.

pub mod analytic;
pub mod criteria;
pub mod diskgeom;
mod error;
pub mod expr;
pub mod harness;
pub mod operators;
pub mod quadrature;
pub mod series;
pub mod testfns;

pub use analytic::AnalyticFn;
pub use error::{Error, Result};
pub use num_complex::Complex64;

/// `1 − |z|²` computed as `(1 − |z|)(1 + |z|)`, which keeps relative accuracy
/// when `|z|` is close to 1.
#[inline]
pub fn one_minus_abs2(z: Complex64) -> f64 {
    let r = z.norm();
    (1.0 - r) * (1.0 + r)
}

/// `ln(2 / (1 − |z|²))`, the logarithmic weight of the Bloch-to-Bloch criteria.
#[inline]
pub fn log_weight(z: Complex64) -> f64 {
    (2.0 / one_minus_abs2(z)).ln()
}
