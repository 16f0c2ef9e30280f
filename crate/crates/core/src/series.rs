//! Truncated power series `a_0 + a_1 z + … + a_N z^N` over complex coefficients.
//!
//! Series here are the coefficient-level view of a holomorphic function near
//! the origin. Composition is deliberately absent: `f∘φ` with `φ(0) ≠ 0` is
//! not finitely computable from truncations, so compositions are formed
//! pointwise on [`AnalyticFn`](crate::AnalyticFn) and re-expanded with
//! [`coeffs_from_samples`] when coefficients are needed.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default truncation degree for products.
pub const DEFAULT_CAP: usize = 64;

/// Default sampling radius for coefficient recovery.
pub const DEFAULT_RADIUS: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorSeries {
    coeffs: Vec<Complex64>,
}

impl TaylorSeries {
    /// Builds a series from `a_0..a_N`. An empty vector becomes the zero
    /// series of degree 0.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            return Self::zero(0);
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); degree + 1],
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// The monomial `z^n`, degree bound `n`.
    pub fn monomial(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[n] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `a_n`, zero past the degree bound.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Horner evaluation. At `z = 0` this returns `a_0` exactly.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Coefficientwise sum; the degree bound is the larger of the two.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self {
            coeffs: (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self {
            coeffs: (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    /// Cauchy product truncated at `min(deg a + deg b, DEFAULT_CAP)`.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_capped(other, DEFAULT_CAP)
    }

    /// Cauchy product truncated at `min(deg a + deg b, cap)`.
    pub fn mul_capped(&self, other: &Self, cap: usize) -> Self {
        let degree = (self.degree_bound() + other.degree_bound()).min(cap);
        let mut out = vec![Complex64::new(0.0, 0.0); degree + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(degree + 1) {
            for (j, &b) in other.coeffs.iter().enumerate().take(degree + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Termwise derivative `Σ n a_n z^{n−1}`; degree bound drops by one
    /// (a constant maps to the zero series of degree 0).
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(0);
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, &a)| a * n as f64)
                .collect(),
        }
    }

    /// Primitive vanishing at the origin: `Σ a_n z^{n+1}/(n+1)`.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, &a)| a / (n as f64 + 1.0)),
        );
        Self { coeffs }
    }

    /// Largest coefficient modulus of `self − other`.
    pub fn max_coeff_distance(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|i| (self.coeff(i) - other.coeff(i)).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for &TaylorSeries {
    type Output = TaylorSeries;
    fn add(self, rhs: Self) -> TaylorSeries {
        TaylorSeries::add(self, rhs)
    }
}

impl Sub for &TaylorSeries {
    type Output = TaylorSeries;
    fn sub(self, rhs: Self) -> TaylorSeries {
        TaylorSeries::sub(self, rhs)
    }
}

impl Mul for &TaylorSeries {
    type Output = TaylorSeries;
    fn mul(self, rhs: Self) -> TaylorSeries {
        TaylorSeries::mul(self, rhs)
    }
}

impl Neg for &TaylorSeries {
    type Output = TaylorSeries;
    fn neg(self) -> TaylorSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Recovers `a_0..a_degree` from samples on the circle `|z| = radius` with the
/// discrete Cauchy formula
/// `a_n ≈ (1/(count·radius^n)) Σ_m f(radius·ω^m) ω^{−mn}`, `ω = e^{2πi/count}`.
///
/// Aliasing couples `a_n` with `a_{n+count}`, `a_{n+2·count}`, …, so `count`
/// must be at least `2·degree + 2`.
pub fn coeffs_from_samples<F>(
    evaluate: F,
    radius: f64,
    count: usize,
    degree: usize,
) -> Result<TaylorSeries>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::DegenerateRadius(radius));
    }
    if count < 2 * degree + 2 {
        return Err(Error::InvalidArgument(format!(
            "sample count {count} below 2*degree+2 = {}",
            2 * degree + 2
        )));
    }
    let samples: Vec<Complex64> = (0..count)
        .map(|m| evaluate(Complex64::from_polar(radius, 2.0 * PI * m as f64 / count as f64)))
        .collect();
    let coeffs = (0..=degree)
        .map(|n| {
            let sum = samples
                .iter()
                .enumerate()
                .map(|(m, &s)| {
                    // reduce m*n mod count before forming the angle
                    let k = (m * n) % count;
                    s * Complex64::from_polar(1.0, -2.0 * PI * k as f64 / count as f64)
                })
                .fold(Complex64::new(0.0, 0.0), |acc, t| acc + t);
            sum / (count as f64 * radius.powi(n as i32))
        })
        .collect();
    Ok(TaylorSeries::new(coeffs))
}

/// [`coeffs_from_samples`] with the default radius 0.5 and `4·(degree+1)`
/// samples.
pub fn coeffs_default<F>(evaluate: F, degree: usize) -> Result<TaylorSeries>
where
    F: Fn(Complex64) -> Complex64,
{
    coeffs_from_samples(evaluate, DEFAULT_RADIUS, 4 * (degree + 1), degree)
}
