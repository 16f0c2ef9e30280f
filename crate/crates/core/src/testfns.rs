//! Test-function families used in necessity arguments, and finite
//! interpolating families of peak functions.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::diskgeom::{pseudo_hyperbolic, DiskGrid};
use crate::expr::Expr;
use crate::{AnalyticFn, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TestFamily {
    /// `α_a(z) = (a − z)/(1 − ā z)`
    MobiusAlpha(Complex64),
    /// `h_a(z) = (1 − |a|²)/(1 − ā z)`
    PeakH(Complex64),
    /// `h_a · α_a`, vanishing at `a`
    ProductF(Complex64),
    /// `1 − α_a`
    OneMinusMobius(Complex64),
    /// `ln(2/(1 − w̄ z))`
    LogFw(Complex64),
    /// `e^{it} z`
    Rotation(f64),
}

fn in_disk(name: &str, a: Complex64) -> Result<Complex64> {
    if a.norm() < 1.0 {
        Ok(a)
    } else {
        Err(Error::ParameterOutOfRange(format!("{name}: |{a}| >= 1")))
    }
}

fn peak(a: Complex64) -> Expr {
    let one = Expr::real(1.0);
    let denom = Expr::Sub(
        Box::new(one),
        Box::new(Expr::Mul(Box::new(Expr::constant(a.conj())), Box::new(Expr::Var))),
    );
    Expr::Div(Box::new(Expr::real(1.0 - a.norm_sqr())), Box::new(denom))
}

/// The family member as an expression with exact symbolic derivative.
pub fn make_test_fn(family: TestFamily) -> Result<AnalyticFn> {
    let expr = match family {
        TestFamily::MobiusAlpha(a) => Expr::mobius(in_disk("MobiusAlpha", a)?),
        TestFamily::PeakH(a) => peak(in_disk("PeakH", a)?),
        TestFamily::ProductF(a) => {
            let a = in_disk("ProductF", a)?;
            Expr::Mul(Box::new(peak(a)), Box::new(Expr::mobius(a)))
        }
        TestFamily::OneMinusMobius(a) => {
            let a = in_disk("OneMinusMobius", a)?;
            Expr::Sub(Box::new(Expr::real(1.0)), Box::new(Expr::mobius(a)))
        }
        TestFamily::LogFw(w) => {
            let w = in_disk("LogFw", w)?;
            let denom = Expr::Sub(
                Box::new(Expr::real(1.0)),
                Box::new(Expr::Mul(Box::new(Expr::constant(w.conj())), Box::new(Expr::Var))),
            );
            Expr::Log(Box::new(Expr::Div(Box::new(Expr::real(2.0)), Box::new(denom))))
        }
        TestFamily::Rotation(t) => {
            if !(0.0..TAU).contains(&t) {
                return Err(Error::ParameterOutOfRange(format!("Rotation: t = {t} outside [0, 2pi)")));
            }
            Expr::Mul(Box::new(Expr::constant(Complex64::from_polar(1.0, t))), Box::new(Expr::Var))
        }
    };
    Ok(AnalyticFn::new(expr))
}

/// Rotation angles `2πk/16`, `k = 1..15`.
pub fn rotation_panel() -> Vec<f64> {
    (1..16).map(|k| TAU * k as f64 / 16.0).collect()
}

/// `∏_{j≠k} ρ(x_j, x_k)`, the separation product of node `k`.
pub fn separation_product(nodes: &[Complex64], k: usize) -> f64 {
    nodes
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .map(|(_, &x)| pseudo_hyperbolic(x, nodes[k]))
        .product()
}

fn first_violation(nodes: &[Complex64], d: f64) -> Option<(usize, usize, f64)> {
    (0..nodes.len()).find_map(|k| {
        let p = separation_product(nodes, k);
        (p < d).then(|| {
            let j = (0..nodes.len())
                .filter(|&j| j != k)
                .min_by(|&a, &b| {
                    pseudo_hyperbolic(nodes[a], nodes[k]).total_cmp(&pseudo_hyperbolic(nodes[b], nodes[k]))
                })
                .unwrap_or(k);
            (k.min(j), k.max(j), p)
        })
    })
}

/// Greedy pass over `points`: a point is kept when every separation product
/// of the enlarged set stays at least `d`.
pub fn select_separated_subsequence(points: &[Complex64], d: f64) -> Vec<Complex64> {
    let mut kept: Vec<Complex64> = Vec::new();
    for &p in points {
        kept.push(p);
        if first_violation(&kept, d).is_some() {
            kept.pop();
        }
    }
    kept
}

#[derive(Debug, Clone)]
pub struct InterpolationFamily {
    pub nodes: Vec<Complex64>,
    pub separation: f64,
    pub peaks: Vec<AnalyticFn>,
    /// Largest sampled `Σ_k |h_k(z)|`.
    pub sum_bound_estimate: f64,
}

impl InterpolationFamily {
    /// `Σ_k |h_k(z)|`.
    pub fn sum_abs(&self, z: Complex64) -> f64 {
        self.peaks.iter().map(|h| h.eval(z).norm()).sum()
    }

    /// Matrix `h_k(x_j)`, row `k`.
    pub fn kronecker_matrix(&self) -> Vec<Vec<Complex64>> {
        self.peaks
            .iter()
            .map(|h| self.nodes.iter().map(|&x| h.eval(x)).collect())
            .collect()
    }
}

/// [`build_interpolation_family_on`] with the default grid.
pub fn build_interpolation_family(nodes: &[Complex64], d: f64) -> Result<InterpolationFamily> {
    build_interpolation_family_on(nodes, d, &DiskGrid::default())
}

/// Peak functions `h_k = ∏_{j≠k} b_{x_j}/b_{x_j}(x_k)` with `b_a = (a − z)/(1 − ā z)`.
/// Unimodular normalization of the factors cancels in the quotient and is
/// omitted. The bound `M` is sampled over the grid and the nodes.
pub fn build_interpolation_family_on(
    nodes: &[Complex64],
    d: f64,
    grid: &DiskGrid,
) -> Result<InterpolationFamily> {
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::ParameterOutOfRange(format!("separation d = {d} outside (0, 1)")));
    }
    if nodes.is_empty() {
        return Err(Error::InvalidArgument("no interpolation nodes".into()));
    }
    for &x in nodes {
        in_disk("interpolation node", x)?;
    }
    if let Some((first, second, bound)) = first_violation(nodes, d) {
        return Err(Error::SeparationViolated { first, second, bound });
    }
    let peaks: Vec<AnalyticFn> = (0..nodes.len())
        .map(|k| {
            let others = (0..nodes.len()).filter(|&j| j != k);
            let norm: Complex64 = others
                .clone()
                .map(|j| Expr::mobius(nodes[j]).eval(nodes[k]))
                .product();
            let expr = others.fold(Expr::constant(norm.inv()), |acc, j| {
                Expr::Mul(Box::new(acc), Box::new(Expr::mobius(nodes[j])))
            });
            AnalyticFn::new(expr)
        })
        .collect();
    let mut family = InterpolationFamily {
        nodes: nodes.to_vec(),
        separation: d,
        peaks,
        sum_bound_estimate: 0.0,
    };
    let on_grid = grid
        .points()
        .par_iter()
        .map(|&z| family.sum_abs(z))
        .reduce(|| 0.0, f64::max);
    let on_nodes = nodes.iter().map(|&x| family.sum_abs(x)).fold(0.0, f64::max);
    family.sum_bound_estimate = on_grid.max(on_nodes);
    Ok(family)
}
