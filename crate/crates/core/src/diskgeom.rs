//! Disk grids refined toward the boundary, validated self-maps and the
//! Schwarz derivative.
//!
//! Shell `k` of a grid is the annulus `1 − 2^(−k) ≤ |z| < 1 − 2^(−k−1)`; the
//! grid samples it on the circle through the annulus midpoint
//! `r_k = 1 − 0.75·2^(−k)` at `base_angular·(k+1)` equispaced angles starting
//! at angle 0. Every limit `|z| → 1` or `|φ(z)| → 1` is read off the
//! outermost shells.

use std::f64::consts::PI;
use std::ops::Range;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::{one_minus_abs2, AnalyticFn, Error, Result};

pub const DEFAULT_MAX_SHELL: usize = 14;
pub const DEFAULT_BASE_ANGULAR: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct DiskGrid {
    points: Vec<Complex64>,
    shells: Vec<Range<usize>>,
    radii: Vec<f64>,
    max_shell: usize,
}

impl DiskGrid {
    /// Deterministic grid with shells `0..=max_shell`.
    pub fn new(max_shell: usize, base_angular: usize) -> Result<Self> {
        if max_shell < 4 {
            return Err(Error::InvalidArgument(format!(
                "max_shell must be >= 4, got {max_shell}"
            )));
        }
        if base_angular < 64 {
            return Err(Error::InvalidArgument(format!(
                "base_angular must be >= 64, got {base_angular}"
            )));
        }
        Ok(Self::build(max_shell, base_angular))
    }

    /// Same construction without the size preconditions; used for small
    /// auxiliary samplings.
    pub(crate) fn build(max_shell: usize, base_angular: usize) -> Self {
        let mut points = Vec::new();
        let mut shells = Vec::with_capacity(max_shell + 1);
        let mut radii = Vec::with_capacity(max_shell + 1);
        for k in 0..=max_shell {
            let r = 1.0 - 0.75 * 0.5f64.powi(k as i32);
            let n = base_angular * (k + 1);
            let start = points.len();
            points.extend(
                (0..n).map(|j| Complex64::from_polar(r, 2.0 * PI * j as f64 / n as f64)),
            );
            shells.push(start..points.len());
            radii.push(r);
        }
        Self {
            points,
            shells,
            radii,
            max_shell,
        }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_shell(&self) -> usize {
        self.max_shell
    }

    pub fn shell_range(&self, k: usize) -> Range<usize> {
        self.shells[k].clone()
    }

    pub fn shell_points(&self, k: usize) -> &[Complex64] {
        &self.points[self.shells[k].clone()]
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angular_counts(&self) -> Vec<usize> {
        self.shells.iter().map(|r| r.len()).collect()
    }

    /// Shell of the grid point with the given index.
    pub fn shell_of_index(&self, index: usize) -> usize {
        self.shells
            .iter()
            .position(|r| r.contains(&index))
            .expect("index inside grid")
    }

    /// `2^(−K)`: the distance scale of the outermost shell.
    pub fn resolution(&self) -> f64 {
        0.5f64.powi(self.max_shell as i32)
    }
}

/// Builds the deterministic boundary-refined grid; see [`DiskGrid::new`].
pub fn make_grid(max_shell: usize, base_angular: usize) -> Result<DiskGrid> {
    DiskGrid::new(max_shell, base_angular)
}

impl Default for DiskGrid {
    /// `K = 14`, 64 base angles: 7680 points, outermost circle `1 − 4.6e−5`.
    fn default() -> Self {
        Self::build(DEFAULT_MAX_SHELL, DEFAULT_BASE_ANGULAR)
    }
}

/// Shell index of a modulus: `k` with `1 − 2^(−k) ≤ r < 1 − 2^(−k−1)`,
/// clipped to `max_shell` (moduli beyond the last annulus land in it).
pub fn shell_index(modulus: f64, max_shell: usize) -> usize {
    let mut k = 0;
    while k < max_shell && modulus >= 1.0 - 0.5f64.powi(k as i32 + 1) {
        k += 1;
    }
    k
}

/// Largest `K` whose outermost shell keeps a gap of at least `gap` to the
/// unit circle, i.e. `0.75·2^(−K) ≥ gap`. Used to stop a grid at the scale
/// where a regularized symbol such as `log(2/(1 − cz))` stops resembling its
/// `c = 1` limit (`gap = 1 − c`).
pub fn shells_to_scale(gap: f64) -> usize {
    if gap.is_nan() || gap <= 0.0 {
        return usize::MAX;
    }
    (0.75 / gap).log2().floor().max(0.0) as usize
}

/// A sampled supremum and where it was attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupEstimate {
    pub value: f64,
    pub arg: Complex64,
    /// Index of the maximizing point in the sampled slice.
    pub index: usize,
}

/// Maximum of `field` over `points`. Ties go to the smallest index so the
/// result does not depend on how the parallel reduction is split; NaN values
/// are skipped.
pub fn sample_max<F>(points: &[Complex64], field: F) -> Option<SupEstimate>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    points
        .par_iter()
        .enumerate()
        .map(|(i, &z)| (field(z), i))
        .filter(|(v, _)| !v.is_nan())
        .reduce_with(|a, b| {
            if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        })
        .map(|(value, index)| SupEstimate {
            value,
            arg: points[index],
            index,
        })
}

/// A holomorphic self-map of the disk, validated on a grid.
#[derive(Debug, Clone)]
pub struct SelfMap {
    phi: AnalyticFn,
    phi_prime: AnalyticFn,
    phi_at_zero: Complex64,
    sup_modulus_estimate: f64,
    is_automorphism: bool,
}

impl SelfMap {
    pub fn phi(&self) -> &AnalyticFn {
        &self.phi
    }

    pub fn phi_prime(&self) -> &AnalyticFn {
        &self.phi_prime
    }

    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.phi.eval(z)
    }

    #[inline]
    pub fn deriv(&self, z: Complex64) -> Complex64 {
        self.phi.deriv(z)
    }

    pub fn at_zero(&self) -> Complex64 {
        self.phi_at_zero
    }

    /// Largest sampled `|φ|` plus the grid resolution, capped at 1.
    pub fn sup_modulus_estimate(&self) -> f64 {
        self.sup_modulus_estimate
    }

    /// Set only for trees of Möbius/rotation form.
    pub fn is_automorphism(&self) -> bool {
        self.is_automorphism
    }
}

/// Checks `|φ(z)| < 1` at every grid point. Sample-based, so a map leaving the
/// disk only between samples can pass; [`schwarz_pick_modulus_bound`] is the
/// cross-check.
pub fn validate_self_map(phi: AnalyticFn, grid: &DiskGrid) -> Result<SelfMap> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let moduli: Vec<f64> = grid.points().par_iter().map(|&z| phi.eval(z).norm()).collect();
    if let Some(i) = moduli.iter().position(|m| m.is_nan() || *m >= 1.0) {
        return Err(Error::NotASelfMap {
            witness: grid.points()[i],
            modulus: moduli[i],
        });
    }
    let phi_at_zero = phi.eval(Complex64::new(0.0, 0.0));
    if phi_at_zero.norm().is_nan() || phi_at_zero.norm() >= 1.0 {
        return Err(Error::NotASelfMap {
            witness: Complex64::new(0.0, 0.0),
            modulus: phi_at_zero.norm(),
        });
    }
    let max = moduli.iter().copied().fold(phi_at_zero.norm(), f64::max);
    let sup_modulus_estimate = (max + grid.resolution()).min(1.0);
    let phi_prime = phi.derivative();
    let is_automorphism = phi.expr().is_automorphism_form();
    Ok(SelfMap {
        phi,
        phi_prime,
        phi_at_zero,
        sup_modulus_estimate,
        is_automorphism,
    })
}

/// `φ^#(z) = (1 − |z|²)/(1 − |φ(z)|²)·φ′(z)`; Schwarz–Pick gives `|φ^#| ≤ 1`.
pub fn schwarz_derivative(phi: &SelfMap, z: Complex64) -> Complex64 {
    let w = phi.eval(z);
    phi.deriv(z) * (one_minus_abs2(z) / one_minus_abs2(w))
}

/// `(|z| + |φ(0)|)/(1 + |z||φ(0)|)`, an upper bound for `|φ(z)|`.
pub fn schwarz_pick_modulus_bound(phi: &SelfMap, z: Complex64) -> f64 {
    let r = z.norm();
    let p = phi.at_zero().norm();
    (r + p) / (1.0 + r * p)
}

/// Pseudo-hyperbolic distance `|(a − b)/(1 − ā b)|`.
pub fn pseudo_hyperbolic(a: Complex64, b: Complex64) -> f64 {
    ((a - b) / (1.0 - a.conj() * b)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn map(s: &str, grid: &DiskGrid) -> Result<SelfMap> {
        validate_self_map(AnalyticFn::parse(s).unwrap(), grid)
    }

    #[test]
    fn grid_counts_and_moduli() {
        let g = DiskGrid::new(4, 64).unwrap();
        assert_eq!(g.len(), 960);
        assert_eq!(g.angular_counts(), vec![64, 128, 192, 256, 320]);
        assert!(g.points().iter().all(|z| z.norm() < 1.0));
        assert!(g.radii().windows(2).all(|w| w[0] < w[1]));
        for k in 0..=4 {
            for z in g.shell_points(k) {
                assert_eq!(shell_index(z.norm(), 4), k);
            }
        }
    }

    #[test]
    fn grid_preconditions() {
        assert!(DiskGrid::new(3, 64).is_err());
        assert!(DiskGrid::new(4, 63).is_err());
    }

    #[test]
    fn shells_to_scale_examples() {
        assert_eq!(shells_to_scale(1e-3), 9);
        assert_eq!(shells_to_scale(0.75 / 1024.0), 10);
        assert_eq!(shells_to_scale(0.9), 0);
    }

    #[test]
    fn shell_index_boundaries() {
        assert_eq!(shell_index(0.0, 14), 0);
        assert_eq!(shell_index(0.4999, 14), 0);
        assert_eq!(shell_index(0.5, 14), 1);
        assert_eq!(shell_index(0.75, 14), 2);
        assert_eq!(shell_index(0.999999999, 14), 14);
        assert_eq!(shell_index(1.0, 6), 6);
    }

    #[test]
    fn sample_max_ties_smallest_index() {
        let pts = vec![c(0.1, 0.0), c(0.2, 0.0), c(0.3, 0.0), c(0.4, 0.0)];
        let s = sample_max(&pts, |z| if z.re > 0.15 { 1.0 } else { 0.0 }).unwrap();
        assert_eq!(s.index, 1);
        assert!(sample_max(&[], |_| 0.0).is_none());
    }

    #[test]
    fn schwarz_derivative_examples() {
        let g = DiskGrid::new(8, 64).unwrap();
        let id = map("z", &g).unwrap();
        for &z in g.points().iter().step_by(37) {
            assert!((schwarz_derivative(&id, z) - c(1.0, 0.0)).norm() < 1e-15);
        }
        let m = map("mobius(complex(0.3,-0.5))", &g).unwrap();
        assert!(m.is_automorphism());
        for &z in g.points() {
            assert!((schwarz_derivative(&m, z).norm() - 1.0).abs() < 1e-9);
        }
        let half = map("z/2", &g).unwrap();
        assert_eq!(schwarz_derivative(&half, c(0.0, 0.0)), c(0.5, 0.0));
    }

    #[test]
    fn validation() {
        let g = DiskGrid::new(10, 64).unwrap();
        let half = map("z/2", &g).unwrap();
        assert!((half.sup_modulus_estimate() - 0.5).abs() < 1e-3);
        assert!(!half.is_automorphism());
        match map("2*z", &g) {
            Err(Error::NotASelfMap { witness, modulus }) => {
                assert!(modulus >= 1.0);
                assert!((2.0 * witness).norm() >= 1.0);
            }
            other => panic!("{other:?}"),
        }
        // |mobius| -> 1 toward the boundary: the estimate tracks the outer shell
        let mut prev = 0.0;
        for k in [4, 6, 8, 10] {
            let gk = DiskGrid::new(k, 64).unwrap();
            let m = map("mobius(0.3)", &gk).unwrap();
            assert!(m.sup_modulus_estimate() >= prev);
            prev = m.sup_modulus_estimate();
        }
        assert!(prev > 0.999);
    }

    #[test]
    fn modulus_bound_examples() {
        let g = DiskGrid::new(6, 64).unwrap();
        let sq = map("z^2", &g).unwrap();
        assert_eq!(schwarz_pick_modulus_bound(&sq, c(0.3, 0.4)), 0.5);
        let sh = map("(z+0.3)/2", &g).unwrap();
        assert!((schwarz_pick_modulus_bound(&sh, c(0.0, 0.0)) - 0.15).abs() < 1e-15);
        let m = map("mobius(0.5)", &g).unwrap();
        let b = schwarz_pick_modulus_bound(&m, c(0.5, 0.0));
        assert!((b - 0.8).abs() < 1e-15);
        assert!(m.eval(c(0.5, 0.0)).norm() <= b);
    }

    #[test]
    fn pseudo_hyperbolic_antipodal() {
        let d = pseudo_hyperbolic(c(0.9, 0.0), c(-0.9, 0.0));
        assert!((d - 1.8 / 1.81).abs() < 1e-15);
    }
}
