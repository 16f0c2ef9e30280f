//! The operators `C_φ`, `J_g`, `I_g`, the commutators `C_φT_g − T_gC_φ`, and
//! Bloch / `H∞` norm estimates.
//!
//! Seminorms are maxima over sample points and therefore lower bounds of the
//! true suprema. Commutator seminorms always use the closed-form derivative of
//! the commutator image; the two-integral form in [`commutator_value`] exists
//! for cross-checking that derivative.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diskgeom::{sample_max, DiskGrid, SelfMap, SupEstimate};
use crate::quadrature::{radial_integral, QuadratureConfig};
use crate::{one_minus_abs2, AnalyticFn, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorKind {
    Composition,
    VolterraJ,
    IntegralI,
    CommutatorJ,
    CommutatorI,
}

/// Which integral operator the commutator with `C_φ` is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CommutatorKind {
    /// `C_φ I_g − I_g C_φ`
    I,
    /// `C_φ J_g − J_g C_φ`
    J,
}

impl std::str::FromStr for CommutatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" | "CommutatorI" => Ok(CommutatorKind::I),
            "J" | "j" | "CommutatorJ" => Ok(CommutatorKind::J),
            _ => Err(Error::InvalidArgument(format!("unknown commutator kind `{s}`"))),
        }
    }
}

impl From<CommutatorKind> for OperatorKind {
    fn from(k: CommutatorKind) -> Self {
        match k {
            CommutatorKind::I => OperatorKind::CommutatorI,
            CommutatorKind::J => OperatorKind::CommutatorJ,
        }
    }
}

fn check_inside(z: Complex64) -> Result<()> {
    if z.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("|z| must be < 1, got {z}")))
    }
}

/// `C_φ f(z) = f(φ(z))`.
pub fn apply_composition(phi: &SelfMap, f: &AnalyticFn, z: Complex64) -> Complex64 {
    f.eval(phi.eval(z))
}

/// `J_g f(z) = ∫₀^z f(ζ) g′(ζ) dζ`.
pub fn apply_jg(g: &AnalyticFn, f: &AnalyticFn, z: Complex64, cfg: &QuadratureConfig) -> Result<Complex64> {
    check_inside(z)?;
    Ok(radial_integral(|w| f.eval(w) * g.deriv(w), z, cfg)?.value)
}

/// `I_g f(z) = ∫₀^z f′(ζ) g(ζ) dζ`.
pub fn apply_ig(g: &AnalyticFn, f: &AnalyticFn, z: Complex64, cfg: &QuadratureConfig) -> Result<Complex64> {
    check_inside(z)?;
    Ok(radial_integral(|w| f.deriv(w) * g.eval(w), z, cfg)?.value)
}

/// Value of any of the operators at `z`. `phi` is required for the
/// composition and commutator kinds.
pub fn apply_operator(
    kind: OperatorKind,
    phi: Option<&SelfMap>,
    g: &AnalyticFn,
    f: &AnalyticFn,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let need_phi = || phi.ok_or_else(|| Error::InvalidArgument(format!("{kind:?} needs a self-map")));
    match kind {
        OperatorKind::Composition => Ok(apply_composition(need_phi()?, f, z)),
        OperatorKind::VolterraJ => apply_jg(g, f, z, cfg),
        OperatorKind::IntegralI => apply_ig(g, f, z, cfg),
        OperatorKind::CommutatorI => commutator_value(CommutatorKind::I, need_phi()?, g, f, z, cfg),
        OperatorKind::CommutatorJ => commutator_value(CommutatorKind::J, need_phi()?, g, f, z, cfg),
    }
}

/// `(C_φ T_g − T_g C_φ) f (z)` by direct evaluation of both integrals:
///
/// - `I`: `∫₀^{φ(z)} f′ g − ∫₀^z (f∘φ)′ g`
/// - `J`: `∫₀^{φ(z)} f g′ − ∫₀^z (f∘φ) g′`
pub fn commutator_value(
    kind: CommutatorKind,
    phi: &SelfMap,
    g: &AnalyticFn,
    f: &AnalyticFn,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    check_inside(z)?;
    let w = phi.eval(z);
    match kind {
        CommutatorKind::I => {
            let outer = radial_integral(|s| f.deriv(s) * g.eval(s), w, cfg)?.value;
            let inner = radial_integral(
                |s| f.deriv(phi.eval(s)) * phi.deriv(s) * g.eval(s),
                z,
                cfg,
            )?
            .value;
            Ok(outer - inner)
        }
        CommutatorKind::J => {
            let outer = radial_integral(|s| f.eval(s) * g.deriv(s), w, cfg)?.value;
            let inner = radial_integral(|s| f.eval(phi.eval(s)) * g.deriv(s), z, cfg)?.value;
            Ok(outer - inner)
        }
    }
}

/// Closed-form derivative of the commutator image:
///
/// - `I`: `φ′(z) f′(φ(z)) (g(φ(z)) − g(z))`
/// - `J`: `f(φ(z)) ((g∘φ)′(z) − g′(z))`
pub fn commutator_derivative(
    kind: CommutatorKind,
    phi: &SelfMap,
    g: &AnalyticFn,
    f: &AnalyticFn,
    z: Complex64,
) -> Complex64 {
    let w = phi.eval(z);
    match kind {
        CommutatorKind::I => phi.deriv(z) * f.deriv(w) * (g.eval(w) - g.eval(z)),
        CommutatorKind::J => f.eval(w) * (g.deriv(w) * phi.deriv(z) - g.deriv(z)),
    }
}

/// The `f`-independent part of a commutator's Bloch density, precomputed on a
/// sample set. For `I` the density at `z` is `|weight(z)|·|f′(φ(z))|` with
/// `weight = (1 − |z|²) φ′ (g∘φ − g)`; for `J` it is `|weight(z)|·|f(φ(z))|`
/// with `weight = (1 − |z|²)((g∘φ)′ − g′)`.
#[derive(Debug, Clone)]
pub struct CommutatorField {
    kind: CommutatorKind,
    points: Vec<Complex64>,
    images: Vec<Complex64>,
    weights: Vec<f64>,
}

impl CommutatorField {
    pub fn new(kind: CommutatorKind, phi: &SelfMap, g: &AnalyticFn, points: &[Complex64]) -> Self {
        let (images, weights): (Vec<_>, Vec<_>) = points
            .par_iter()
            .map(|&z| {
                let w = phi.eval(z);
                let weight = match kind {
                    CommutatorKind::I => phi.deriv(z) * (g.eval(w) - g.eval(z)),
                    CommutatorKind::J => g.deriv(w) * phi.deriv(z) - g.deriv(z),
                };
                (w, one_minus_abs2(z) * weight.norm())
            })
            .unzip();
        Self {
            kind,
            points: points.to_vec(),
            images,
            weights,
        }
    }

    pub fn kind(&self) -> CommutatorKind {
        self.kind
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// `φ(z)` at each sample point.
    pub fn images(&self) -> &[Complex64] {
        &self.images
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Sampled `‖(C_φT_g − T_gC_φ) f‖_*`.
    pub fn seminorm(&self, f: &AnalyticFn) -> SupEstimate {
        match self.kind {
            CommutatorKind::I => self.seminorm_with(|w| f.deriv(w).norm()),
            CommutatorKind::J => self.seminorm_with(|w| f.eval(w).norm()),
        }
    }

    /// Seminorm with the `f` factor supplied as a modulus function of `φ(z)`:
    /// `|f′(w)|` for `I`, `|f(w)|` for `J`.
    pub fn seminorm_with<F>(&self, f_factor: F) -> SupEstimate
    where
        F: Fn(Complex64) -> f64 + Sync,
    {
        let idx: Vec<usize> = (0..self.points.len()).collect();
        let best = idx
            .par_iter()
            .map(|&i| (self.weights[i] * f_factor(self.images[i]), i))
            .filter(|(v, _)| !v.is_nan())
            .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
        match best {
            Some((value, index)) => SupEstimate {
                value,
                arg: self.points[index],
                index,
            },
            None => SupEstimate {
                value: 0.0,
                arg: Complex64::new(0.0, 0.0),
                index: 0,
            },
        }
    }
}

/// `max_grid (1 − |z|²)|(C_φT_g − T_gC_φ)′ f(z)|`.
pub fn commutator_seminorm(
    kind: CommutatorKind,
    phi: &SelfMap,
    g: &AnalyticFn,
    f: &AnalyticFn,
    grid: &DiskGrid,
) -> Result<SupEstimate> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    Ok(CommutatorField::new(kind, phi, g, grid.points()).seminorm(f))
}

/// `(1 − |z|²)|f′(z)|`.
#[inline]
pub fn bloch_density(f: &AnalyticFn, z: Complex64) -> f64 {
    one_minus_abs2(z) * f.deriv(z).norm()
}

/// Sampled Bloch seminorm over an arbitrary point set (no refinement).
pub fn bloch_seminorm_at(f: &AnalyticFn, points: &[Complex64]) -> Result<SupEstimate> {
    sample_max(points, |z| bloch_density(f, z)).ok_or(Error::EmptyGrid)
}

/// Bloch seminorm `sup (1 − |z|²)|f′(z)|`: the grid maximum, then a local
/// pattern search started from the best point of every shell. Each value
/// reported is attained at a point of the disk, so the estimate stays a lower
/// bound of the true supremum.
pub fn bloch_seminorm(f: &AnalyticFn, grid: &DiskGrid) -> Result<SupEstimate> {
    let field = |z: Complex64| bloch_density(f, z);
    let mut best = bloch_seminorm_at(f, grid.points())?;
    for k in 0..=grid.max_shell() {
        let range = grid.shell_range(k);
        let Some(start) = sample_max(&grid.points()[range.clone()], field) else {
            continue;
        };
        let refined = refine_max(&field, start.arg, start.value);
        if refined.0 > best.value {
            best = SupEstimate {
                value: refined.0,
                arg: refined.1,
                index: range.start + start.index,
            };
        }
    }
    Ok(best)
}

/// Bloch norm `|f(0)| + ‖f‖_*`.
pub fn bloch_norm(f: &AnalyticFn, grid: &DiskGrid) -> Result<f64> {
    Ok(f.eval(Complex64::new(0.0, 0.0)).norm() + bloch_seminorm(f, grid)?.value)
}

/// Sampled `H∞` norm: `max |f(z)|` over the grid, a lower estimate of the
/// supremum.
pub fn hinf_norm(f: &AnalyticFn, grid: &DiskGrid) -> Result<SupEstimate> {
    hinf_norm_at(f, grid.points())
}

pub fn hinf_norm_at(f: &AnalyticFn, points: &[Complex64]) -> Result<SupEstimate> {
    sample_max(points, |z| f.eval(z).norm()).ok_or(Error::EmptyGrid)
}

/// Compass search for a local maximum of `field` inside the disk. Steps scale
/// with the distance to the boundary so the search can resolve features near
/// the unit circle.
pub(crate) fn refine_max<F>(field: &F, start: Complex64, start_value: f64) -> (f64, Complex64)
where
    F: Fn(Complex64) -> f64,
{
    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;
    const DIRS: [(f64, f64); 8] = [
        (1.0, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (S, S),
        (-S, S),
        (S, -S),
        (-S, -S),
    ];
    let mut z = start;
    let mut value = start_value;
    let mut step = 0.25;
    let mut iters = 0;
    while step > 1e-10 && iters < 4000 {
        iters += 1;
        let scale = step * (1.0 - z.norm()).max(1e-300);
        let mut moved = false;
        for (dx, dy) in DIRS {
            let cand = z + Complex64::new(dx * scale, dy * scale);
            if cand.norm() >= 1.0 {
                continue;
            }
            let v = field(cand);
            if v > value {
                value = v;
                z = cand;
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (value, z)
}
