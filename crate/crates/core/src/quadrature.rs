//! Adaptive Gauss–Legendre quadrature for complex-valued integrands.
//!
//! Each panel is integrated with the 16-point rule and checked against the
//! sum over its two halves; panels failing their share of the tolerance are
//! bisected. Integrals `∫₀^z F(ζ) dζ` run along the radial segment
//! `ζ = t·z`, `t ∈ [0, 1]`.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::{Error, Result};

const ORDER: usize = 16;

/// Relative floor on the acceptance test. Near-boundary integrands such as
/// `1/(1 − rt)²` lose digits to cancellation in `1 − rt`, so panel estimates
/// carry relative noise of order `ε/(1 − r)` that no refinement removes.
const RELATIVE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Absolute error target.
    pub tol: f64,
    /// Upper limit on the number of panels.
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_panels: 40,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// Nodes and weights of the 16-point rule on `[-1, 1]`, computed once by
/// Newton iteration on `P_16`.
fn rule() -> &'static [(f64, f64); ORDER] {
    static RULE: OnceLock<[(f64, f64); ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut out = [(0.0, 0.0); ORDER];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // three-term recurrence for P_n and P_n'
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            out[i] = (-x, w);
            out[n - 1 - i] = (x, w);
        }
        out
    })
}

fn panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Complex64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule()
        .iter()
        .map(|&(x, w)| f(mid + half * x) * w)
        .fold(Complex64::new(0.0, 0.0), |acc, v| acc + v)
        * half
}

/// Adaptive integral of `f` over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Quadrature>
where
    F: Fn(f64) -> Complex64,
{
    let total = b - a;
    if total == 0.0 {
        return Ok(Quadrature {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            panels: 0,
        });
    }
    let mut pending = vec![(a, b, panel(&f, a, b))];
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut panels = 0;
    while let Some((lo, hi, coarse)) = pending.pop() {
        let mid = 0.5 * (lo + hi);
        let left = panel(&f, lo, mid);
        let right = panel(&f, mid, hi);
        let fine = left + right;
        let err = (fine - coarse).norm();
        let share = ((hi - lo) / total).abs();
        let allowed = (cfg.tol * share).max(RELATIVE_FLOOR * fine.norm());
        if err <= allowed || !err.is_finite() {
            value += fine;
            error += err;
            panels += 1;
            continue;
        }
        if panels + pending.len() + 2 > cfg.max_panels {
            let achieved = error
                + err
                + pending
                    .iter()
                    .map(|&(l, h, c)| (panel(&f, l, 0.5 * (l + h)) + panel(&f, 0.5 * (l + h), h) - c).norm())
                    .sum::<f64>();
            return Err(Error::Quadrature { achieved });
        }
        pending.push((mid, hi, right));
        pending.push((lo, mid, left));
    }
    Ok(Quadrature {
        value,
        error_estimate: error,
        panels,
    })
}

/// `∫₀^z integrand(ζ) dζ` along the segment `[0, z]`.
pub fn radial_integral<F>(integrand: F, z: Complex64, cfg: &QuadratureConfig) -> Result<Quadrature>
where
    F: Fn(Complex64) -> Complex64,
{
    let q = integrate(|t| integrand(z * t), 0.0, 1.0, &QuadratureConfig {
        tol: cfg.tol / z.norm().max(f64::MIN_POSITIVE),
        ..*cfg
    })?;
    Ok(Quadrature {
        value: q.value * z,
        error_estimate: q.error_estimate * z.norm(),
        panels: q.panels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        // degree 31 is the exactness limit of the 16-point rule
        let w_sum: f64 = rule().iter().map(|&(_, w)| w).sum();
        assert!((w_sum - 2.0).abs() < 1e-14);
        let q = panel(&|x: f64| Complex64::new(x.powi(30), 0.0), -1.0, 1.0);
        assert!((q.re - 2.0 / 31.0).abs() < 1e-15);
    }

    #[test]
    fn smooth_integral() {
        let q = integrate(|t| Complex64::new(t.exp(), 0.0), 0.0, 1.0, &Default::default()).unwrap();
        assert!((q.value.re - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn radial_monomial() {
        let z = Complex64::new(0.3, 0.4);
        let q = radial_integral(|w| w * w, z, &Default::default()).unwrap();
        assert!((q.value - z * z * z / 3.0).norm() < 1e-15);
    }

    #[test]
    fn peaked_integrand_near_boundary() {
        let r = 1.0 - 4.6e-5;
        let z = Complex64::new(r, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let q = radial_integral(|w| one / ((one - w) * (one - w)), z, &Default::default()).unwrap();
        let exact = 1.0 / (1.0 - r) - 1.0;
        assert!((q.value.re - exact).abs() < 1e-12 * exact, "{} vs {exact}", q.value.re);
    }

    #[test]
    fn panel_limit_reports_achieved_error() {
        let cfg = QuadratureConfig {
            tol: 1e-15,
            max_panels: 2,
        };
        let one = Complex64::new(1.0, 0.0);
        let r = integrate(|t| one / (1.0 - 0.999999 * t), 0.0, 1.0, &cfg);
        assert!(matches!(r, Err(Error::Quadrature { achieved }) if achieved > 0.0));
    }
}
