//! Numerical checks tied to individual proof steps: rotation averaging and
//! the logarithmic ratio under a self-map.

use num_complex::Complex64;
use serde::Serialize;

use crate::criteria::{
    evaluate_criterion_with, little_bloch_membership, Bucketing, CriterionKind, LimitTrend, LittleBloch,
    ShellSup, Thresholds,
};
use crate::diskgeom::{validate_self_map, DiskGrid, SelfMap};
use crate::series::{coeffs_default, TaylorSeries, DEFAULT_CAP};
use crate::testfns::{make_test_fn, rotation_panel, TestFamily};
use crate::{log_weight, AnalyticFn, Error, Result};

/// Boundary behaviour of one rotation field `(1 − |z|²)|g′(e^{it}z)e^{it} − g′(z)|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationField {
    pub t: f64,
    pub trend: LimitTrend,
    pub limsup: f64,
    pub shells: Vec<ShellSup>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RotationOutcome {
    /// Every rotation field decays and `g` shows little-Bloch decay.
    ConsistentWithB0,
    /// First rotation whose field stays away from zero at the boundary.
    Witness { t: f64, limsup: f64, shells: Vec<ShellSup> },
    /// All rotation fields decay while `g` itself does not: forbidden by the
    /// averaging argument.
    Inconsistent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationAverageReport {
    pub outcome: RotationOutcome,
    pub membership: LittleBloch,
    pub rotations: Vec<RotationField>,
    /// Recovered Taylor coefficients of `g`.
    pub coefficients: TaylorSeries,
    /// Largest deviation from `mean_t D_t(z) = −g′(z) + Σ_{16|n} n a_n z^{n−1}`
    /// over a ring of test points with `|z| = 1/4`.
    pub averaging_residual: f64,
}

/// Averaging check over the rotations `t = 2πk/16`.
///
/// Averaging `g′(e^{it}z)e^{it}` over sixteen equispaced angles (including
/// `t = 0`) keeps only the Taylor terms `n a_n z^{n−1}` with `16 | n`, so the
/// mean of the differences equals `−g′(z)` up to those aliased terms; this is
/// checked against the recovered coefficients. The shell data then decides
/// which side of the dichotomy `g` lies on.
pub fn rotation_average_check(
    g: &AnalyticFn,
    degree: usize,
    grid: &DiskGrid,
    th: &Thresholds,
) -> Result<RotationAverageReport> {
    if degree >= DEFAULT_CAP {
        return Err(Error::ParameterOutOfRange(format!(
            "degree {degree} exceeds the series cap {DEFAULT_CAP}"
        )));
    }
    let coefficients = coeffs_default(|z| g.eval(z), degree)?;
    let angles = rotation_panel();
    let maps: Vec<SelfMap> = angles
        .iter()
        .map(|&t| validate_self_map(make_test_fn(TestFamily::Rotation(t))?, grid))
        .collect::<Result<_>>()?;

    let averaging_residual = (0..32)
        .map(|j| {
            let z = Complex64::from_polar(0.25, 0.3 + std::f64::consts::TAU * j as f64 / 32.0);
            // t = 0 contributes D_0 = 0 to the sum of sixteen terms
            let mean = maps
                .iter()
                .map(|m| g.deriv(m.eval(z)) * m.deriv(z) - g.deriv(z))
                .sum::<Complex64>()
                / 16.0;
            let alias: Complex64 = (16..=degree)
                .step_by(16)
                .map(|n| coefficients.coeff(n) * n as f64 * z.powu(n as u32 - 1))
                .sum();
            (mean + g.deriv(z) - alias).norm()
        })
        .fold(0.0, f64::max);

    let rotations: Vec<RotationField> = angles
        .iter()
        .zip(&maps)
        .map(|(&t, m)| {
            let r = evaluate_criterion_with(CriterionKind::KJ, Some(m), g, grid, Bucketing::ByZ)?;
            Ok(RotationField {
                t,
                trend: r.limit_trend(th),
                limsup: r.boundary_limsup_estimate,
                shells: r.shell_sups,
            })
        })
        .collect::<Result<_>>()?;
    let membership = little_bloch_membership(g, grid, th).status;

    let all_zero = rotations.iter().all(|r| r.trend == LimitTrend::Zero);
    let witness = rotations.iter().find(|r| r.trend == LimitTrend::NonZero);
    let outcome = match (witness, membership) {
        _ if all_zero && membership == LittleBloch::NotInB0Evidence => RotationOutcome::Inconsistent,
        (Some(w), _) => RotationOutcome::Witness {
            t: w.t,
            limsup: w.limsup,
            shells: w.shells.clone(),
        },
        (None, LittleBloch::InB0) if all_zero => RotationOutcome::ConsistentWithB0,
        _ => RotationOutcome::Inconclusive,
    };
    Ok(RotationAverageReport {
        outcome,
        membership,
        rotations,
        coefficients,
        averaging_residual,
    })
}

/// `ln(2/(1 − |φ(z)|²)) / ln(2/(1 − |z|²))`.
pub fn log_ratio(phi: &SelfMap, z: Complex64) -> f64 {
    log_weight(phi.eval(z)) / log_weight(z)
}

/// Allowed excess of the log ratio over 1 on shell `k`: `0.1·2^(−k/2)`.
pub fn hospital_slack(k: usize) -> f64 {
    0.1 * 2f64.powf(-(k as f64) / 2.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HospitalShell {
    pub shell: usize,
    pub max_ratio: f64,
    pub arg: Complex64,
    pub slack: f64,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HospitalReport {
    pub shells: Vec<HospitalShell>,
    /// Largest ratio over the three outermost shells.
    pub outer_max: f64,
    /// Whether the three outermost shells stay within their slack.
    pub outer_within: bool,
}

/// Per-shell maxima of [`log_ratio`] with shells taken in `|z|`.
pub fn hospital_ratio_check(phi: &SelfMap, grid: &DiskGrid) -> HospitalReport {
    let shells: Vec<HospitalShell> = (0..=grid.max_shell())
        .map(|k| {
            let (max_ratio, arg) = grid
                .shell_points(k)
                .iter()
                .map(|&z| (log_ratio(phi, z), z))
                .fold((f64::NEG_INFINITY, Complex64::new(0.0, 0.0)), |a, b| if b.0 > a.0 { b } else { a });
            let slack = hospital_slack(k);
            HospitalShell {
                shell: k,
                max_ratio,
                arg,
                slack,
                within: max_ratio <= 1.0 + slack,
            }
        })
        .collect();
    let outer = &shells[shells.len().saturating_sub(3)..];
    HospitalReport {
        outer_max: outer.iter().map(|s| s.max_ratio).fold(f64::NEG_INFINITY, f64::max),
        outer_within: outer.iter().all(|s| s.within),
        shells,
    }
}
