//! Criterion fields, their shell-by-shell suprema, and the reduction of those
//! estimates to verdicts for each boundedness / compactness statement.
//!
//! A criterion field is evaluated at every grid point and bucketed into
//! shells either by `|φ(z)|` (the limit variable of `lim_{|φ(z)|→1}`
//! conditions) or by `|z|` (for `lim_{|z|→1}` conditions). The boundary
//! limsup is estimated by the largest of the last three nonempty shells.
//! When the sampled `sup |φ|` stays below `1 − 2^(−K)` by the grid resolution
//! the set `{|φ(z)| → 1}` is empty and the limit condition holds vacuously.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diskgeom::{schwarz_derivative, shell_index, DiskGrid, SelfMap};
use crate::{log_weight, one_minus_abs2, AnalyticFn, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriterionKind {
    /// `|φ^#(z)|·|g(φ(z)) − g(z)|`
    KI,
    /// `(1 − |z|²)|(g∘φ)′(z) − g′(z)|`
    KJ,
    /// `KJ · ln(2/(1 − |φ(z)|²))`
    KJlog,
    /// `(1 − |z|²)|g′(z)| ln(2/(1 − |z|²))`, read as a limit
    Lg,
    /// The same field as `Lg`, read as a supremum
    LgLogBoundedness,
}

impl CriterionKind {
    pub fn needs_phi(self) -> bool {
        matches!(self, CriterionKind::KI | CriterionKind::KJ | CriterionKind::KJlog)
    }

    pub fn default_bucketing(self) -> Bucketing {
        if self.needs_phi() {
            Bucketing::ByPhi
        } else {
            Bucketing::ByZ
        }
    }
}

impl FromStr for CriterionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "KI" => Ok(Self::KI),
            "KJ" => Ok(Self::KJ),
            "KJlog" => Ok(Self::KJlog),
            "Lg" => Ok(Self::Lg),
            "LgLogBoundedness" => Ok(Self::LgLogBoundedness),
            _ => Err(Error::InvalidArgument(format!("unknown criterion `{s}`"))),
        }
    }
}

impl fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Field carried by a shell report: a criterion, or one of the auxiliary
/// membership fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    Criterion(CriterionKind),
    /// `(1 − |z|²)|g′(z)|`, little-Bloch membership.
    BlochDensity,
    /// `|g(z)|`, `H∞` membership.
    Modulus,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Criterion(k) => write!(f, "{k}"),
            Field::BlochDensity => write!(f, "BlochDensity"),
            Field::Modulus => write!(f, "Modulus"),
        }
    }
}

/// Variable whose modulus assigns a grid point to a shell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bucketing {
    ByPhi,
    ByZ,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// A field whose last three shell sups increase past this is divergent.
    pub divergence: f64,
    /// Boundary limsups below this (with a non-increasing trend) count as zero.
    pub compact_tol: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            divergence: 1e3,
            compact_tol: 1e-2,
        }
    }
}

/// Pointwise criterion value. `phi` is required for `KI`, `KJ`, `KJlog`.
pub fn criterion_value(
    kind: CriterionKind,
    phi: Option<&SelfMap>,
    g: &AnalyticFn,
    z: Complex64,
) -> Result<f64> {
    match (kind, phi) {
        (CriterionKind::Lg | CriterionKind::LgLogBoundedness, _) => Ok(lg_value(g, z)),
        (_, Some(phi)) => Ok(phi_value(kind, phi, g, z, phi.eval(z))),
        (_, None) => Err(Error::InvalidArgument(format!("{kind} needs a self-map"))),
    }
}

fn lg_value(g: &AnalyticFn, z: Complex64) -> f64 {
    one_minus_abs2(z) * g.deriv(z).norm() * log_weight(z)
}

fn phi_value(kind: CriterionKind, phi: &SelfMap, g: &AnalyticFn, z: Complex64, w: Complex64) -> f64 {
    match kind {
        CriterionKind::KI => {
            let diff = g.eval(w) - g.eval(z);
            if diff == Complex64::new(0.0, 0.0) {
                return 0.0;
            }
            schwarz_derivative(phi, z).norm() * diff.norm()
        }
        CriterionKind::KJ => kj_value(phi, g, z, w),
        CriterionKind::KJlog => kj_value(phi, g, z, w) * log_weight(w),
        CriterionKind::Lg | CriterionKind::LgLogBoundedness => lg_value(g, z),
    }
}

fn kj_value(phi: &SelfMap, g: &AnalyticFn, z: Complex64, w: Complex64) -> f64 {
    one_minus_abs2(z) * (g.deriv(w) * phi.deriv(z) - g.deriv(z)).norm()
}

/// Supremum of a field over the grid points falling in one shell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShellSup {
    pub shell: usize,
    pub sup: f64,
    pub arg: Complex64,
    pub count: usize,
}

/// Verdict on a `sup < ∞` condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Boundedness {
    Bounded,
    Divergent,
    Undetermined,
}

/// Verdict on a `lim (…) = 0` condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LimitTrend {
    /// Either vacuous or the last three shell sups are below `compact_tol`
    /// and non-increasing.
    Zero,
    /// Every one of the last three shell sups is at least `compact_tol`.
    NonZero,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub field: Field,
    pub bucketing: Bucketing,
    pub sup_value: f64,
    pub arg_sup: Complex64,
    /// Nonempty shells only, in increasing shell order.
    pub shell_sups: Vec<ShellSup>,
    pub boundary_limsup_estimate: f64,
    pub vacuous_boundary: bool,
    /// Last three shell sups increase without decaying increments.
    pub growth_trend: bool,
}

impl CriterionReport {
    fn from_values(
        field: Field,
        bucketing: Bucketing,
        grid: &DiskGrid,
        values: &[f64],
        moduli: &[f64],
        vacuous_boundary: bool,
    ) -> Self {
        let k_max = grid.max_shell();
        let mut shells: Vec<Option<(f64, usize, usize)>> = vec![None; k_max + 1];
        let mut best: Option<(f64, usize)> = None;
        for (i, (&v, &m)) in values.iter().zip(moduli).enumerate() {
            if v.is_nan() {
                continue;
            }
            // strict comparison keeps the smallest index on ties
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, i));
            }
            let k = shell_index(m, k_max);
            match &mut shells[k] {
                Some((s, idx, n)) => {
                    *n += 1;
                    if v > *s {
                        *s = v;
                        *idx = i;
                    }
                }
                slot @ None => *slot = Some((v, i, 1)),
            }
        }
        let shell_sups: Vec<ShellSup> = shells
            .iter()
            .enumerate()
            .filter_map(|(k, s)| {
                s.map(|(sup, idx, count)| ShellSup {
                    shell: k,
                    sup,
                    arg: grid.points()[idx],
                    count,
                })
            })
            .collect();
        let (sup_value, arg_sup) = best
            .map(|(v, i)| (v, grid.points()[i]))
            .unwrap_or((0.0, Complex64::new(0.0, 0.0)));
        let tail: Vec<f64> = last_three(&shell_sups).iter().map(|s| s.sup).collect();
        let boundary_limsup_estimate = if vacuous_boundary {
            0.0
        } else {
            tail.iter().copied().fold(0.0, f64::max)
        };
        let growth_trend = tail.len() == 3 && {
            let (d1, d2) = (tail[1] - tail[0], tail[2] - tail[1]);
            d1 > 0.0 && d2 > 0.0 && d2 >= 0.75 * d1 && d2 > 1e-3 * tail[2]
        };
        Self {
            field,
            bucketing,
            sup_value,
            arg_sup,
            shell_sups,
            boundary_limsup_estimate,
            vacuous_boundary,
            growth_trend,
        }
    }

    /// Up to three outermost nonempty shells.
    pub fn tail(&self) -> &[ShellSup] {
        last_three(&self.shell_sups)
    }

    pub fn boundedness(&self, th: &Thresholds) -> Boundedness {
        if !self.sup_value.is_finite() {
            return Boundedness::Divergent;
        }
        let tail = self.tail();
        let increasing = tail.len() == 3 && tail.windows(2).all(|w| w[1].sup > w[0].sup);
        if increasing && tail[2].sup > th.divergence {
            Boundedness::Divergent
        } else if self.sup_value < th.divergence && !self.growth_trend {
            Boundedness::Bounded
        } else {
            Boundedness::Undetermined
        }
    }

    pub fn limit_trend(&self, th: &Thresholds) -> LimitTrend {
        if self.vacuous_boundary {
            return LimitTrend::Zero;
        }
        let tail = self.tail();
        if tail.len() < 3 {
            return LimitTrend::Undetermined;
        }
        let non_increasing = tail.windows(2).all(|w| w[1].sup <= w[0].sup * (1.0 + 1e-9) + 1e-15);
        if self.boundary_limsup_estimate < th.compact_tol && non_increasing {
            LimitTrend::Zero
        } else if tail.iter().all(|s| s.sup >= th.compact_tol) {
            LimitTrend::NonZero
        } else {
            LimitTrend::Undetermined
        }
    }

    /// Point in the outermost nonempty shell where the field peaks.
    pub fn boundary_witness(&self) -> Option<Complex64> {
        self.shell_sups.last().map(|s| s.arg)
    }
}

fn last_three(s: &[ShellSup]) -> &[ShellSup] {
    &s[s.len().saturating_sub(3)..]
}

/// Whether the limit set `{|φ(z)| → 1}` is empty at the grid's resolution.
fn vacuous(phi: &SelfMap, grid_max: f64, grid: &DiskGrid) -> bool {
    let res = grid.resolution();
    let est = phi.sup_modulus_estimate().max((grid_max + res).min(1.0));
    est < 1.0 - res
}

/// [`evaluate_criterion_with`] using the kind's natural bucketing.
pub fn evaluate_criterion(
    kind: CriterionKind,
    phi: Option<&SelfMap>,
    g: &AnalyticFn,
    grid: &DiskGrid,
) -> Result<CriterionReport> {
    evaluate_criterion_with(kind, phi, g, grid, kind.default_bucketing())
}

/// Evaluates a criterion on the grid and reduces it shell by shell.
pub fn evaluate_criterion_with(
    kind: CriterionKind,
    phi: Option<&SelfMap>,
    g: &AnalyticFn,
    grid: &DiskGrid,
    bucketing: Bucketing,
) -> Result<CriterionReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if kind.needs_phi() && phi.is_none() {
        return Err(Error::InvalidArgument(format!("{kind} needs a self-map")));
    }
    if bucketing == Bucketing::ByPhi && phi.is_none() {
        return Err(Error::InvalidArgument("bucketing by |phi| needs a self-map".into()));
    }
    let (values, phi_moduli): (Vec<f64>, Vec<f64>) = grid
        .points()
        .par_iter()
        .map(|&z| match phi {
            Some(p) => {
                let w = p.eval(z);
                (phi_value(kind, p, g, z, w), w.norm())
            }
            None => (lg_value(g, z), z.norm()),
        })
        .unzip();
    let (moduli, vac) = match bucketing {
        Bucketing::ByPhi => {
            let p = phi.expect("checked above");
            let grid_max = phi_moduli.iter().copied().fold(0.0, f64::max);
            (phi_moduli, vacuous(p, grid_max, grid))
        }
        Bucketing::ByZ => (grid.points().iter().map(|z| z.norm()).collect(), false),
    };
    Ok(CriterionReport::from_values(
        Field::Criterion(kind),
        bucketing,
        grid,
        &values,
        &moduli,
        vac,
    ))
}

fn auxiliary_report(field: Field, g: &AnalyticFn, grid: &DiskGrid) -> CriterionReport {
    let values: Vec<f64> = grid
        .points()
        .par_iter()
        .map(|&z| match field {
            Field::Modulus => g.eval(z).norm(),
            _ => one_minus_abs2(z) * g.deriv(z).norm(),
        })
        .collect();
    let moduli: Vec<f64> = grid.points().iter().map(|z| z.norm()).collect();
    CriterionReport::from_values(field, Bucketing::ByZ, grid, &values, &moduli, false)
}

/// Shell report of `|g|`; its boundedness decides `g ∈ H∞`.
pub fn hinf_membership(g: &AnalyticFn, grid: &DiskGrid) -> CriterionReport {
    auxiliary_report(Field::Modulus, g, grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LittleBloch {
    InB0,
    NotInB0Evidence,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LittleBlochReport {
    pub status: LittleBloch,
    pub report: CriterionReport,
    pub witness: Option<Complex64>,
}

/// Little-Bloch membership from the shell sups of `(1 − |z|²)|g′(z)|`.
pub fn little_bloch_membership(g: &AnalyticFn, grid: &DiskGrid, th: &Thresholds) -> LittleBlochReport {
    let report = auxiliary_report(Field::BlochDensity, g, grid);
    let (status, witness) = match report.limit_trend(th) {
        LimitTrend::Zero => (LittleBloch::InB0, None),
        LimitTrend::NonZero => (LittleBloch::NotInB0Evidence, report.boundary_witness()),
        LimitTrend::Undetermined => (LittleBloch::Inconclusive, None),
    };
    LittleBlochReport {
        status,
        report,
        witness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    T3_1,
    T3_2,
    C3_3,
    C3_4,
    T4_1a,
    T4_1b,
    C4_2,
    C4_3,
    P4_6,
    P4_7,
    T4_9,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::T3_1,
        TheoremId::T3_2,
        TheoremId::C3_3,
        TheoremId::C3_4,
        TheoremId::T4_1a,
        TheoremId::T4_1b,
        TheoremId::C4_2,
        TheoremId::C4_3,
        TheoremId::P4_6,
        TheoremId::P4_7,
        TheoremId::T4_9,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TheoremId::T3_1 => "T3.1",
            TheoremId::T3_2 => "T3.2",
            TheoremId::C3_3 => "C3.3",
            TheoremId::C3_4 => "C3.4",
            TheoremId::T4_1a => "T4.1a",
            TheoremId::T4_1b => "T4.1b",
            TheoremId::C4_2 => "C4.2",
            TheoremId::C4_3 => "C4.3",
            TheoremId::P4_6 => "P4.6",
            TheoremId::P4_7 => "P4.7",
            TheoremId::T4_9 => "T4.9",
        }
    }

    /// One-line statement of what the verdict decides.
    pub fn statement(self) -> &'static str {
        match self {
            TheoremId::T3_1 => "C_phi I_g - I_g C_phi bounded on B iff sup KI < inf",
            TheoremId::T3_2 => "g in H-inf: C_phi I_g - I_g C_phi compact on B iff KI -> 0 as |phi(z)| -> 1",
            TheoremId::C3_3 => "H-inf -> B: I-commutator bounded iff sup KI < inf, compact iff KI -> 0 as |phi(z)| -> 1",
            TheoremId::C3_4 => "X -> B0: I-commutator bounded iff compact iff KI -> 0 as |z| -> 1",
            TheoremId::T4_1a => "C_phi J_g - J_g C_phi bounded H-inf -> B iff sup KJ < inf",
            TheoremId::T4_1b => "C_phi J_g - J_g C_phi compact H-inf -> B iff sup KJ < inf and KJ -> 0 as |phi(z)| -> 1",
            TheoremId::C4_2 => "H-inf -> B0: J-commutator bounded iff compact iff KJ -> 0 as |z| -> 1",
            TheoremId::C4_3 => "g in B0 implies the J-commutator is compact H-inf -> B for every phi",
            TheoremId::P4_6 => "C_phi J_g - J_g C_phi bounded on B iff sup KJlog < inf",
            TheoremId::P4_7 => "C_phi J_g - J_g C_phi compact on B0 iff sup KJlog < inf and KJlog -> 0 as |phi(z)| -> 1",
            TheoremId::T4_9 => "J_g bounded on B: J-commutator compact on B for every phi iff Lg -> 0 as |z| -> 1",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for TheoremId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for TheoremId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.label().eq_ignore_ascii_case(s) || format!("{t:?}").eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem id `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Conclusion {
    Bounded,
    NotBoundedEvidence,
    Compact,
    NotCompactEvidence,
    Inconclusive,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub theorem: TheoremId,
    pub conclusion: Conclusion,
    pub evidence: Vec<CriterionReport>,
    pub thresholds: Thresholds,
    pub witness: Option<Complex64>,
    pub notes: Vec<String>,
}

const ONE_SIDED: &str = "suprema are grid maxima, i.e. lower bounds of the true suprema";

fn bounded_verdict(r: &CriterionReport, th: &Thresholds) -> (Conclusion, Option<Complex64>) {
    match r.boundedness(th) {
        Boundedness::Bounded => (Conclusion::Bounded, None),
        Boundedness::Divergent => (Conclusion::NotBoundedEvidence, Some(r.arg_sup)),
        Boundedness::Undetermined => (Conclusion::Inconclusive, None),
    }
}

fn compact_verdict(r: &CriterionReport, th: &Thresholds) -> (Conclusion, Option<Complex64>) {
    match r.limit_trend(th) {
        LimitTrend::Zero if r.sup_value.is_finite() => (Conclusion::Compact, None),
        LimitTrend::NonZero => (Conclusion::NotCompactEvidence, r.boundary_witness()),
        _ => (Conclusion::Inconclusive, None),
    }
}

/// Compactness that also needs the supremum condition.
fn bounded_and_compact(r: &CriterionReport, th: &Thresholds) -> (Conclusion, Option<Complex64>) {
    match r.boundedness(th) {
        Boundedness::Divergent => (Conclusion::NotBoundedEvidence, Some(r.arg_sup)),
        Boundedness::Bounded => compact_verdict(r, th),
        Boundedness::Undetermined => match compact_verdict(r, th) {
            (Conclusion::NotCompactEvidence, w) => (Conclusion::NotCompactEvidence, w),
            _ => (Conclusion::Inconclusive, None),
        },
    }
}

/// Reduces the criterion reports of one statement to a verdict.
pub fn classify(
    theorem: TheoremId,
    phi: &SelfMap,
    g: &AnalyticFn,
    grid: &DiskGrid,
    th: &Thresholds,
) -> Result<Verdict> {
    let mut notes = vec![ONE_SIDED.to_string()];
    let mut evidence = Vec::new();
    let eval = |kind, bucketing| evaluate_criterion_with(kind, Some(phi), g, grid, bucketing);
    let (conclusion, witness) = match theorem {
        TheoremId::T3_1 => {
            let r = eval(CriterionKind::KI, Bucketing::ByPhi)?;
            let v = bounded_verdict(&r, th);
            evidence.push(r);
            v
        }
        TheoremId::T3_2 => {
            let m = hinf_membership(g, grid);
            if m.boundedness(th) == Boundedness::Divergent {
                return Err(Error::PreconditionFailed(format!(
                    "g is not in H-inf: |g| reaches {:e} with growing shell sups",
                    m.sup_value
                )));
            }
            if m.boundedness(th) == Boundedness::Undetermined {
                notes.push("H-inf membership of g is undetermined".into());
            }
            evidence.push(m);
            let r = eval(CriterionKind::KI, Bucketing::ByPhi)?;
            let v = compact_verdict(&r, th);
            if r.vacuous_boundary {
                notes.push("limit set |phi(z)| -> 1 is empty; condition holds vacuously".into());
            }
            evidence.push(r);
            v
        }
        TheoremId::C3_3 => {
            let r = eval(CriterionKind::KI, Bucketing::ByPhi)?;
            let v = match r.boundedness(th) {
                Boundedness::Divergent => (Conclusion::NotBoundedEvidence, Some(r.arg_sup)),
                _ => compact_verdict(&r, th),
            };
            evidence.push(r);
            v
        }
        TheoremId::C3_4 => {
            let r = eval(CriterionKind::KI, Bucketing::ByZ)?;
            let v = compact_verdict(&r, th);
            evidence.push(r);
            v
        }
        TheoremId::T4_1a => {
            let r = eval(CriterionKind::KJ, Bucketing::ByPhi)?;
            let v = bounded_verdict(&r, th);
            evidence.push(r);
            v
        }
        TheoremId::T4_1b => {
            let r = eval(CriterionKind::KJ, Bucketing::ByPhi)?;
            let v = bounded_and_compact(&r, th);
            evidence.push(r);
            v
        }
        TheoremId::C4_2 => {
            let r = eval(CriterionKind::KJ, Bucketing::ByZ)?;
            let v = compact_verdict(&r, th);
            evidence.push(r);
            v
        }
        TheoremId::C4_3 => {
            let lb = little_bloch_membership(g, grid, th);
            evidence.push(lb.report);
            match lb.status {
                LittleBloch::InB0 => (Conclusion::Compact, None),
                LittleBloch::NotInB0Evidence => {
                    notes.push("g shows no little-Bloch decay; this statement is sufficiency only".into());
                    (Conclusion::Inconclusive, lb.witness)
                }
                LittleBloch::Inconclusive => (Conclusion::Inconclusive, None),
            }
        }
        TheoremId::P4_6 => {
            let r = eval(CriterionKind::KJlog, Bucketing::ByPhi)?;
            let v = bounded_verdict(&r, th);
            evidence.push(r);
            v
        }
        TheoremId::P4_7 => {
            let r = eval(CriterionKind::KJlog, Bucketing::ByPhi)?;
            let v = bounded_and_compact(&r, th);
            evidence.push(r);
            v
        }
        TheoremId::T4_9 => {
            let pre = evaluate_criterion(CriterionKind::LgLogBoundedness, None, g, grid)?;
            if pre.boundedness(th) == Boundedness::Divergent {
                return Err(Error::PreconditionFailed(format!(
                    "J_g is not bounded on B: Lg field reaches {:e} with growing shell sups",
                    pre.sup_value
                )));
            }
            let lg = evaluate_criterion(CriterionKind::Lg, None, g, grid)?;
            let per_map = eval(CriterionKind::KJlog, Bucketing::ByPhi)?;
            let mut v = compact_verdict(&lg, th);
            if v.0 == Conclusion::Compact && per_map.limit_trend(th) == LimitTrend::NonZero {
                notes.push("Lg decays but KJlog for this phi does not; treating as inconclusive".into());
                v = (Conclusion::Inconclusive, per_map.boundary_witness());
            }
            evidence.push(pre);
            evidence.push(lg);
            evidence.push(per_map);
            v
        }
    };
    Ok(Verdict {
        theorem,
        conclusion,
        evidence,
        thresholds: *th,
        witness,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diskgeom::validate_self_map;

    fn af(s: &str) -> AnalyticFn {
        AnalyticFn::parse(s).unwrap()
    }

    fn map(s: &str, grid: &DiskGrid) -> SelfMap {
        validate_self_map(af(s), grid).unwrap()
    }

    /// Dense radial maximization of r(1 − r²)/(4 − r²), the KI field of
    /// φ = z/2, g = z along any ray.
    fn radial_oracle() -> (f64, f64) {
        let n = 1_000_000;
        (1..n)
            .map(|i| {
                let r = i as f64 / n as f64;
                (r * (1.0 - r * r) / (4.0 - r * r), r)
            })
            .fold((0.0, 0.0), |a, b| if b.0 > a.0 { b } else { a })
    }

    #[test]
    fn ki_pointwise() {
        let grid = DiskGrid::new(6, 64).unwrap();
        let id = map("z", &grid);
        let g = af("exp(z)");
        assert_eq!(
            criterion_value(CriterionKind::KI, Some(&id), &g, Complex64::new(0.3, 0.2)).unwrap(),
            0.0
        );
        let half = map("z/2", &grid);
        let (vmax, rmax) = radial_oracle();
        assert!((rmax - 0.61361).abs() < 1e-5);
        assert!((vmax - 0.10559).abs() < 1e-5);
        let v = criterion_value(CriterionKind::KI, Some(&half), &af("z"), Complex64::new(rmax, 0.0)).unwrap();
        assert!((v - vmax).abs() < 1e-14);
        assert!(criterion_value(CriterionKind::KI, None, &g, Complex64::new(0.1, 0.0)).is_err());
    }

    #[test]
    fn lg_vanishes_for_identity_symbol() {
        let g = af("z");
        let mut prev = f64::INFINITY;
        for k in 4..20 {
            let r = 1.0 - 0.5f64.powi(k);
            let v = criterion_value(CriterionKind::Lg, None, &g, Complex64::new(r, 0.0)).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 1e-4);
    }

    #[test]
    fn worked_example_report() {
        let grid = DiskGrid::default();
        let half = map("z/2", &grid);
        let r = evaluate_criterion(CriterionKind::KI, Some(&half), &af("z"), &grid).unwrap();
        assert!((r.sup_value - 0.1056).abs() < 1e-3);
        assert!(r.vacuous_boundary);
        assert_eq!(r.boundary_limsup_estimate, 0.0);
        // every |z/2| < 1/2 lands in shell 0
        assert_eq!(r.shell_sups.len(), 1);
    }

    #[test]
    fn rotation_kj_boundary_limit_is_two() {
        let grid = DiskGrid::default();
        let rot = map("complex(0,1)*z", &grid);
        let g = af("log(2/(1-z))");
        let r = evaluate_criterion(CriterionKind::KJ, Some(&rot), &g, &grid).unwrap();
        assert!(!r.vacuous_boundary);
        assert!(r.boundary_limsup_estimate >= 1.9, "{}", r.boundary_limsup_estimate);
        assert!(r.boundary_limsup_estimate <= 2.0 + 1e-9);
    }

    #[test]
    fn lg_of_log_grows() {
        let grid = DiskGrid::default();
        let r = evaluate_criterion(CriterionKind::Lg, None, &af("log(2/(1-z))"), &grid).unwrap();
        assert!(r.growth_trend);
        let tail = r.tail();
        // (1 + r) ln(2/(1 − r²)) on the real ray
        for s in tail {
            let rad = grid.radii()[s.shell];
            let oracle = (1.0 + rad) * (2.0 / (1.0 - rad * rad)).ln();
            assert!((s.sup - oracle).abs() < 1e-9 * oracle);
        }
        let huge = Thresholds {
            divergence: 10.0,
            ..Default::default()
        };
        assert_eq!(r.boundedness(&huge), Boundedness::Divergent);
        assert_eq!(r.boundedness(&Thresholds::default()), Boundedness::Undetermined);
    }

    #[test]
    fn classify_examples() {
        let grid = DiskGrid::default();
        let th = Thresholds::default();
        let v = classify(TheoremId::T3_2, &map("z/2", &grid), &af("z"), &grid, &th).unwrap();
        assert_eq!(v.conclusion, Conclusion::Compact);
        let v = classify(TheoremId::T3_2, &map("mobius(0.5)", &grid), &af("z"), &grid, &th).unwrap();
        assert_eq!(v.conclusion, Conclusion::NotCompactEvidence);
        let ki = v.evidence.last().unwrap();
        assert!(ki.boundary_limsup_estimate > 1.9 && ki.boundary_limsup_estimate <= 2.0 + 1e-9);
        let v = classify(TheoremId::T4_9, &map("mobius(0.5)", &grid), &af("z"), &grid, &th).unwrap();
        assert_eq!(v.conclusion, Conclusion::Compact);
    }

    #[test]
    fn t3_2_rejects_unbounded_symbol() {
        let grid = DiskGrid::default();
        let th = Thresholds::default();
        let r = classify(TheoremId::T3_2, &map("z/2", &grid), &af("1/(1-z)^2"), &grid, &th);
        assert!(matches!(r, Err(Error::PreconditionFailed(_))), "{r:?}");
    }

    #[test]
    fn t4_9_precondition() {
        let grid = DiskGrid::default();
        let th = Thresholds::default();
        let r = classify(TheoremId::T4_9, &map("z", &grid), &af("1/(1-z)"), &grid, &th);
        assert!(matches!(r, Err(Error::PreconditionFailed(_))), "{r:?}");
    }

    #[test]
    fn little_bloch_examples() {
        let grid = DiskGrid::default();
        let th = Thresholds::default();
        assert_eq!(little_bloch_membership(&af("z^3 - 2*z"), &grid, &th).status, LittleBloch::InB0);
        let c = little_bloch_membership(&af("complex(1,1)"), &grid, &th);
        assert_eq!(c.status, LittleBloch::InB0);
        assert!(c.report.shell_sups.iter().all(|s| s.sup == 0.0));
        let l = little_bloch_membership(&af("log(2/(1-z))"), &grid, &th);
        assert_eq!(l.status, LittleBloch::NotInB0Evidence);
        let w = l.witness.unwrap();
        assert!(w.im.abs() < 1e-12 && w.re > 0.99);
        assert!(l.report.boundary_limsup_estimate > 1.9);
    }

    #[test]
    fn bucketing_by_z_differs_from_by_phi() {
        // for a shrinker the |phi| buckets collapse to shell 0, |z| buckets do not
        let grid = DiskGrid::default();
        let half = map("z/2", &grid);
        let g = af("z");
        let by_phi = evaluate_criterion_with(CriterionKind::KI, Some(&half), &g, &grid, Bucketing::ByPhi).unwrap();
        let by_z = evaluate_criterion_with(CriterionKind::KI, Some(&half), &g, &grid, Bucketing::ByZ).unwrap();
        assert!(by_phi.vacuous_boundary && !by_z.vacuous_boundary);
        assert_eq!(by_z.shell_sups.len(), grid.max_shell() + 1);
        assert_eq!(by_phi.sup_value, by_z.sup_value);
        let th = Thresholds::default();
        let v = classify(TheoremId::C3_4, &half, &g, &grid, &th).unwrap();
        assert_eq!(v.conclusion, Conclusion::Compact);
    }

    #[test]
    fn theorem_ids_parse() {
        for t in TheoremId::ALL {
            assert_eq!(t.label().parse::<TheoremId>().unwrap(), t);
        }
        assert!("T9.9".parse::<TheoremId>().is_err());
    }
}
