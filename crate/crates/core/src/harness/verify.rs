//! Named invariants, grouped into suites and addressable one by one.
//!
//! Each invariant measures its worst case against a bound and reports the
//! margin, so a passing run still shows how close it came.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::checks::{rotation_average_check, RotationOutcome};
use super::config::{Config, GridConfig};
use super::panels;
use super::suite::{run_classification, ExperimentSpec, OutputFormat};
use crate::criteria::{
    classify, evaluate_criterion, little_bloch_membership, Conclusion, CriterionKind, LittleBloch, TheoremId,
    Thresholds,
};
use crate::diskgeom::{
    schwarz_derivative, schwarz_pick_modulus_bound, shell_index, validate_self_map, DiskGrid, SelfMap,
};
use crate::expr::{parse, print_expr, Expr};
use crate::operators::{
    bloch_density, bloch_seminorm, commutator_derivative, commutator_value, CommutatorField, CommutatorKind,
};
use crate::quadrature::QuadratureConfig;
use crate::series::{coeffs_from_samples, TaylorSeries};
use crate::testfns::{
    build_interpolation_family_on, make_test_fn, select_separated_subsequence, TestFamily,
};
use crate::{one_minus_abs2, AnalyticFn, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Bounds,
    Theorems,
}

/// Suite selector on the command line; `All` runs every suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteSelector {
    One(Suite),
    All,
}

impl FromStr for SuiteSelector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Self::One(Suite::Identities)),
            "bounds" => Ok(Self::One(Suite::Bounds)),
            "theorems" => Ok(Self::One(Suite::Theorems)),
            "all" => Ok(Self::All),
            _ => Err(Error::InvalidArgument(format!("unknown suite `{s}`"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Identities => "identities",
            Suite::Bounds => "bounds",
            Suite::Theorems => "theorems",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantResult {
    pub name: String,
    pub suite: Suite,
    pub passed: bool,
    /// Worst measured value of the checked quantity.
    pub worst: f64,
    /// Bound the worst value is compared against.
    pub bound: f64,
    /// Distance to the bound, positive when satisfied.
    pub slack: f64,
    pub detail: String,
}

impl fmt::Display for InvariantResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<36} worst={:.6e} bound={:.6e} slack={:+.3e}  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.bound,
            self.slack,
            self.detail
        )
    }
}

/// Inputs shared by all invariants.
#[derive(Debug, Clone)]
pub struct VerifyContext {
    pub grid: DiskGrid,
    pub thresholds: Thresholds,
    pub quadrature: QuadratureConfig,
    pub seed: u64,
}

impl VerifyContext {
    pub fn from_config(config: &Config) -> Result<Self> {
        Ok(Self {
            grid: config.grid()?,
            thresholds: config.thresholds,
            quadrature: config.quadrature,
            seed: 20_240_917,
        })
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

impl Default for VerifyContext {
    fn default() -> Self {
        Self::from_config(&Config::default()).expect("default grid is valid")
    }
}

pub struct Invariant {
    pub name: &'static str,
    pub suite: Suite,
    pub description: &'static str,
    run: fn(&VerifyContext) -> Result<Measured>,
}

impl Invariant {
    pub fn run(&self, ctx: &VerifyContext) -> InvariantResult {
        match (self.run)(ctx) {
            Ok(m) => InvariantResult {
                name: self.name.to_string(),
                suite: self.suite,
                passed: m.passed,
                worst: m.worst,
                bound: m.bound,
                slack: m.slack,
                detail: m.detail,
            },
            Err(e) => InvariantResult {
                name: self.name.to_string(),
                suite: self.suite,
                passed: false,
                worst: f64::NAN,
                bound: f64::NAN,
                slack: f64::NAN,
                detail: format!("error[{}]: {e}", e.kind()),
            },
        }
    }
}

struct Measured {
    passed: bool,
    worst: f64,
    bound: f64,
    slack: f64,
    detail: String,
}

impl Measured {
    /// `worst ≤ bound`.
    fn at_most(worst: f64, bound: f64, detail: impl Into<String>) -> Self {
        Self {
            passed: worst <= bound,
            worst,
            bound,
            slack: bound - worst,
            detail: detail.into(),
        }
    }

    /// `worst ≥ bound`.
    fn at_least(worst: f64, bound: f64, detail: impl Into<String>) -> Self {
        Self {
            passed: worst >= bound,
            worst,
            bound,
            slack: worst - bound,
            detail: detail.into(),
        }
    }

    /// Counting check: zero violations out of `total`.
    fn count(violations: usize, total: usize, detail: impl Into<String>) -> Self {
        Self {
            passed: violations == 0,
            worst: violations as f64,
            bound: 0.0,
            slack: 0.0 - violations as f64,
            detail: format!("{violations}/{total} violations; {}", detail.into()),
        }
    }
}

pub static INVARIANTS: &[Invariant] = &[
    Invariant {
        name: "series.ring_laws",
        suite: Suite::Identities,
        description: "add/mul commutative and associative, exactly, on integer coefficients",
        run: series_ring_laws,
    },
    Invariant {
        name: "series.derivative_antiderivative",
        suite: Suite::Identities,
        description: "derivative of antiderivative returns the coefficients (exact on representable inputs)",
        run: series_derivative_antiderivative,
    },
    Invariant {
        name: "series.coeff_recovery",
        suite: Suite::Identities,
        description: "coefficient recovery error below 1e-10 on polynomials up to degree 8",
        run: series_coeff_recovery,
    },
    Invariant {
        name: "expr.roundtrip",
        suite: Suite::Identities,
        description: "parse(print(e)) evaluates bit-identically to e at 100 points",
        run: expr_roundtrip,
    },
    Invariant {
        name: "expr.derivative_fd",
        suite: Suite::Identities,
        description: "symbolic derivative matches central differences to 1e-6",
        run: expr_derivative_fd,
    },
    Invariant {
        name: "operators.derivative_identity",
        suite: Suite::Identities,
        description: "central difference of commutator_value matches the closed-form derivative",
        run: operators_derivative_identity,
    },
    Invariant {
        name: "operators.linearity",
        suite: Suite::Identities,
        description: "commutator_derivative is linear in f",
        run: operators_linearity,
    },
    Invariant {
        name: "harness.determinism",
        suite: Suite::Identities,
        description: "identical specs give identical report payloads",
        run: harness_determinism,
    },
    Invariant {
        name: "diskgeom.schwarz_pick",
        suite: Suite::Bounds,
        description: "|phi#| <= 1 + 1e-12 for 100 random self-maps",
        run: diskgeom_schwarz_pick,
    },
    Invariant {
        name: "diskgeom.automorphism_isometry",
        suite: Suite::Bounds,
        description: "|phi#| = 1 within 1e-9 for the automorphism panel",
        run: diskgeom_automorphism_isometry,
    },
    Invariant {
        name: "diskgeom.modulus_bound",
        suite: Suite::Bounds,
        description: "|phi(z)| <= (|z| + |phi(0)|)/(1 + |z||phi(0)|) within 1e-12",
        run: diskgeom_modulus_bound,
    },
    Invariant {
        name: "operators.bound_chain_i",
        suite: Suite::Bounds,
        description: "I-commutator seminorm <= sup KI * ||f||_* + 1e-9",
        run: operators_bound_chain_i,
    },
    Invariant {
        name: "operators.bound_chain_j",
        suite: Suite::Bounds,
        description: "J-commutator seminorm <= sup KJ * ||f||_inf + 1e-9",
        run: operators_bound_chain_j,
    },
    Invariant {
        name: "testfns.mobius_norm",
        suite: Suite::Bounds,
        description: "||alpha_a||_* = 1 within 1e-6 for 20 random a",
        run: testfns_mobius_norm,
    },
    Invariant {
        name: "testfns.peak_norm",
        suite: Suite::Bounds,
        description: "||h_a||_* <= 1 + 1e-9; h_a -> 0 uniformly on |z| <= 1/2",
        run: testfns_peak_norm,
    },
    Invariant {
        name: "testfns.logfw_norm",
        suite: Suite::Bounds,
        description: "||f_w||_* <= 2 + 1e-9",
        run: testfns_logfw_norm,
    },
    Invariant {
        name: "testfns.productf",
        suite: Suite::Bounds,
        description: "h_a * alpha_a vanishes at a and is bounded by 2",
        run: testfns_productf,
    },
    Invariant {
        name: "testfns.interpolation_bound",
        suite: Suite::Bounds,
        description: "Kronecker values exact, sum |h_k| <= M, M stable within 5% under refinement",
        run: testfns_interpolation_bound,
    },
    Invariant {
        name: "criteria.grid_monotone",
        suite: Suite::Theorems,
        description: "K -> K+2 never lowers sup_value nor flips Compact/NotCompactEvidence",
        run: criteria_grid_monotone,
    },
    Invariant {
        name: "criteria.t31_consistency",
        suite: Suite::Theorems,
        description: "Bounded verdicts for the I-commutator respect the sup KI bound",
        run: criteria_t31_consistency,
    },
    Invariant {
        name: "criteria.t32_necessity",
        suite: Suite::Theorems,
        description: "peak test functions attain |phi(w)| KI(w) on the outer phi-shell",
        run: criteria_t32_necessity,
    },
    Invariant {
        name: "criteria.rigidity",
        suite: Suite::Theorems,
        description: "non-constant g has a non-compact automorphism case; constant g has KI = 0",
        run: criteria_rigidity,
    },
    Invariant {
        name: "criteria.c43_sufficiency",
        suite: Suite::Theorems,
        description: "little-Bloch g gives a compact J-commutator for every panel map",
        run: criteria_c43_sufficiency,
    },
    Invariant {
        name: "criteria.rotation_witness",
        suite: Suite::Theorems,
        description: "log(2/(1-z)) has a rotation with non-compact J-commutator",
        run: criteria_rotation_witness,
    },
    Invariant {
        name: "harness.rotation_average",
        suite: Suite::Theorems,
        description: "rotation averaging is consistent on the symbol corpus",
        run: harness_rotation_average,
    },
];

pub fn find(name: &str) -> Option<&'static Invariant> {
    INVARIANTS.iter().find(|i| i.name == name)
}

/// Invariants in `selector` whose name contains `filter`.
pub fn select(selector: SuiteSelector, filter: Option<&str>) -> Vec<&'static Invariant> {
    INVARIANTS
        .iter()
        .filter(|i| match selector {
            SuiteSelector::All => true,
            SuiteSelector::One(s) => i.suite == s,
        })
        .filter(|i| filter.is_none_or(|f| i.name.contains(f)))
        .collect()
}

pub fn run_selected(selected: &[&Invariant], ctx: &VerifyContext) -> Vec<InvariantResult> {
    selected.iter().map(|i| i.run(ctx)).collect()
}

/// Runs one invariant by exact name.
pub fn run_named(name: &str, ctx: &VerifyContext) -> Result<InvariantResult> {
    find(name)
        .map(|i| i.run(ctx))
        .ok_or_else(|| Error::InvalidArgument(format!("unknown invariant `{name}`")))
}

// ---------------------------------------------------------------- helpers

fn af(s: &str) -> Result<AnalyticFn> {
    AnalyticFn::parse(s)
}

fn self_map(s: &str, grid: &DiskGrid) -> Result<SelfMap> {
    validate_self_map(af(s)?, grid)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_in_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// `mobius(a, s e^{iθ} mobius(b, z)^n)` with a shrink factor `s ∈ [0.3, 0.98]`.
pub fn random_self_map_expr(rng: &mut ChaCha8Rng) -> Expr {
    let a = random_in_disk(rng, 0.9);
    let b = random_in_disk(rng, 0.9);
    let s = rng.gen_range(0.3..=0.98);
    let rot = Complex64::from_polar(s, rng.gen_range(0.0..std::f64::consts::TAU));
    let n = rng.gen_range(1..=3u32);
    let mut inner = Expr::Mobius(b, Box::new(Expr::Var));
    if n > 1 {
        inner = Expr::Pow(Box::new(inner), n);
    }
    Expr::Mobius(a, Box::new(Expr::Mul(Box::new(Expr::Const(rot)), Box::new(inner))))
}

fn small_int_series(rng: &mut ChaCha8Rng, len: usize) -> TaylorSeries {
    TaylorSeries::new(
        (0..len)
            .map(|_| c(rng.gen_range(-8..=8) as f64, rng.gen_range(-8..=8) as f64))
            .collect(),
    )
}

fn max_rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

// ------------------------------------------------------------- identities

fn series_ring_laws(ctx: &VerifyContext) -> Result<Measured> {
    let mut rng = ctx.rng(1);
    let mut violations = 0;
    let trials = 50;
    for _ in 0..trials {
        let (la, lb, lc) = (rng.gen_range(1..12), rng.gen_range(1..12), rng.gen_range(1..12));
        let a = small_int_series(&mut rng, la);
        let b = small_int_series(&mut rng, lb);
        let cc = small_int_series(&mut rng, lc);
        let ok = a.add(&b) == b.add(&a)
            && a.add(&b).add(&cc) == a.add(&b.add(&cc))
            && a.mul(&b) == b.mul(&a)
            && a.mul(&b).mul(&cc) == a.mul(&b.mul(&cc));
        violations += usize::from(!ok);
    }
    Ok(Measured::count(violations, trials, "exact equality"))
}

fn series_derivative_antiderivative(ctx: &VerifyContext) -> Result<Measured> {
    let mut rng = ctx.rng(2);
    let mut violations = 0;
    let mut worst_random: f64 = 0.0;
    let trials = 40;
    for _ in 0..trials {
        let n = rng.gen_range(1..=63);
        // a_n = (n+1) m_n: the division in the antiderivative is exact
        let exact = TaylorSeries::new(
            (0..n)
                .map(|k| {
                    let m = c(rng.gen_range(-1000..=1000) as f64, rng.gen_range(-1000..=1000) as f64);
                    m * (k + 1) as f64
                })
                .collect(),
        );
        violations += usize::from(exact.antiderivative().derivative() != exact);
        let random = TaylorSeries::new((0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect());
        let back = random.antiderivative().derivative();
        for (x, y) in back.coeffs().iter().zip(random.coeffs()) {
            worst_random = worst_random.max((x - y).norm() / y.norm().max(f64::MIN_POSITIVE));
        }
    }
    let bound = 1e-15;
    Ok(Measured {
        passed: violations == 0 && worst_random <= bound,
        worst: worst_random,
        bound,
        slack: bound - worst_random,
        detail: format!(
            "{violations}/{trials} inexact on representable inputs; arbitrary inputs within one rounding"
        ),
    })
}

fn series_coeff_recovery(ctx: &VerifyContext) -> Result<Measured> {
    let mut rng = ctx.rng(3);
    let mut worst: f64 = 0.0;
    for degree in 0..=8 {
        for _ in 0..5 {
            let p = TaylorSeries::new(
                (0..=degree)
                    .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                    .collect(),
            );
            let got = coeffs_from_samples(|z| p.eval(z), 0.5, 4 * (degree + 1), degree)?;
            worst = worst.max(got.max_coeff_distance(&p));
        }
    }
    Ok(Measured::at_most(worst, 1e-10, "radius 0.5, count 4(d+1)"))
}

fn sample_points(n: usize, radius: f64) -> Vec<Complex64> {
    // golden-angle spiral
    (0..n)
        .map(|k| {
            let r = radius * ((k as f64 + 0.5) / n as f64).sqrt();
            Complex64::from_polar(r, k as f64 * 2.399_963_229_728_653)
        })
        .collect()
}

fn same_bits(a: Complex64, b: Complex64) -> bool {
    let eq = |x: f64, y: f64| x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan());
    eq(a.re, b.re) && eq(a.im, b.im)
}

fn expr_roundtrip(_ctx: &VerifyContext) -> Result<Measured> {
    let corpus = panels::expr_corpus();
    let points = sample_points(100, 0.95);
    let mut violations = 0;
    for text in &corpus {
        let e = parse(text)?;
        let back = parse(&print_expr(&e))?;
        if points.iter().any(|&z| !same_bits(e.eval(z), back.eval(z))) {
            violations += 1;
        }
    }
    Ok(Measured::count(violations, corpus.len(), "bit-level comparison at 100 points"))
}

fn expr_derivative_fd(_ctx: &VerifyContext) -> Result<Measured> {
    let h = 1e-5;
    let points = sample_points(60, 0.7);
    let mut worst: f64 = 0.0;
    for text in panels::expr_corpus() {
        let f = af(text)?;
        for &z in &points {
            let d = f.deriv(z);
            let fd = (f.eval(z + h) - f.eval(z - h)) / (2.0 * h);
            worst = worst.max(max_rel(fd, d));
        }
    }
    Ok(Measured::at_most(worst, 1e-6, "step 1e-5 on |z| <= 0.7; error / (1 + |f'|)"))
}

/// Twenty `(kind, φ, g, f)` triples drawn from the panels, ten per kind.
pub fn identity_triples() -> Vec<(CommutatorKind, &'static str, &'static str, &'static str)> {
    let maps = panels::MIXED;
    let gs = panels::G_CORPUS;
    let fs = panels::F_CORPUS;
    (0..20)
        .map(|k| {
            let kind = if k < 10 { CommutatorKind::I } else { CommutatorKind::J };
            (kind, maps[k % maps.len()], gs[2 + (k * 3) % (gs.len() - 2)], fs[(k * 7) % fs.len()])
        })
        .collect()
}

fn operators_derivative_identity(ctx: &VerifyContext) -> Result<Measured> {
    let grid = DiskGrid::build(3, 100);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    for (kind, p, g, f) in identity_triples() {
        let phi = self_map(p, &grid)?;
        let (g, f) = (af(g)?, af(f)?);
        let errs: Vec<(f64, Complex64)> = grid
            .points()
            .par_iter()
            .map(|&z| {
                let v = |w| commutator_value(kind, &phi, &g, &f, w, &ctx.quadrature);
                let fd = (v(z + h)? - v(z - h)?) / (2.0 * h);
                Ok((max_rel(fd, commutator_derivative(kind, &phi, &g, &f, z)), z))
            })
            .collect::<Result<_>>()?;
        for (e, z) in errs {
            if e > worst {
                worst = e;
                at = format!("{kind:?} phi={p} at {z}");
            }
        }
    }
    Ok(Measured::at_most(worst, 1e-6, format!("20 triples x 1000 points; worst {at}")))
}

fn operators_linearity(ctx: &VerifyContext) -> Result<Measured> {
    let mut rng = ctx.rng(4);
    let mut worst: f64 = 0.0;
    let grid = &ctx.grid;
    for (kind, p, g, _) in identity_triples() {
        let phi = self_map(p, grid)?;
        let g = af(g)?;
        let f1 = af("exp(z)")?;
        let f2 = af("log(2/(1-0.5*z))")?;
        let lambda = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let combo = AnalyticFn::new(Expr::Add(
            Box::new(f1.expr().clone()),
            Box::new(Expr::Mul(Box::new(Expr::Const(lambda)), Box::new(f2.expr().clone()))),
        ));
        for _ in 0..50 {
            let z = random_in_disk(&mut rng, 0.99);
            let lhs = commutator_derivative(kind, &phi, &g, &combo, z);
            let rhs = commutator_derivative(kind, &phi, &g, &f1, z)
                + lambda * commutator_derivative(kind, &phi, &g, &f2, z);
            worst = worst.max(max_rel(lhs, rhs));
        }
    }
    Ok(Measured::at_most(worst, 1e-12, "f1 + lambda f2 at random points"))
}

fn harness_determinism(_ctx: &VerifyContext) -> Result<Measured> {
    let spec = ExperimentSpec {
        phi_exprs: vec!["mobius(0.5)".into(), "z^2/2".into(), "(1+z)/2".into()],
        g_exprs: vec!["z".into(), "log(2/(1-0.9*z))".into(), "z +".into()],
        theorem_ids: vec![TheoremId::T3_2, TheoremId::T4_1b, TheoremId::P4_7],
        grid: GridConfig {
            max_shell: 10,
            base_angular: 64,
        },
        thresholds: Thresholds::default(),
        format: OutputFormat::Json,
    };
    let a = run_classification(&spec, &Config::default())?.payload_json()?;
    let b = run_classification(&spec, &Config::default())?.payload_json()?;
    let differing = a.lines().zip(b.lines()).filter(|(x, y)| x != y).count() + a.lines().count().abs_diff(b.lines().count());
    Ok(Measured::count(differing, a.lines().count(), "differing JSON lines across two runs"))
}

// ----------------------------------------------------------------- bounds

fn diskgeom_schwarz_pick(ctx: &VerifyContext) -> Result<Measured> {
    let mut rng = ctx.rng(5);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let phi = validate_self_map(AnalyticFn::new(random_self_map_expr(&mut rng)), &ctx.grid)?;
        let m = ctx
            .grid
            .points()
            .par_iter()
            .map(|&z| schwarz_derivative(&phi, z).norm())
            .reduce(|| 0.0, f64::max);
        worst = worst.max(m);
    }
    Ok(Measured::at_most(worst, 1.0 + 1e-12, "100 random self-maps, full grid"))
}

fn diskgeom_automorphism_isometry(ctx: &VerifyContext) -> Result<Measured> {
    let mut worst: f64 = 0.0;
    for p in panels::AUTOMORPHISMS {
        let phi = self_map(p, &ctx.grid)?;
        let m = ctx
            .grid
            .points()
            .par_iter()
            .map(|&z| (schwarz_derivative(&phi, z).norm() - 1.0).abs())
            .reduce(|| 0.0, f64::max);
        worst = worst.max(m);
    }
    Ok(Measured::at_most(worst, 1e-9, "max ||phi#| - 1| over 8 automorphisms"))
}

fn diskgeom_modulus_bound(ctx: &VerifyContext) -> Result<Measured> {
    let mut rng = ctx.rng(6);
    let mut maps: Vec<SelfMap> = panels::all_maps()
        .iter()
        .chain(&panels::rotations())
        .map(|s| self_map(s, &ctx.grid))
        .collect::<Result<_>>()?;
    for _ in 0..20 {
        maps.push(validate_self_map(AnalyticFn::new(random_self_map_expr(&mut rng)), &ctx.grid)?);
    }
    let worst = maps
        .iter()
        .map(|phi| {
            ctx.grid
                .points()
                .par_iter()
                .map(|&z| phi.eval(z).norm() - schwarz_pick_modulus_bound(phi, z))
                .reduce(|| f64::NEG_INFINITY, f64::max)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(Measured::at_most(worst, 1e-12, format!("max |phi| - bound over {} maps", maps.len())))
}

fn bound_chain(ctx: &VerifyContext, kind: CommutatorKind, fs: &[String]) -> Result<Measured> {
    let grid = &ctx.grid;
    let fs: Vec<AnalyticFn> = fs.iter().map(|s| af(s)).collect::<Result<_>>()?;
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for p in panels::all_maps() {
        let phi = self_map(&p, grid)?;
        let images: Vec<Complex64> = grid.points().iter().map(|&z| phi.eval(z)).collect();
        for gs in panels::G_CORPUS {
            let g = af(gs)?;
            let field = CommutatorField::new(kind, &phi, &g, grid.points());
            let sup_k = match kind {
                CommutatorKind::I => evaluate_criterion(CriterionKind::KI, Some(&phi), &g, grid)?.sup_value,
                CommutatorKind::J => evaluate_criterion(CriterionKind::KJ, Some(&phi), &g, grid)?.sup_value,
            };
            for f in &fs {
                // the norm of f is sampled on grid ∪ φ(grid) so that it sees
                // every point where the commutator density evaluates f
                let norm = grid
                    .points()
                    .par_iter()
                    .chain(images.par_iter())
                    .map(|&z| match kind {
                        CommutatorKind::I => bloch_density(f, z),
                        CommutatorKind::J => f.eval(z).norm(),
                    })
                    .reduce(|| 0.0, f64::max);
                let lhs = field.seminorm(f).value;
                worst = worst.max(lhs - (sup_k * norm + 1e-9));
                cases += 1;
            }
        }
    }
    Ok(Measured::at_most(worst, 0.0, format!("{cases} (phi, g, f) cases; worst lhs - rhs")))
}

/// Bounded test functions for the `J` chain.
pub const HINF_CORPUS: [&str; 7] = [
    "z",
    "z^2",
    "exp(z)",
    "mobius(0.5)",
    "mobius(complex(-0.3, 0.6))",
    "(1-0.81)/(1-0.9*z)",
    "(1-0.25)/(1-complex(0.3, 0.4)*z)*mobius(complex(0.3, -0.4))",
];

fn operators_bound_chain_i(ctx: &VerifyContext) -> Result<Measured> {
    bound_chain(ctx, CommutatorKind::I, &panels::f_corpus())
}

fn operators_bound_chain_j(ctx: &VerifyContext) -> Result<Measured> {
    let fs: Vec<String> = HINF_CORPUS.iter().map(|s| s.to_string()).collect();
    bound_chain(ctx, CommutatorKind::J, &fs)
}

fn testfns_mobius_norm(ctx: &VerifyContext) -> Result<Measured> {
    let mut rng = ctx.rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let a = random_in_disk(&mut rng, 0.9);
        let s = bloch_seminorm(&make_test_fn(TestFamily::MobiusAlpha(a))?, &ctx.grid)?;
        worst = worst.max((s.value - 1.0).abs());
    }
    Ok(Measured::at_most(worst, 1e-6, "20 random a with |a| < 0.9; refined grid maximum"))
}

fn testfns_peak_norm(ctx: &VerifyContext) -> Result<Measured> {
    let mut rng = ctx.rng(8);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let a = random_in_disk(&mut rng, 0.99);
        let s = bloch_seminorm(&make_test_fn(TestFamily::PeakH(a))?, &ctx.grid)?;
        worst = worst.max(s.value);
    }
    let inner: Vec<Complex64> = ctx.grid.points().iter().copied().filter(|z| z.norm() <= 0.5).collect();
    let mut maxima = Vec::new();
    for a in [0.9, 0.99, 0.999] {
        let h = make_test_fn(TestFamily::PeakH(c(a, 0.0)))?;
        maxima.push(inner.iter().map(|&z| h.eval(z).norm()).fold(0.0, f64::max));
    }
    let decreasing = maxima.windows(2).all(|w| w[1] < w[0]);
    let mut m = Measured::at_most(worst, 1.0 + 1e-9, format!("max on |z| <= 1/2 for a = 0.9, 0.99, 0.999: {maxima:?}"));
    m.passed &= decreasing;
    Ok(m)
}

fn testfns_logfw_norm(ctx: &VerifyContext) -> Result<Measured> {
    let mut rng = ctx.rng(9);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let w = random_in_disk(&mut rng, 0.999);
        let s = bloch_seminorm(&make_test_fn(TestFamily::LogFw(w))?, &ctx.grid)?;
        worst = worst.max(s.value);
    }
    Ok(Measured::at_most(worst, 2.0 + 1e-9, "20 random w"))
}

fn testfns_productf(ctx: &VerifyContext) -> Result<Measured> {
    let mut rng = ctx.rng(10);
    let mut worst: f64 = 0.0;
    let mut at_a: f64 = 0.0;
    for _ in 0..20 {
        let a = random_in_disk(&mut rng, 0.99);
        let f = make_test_fn(TestFamily::ProductF(a))?;
        at_a = at_a.max(f.eval(a).norm());
        let m = ctx.grid.points().par_iter().map(|&z| f.eval(z).norm()).reduce(|| 0.0, f64::max);
        worst = worst.max(m);
    }
    let mut m = Measured::at_most(worst, 2.0, format!("max |f(a)| = {at_a:e}"));
    m.passed &= at_a <= 1e-15;
    Ok(m)
}

/// The first five nodes of the greedy separated selection from
/// `1 − 2^(−k)`, `k = 1..10`, at `d = 0.1`.
pub fn radial_nodes() -> Vec<Complex64> {
    let candidates: Vec<Complex64> = (1..=10).map(|k| c(1.0 - 0.5f64.powi(k), 0.0)).collect();
    select_separated_subsequence(&candidates, 0.1).into_iter().take(5).collect()
}

fn testfns_interpolation_bound(ctx: &VerifyContext) -> Result<Measured> {
    let nodes = radial_nodes();
    if nodes.len() < 5 {
        return Err(Error::PreconditionFailed(format!("only {} separated nodes", nodes.len())));
    }
    let fine = DiskGrid::new(ctx.grid.max_shell() + 2, ctx.grid.angular_counts()[0])?;
    let fam = build_interpolation_family_on(&nodes, 0.1, &ctx.grid)?;
    let fam_fine = build_interpolation_family_on(&nodes, 0.1, &fine)?;
    let kron = fam
        .kronecker_matrix()
        .iter()
        .enumerate()
        .flat_map(|(k, row)| {
            row.iter()
                .enumerate()
                .map(move |(j, v)| (v - if j == k { 1.0 } else { 0.0 }).norm())
        })
        .fold(0.0, f64::max);
    let over = ctx
        .grid
        .points()
        .iter()
        .filter(|&&z| fam.sum_abs(z) > fam.sum_bound_estimate)
        .count();
    let drift = (fam_fine.sum_bound_estimate - fam.sum_bound_estimate).abs() / fam.sum_bound_estimate;
    let mut m = Measured::at_most(
        drift,
        0.05,
        format!(
            "M = {:.6} (fine {:.6}); Kronecker error {kron:e}; {over} points above M",
            fam.sum_bound_estimate, fam_fine.sum_bound_estimate
        ),
    );
    m.passed &= kron <= 1e-10 && over == 0 && fam.sum_bound_estimate.is_finite();
    Ok(m)
}

// --------------------------------------------------------------- theorems

fn criteria_grid_monotone(ctx: &VerifyContext) -> Result<Measured> {
    let coarse = DiskGrid::new(ctx.grid.max_shell().saturating_sub(2).max(4), ctx.grid.angular_counts()[0])?;
    let fine = &ctx.grid;
    let cases = [
        ("z/2", "z"),
        ("mobius(0.5)", "z"),
        ("mobius(0.5)", "log(2/(1-0.9*z))"),
        ("z^2", "z^2"),
        ("complex(0, 1)*z", "log(2/(1-z))"),
        ("(1+z)/2", "exp(z)"),
    ];
    let mut violations = 0;
    let mut worst_drop: f64 = 0.0;
    for (p, gs) in cases {
        let g = af(gs)?;
        let (pc, pf) = (self_map(p, &coarse)?, self_map(p, fine)?);
        for kind in [CriterionKind::KI, CriterionKind::KJ, CriterionKind::KJlog] {
            let a = evaluate_criterion(kind, Some(&pc), &g, &coarse)?.sup_value;
            let b = evaluate_criterion(kind, Some(&pf), &g, fine)?.sup_value;
            worst_drop = worst_drop.max(a - b);
        }
        for t in [TheoremId::T3_2, TheoremId::T4_1b] {
            let a = classify(t, &pc, &g, &coarse, &ctx.thresholds).map(|v| v.conclusion);
            let b = classify(t, &pf, &g, fine, &ctx.thresholds).map(|v| v.conclusion);
            let flipped = matches!(
                (a, b),
                (Ok(Conclusion::Compact), Ok(Conclusion::NotCompactEvidence))
                    | (Ok(Conclusion::NotCompactEvidence), Ok(Conclusion::Compact))
            );
            violations += usize::from(flipped);
        }
    }
    let mut m = Measured::at_most(worst_drop, 0.0, format!("{violations} verdict flips; worst sup decrease"));
    m.passed &= violations == 0;
    Ok(m)
}

fn criteria_t31_consistency(ctx: &VerifyContext) -> Result<Measured> {
    let grid = &ctx.grid;
    let fs: Vec<AnalyticFn> = panels::F_CORPUS.iter().map(|s| af(s)).collect::<Result<_>>()?;
    let mut worst = f64::NEG_INFINITY;
    let mut bounded = 0;
    for p in panels::AUTOMORPHISMS.iter().chain(&panels::SHRINKERS) {
        let phi = self_map(p, grid)?;
        let images: Vec<Complex64> = grid.points().iter().map(|&z| phi.eval(z)).collect();
        for gs in panels::G_CORPUS {
            let g = af(gs)?;
            let v = classify(TheoremId::T3_1, &phi, &g, grid, &ctx.thresholds)?;
            if v.conclusion != Conclusion::Bounded {
                continue;
            }
            bounded += 1;
            let sup_k = v.evidence[0].sup_value;
            let field = CommutatorField::new(CommutatorKind::I, &phi, &g, grid.points());
            for f in &fs {
                let norm = grid
                    .points()
                    .iter()
                    .chain(&images)
                    .map(|&z| bloch_density(f, z))
                    .fold(0.0, f64::max);
                worst = worst.max(field.seminorm(f).value - (sup_k * norm + 1e-9));
            }
        }
    }
    Ok(Measured::at_most(worst, 0.0, format!("{bounded} Bounded (phi, g) cases")))
}

/// Grid used for the necessity check; every outer-shell point is paired with
/// a full seminorm evaluation, so this is coarser than the default grid.
pub const NECESSITY_GRID: (usize, usize) = (10, 64);

fn criteria_t32_necessity(ctx: &VerifyContext) -> Result<Measured> {
    let grid = DiskGrid::new(NECESSITY_GRID.0, NECESSITY_GRID.1)?;
    let _ = ctx;
    let mut worst = f64::NEG_INFINITY;
    let mut checked = 0;
    for p in panels::AUTOMORPHISMS.iter().chain(&panels::SHRINKERS) {
        let phi = self_map(p, &grid)?;
        for gs in panels::G_CORPUS {
            let g = af(gs)?;
            if g.is_constant() {
                continue;
            }
            let field = CommutatorField::new(CommutatorKind::I, &phi, &g, grid.points());
            let shells: Vec<usize> = field
                .images()
                .iter()
                .map(|w| shell_index(w.norm(), grid.max_shell()))
                .collect();
            let outer = shells.iter().copied().max().unwrap_or(0);
            let margins: Vec<f64> = (0..grid.len())
                .into_par_iter()
                .filter(|&i| shells[i] == outer)
                .map(|i| {
                    let w = grid.points()[i];
                    let a = field.images()[i];
                    let ki = schwarz_derivative(&phi, w).norm() * (g.eval(a) - g.eval(w)).norm();
                    // |h_a′(u)| = |a|(1 − |a|²)/|1 − ā u|²
                    let peak = field.seminorm_with(|u| a.norm() * one_minus_abs2(a) / (1.0 - a.conj() * u).norm_sqr());
                    peak.value - (a.norm() * ki - 1e-6)
                })
                .collect();
            checked += margins.len();
            worst = worst.max(-margins.iter().copied().fold(f64::INFINITY, f64::min));
        }
    }
    Ok(Measured::at_most(
        worst,
        0.0,
        format!("{checked} outer-shell points on grid K={}, A={}", NECESSITY_GRID.0, NECESSITY_GRID.1),
    ))
}

fn criteria_rigidity(ctx: &VerifyContext) -> Result<Measured> {
    let grid = &ctx.grid;
    let autos: Vec<SelfMap> = panels::AUTOMORPHISMS.iter().map(|p| self_map(p, grid)).collect::<Result<_>>()?;
    let mut failures = Vec::new();
    let mut total = 0;
    for gs in panels::G_CORPUS {
        let g = af(gs)?;
        total += 1;
        if g.is_constant() {
            let nonzero = panels::all_maps().iter().any(|p| {
                self_map(p, grid)
                    .and_then(|phi| evaluate_criterion(CriterionKind::KI, Some(&phi), &g, grid))
                    .map_or(true, |r| r.shell_sups.iter().any(|s| s.sup != 0.0))
            });
            if nonzero {
                failures.push(gs);
            }
            continue;
        }
        let found = autos.iter().any(|phi| {
            classify(TheoremId::T3_2, phi, &g, grid, &ctx.thresholds)
                .is_ok_and(|v| v.conclusion == Conclusion::NotCompactEvidence)
        });
        if !found {
            failures.push(gs);
        }
    }
    Ok(Measured::count(failures.len(), total, format!("failing symbols: {failures:?}")))
}

fn criteria_c43_sufficiency(ctx: &VerifyContext) -> Result<Measured> {
    let grid = &ctx.grid;
    let maps: Vec<SelfMap> = panels::all_maps().iter().map(|p| self_map(p, grid)).collect::<Result<_>>()?;
    let mut failures = Vec::new();
    let mut total = 0;
    for gs in panels::G_CORPUS.iter().chain(&panels::POLYNOMIALS) {
        let g = af(gs)?;
        if little_bloch_membership(&g, grid, &ctx.thresholds).status != LittleBloch::InB0 {
            continue;
        }
        for (phi, p) in maps.iter().zip(panels::all_maps()) {
            total += 1;
            let v = classify(TheoremId::T4_1b, phi, &g, grid, &ctx.thresholds)?;
            if v.conclusion != Conclusion::Compact {
                failures.push(format!("({p}, {gs}): {}", v.conclusion));
            }
        }
    }
    Ok(Measured::count(failures.len(), total, failures.join("; ")))
}

fn criteria_rotation_witness(ctx: &VerifyContext) -> Result<Measured> {
    let g = af("log(2/(1-z))")?;
    let mut best: f64 = 0.0;
    let mut found = None;
    for p in panels::rotations() {
        let phi = self_map(&p, &ctx.grid)?;
        let v = classify(TheoremId::T4_1b, &phi, &g, &ctx.grid, &ctx.thresholds)?;
        let limsup = v.evidence[0].boundary_limsup_estimate;
        best = best.max(limsup);
        if found.is_none() && v.conclusion == Conclusion::NotCompactEvidence {
            found = Some(p);
        }
    }
    let mut m = Measured::at_least(best, 1.9, format!("first witness rotation: {found:?}"));
    m.passed &= found.is_some();
    Ok(m)
}

fn harness_rotation_average(ctx: &VerifyContext) -> Result<Measured> {
    let mut problems = Vec::new();
    let mut worst_residual: f64 = 0.0;
    for gs in panels::G_CORPUS.iter().chain(["log(2/(1-z))"].iter()) {
        let g = af(gs)?;
        let r = rotation_average_check(&g, 40, &ctx.grid, &ctx.thresholds)?;
        worst_residual = worst_residual.max(r.averaging_residual);
        let ok = match (&r.outcome, gs) {
            (RotationOutcome::Inconsistent, _) => false,
            (RotationOutcome::Witness { limsup, .. }, &"log(2/(1-z))") => *limsup >= 1.9,
            (_, &"log(2/(1-z))") => false,
            (RotationOutcome::ConsistentWithB0, _) => r.membership == LittleBloch::InB0,
            _ => true,
        };
        if !ok {
            problems.push(format!("{gs}: {:?}", r.outcome));
        }
    }
    let mut m = Measured::at_most(worst_residual, 1e-8, format!("averaging identity residual; problems: {problems:?}"));
    m.passed &= problems.is_empty();
    Ok(m)
}
