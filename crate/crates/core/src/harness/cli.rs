//! Command-line front end.
//!
//! Exit codes: 0 when everything passes, 1 when a verdict or invariant
//! fails, 2 for usage and parse errors. Errors go to standard error as
//! `error[<kind>]: <message>`.

use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use super::config::Config;
use super::report::{fmt_real, to_json, write_sweep_csv};
use super::suite::{run_classification, ExperimentSpec, OutputFormat};
use super::verify::{run_selected, select, SuiteSelector, VerifyContext};
use crate::criteria::{classify, evaluate_criterion, CriterionKind, TheoremId};
use crate::diskgeom::{validate_self_map, DiskGrid, SupEstimate};
use crate::operators::{bloch_seminorm, commutator_seminorm, hinf_norm, CommutatorKind};
use crate::{AnalyticFn, Complex64, Error, Result};

#[derive(Debug, Parser)]
#[command(name = "blochlab", version, about = "Bloch-space operator numerics")]
struct Cli {
    /// TOML configuration file (falls back to $BLOCHLAB_CONFIG).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bloch seminorm of f.
    Seminorm {
        #[arg(long)]
        f: String,
        /// Grid as `K,A` (shells, base angular count).
        #[arg(long, value_name = "K,A")]
        grid: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Sup norm of f.
    Hinf {
        #[arg(long)]
        f: String,
        #[arg(long, value_name = "K,A")]
        grid: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Shell report of a criterion field.
    Criterion {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        g: String,
        #[arg(long, value_name = "K,A")]
        grid: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Verdict for one statement.
    Classify {
        #[arg(long)]
        thm: String,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        g: String,
        #[arg(long, value_name = "K,A")]
        grid: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Seminorm of the commutator image of f.
    Commutator {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: String,
        #[arg(long, value_name = "K,A")]
        grid: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run invariant suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Run only invariants whose name contains this text.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Classify a panel described by a JSON spec.
    Sweep {
        #[arg(long, value_name = "FILE.json")]
        spec: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    #[value(name = "KI")]
    Ki,
    #[value(name = "KJ")]
    Kj,
    #[value(name = "KJlog")]
    KJlog,
    #[value(name = "Lg")]
    Lg,
}

impl From<KindArg> for CriterionKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Ki => CriterionKind::KI,
            KindArg::Kj => CriterionKind::KJ,
            KindArg::KJlog => CriterionKind::KJlog,
            KindArg::Lg => CriterionKind::Lg,
        }
    }
}

/// Parses `argv` (including the program name), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return 2;
        }
        Err(e) => {
            print!("{e}");
            return 0;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

fn grid_from(arg: Option<&str>, config: &Config) -> Result<DiskGrid> {
    let Some(text) = arg else {
        return config.grid();
    };
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("--grid expects K,A with integers, got `{text}`")))
    };
    match parts.as_slice() {
        [k, a] => DiskGrid::new(parse(k)?, parse(a)?),
        [k] => DiskGrid::new(parse(k)?, config.grid.base_angular),
        _ => Err(Error::InvalidArgument(format!("--grid expects K,A, got `{text}`"))),
    }
}

fn fmt_complex(z: Complex64) -> String {
    format!("{} {}", fmt_real(z.re), fmt_real(z.im))
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> Result<()> {
    if json {
        print!("{}", to_json(value)?);
    } else {
        println!("{}", text());
    }
    Ok(())
}

#[derive(Serialize)]
struct SupOutput<'a> {
    quantity: &'a str,
    f: &'a str,
    value: f64,
    arg: Complex64,
}

fn print_sup(quantity: &str, f: &str, est: &SupEstimate, json: bool) -> Result<()> {
    let out = SupOutput {
        quantity,
        f,
        value: est.value,
        arg: est.arg,
    };
    emit(json, &out, || {
        format!("{quantity} {}\narg {}", fmt_real(est.value), fmt_complex(est.arg))
    })
}

fn run(cli: Cli) -> Result<i32> {
    let config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Seminorm { f, grid, json } => {
            let grid = grid_from(grid.as_deref(), &config)?;
            let est = bloch_seminorm(&AnalyticFn::parse(&f)?, &grid)?;
            print_sup("seminorm", &f, &est, json)?;
            Ok(0)
        }
        Command::Hinf { f, grid, json } => {
            let grid = grid_from(grid.as_deref(), &config)?;
            let est = hinf_norm(&AnalyticFn::parse(&f)?, &grid)?;
            print_sup("hinf", &f, &est, json)?;
            Ok(0)
        }
        Command::Criterion {
            kind,
            phi,
            g,
            grid,
            json,
        } => {
            let grid = grid_from(grid.as_deref(), &config)?;
            let kind = CriterionKind::from(kind);
            let phi = phi
                .map(|p| validate_self_map(AnalyticFn::parse(&p)?, &grid))
                .transpose()?;
            let report = evaluate_criterion(kind, phi.as_ref(), &AnalyticFn::parse(&g)?, &grid)?;
            emit(json, &report, || {
                let mut s = format!(
                    "{kind} sup {} at {}\nboundary limsup {} (vacuous: {})\nshell sup",
                    fmt_real(report.sup_value),
                    fmt_complex(report.arg_sup),
                    fmt_real(report.boundary_limsup_estimate),
                    report.vacuous_boundary
                );
                for sh in &report.shell_sups {
                    s.push_str(&format!("\n{:>3} {}", sh.shell, fmt_real(sh.sup)));
                }
                s
            })?;
            Ok(0)
        }
        Command::Classify {
            thm,
            phi,
            g,
            grid,
            json,
        } => {
            let grid = grid_from(grid.as_deref(), &config)?;
            let theorem: TheoremId = thm.parse()?;
            let phi = validate_self_map(AnalyticFn::parse(&phi)?, &grid)?;
            let g = AnalyticFn::parse(&g)?;
            let verdict = classify(theorem, &phi, &g, &grid, &config.thresholds)?;
            emit(json, &verdict, || {
                let mut s = format!("{} {}", verdict.theorem, verdict.conclusion);
                for r in &verdict.evidence {
                    s.push_str(&format!(
                        "\n  {} sup {} limsup {}",
                        r.field,
                        fmt_real(r.sup_value),
                        fmt_real(r.boundary_limsup_estimate)
                    ));
                }
                if let Some(w) = verdict.witness {
                    s.push_str(&format!("\n  witness {}", fmt_complex(w)));
                }
                for n in &verdict.notes {
                    s.push_str(&format!("\n  note: {n}"));
                }
                s
            })?;
            Ok(0)
        }
        Command::Commutator {
            kind,
            phi,
            g,
            f,
            grid,
            json,
        } => {
            let grid = grid_from(grid.as_deref(), &config)?;
            let kind: CommutatorKind = kind.parse()?;
            let phi = validate_self_map(AnalyticFn::parse(&phi)?, &grid)?;
            let est = commutator_seminorm(kind, &phi, &AnalyticFn::parse(&g)?, &AnalyticFn::parse(&f)?, &grid)?;
            print_sup("commutator", &f, &est, json)?;
            Ok(0)
        }
        Command::Verify { suite, filter, json } => {
            let selector: SuiteSelector = suite.parse()?;
            let selected = select(selector, filter.as_deref());
            if selected.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "no invariant in suite `{suite}` matches {filter:?}"
                )));
            }
            let ctx = VerifyContext::from_config(&config)?;
            let results = run_selected(&selected, &ctx);
            let failures = results.iter().filter(|r| !r.passed).count();
            emit(json, &results, || {
                let mut s: Vec<String> = results.iter().map(|r| r.to_string()).collect();
                s.push(format!("{} passed, {failures} failed", results.len() - failures));
                s.join("\n")
            })?;
            Ok(i32::from(failures > 0))
        }
        Command::Sweep { spec, out } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| Error::Io(format!("{}: {e}", spec.display())))?;
            let spec = ExperimentSpec::from_json(&text)?;
            let report = run_classification(&spec, &config)?;
            let file = File::create(&out).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
            match spec.format {
                OutputFormat::Csv => write_sweep_csv(BufWriter::new(file), &report.sweep_rows())?,
                OutputFormat::Json => {
                    use std::io::Write;
                    BufWriter::new(file).write_all(report.to_json()?.as_bytes())?;
                }
            }
            let errors = report.case_errors();
            if errors > 0 {
                for c in report.cases.iter().filter(|c| c.error.is_some()) {
                    let e = c.error.as_ref().expect("filtered");
                    eprintln!("error[{}]: case ({}, {}, {}): {}", e.kind, c.phi, c.g, c.theorem, e.message);
                }
            }
            println!("{} cases, {errors} errors, written to {}", report.cases.len(), out.display());
            Ok(i32::from(errors > 0))
        }
    }
}
