//! Classification runs over panels of `(φ, g, theorem)` cases.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Config, GridConfig};
use super::report::{to_json, SweepRow, SCHEMA_VERSION};
use super::verify::InvariantResult;
use crate::criteria::{classify, Conclusion, TheoremId, Thresholds, Verdict};
use crate::diskgeom::{validate_self_map, DiskGrid};
use crate::{AnalyticFn, Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub phi_exprs: Vec<String>,
    pub g_exprs: Vec<String>,
    pub theorem_ids: Vec<TheoremId>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub format: OutputFormat,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("experiment spec: {e}")))
    }

    pub fn validate(&self) -> Result<DiskGrid> {
        for (name, empty) in [
            ("phi_exprs", self.phi_exprs.is_empty()),
            ("g_exprs", self.g_exprs.is_empty()),
            ("theorem_ids", self.theorem_ids.is_empty()),
        ] {
            if empty {
                return Err(Error::InvalidArgument(format!("{name} is empty")));
            }
        }
        DiskGrid::new(self.grid.max_shell, self.grid.base_angular)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseError {
    pub kind: String,
    pub message: String,
}

impl From<Error> for CaseError {
    fn from(e: Error) -> Self {
        Self {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub phi: String,
    pub g: String,
    pub theorem: TheoremId,
    pub verdict: Option<Verdict>,
    pub error: Option<CaseError>,
}

impl CaseReport {
    pub fn conclusion(&self) -> Option<Conclusion> {
        self.verdict.as_ref().map(|v| v.conclusion)
    }

    pub fn sweep_row(&self) -> SweepRow {
        let (sup, limsup, verdict) = match (&self.verdict, &self.error) {
            (Some(v), _) => {
                let r = v.evidence.last();
                (
                    r.map_or(f64::NAN, |r| r.sup_value),
                    r.map_or(f64::NAN, |r| r.boundary_limsup_estimate),
                    v.conclusion.to_string(),
                )
            }
            (None, Some(e)) => (f64::NAN, f64::NAN, format!("error:{}", e.kind)),
            (None, None) => (f64::NAN, f64::NAN, "error".to_string()),
        };
        SweepRow {
            phi: self.phi.clone(),
            g: self.g.clone(),
            theorem: self.theorem.to_string(),
            sup,
            limsup,
            verdict,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub config: Config,
    pub cases: Vec<CaseReport>,
    pub invariants: Vec<InvariantResult>,
    /// Wall time; excluded from [`SuiteReport::payload_json`].
    pub elapsed_ms: Option<f64>,
}

impl SuiteReport {
    pub fn new(config: Config) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            config,
            cases: Vec::new(),
            invariants: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    /// JSON without timing, identical across runs of the same spec.
    pub fn payload_json(&self) -> Result<String> {
        to_json(&Self {
            elapsed_ms: None,
            ..self.clone()
        })
    }

    pub fn case_errors(&self) -> usize {
        self.cases.iter().filter(|c| c.error.is_some()).count()
    }

    pub fn invariant_failures(&self) -> usize {
        self.invariants.iter().filter(|i| !i.passed).count()
    }

    pub fn sweep_rows(&self) -> Vec<SweepRow> {
        self.cases.iter().map(CaseReport::sweep_row).collect()
    }
}

fn run_case(phi: &str, g: &str, theorem: TheoremId, grid: &DiskGrid, th: &Thresholds) -> Result<Verdict> {
    let phi = validate_self_map(AnalyticFn::parse(phi)?, grid)?;
    let g = AnalyticFn::parse(g)?;
    classify(theorem, &phi, &g, grid, th)
}

/// Classifies every `(φ, g, theorem)` triple of the spec, in spec order.
/// Per-case failures are recorded in the report and do not stop the run.
pub fn run_classification(spec: &ExperimentSpec, config: &Config) -> Result<SuiteReport> {
    let grid = spec.validate()?;
    let start = Instant::now();
    let triples: Vec<(&String, &String, TheoremId)> = spec
        .phi_exprs
        .iter()
        .flat_map(|p| {
            spec.g_exprs
                .iter()
                .flat_map(move |g| spec.theorem_ids.iter().map(move |&t| (p, g, t)))
        })
        .collect();
    let cases = triples
        .par_iter()
        .map(|&(phi, g, theorem)| {
            let (verdict, error) = match run_case(phi, g, theorem, &grid, &spec.thresholds) {
                Ok(v) => (Some(v), None),
                Err(e) => (None, Some(e.into())),
            };
            CaseReport {
                phi: phi.clone(),
                g: g.clone(),
                theorem,
                verdict,
                error,
            }
        })
        .collect();
    let mut echo = *config;
    echo.grid = spec.grid;
    echo.thresholds = spec.thresholds;
    Ok(SuiteReport {
        cases,
        elapsed_ms: Some(start.elapsed().as_secs_f64() * 1e3),
        ..SuiteReport::new(echo)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(phi: &[&str], g: &[&str], t: &[TheoremId]) -> ExperimentSpec {
        ExperimentSpec {
            phi_exprs: phi.iter().map(|s| s.to_string()).collect(),
            g_exprs: g.iter().map(|s| s.to_string()).collect(),
            theorem_ids: t.to_vec(),
            grid: GridConfig::default(),
            thresholds: Thresholds::default(),
            format: OutputFormat::Json,
        }
    }

    #[test]
    fn single_case() {
        let r = run_classification(&spec(&["z/2"], &["z"], &[TheoremId::T3_2]), &Config::default()).unwrap();
        assert_eq!(r.cases.len(), 1);
        assert_eq!(r.cases[0].conclusion(), Some(Conclusion::Compact));
    }

    #[test]
    fn bad_expression_recorded() {
        let r = run_classification(&spec(&["z/2"], &["z +", "z"], &[TheoremId::T3_1]), &Config::default()).unwrap();
        assert_eq!(r.cases.len(), 2);
        assert_eq!(r.case_errors(), 1);
        assert_eq!(r.cases[0].error.as_ref().unwrap().kind, "syntax");
        assert!(r.cases[1].verdict.is_some());
    }

    #[test]
    fn empty_theorem_list_rejected() {
        assert!(run_classification(&spec(&["z"], &["z"], &[]), &Config::default()).is_err());
    }

    #[test]
    fn spec_json_uses_labels() {
        let s = ExperimentSpec::from_json(r#"{"phi_exprs":["z"],"g_exprs":["z"],"theorem_ids":["T4.1b","C3.4"],"format":"csv"}"#)
            .unwrap();
        assert_eq!(s.theorem_ids, vec![TheoremId::T4_1b, TheoremId::C3_4]);
        assert_eq!(s.format, OutputFormat::Csv);
        assert_eq!(s.grid, GridConfig::default());
    }

    #[test]
    fn payload_is_deterministic() {
        let s = spec(&["mobius(0.5)", "z^2"], &["z", "log(2/(1-0.9*z))"], &[TheoremId::T3_2, TheoremId::P4_7]);
        let a = run_classification(&s, &Config::default()).unwrap().payload_json().unwrap();
        let b = run_classification(&s, &Config::default()).unwrap().payload_json().unwrap();
        assert_eq!(a, b);
    }
}
