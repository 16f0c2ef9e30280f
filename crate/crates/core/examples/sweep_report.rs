//! Classify a panel from a JSON spec and print the CSV sweep.

use blochlab::harness::report::write_sweep_csv;
use blochlab::harness::{run_classification, Config, ExperimentSpec};

const SPEC: &str = r#"{
  "phi_exprs": ["z/2", "mobius(0.5)", "(1 + z)/2"],
  "g_exprs": ["z", "log(2/(1 - 0.9*z))"],
  "theorem_ids": ["T3.2", "T4.1b"],
  "format": "csv"
}"#;

fn main() -> blochlab::Result<()> {
    let spec = ExperimentSpec::from_json(SPEC)?;
    let report = run_classification(&spec, &Config::default())?;
    write_sweep_csv(std::io::stdout().lock(), &report.sweep_rows())?;
    eprintln!("{} cases, {} errors", report.cases.len(), report.case_errors());
    Ok(())
}
