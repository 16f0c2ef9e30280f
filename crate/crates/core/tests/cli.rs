use std::path::Path;
use std::process::{Command, Output};

fn blochlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blochlab"))
        .args(args)
        .env_remove("BLOCHLAB_CONFIG")
        .output()
        .expect("spawn blochlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn first_value(text: &str, key: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(key)).unwrap_or_else(|| panic!("no {key} in {text}"));
    line.split_whitespace().nth(1).unwrap().parse().unwrap()
}

#[test]
fn seminorm_of_automorphism_is_one() {
    let o = blochlab(&["seminorm", "--f", "mobius(0.5)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = first_value(&stdout(&o), "seminorm");
    assert!((v - 1.0).abs() < 1e-6, "{v}");
}

#[test]
fn hinf_of_polynomial() {
    let o = blochlab(&["hinf", "--f", "z^2 + 1", "--grid", "8,64"]);
    assert_eq!(o.status.code(), Some(0));
    let v = first_value(&stdout(&o), "hinf");
    assert!(v > 1.99 && v <= 2.0, "{v}");
}

#[test]
fn classify_json_reports_compact() {
    let o = blochlab(&["classify", "--thm", "T3.2", "--phi", "z/2", "--g", "z", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["conclusion"], "Compact");
    assert_eq!(v["theorem"], "T3.2");
}

#[test]
fn criterion_text_lists_shells() {
    let o = blochlab(&["criterion", "--kind", "Lg", "--g", "z", "--grid", "6,64"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("Lg sup"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("  ")).count(), 7);
}

#[test]
fn commutator_runs() {
    let o = blochlab(&[
        "commutator", "--kind", "I", "--phi", "z/2", "--g", "z", "--f", "z", "--grid", "6,64",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(first_value(&stdout(&o), "commutator").is_finite());
}

#[test]
fn verify_identities_passes() {
    let o = blochlab(&["verify", "--suite", "identities", "--filter", "series"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn usage_errors_exit_two() {
    let cases: [(&[&str], &str); 5] = [
        (&["seminorm", "--f", "z+"], "error[syntax]"),
        (&["seminorm", "--f", "foo(z)"], "error["),
        (&["classify", "--thm", "T9", "--phi", "z", "--g", "z"], "error[invalid-argument]"),
        (&["seminorm", "--f", "z", "--grid", "x"], "error[invalid-argument]"),
        (&["nosuch"], "error[usage]"),
    ];
    for (args, prefix) in cases {
        let o = blochlab(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).starts_with(prefix), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn non_self_map_is_rejected() {
    let o = blochlab(&["classify", "--thm", "T3.2", "--phi", "2*z", "--g", "z"]);
    assert_ne!(o.status.code(), Some(0));
    assert!(stderr(&o).starts_with("error["));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.json",
        r#"{"phi_exprs": ["z/2", "mobius(0.3)"], "g_exprs": ["z"],
            "theorem_ids": ["T3.2"], "grid": {"max_shell": 8, "base_angular": 64}, "format": "csv"}"#,
    );
    let out = dir.path().join("out.csv");
    let o = blochlab(&["sweep", "--spec", &spec, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["phi", "g", "theorem", "sup", "limsup", "verdict"]
    );
    let verdicts: Vec<String> = rdr.records().map(|r| r.unwrap()[5].to_owned()).collect();
    assert_eq!(verdicts.len(), 2);
    assert_eq!(verdicts[0], "Compact");
}

#[test]
fn sweep_rejects_unknown_spec_fields() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", r#"{"phi_exprs": [], "g_exprs": [], "theorem_ids": [], "extra": 1}"#);
    let out = dir.path().join("out.csv");
    let o = blochlab(&["sweep", "--spec", &spec, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_and_env_select_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.toml", "[grid]\nmax_shell = 4\nbase_angular = 64\n");
    let o = blochlab(&["--config", &cfg, "criterion", "--kind", "Lg", "--g", "z"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("  ")).count(), 5);

    let o = Command::new(env!("CARGO_BIN_EXE_blochlab"))
        .args(["criterion", "--kind", "Lg", "--g", "z"])
        .env("BLOCHLAB_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("  ")).count(), 5);

    let bad = write(dir.path(), "bad.toml", "[grid]\nshells = 3\n");
    let o = blochlab(&["--config", &bad, "seminorm", "--f", "z"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[config]"), "{}", stderr(&o));
}
