//! JSON and CSV emission. Every real is written with 17 significant digits,
//! which round-trips `f64` exactly; non-finite reals become `null`.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::{Error, Result};

/// Current JSON report schema.
pub const SCHEMA_VERSION: u32 = 1;

/// `x` with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

/// Serializes `value` as pretty-printed JSON with 17-digit reals.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&fmt_real(n.as_f64().unwrap_or(f64::NAN)));
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            // short numeric arrays (complex pairs) stay on one line
            if items.iter().all(|x| x.is_number()) && items.len() <= 2 {
                out.push('[');
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, depth + 1);
                }
                out.push(']');
                return;
            }
            write_seq(out, depth, '[', ']', items.iter().map(|x| (None, x)));
        }
        Value::Object(map) => write_seq(out, depth, '{', '}', map.iter().map(|(k, x)| (Some(k), x))),
    }
}

fn write_seq<'a>(
    out: &mut String,
    depth: usize,
    open: char,
    close: char,
    items: impl ExactSizeIterator<Item = (Option<&'a String>, &'a Value)>,
) {
    if items.len() == 0 {
        out.push(open);
        out.push(close);
        return;
    }
    out.push(open);
    for (i, (key, x)) in items.enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('\n');
        out.push_str(&"  ".repeat(depth + 1));
        if let Some(k) = key {
            out.push_str(&Value::String(k.clone()).to_string());
            out.push_str(": ");
        }
        write_value(out, x, depth + 1);
    }
    out.push('\n');
    out.push_str(&"  ".repeat(depth));
    out.push(close);
}

/// One row of a sweep CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub phi: String,
    pub g: String,
    pub theorem: String,
    pub sup: f64,
    pub limsup: f64,
    pub verdict: String,
}

pub const SWEEP_HEADER: [&str; 6] = ["phi", "g", "theorem", "sup", "limsup", "verdict"];

pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(SWEEP_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.phi.as_str(),
            r.g.as_str(),
            r.theorem.as_str(),
            &fmt_real(r.sup),
            &fmt_real(r.limsup),
            r.verdict.as_str(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2f64.sqrt(), 1e-300, -7.25e12, f64::MIN_POSITIVE] {
            let s = fmt_real(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17, "{s}");
        }
        assert_eq!(fmt_real(f64::NAN), "null");
    }

    #[test]
    fn json_is_valid_and_exact() {
        #[derive(Serialize)]
        struct T {
            a: f64,
            n: u32,
            v: Vec<f64>,
            s: &'static str,
            z: num_complex::Complex64,
        }
        let t = T {
            a: 0.1 + 0.2,
            n: 3,
            v: vec![1.0, 2.5, 1e-17],
            s: "q\"uote",
            z: num_complex::Complex64::new(0.5, -1.0 / 3.0),
        };
        let text = to_json(&t).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["a"].as_f64().unwrap(), 0.1 + 0.2);
        assert_eq!(back["n"].as_u64().unwrap(), 3);
        assert_eq!(back["s"].as_str().unwrap(), "q\"uote");
        assert_eq!(back["z"][1].as_f64().unwrap(), -1.0 / 3.0);
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        let row = SweepRow {
            phi: "z/2".into(),
            g: "log(2/(1-0.5*z))".into(),
            theorem: "T3.2".into(),
            sup: 0.5,
            limsup: 0.0,
            verdict: "Compact".into(),
        };
        write_sweep_csv(&mut buf, &[row]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "phi,g,theorem,sup,limsup,verdict");
        assert!(lines.next().unwrap().starts_with("z/2,log(2/(1-0.5*z)),T3.2,5.0000000000000000e-1,"));
    }
}
