//! Built-in panels of self-maps, symbols and test functions, as DSL strings.

use std::f64::consts::TAU;

/// Eight disk automorphisms. Möbius parameters stay within `|a| ≤ 0.5`.
pub const AUTOMORPHISMS: [&str; 8] = [
    "mobius(0.5)",
    "mobius(-0.5)",
    "mobius(0.5i)",
    "mobius(complex(0.3, -0.4))",
    "mobius(0)",
    "complex(0, 1)*mobius(0.25)",
    "mobius(-0.25i)*complex(0.6, 0.8)",
    "mobius(0.4, complex(0, 1)*z)",
];

pub const SHRINKERS: [&str; 3] = ["z/2", "z^2/2", "(z+0.3)/2"];

/// Ten maps mixing shrinkers, boundary-touching non-automorphisms,
/// automorphisms, a rotation and the identity.
pub const MIXED: [&str; 10] = [
    "z/2",
    "z^2/2",
    "(z+0.3)/2",
    "(1+z)/2",
    "z^2",
    "mobius(0.5)",
    "mobius(-0.5i)",
    "complex(0, 1)*mobius(0.25)",
    "complex(0.6, 0.8)*z",
    "z",
];

/// Symbols `g`: constants, polynomials, Möbius-based, and the logarithmic
/// family `log(2/(1 − cz))` with `c → 1` approached through 0.999.
pub const G_CORPUS: [&str; 9] = [
    "1",
    "complex(0.5, -2)",
    "z",
    "z^2",
    "z*mobius(0.3)",
    "mobius(complex(0.2, 0.4))",
    "log(2/(1-0.5*z))",
    "log(2/(1-0.9*z))",
    "log(2/(1-0.999*z))",
];

/// Bloch test functions `f`.
pub const F_CORPUS: [&str; 9] = [
    "z",
    "z^2",
    "z^3 - z/2",
    "exp(z)",
    "mobius(0.5)",
    "mobius(complex(-0.3, 0.6))",
    "(1-0.81)/(1-0.9*z)",
    "log(2/(1-0.5*z))",
    "log(2/(1-0.99*z))",
];

/// Polynomials of degree at most 4 with modest coefficients.
pub const POLYNOMIALS: [&str; 8] = [
    "0",
    "2",
    "z",
    "3*z - 1",
    "z^2 + complex(0, 1)*z",
    "z^3 - 2*z",
    "z^4/4 - z^2 + 0.5",
    "complex(1, -1)*z^4 + z^3 - 0.25*z",
];

const EXPR_CORPUS_TEXT: &str = include_str!("../../tests/data/expr_corpus.txt");

/// Thirty expressions covering every construct of the language.
pub fn expr_corpus() -> Vec<&'static str> {
    EXPR_CORPUS_TEXT
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

/// `e^{it} z` for `t = 2πk/16`, `k = 1..15`, printed so the constant
/// round-trips bit-exactly.
pub fn rotations() -> Vec<String> {
    (1..16)
        .map(|k| {
            let t = TAU * k as f64 / 16.0;
            format!("complex({:?}, {:?})*z", t.cos(), t.sin())
        })
        .collect()
}

pub fn automorphisms() -> Vec<String> {
    AUTOMORPHISMS.iter().map(|s| s.to_string()).collect()
}

pub fn shrinkers() -> Vec<String> {
    SHRINKERS.iter().map(|s| s.to_string()).collect()
}

pub fn mixed() -> Vec<String> {
    MIXED.iter().map(|s| s.to_string()).collect()
}

pub fn g_corpus() -> Vec<String> {
    G_CORPUS.iter().map(|s| s.to_string()).collect()
}

pub fn f_corpus() -> Vec<String> {
    F_CORPUS.iter().map(|s| s.to_string()).collect()
}

pub fn polynomials() -> Vec<String> {
    POLYNOMIALS.iter().map(|s| s.to_string()).collect()
}

/// Every map from the automorphism, shrinker and mixed panels, deduplicated.
pub fn all_maps() -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in AUTOMORPHISMS.iter().chain(&SHRINKERS).chain(&MIXED) {
        if !out.iter().any(|o| o == s) {
            out.push(s.to_string());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diskgeom::{validate_self_map, DiskGrid};
    use crate::AnalyticFn;

    #[test]
    fn panels_parse_and_validate() {
        let grid = DiskGrid::default();
        for s in all_maps().iter().chain(&rotations()) {
            let phi = validate_self_map(AnalyticFn::parse(s).unwrap(), &grid);
            assert!(phi.is_ok(), "{s}: {phi:?}");
        }
        for s in automorphisms().iter().chain(&rotations()) {
            let phi = validate_self_map(AnalyticFn::parse(s).unwrap(), &grid).unwrap();
            assert!(phi.is_automorphism(), "{s}");
        }
        assert_eq!(expr_corpus().len(), 30);
        for s in G_CORPUS.iter().chain(&F_CORPUS).chain(&POLYNOMIALS).chain(&expr_corpus()) {
            AnalyticFn::parse(s).unwrap();
        }
    }
}
