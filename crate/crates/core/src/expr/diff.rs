use num_complex::Complex64;

use super::Expr;

fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if *c == Complex64::new(0.0, 0.0))
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if *c == Complex64::new(1.0, 0.0))
}

fn zero() -> Expr {
    Expr::real(0.0)
}

// Light folding keeps derivative trees small; it only drops exact zeros and
// ones and folds constant-constant arithmetic.

fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_zero(&a) => b,
        _ if is_zero(&b) => a,
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_zero(&b) => a,
        _ if is_zero(&a) => neg(b),
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_zero(&a) || is_zero(&b) => zero(),
        _ if is_one(&a) => b,
        _ if is_one(&b) => a,
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_zero(&a) => zero(),
        _ if is_one(&b) => a,
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

fn pow(a: Expr, n: u32) -> Expr {
    match n {
        0 => Expr::real(1.0),
        1 => a,
        _ => Expr::Pow(Box::new(a), n),
    }
}

/// Exact symbolic derivative with respect to `z`.
pub(super) fn differentiate(e: &Expr) -> Expr {
    match e {
        Expr::Var => Expr::real(1.0),
        Expr::Const(_) => zero(),
        Expr::Neg(a) => neg(differentiate(a)),
        Expr::Add(a, b) => add(differentiate(a), differentiate(b)),
        Expr::Sub(a, b) => sub(differentiate(a), differentiate(b)),
        Expr::Mul(a, b) => add(
            mul(differentiate(a), (**b).clone()),
            mul((**a).clone(), differentiate(b)),
        ),
        Expr::Div(a, b) => {
            let da = differentiate(a);
            let db = differentiate(b);
            if is_zero(&db) {
                div(da, (**b).clone())
            } else {
                div(
                    sub(mul(da, (**b).clone()), mul((**a).clone(), db)),
                    pow((**b).clone(), 2),
                )
            }
        }
        Expr::Pow(a, n) => match n {
            0 => zero(),
            _ => mul(
                mul(Expr::real(*n as f64), pow((**a).clone(), n - 1)),
                differentiate(a),
            ),
        },
        Expr::Exp(a) => mul(e.clone(), differentiate(a)),
        Expr::Log(a) => div(differentiate(a), (**a).clone()),
        Expr::Mobius(c, w) => {
            // d/dw (c − w)/(1 − c̄w) = −(1 − |c|²)/(1 − c̄w)²
            let denom = sub(Expr::real(1.0), mul(Expr::Const(c.conj()), (**w).clone()));
            let outer = div(Expr::real(-(1.0 - c.norm_sqr())), pow(denom, 2));
            mul(outer, differentiate(w))
        }
    }
}
