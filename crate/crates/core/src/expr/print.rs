use std::fmt;

use num_complex::Complex64;

use super::Expr;

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

struct Child<'a>(&'a Expr, u8);

impl fmt::Display for Child<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if precedence(self.0) < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

// `{:?}` on f64 is the shortest representation that parses back to the same bits.
fn write_const(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    if c.im == 0.0 && !c.im.is_sign_negative() && c.re.is_finite() && !c.re.is_sign_negative() {
        write!(f, "{:?}", c.re)
    } else {
        write!(f, "complex({:?}, {:?})", c.re, c.im)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var => write!(f, "z"),
            Expr::Const(c) => write_const(f, *c),
            Expr::Neg(a) => write!(f, "-{}", Child(a, 3)),
            Expr::Add(a, b) => write!(f, "{} + {}", Child(a, 1), Child(b, 2)),
            Expr::Sub(a, b) => write!(f, "{} - {}", Child(a, 1), Child(b, 2)),
            Expr::Mul(a, b) => write!(f, "{}*{}", Child(a, 2), Child(b, 3)),
            Expr::Div(a, b) => write!(f, "{}/{}", Child(a, 2), Child(b, 3)),
            Expr::Pow(a, n) => write!(f, "{}^{}", Child(a, 5), n),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Log(a) => write!(f, "log({a})"),
            Expr::Mobius(c, inner) => {
                write!(f, "mobius(")?;
                write_const(f, *c)?;
                if **inner != Expr::Var {
                    write!(f, ", {inner}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Renders an expression in the input grammar; `parse(print_expr(e))`
/// rebuilds the same tree.
pub fn print_expr(e: &Expr) -> String {
    e.to_string()
}
