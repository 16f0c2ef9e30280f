//! A small expression language in one complex variable `z`.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' uint)? | '-' factor
//! atom   := 'z' | number | 'i' | '(' expr ')' | ident '(' args ')'
//! ident  := 'exp' | 'log' | 'mobius' | 'complex'
//! ```
//!
//! Numbers are decimal with an optional exponent; a number immediately
//! followed by `i` is imaginary (`2i`, `0.5i`). `complex(re, im)` builds a
//! literal from two real constant arguments. `mobius(a)` is the disk
//! automorphism `(a − z)/(1 − ā z)`; `mobius(a, w)` applies it to the
//! subexpression `w`. `log` is the principal branch.

mod diff;
mod parse;
mod print;

use num_complex::Complex64;

pub use parse::parse;
pub use print::print_expr;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var,
    Const(Complex64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    /// `(a − w)/(1 − ā w)` applied to the child `w`.
    Mobius(Complex64, Box<Expr>),
}

impl Expr {
    pub fn z() -> Self {
        Expr::Var
    }

    pub fn constant(c: Complex64) -> Self {
        Expr::Const(c)
    }

    pub fn real(x: f64) -> Self {
        Expr::Const(Complex64::new(x, 0.0))
    }

    pub fn mobius(a: Complex64) -> Self {
        Expr::Mobius(a, Box::new(Expr::Var))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Expr::Var => z,
            Expr::Const(c) => *c,
            Expr::Neg(a) => -a.eval(z),
            Expr::Add(a, b) => a.eval(z) + b.eval(z),
            Expr::Sub(a, b) => a.eval(z) - b.eval(z),
            Expr::Mul(a, b) => a.eval(z) * b.eval(z),
            Expr::Div(a, b) => a.eval(z) / b.eval(z),
            Expr::Pow(a, n) => a.eval(z).powu(*n),
            Expr::Exp(a) => a.eval(z).exp(),
            Expr::Log(a) => a.eval(z).ln(),
            Expr::Mobius(a, w) => {
                let w = w.eval(z);
                (a - w) / (1.0 - a.conj() * w)
            }
        }
    }

    /// True when `z` does not occur in the tree.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Var => false,
            Expr::Const(_) => true,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) | Expr::Log(a) | Expr::Mobius(_, a) => {
                a.is_constant()
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_constant() && b.is_constant()
            }
        }
    }

    /// Value of a constant tree, `None` if `z` occurs.
    pub fn const_value(&self) -> Option<Complex64> {
        self.is_constant().then(|| self.eval(Complex64::new(0.0, 0.0)))
    }

    /// Replaces every occurrence of `z` by `inner`, i.e. forms `self ∘ inner`.
    pub fn substitute(&self, inner: &Expr) -> Expr {
        let sub = |e: &Expr| Box::new(e.substitute(inner));
        match self {
            Expr::Var => inner.clone(),
            Expr::Const(c) => Expr::Const(*c),
            Expr::Neg(a) => Expr::Neg(sub(a)),
            Expr::Add(a, b) => Expr::Add(sub(a), sub(b)),
            Expr::Sub(a, b) => Expr::Sub(sub(a), sub(b)),
            Expr::Mul(a, b) => Expr::Mul(sub(a), sub(b)),
            Expr::Div(a, b) => Expr::Div(sub(a), sub(b)),
            Expr::Pow(a, n) => Expr::Pow(sub(a), *n),
            Expr::Exp(a) => Expr::Exp(sub(a)),
            Expr::Log(a) => Expr::Log(sub(a)),
            Expr::Mobius(c, a) => Expr::Mobius(*c, sub(a)),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Expr::Var | Expr::Const(_) => 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) | Expr::Log(a) | Expr::Mobius(_, a) => {
                1 + a.size()
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Whether the tree is syntactically a disk automorphism: a Möbius factor
    /// or the identity, optionally precomposed and/or postcomposed with a
    /// rotation `c·(…)`, `|c| = 1`, or negated. No numerical detection.
    pub fn is_automorphism_form(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Neg(a) => a.is_automorphism_form(),
            Expr::Mobius(_, inner) => inner.is_rotation_form(),
            Expr::Mul(a, b) => match (unimodular(a), unimodular(b)) {
                (true, _) => b.is_automorphism_form(),
                (_, true) => a.is_automorphism_form(),
                _ => false,
            },
            _ => false,
        }
    }

    fn is_rotation_form(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Neg(a) => a.is_rotation_form(),
            Expr::Mul(a, b) => {
                (unimodular(a) && b.is_rotation_form()) || (unimodular(b) && a.is_rotation_form())
            }
            _ => false,
        }
    }

    pub fn differentiate(&self) -> Expr {
        diff::differentiate(self)
    }
}

fn unimodular(e: &Expr) -> bool {
    e.const_value()
        .map(|c| (c.norm() - 1.0).abs() < 1e-12)
        .unwrap_or(false)
}

impl std::str::FromStr for Expr {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        parse(s)
    }
}
