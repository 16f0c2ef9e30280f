use std::fmt;

use num_complex::Complex64;

use crate::expr::{self, Expr};
use crate::Result;

/// A holomorphic function given by an expression tree, carrying its exact
/// symbolic derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticFn {
    expr: Expr,
    deriv: Expr,
}

impl AnalyticFn {
    pub fn new(expr: Expr) -> Self {
        let deriv = expr.differentiate();
        Self { expr, deriv }
    }

    pub fn parse(text: &str) -> Result<Self> {
        expr::parse(text).map(Self::new)
    }

    pub fn identity() -> Self {
        Self::new(Expr::Var)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(Expr::Const(c))
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn derivative_expr(&self) -> &Expr {
        &self.deriv
    }

    /// `f(z)`.
    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.expr.eval(z)
    }

    /// `f′(z)`.
    #[inline]
    pub fn deriv(&self, z: Complex64) -> Complex64 {
        self.deriv.eval(z)
    }

    /// The derivative as a function in its own right.
    pub fn derivative(&self) -> AnalyticFn {
        AnalyticFn::new(self.deriv.clone())
    }

    /// `self ∘ inner`, formed symbolically.
    pub fn compose(&self, inner: &AnalyticFn) -> AnalyticFn {
        AnalyticFn::new(self.expr.substitute(&inner.expr))
    }

    pub fn is_constant(&self) -> bool {
        self.expr.is_constant()
    }
}

impl From<Expr> for AnalyticFn {
    fn from(e: Expr) -> Self {
        AnalyticFn::new(e)
    }
}

impl fmt::Display for AnalyticFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_chain_rule() {
        let g = AnalyticFn::parse("log(2/(1-0.5*z))").unwrap();
        let phi = AnalyticFn::parse("mobius(0.3)").unwrap();
        let gphi = g.compose(&phi);
        let z = Complex64::new(0.2, -0.6);
        let chain = g.deriv(phi.eval(z)) * phi.deriv(z);
        assert!((gphi.deriv(z) - chain).norm() < 1e-14);
    }
}
