//! Truncated Taylor series: arithmetic, calculus, and coefficient recovery.

use blochlab::series::{coeffs_default, TaylorSeries};
use blochlab::{AnalyticFn, Complex64};

fn real_parts(s: &TaylorSeries) -> Vec<f64> {
    s.coeffs().iter().map(|c| c.re).collect()
}

fn main() -> blochlab::Result<()> {
    let p = TaylorSeries::from_real(&[1.0, -2.0, 0.5]);
    let q = TaylorSeries::from_real(&[0.0, 1.0, 1.0, 1.0]);

    println!("p     = {:?}", real_parts(&p));
    println!("p + q = {:?}", real_parts(&p.add(&q)));
    println!("p * q = {:?}", real_parts(&p.mul(&q)));
    println!("(∫p)' == p: {}", p.antiderivative().derivative() == p);

    let z = Complex64::new(0.3, 0.4);
    println!("p(z) q(z) = {}", p.eval(z) * q.eval(z));
    println!("(pq)(z)   = {}", p.mul(&q).eval(z));

    // 1/(1 - z/2) has coefficients 2^-n
    let f = AnalyticFn::parse("1/(1 - z/2)")?;
    let s = coeffs_default(|z| f.eval(z), 10)?;
    for (n, c) in s.coeffs().iter().enumerate() {
        println!("a_{n:<2} = {:+.3e}   (2^-{n} = {:.3e})", c.re, 0.5f64.powi(n as i32));
    }
    Ok(())
}
