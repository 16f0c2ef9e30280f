//! Parse, print and differentiate expressions in the function language.

use blochlab::expr::{parse, print_expr};
use blochlab::{AnalyticFn, Complex64};

fn main() {
    let inputs = [
        "z^3 - 2*z + 1",
        "exp(z) * mobius(0.5)",
        "log(2/(1 - 0.9*z))",
        "mobius(complex(0.2, 0.4), z^2)",
        "z +",
        "sinh(z)",
    ];
    let z = Complex64::new(0.25, -0.5);
    for text in inputs {
        match parse(text) {
            Ok(e) => {
                let f = AnalyticFn::new(e.clone());
                println!("{text}");
                println!("  printed  {}", print_expr(&e));
                println!("  f'       {}", print_expr(f.derivative_expr()));
                println!("  f(z)     {:.6}", f.eval(z));
                println!("  f'(z)    {:.6}", f.deriv(z));
            }
            Err(err) => println!("{text}\n  error: {err}"),
        }
    }
}
