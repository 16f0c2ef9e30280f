//! Self-map validation, the Schwarz derivative, and the disk grid.

use blochlab::diskgeom::{pseudo_hyperbolic, schwarz_derivative, validate_self_map, DiskGrid};
use blochlab::{AnalyticFn, Complex64};

fn main() -> blochlab::Result<()> {
    let grid = DiskGrid::default();
    println!("grid: {} points, {} shells, resolution {:.2e}", grid.len(), grid.max_shell() + 1, grid.resolution());

    for text in ["mobius(0.5)", "z/2", "(1 + z)/2", "z^2", "1.5*z"] {
        let phi = match validate_self_map(AnalyticFn::parse(text)?, &grid) {
            Ok(phi) => phi,
            Err(e) => {
                println!("{text:<12} rejected: {e}");
                continue;
            }
        };
        let worst = grid
            .points()
            .iter()
            .map(|&z| schwarz_derivative(&phi, z).norm())
            .fold(0.0, f64::max);
        println!(
            "{text:<12} sup|phi| ~ {:.6}  max |phi#| = {worst:.12}  automorphism: {}",
            phi.sup_modulus_estimate(),
            phi.is_automorphism()
        );
    }

    let (a, b) = (Complex64::new(0.9, 0.0), Complex64::new(0.0, 0.9));
    println!("rho(0.9, 0.9i) = {:.6}", pseudo_hyperbolic(a, b));
    Ok(())
}
