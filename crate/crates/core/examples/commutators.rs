//! Commutators of composition and integration operators, evaluated two ways.

use blochlab::diskgeom::{validate_self_map, DiskGrid};
use blochlab::operators::{commutator_derivative, commutator_seminorm, commutator_value, CommutatorKind};
use blochlab::quadrature::QuadratureConfig;
use blochlab::{AnalyticFn, Complex64};

fn main() -> blochlab::Result<()> {
    let grid = DiskGrid::new(10, 64)?;
    let phi = validate_self_map(AnalyticFn::parse("(1 + z)/2")?, &grid)?;
    let g = AnalyticFn::parse("z^2 + z")?;
    let f = AnalyticFn::parse("exp(z)")?;
    let cfg = QuadratureConfig::default();
    let z = Complex64::new(0.4, 0.3);
    let h = 1e-5;

    for kind in [CommutatorKind::I, CommutatorKind::J] {
        let v = commutator_value(kind, &phi, &g, &f, z, &cfg)?;
        let fd = (commutator_value(kind, &phi, &g, &f, z + h, &cfg)?
            - commutator_value(kind, &phi, &g, &f, z - h, &cfg)?)
            / (2.0 * h);
        let exact = commutator_derivative(kind, &phi, &g, &f, z);
        let sn = commutator_seminorm(kind, &phi, &g, &f, &grid)?;
        println!("{kind:?}: value {v:.8}");
        println!("   derivative {exact:.8}, difference quotient {fd:.8}");
        println!("   Bloch seminorm of the image ~ {:.6} at {:.4}", sn.value, sn.arg);
    }
    Ok(())
}
