//! Bloch seminorm, sup norm, and little-Bloch membership for a few functions.

use blochlab::criteria::{little_bloch_membership, Thresholds};
use blochlab::diskgeom::DiskGrid;
use blochlab::operators::{bloch_seminorm, hinf_norm};
use blochlab::AnalyticFn;

fn main() -> blochlab::Result<()> {
    let grid = DiskGrid::default();
    let th = Thresholds::default();
    println!("{:<22} {:>10} {:>12} {:>16}", "f", "||f||_B*", "||f||_inf", "little Bloch");
    for text in ["z", "z^2", "mobius(0.5)", "log(2/(1 - 0.999*z))", "log(1/(1 - z))", "exp(z)"] {
        let f = AnalyticFn::parse(text)?;
        let b = bloch_seminorm(&f, &grid)?;
        let h = hinf_norm(&f, &grid)?;
        let lb = little_bloch_membership(&f, &grid, &th);
        println!("{text:<22} {:>10.6} {:>12.4} {:>16?}", b.value, h.value, lb.status);
    }
    Ok(())
}
