//! Rotation averaging and the boundary ratio check for a few symbols.

use blochlab::criteria::Thresholds;
use blochlab::diskgeom::{validate_self_map, DiskGrid};
use blochlab::harness::{hospital_ratio_check, rotation_average_check};
use blochlab::harness::checks::RotationOutcome;
use blochlab::AnalyticFn;

fn main() -> blochlab::Result<()> {
    let grid = DiskGrid::default();
    let th = Thresholds::default();
    for text in ["z^2 + z", "log(1/(1 - z))"] {
        let g = AnalyticFn::parse(text)?;
        let r = rotation_average_check(&g, 32, &grid, &th)?;
        let outcome = match &r.outcome {
            RotationOutcome::Witness { t, limsup, .. } => format!("witness at t = {t:.4}, limsup {limsup:.4}"),
            other => format!("{other:?}"),
        };
        println!("g = {text:<16} {:?}, {outcome}, averaging residual {:.1e}", r.membership, r.averaging_residual);
    }

    for text in ["(1 + z)/2", "mobius(0.5)", "z/2"] {
        let phi = validate_self_map(AnalyticFn::parse(text)?, &grid)?;
        let h = hospital_ratio_check(&phi, &grid);
        println!("phi = {text:<12} outer ratio max {:.4}, within slack: {}", h.outer_max, h.outer_within);
    }
    Ok(())
}
