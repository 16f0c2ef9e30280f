//! Boundedness and compactness verdicts for a small panel of symbols.

use blochlab::criteria::{classify, TheoremId, Thresholds};
use blochlab::diskgeom::{validate_self_map, DiskGrid};
use blochlab::AnalyticFn;

fn main() -> blochlab::Result<()> {
    let grid = DiskGrid::default();
    let th = Thresholds::default();
    let cases = [
        ("z/2", "z"),
        ("mobius(0.5)", "z"),
        ("(1 + z)/2", "log(2/(1 - 0.9*z))"),
        ("z^2", "1"),
    ];
    for (phi_text, g_text) in cases {
        let phi = validate_self_map(AnalyticFn::parse(phi_text)?, &grid)?;
        let g = AnalyticFn::parse(g_text)?;
        println!("phi = {phi_text}, g = {g_text}");
        for thm in TheoremId::ALL {
            match classify(thm, &phi, &g, &grid, &th) {
                Ok(v) => println!("  {:<6} {:<20} {}", thm.label(), v.conclusion.to_string(), thm.statement()),
                Err(e) => println!("  {:<6} error: {e}", thm.label()),
            }
        }
    }
    Ok(())
}
