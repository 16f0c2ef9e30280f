//! Separated nodes and the peak functions that interpolate on them.

use blochlab::testfns::{build_interpolation_family, select_separated_subsequence, separation_product};
use blochlab::Complex64;

fn main() -> blochlab::Result<()> {
    let radial: Vec<Complex64> = (1..=10).map(|k| Complex64::new(1.0 - 0.5f64.powi(k), 0.0)).collect();
    let d = 0.1;
    let nodes = select_separated_subsequence(&radial, d);
    println!("kept {} of {} radial points at d = {d}", nodes.len(), radial.len());
    for k in 0..nodes.len() {
        println!("  x_{k} = {:.6}  product {:.4}", nodes[k].re, separation_product(&nodes, k));
    }

    let nodes = &nodes[..5];
    let fam = build_interpolation_family(nodes, d)?;
    println!("sum bound M ~ {:.4}", fam.sum_bound_estimate);
    for row in fam.kronecker_matrix() {
        let cells: Vec<String> = row.iter().map(|c| format!("{:7.1e}", c.norm())).collect();
        println!("  {}", cells.join(" "));
    }

    let crowded = [Complex64::new(0.5, 0.0), Complex64::new(0.51, 0.0)];
    if let Err(e) = build_interpolation_family(&crowded, d) {
        println!("crowded nodes: {e}");
    }
    Ok(())
}
