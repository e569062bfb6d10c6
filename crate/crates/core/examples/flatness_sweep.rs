//! Measure how far a regular revenue curve can rise between four nearly
//! equal revenue probes.
//!
//! ```bash
//! cargo run --example flatness_sweep
//! ```

use pricing_query::analysis::{flatness_bound_check, flatness_sweep};
use pricing_query::dist::RegularBumpDist;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = RegularBumpDist::new(0.4, 0.01)?;
    let rep = flatness_bound_check(&d, 0.3, 0.9);
    println!("probes {:?}", rep.p.map(|p| (p * 1e4).round() / 1e4));
    println!("spread {:.4e}, interior max {:.4}, excess ratio {:.3}", rep.eps_flat, rep.interior_sup, rep.excess_ratio);

    let sweep = flatness_sweep(2_000, 9);
    println!("over {} random draws the largest excess ratio is {:.3}", sweep.draws, sweep.max_ratio);
    if let Some((spec, worst)) = sweep.worst {
        println!("attained by {spec} on [{:.4}, {:.4}]", worst.p[0], worst.p[3]);
    }
    Ok(())
}
