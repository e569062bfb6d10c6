//! Build the hard-instance families and print their separation
//! certificates, plus the per-query information budget between two close
//! distributions.
//!
//! ```bash
//! cargo run --example lower_bounds
//! ```

use pricing_query::analysis::{kl_bernoulli, pinsker_bound, transcript_kl_budget};
use pricing_query::bench::{emit_lowerbound_family, LowerBoundFamily};
use pricing_query::dist::{MhrPair, MhrVariant};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (family, eps) in [
        (LowerBoundFamily::Mhr, 0.001),
        (LowerBoundFamily::RegularLevy, 0.01),
        (LowerBoundFamily::General, 0.01),
    ] {
        println!("{}\n", emit_lowerbound_family(family, eps)?);
    }

    let d = MhrPair::new(MhrVariant::D, 0.001)?;
    let dp = MhrPair::new(MhrVariant::DPrime, 0.001)?;
    let prices: Vec<f64> = (1..100).map(|k| k as f64 / 100.0).collect();
    let kl = transcript_kl_budget(&d, &dp, &prices);
    println!("KL over 99 posted prices: {kl:.3e}");
    println!("single query at q = 0.5 vs 0.51: KL {:.3e}, TV <= {:.3e}", kl_bernoulli(0.5, 0.51), pinsker_bound(kl_bernoulli(0.5, 0.51)));
    Ok(())
}
