//! Find a price that sells about half the time with the confidence-bound
//! binary search, and a price for any other target sale probability.
//!
//! ```bash
//! cargo run --example median_search
//! ```

use std::sync::Arc;

use pricing_query::dist::{UniformDist, ValueDistribution};
use pricing_query::estimators::{find_median, find_quantile_price};
use pricing_query::oracle::PricingSession;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let buyer = Arc::new(UniformDist::new(0.0, 0.5)?);
    let root = PricingSession::new(buyer.clone(), 3);

    for eps in [0.08, 0.04, 0.02] {
        let mut s = root.fork(0);
        let m = find_median(&mut s, eps, 0.1)?;
        println!(
            "eps {eps:<5} price {:.4}  |F - 1/2| = {:.4}  certified {:.4}  queries {:>7}  moves {}",
            m.p_star,
            (buyer.cdf(m.p_star) - 0.5).abs(),
            m.eps_star,
            m.queries,
            m.rounds - 1
        );
    }

    let mut s = root.fork(1);
    let top = find_quantile_price(&mut s, 0.1, 0.02, 0.1, 0.0, 1.0)?;
    println!("price selling 10% of the time: {:.4} (exact {:.4})", top.p_star, buyer.inv_cdf(0.9));
    Ok(())
}
