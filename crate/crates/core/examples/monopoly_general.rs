//! Price an arbitrary buyer on [0, 1] by estimating revenue on a grid.
//!
//! ```bash
//! cargo run --example monopoly_general
//! ```

use std::sync::Arc;

use pricing_query::dist::{revenue_at, EqualRevenueGridDist};
use pricing_query::estimators::{find_monopoly_general, grid_size};
use pricing_query::oracle::PricingSession;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // every named price earns 1/4 except 0.74, which earns 0.27
    let buyer = Arc::new(EqualRevenueGridDist::new(3, 0.02)?);
    let (p_opt, r_opt) = buyer.optimum().expect("index 3 has an optimum");
    let eps = 0.004;

    let mut session = PricingSession::new(buyer.clone(), 2);
    let res = find_monopoly_general(&mut session, eps)?;
    println!("grid of {} prices, {} queries", grid_size(eps), res.queries);
    println!("chosen price {:.4} (optimum {p_opt:.4})", res.p_hat);
    println!("revenue {:.4} (optimum {r_opt:.4})", revenue_at(buyer.as_ref(), res.p_hat));
    Ok(())
}
