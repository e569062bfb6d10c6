//! Estimate the sale probability at one price to a chosen accuracy.
//!
//! ```bash
//! cargo run --example quantile_estimate
//! ```

use std::sync::Arc;

use pricing_query::dist::{NormalDist, ValueDistribution};
use pricing_query::estimators::{estimate_quantile, sample_count};
use pricing_query::oracle::PricingSession;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let buyer = Arc::new(NormalDist::new(0.5, 0.2)?);
    let (price, eps, delta) = (0.6, 0.02, 0.05);
    let mut session = PricingSession::new(buyer.clone(), 1);

    let est = estimate_quantile(&mut session, price, eps, delta)?;
    println!("planned posts   {}", sample_count(eps, delta));
    println!("estimated Q(p)  {:.4}", est.q_hat);
    println!("exact Q(p)      {:.4}", buyer.quantile(price));
    println!("error           {:.4} (target {eps})", (est.q_hat - buyer.quantile(price)).abs());
    Ok(())
}
