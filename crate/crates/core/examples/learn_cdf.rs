//! Learn a whole CDF to small Levy distance from posted prices.
//!
//! ```bash
//! cargo run --example learn_cdf
//! ```

use std::sync::Arc;

use pricing_query::analysis::{kolmogorov_distance, levy_distance};
use pricing_query::dist::{NormalDist, ValueDistribution};
use pricing_query::estimators::learn_cdf_general;
use pricing_query::oracle::PricingSession;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let buyer = NormalDist::new(0.5, 0.15)?;
    let mut session = PricingSession::new(Arc::new(buyer), 8);
    let est = learn_cdf_general(&mut session, 0.05)?;

    for (v, f) in est.grid.iter().zip(&est.f_hat).step_by(2) {
        println!("F({v:.2}) ~ {f:.3}   exact {:.3}", buyer.cdf(*v));
    }
    let (truth, learned) = (|v: f64| buyer.cdf(v), |v: f64| est.cdf(v));
    println!("levy distance       {:.4}", levy_distance(&truth, &learned, -0.5, 1.5, 1e-3));
    println!("kolmogorov distance {:.4}", kolmogorov_distance(&truth, &learned, -0.5, 1.5, 1e-3, &est.grid));
    println!("queries             {}", est.queries);
    Ok(())
}
