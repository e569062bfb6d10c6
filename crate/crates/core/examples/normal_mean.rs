//! Recover the mean of a normal buyer from sale/no-sale feedback, with the
//! scale known and with only an upper bound on it.
//!
//! ```bash
//! cargo run --example normal_mean
//! ```

use std::sync::Arc;

use pricing_query::dist::NormalDist;
use pricing_query::estimators::{estimate_normal_mean_known_sigma, estimate_normal_mean_sigma_bound};
use pricing_query::oracle::PricingSession;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (mu, sigma) = (0.5, 1.0);
    let root = PricingSession::new(Arc::new(NormalDist::new(mu, sigma)?), 11);
    let eps = 0.05;

    let mut s = root.fork(0);
    let known = estimate_normal_mean_known_sigma(&mut s, sigma, eps)?;
    println!("known sigma:   mu_hat {:.4}  error {:.4}  queries {}", known.mu_hat, (known.mu_hat - mu).abs(), known.queries);

    let mut s = root.fork(1);
    let bound = estimate_normal_mean_sigma_bound(&mut s, 2.0, eps)?;
    println!(
        "sigma <= 2:    mu_hat {:.4}  sigma_hat {:.4}  error {:.4}  queries {}",
        bound.mu_hat,
        bound.sigma_hat,
        (bound.mu_hat - mu).abs(),
        bound.queries
    );
    Ok(())
}
