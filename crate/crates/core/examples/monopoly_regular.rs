//! Search for the revenue-maximizing price of a regular buyer, stepping the
//! interval search by hand to watch the candidate list.
//!
//! ```bash
//! cargo run --example monopoly_regular
//! ```

use std::sync::Arc;

use pricing_query::analysis::dense_scan_monopoly;
use pricing_query::dist::{revenue_at, RegularBumpDist};
use pricing_query::estimators::RegularMonopolySearch;
use pricing_query::oracle::PricingSession;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let buyer = Arc::new(RegularBumpDist::new(0.5, 0.01)?);
    let mut session = PricingSession::new(buyer.clone(), 5);
    let eps = 0.02;

    let mut search = RegularMonopolySearch::new(eps)?;
    while let Some(step) = search.step(&mut session) {
        let list: Vec<String> = search.list().iter().map(|c| format!("[{:.4}, {:.4}]", c.lo, c.hi)).collect();
        println!("case {} -> {}", step.case.number(), list.join(" "));
    }
    let res = search.finish();
    let truth = dense_scan_monopoly(buyer.as_ref(), 1e-5);
    let stats = res.regular_stats.as_ref().expect("regular search keeps stats");
    println!("price {:.4}, exact optimum {:.4}", res.p_hat, truth.p_star);
    println!("revenue gap {:.2e} with {} queries", truth.rev_star - revenue_at(buyer.as_ref(), res.p_hat), res.queries);
    println!("iterations {} of at most {}, longest list {}", stats.iterations, stats.iteration_bound, stats.max_list_len);
    Ok(())
}
