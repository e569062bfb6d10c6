//! Post prices to a simulated buyer and keep a transcript.
//!
//! ```bash
//! cargo run --example pricing_session
//! ```

use std::sync::Arc;

use pricing_query::dist::UniformDist;
use pricing_query::oracle::PricingSession;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let buyer = Arc::new(UniformDist::new(0.0, 1.0)?);
    let mut session = PricingSession::new(buyer, 42).with_transcript().with_budget(8);

    for p in [0.2, 0.4, 0.6, 0.8] {
        let out = session.post_price(p)?;
        println!("price {p:.1}: {}", if out.sold { "sold" } else { "no sale" });
    }
    println!("queries used {}, remaining {:?}", session.queries_used(), session.remaining());

    // a fork draws from its own stream and starts a fresh count
    let mut trial = session.fork(7);
    let sold = (0..4).filter(|_| trial.post_price(0.5).map(|o| o.sold).unwrap_or(false)).count();
    println!("fork on stream {} sold {sold} of 4 at price 0.5", trial.stream());

    session.write_transcript(std::io::stdout())?;
    Ok(())
}
