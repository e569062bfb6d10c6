//! Run a seeded benchmark and fit the query-count scaling exponent.
//!
//! ```bash
//! cargo run --release --example scaling_benchmark
//! ```

use pricing_query::bench::{run_experiment, ExperimentConfig};

const CONFIG: &str = "
estimator = monopoly-regular
dist = uniform:0,1
eps-list = 0.04, 0.02, 0.01
trials = 10
seed = 1
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = ExperimentConfig::from_text(CONFIG)?;
    let dir = std::env::temp_dir().join("pricing-query-example");
    std::fs::create_dir_all(&dir)?;
    cfg.output = Some(dir.join("scaling.csv"));

    let out = run_experiment(&cfg)?;
    for s in &out.summaries {
        println!(
            "eps {:<5} success {:>3.0}%  median queries {:>9}  worst loss {:.2e}",
            s.eps,
            100.0 * s.success_rate,
            s.median_queries,
            s.max_loss
        );
    }
    if let Some(fit) = &out.slope {
        println!("queries grow like eps^-{:.2} (r2 {:.3})", fit.slope, fit.r2);
    }
    println!("records written to {}", dir.join("scaling.csv").display());
    Ok(())
}
