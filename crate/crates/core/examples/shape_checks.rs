//! Validate distribution specs the way `pricing validate` does.
//!
//! ```bash
//! cargo run --example shape_checks
//! ```

use pricing_query::bench::validate_distribution;

fn main() {
    for spec in ["bump:0.5,0.01", "mhr-pair:D,0.001", "grid-family:2,0.02", "uniform:1,0"] {
        match validate_distribution(spec) {
            Ok(report) => println!("{report}\n"),
            Err(e) => println!("{spec}: {e}\n"),
        }
    }
}
