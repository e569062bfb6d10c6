//! Learning algorithms that see a distribution only through a
//! [`PricingSession`](crate::oracle::PricingSession).
//!
//! Running out of query budget is not an error here: every result carries a
//! `budget_exhausted` flag and reports the best answer found so far.

mod cdf;
mod median;
mod monopoly_general;
mod monopoly_regular;
mod normal_mean;
mod quantile;

use thiserror::Error;

pub use cdf::{isotonic_increasing, learn_cdf_general, CdfEstimate};
pub use median::{find_median, find_quantile_price, MedianResult};
pub use monopoly_general::{find_monopoly_general, grid_delta, grid_size};
pub use monopoly_regular::{
    find_monopoly_regular, iteration_bound, CandidateInterval, MonopolyCase, RegularMonopolySearch,
    RegularSearchStats, StepReport,
};
pub use normal_mean::{
    estimate_normal_mean_known_sigma, estimate_normal_mean_sigma_bound, mean_from_quantile,
    solve_two_point_system, NormalMeanEstimate,
};
pub use quantile::{estimate_quantile, sample_count, QuantileEstimate};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EstimatorError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Both probes mapped to the same standard-normal quantile.
    #[error("degenerate two-point system: z1 = {z1}, z2 = {z2}")]
    DegenerateSystem { z1: f64, z2: f64 },
}

/// Outcome of a monopoly-price search.
#[derive(Debug, Clone, PartialEq)]
pub struct MonopolyResult {
    /// Queried price with the largest estimated revenue; ties go to the lower
    /// price.
    pub p_hat: f64,
    pub rev_hat: f64,
    pub queries: u64,
    pub iterations: u64,
    /// Every distinct queried price with its estimate, in query order.
    pub price_log: Vec<QuantileEstimate>,
    pub budget_exhausted: bool,
    /// Run counters, for the regular-distribution search only.
    pub regular_stats: Option<RegularSearchStats>,
}

impl MonopolyResult {
    fn from_log(price_log: Vec<QuantileEstimate>, queries: u64, iterations: u64, budget_exhausted: bool) -> Self {
        let mut p_hat = 0.0;
        let mut rev_hat = f64::NEG_INFINITY;
        for e in price_log.iter().filter(|e| e.reliable) {
            let r = e.price * e.q_hat;
            if r > rev_hat || (r == rev_hat && e.price < p_hat) {
                p_hat = e.price;
                rev_hat = r;
            }
        }
        if rev_hat == f64::NEG_INFINITY {
            rev_hat = 0.0;
        }
        Self { p_hat, rev_hat, queries, iterations, price_log, budget_exhausted, regular_stats: None }
    }
}

pub(crate) fn require_unit(name: &str, x: f64, allow_one: bool) -> Result<(), EstimatorError> {
    let ok = x > 0.0 && (x < 1.0 || (allow_one && x == 1.0));
    if ok {
        Ok(())
    } else {
        let range = if allow_one { "(0, 1]" } else { "(0, 1)" };
        Err(EstimatorError::InvalidParameter(format!("{name} must lie in {range}, got {x}")))
    }
}
