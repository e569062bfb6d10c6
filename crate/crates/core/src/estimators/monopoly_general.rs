use crate::oracle::PricingSession;

use super::{estimate_quantile, require_unit, EstimatorError, MonopolyResult, QuantileEstimate};

/// Number of grid prices `k eps` in `[0, 1]`: `1 + floor(1/eps)`.
pub fn grid_size(eps: f64) -> usize {
    1 + (1.0 / eps + 1e-9).floor() as usize
}

/// Per-price failure probability `1 / (3K)` for a grid of `K` prices, so the
/// whole grid is accurate with probability at least 2/3.
pub fn grid_delta(eps: f64) -> f64 {
    1.0 / (3.0 * grid_size(eps) as f64)
}

/// Estimates the sale probability at every grid price `k eps`, `k = 0..K`,
/// stopping early only if the budget runs out.
pub(crate) fn estimate_grid(
    s: &mut PricingSession,
    eps: f64,
) -> Result<(Vec<QuantileEstimate>, bool), EstimatorError> {
    require_unit("eps", eps, false)?;
    let delta = grid_delta(eps);
    let mut log = Vec::with_capacity(grid_size(eps));
    for k in 0..grid_size(eps) {
        let e = estimate_quantile(s, k as f64 * eps, eps, delta)?;
        log.push(e);
        if !e.reliable {
            return Ok((log, true));
        }
    }
    Ok((log, false))
}

/// Monopoly price of an arbitrary distribution on `[0, 1]`: the grid price
/// with the largest estimated revenue.
pub fn find_monopoly_general(s: &mut PricingSession, eps: f64) -> Result<MonopolyResult, EstimatorError> {
    let (log, exhausted) = estimate_grid(s, eps)?;
    let queries = log.iter().map(|e| e.queries).sum();
    let rounds = log.len() as u64;
    Ok(MonopolyResult::from_log(log, queries, rounds, exhausted))
}
