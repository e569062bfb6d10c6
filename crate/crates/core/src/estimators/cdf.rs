use crate::oracle::PricingSession;

use super::monopoly_general::estimate_grid;
use super::EstimatorError;

/// Step-function estimate of a CDF on `[0, 1]` learned from grid prices.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfEstimate {
    pub eps: f64,
    /// Grid prices `k eps`.
    pub grid: Vec<f64>,
    /// Raw sale-probability estimates at the grid prices.
    pub q_hats: Vec<f64>,
    /// Nondecreasing CDF values on the grid after isotonic cleanup.
    pub f_hat: Vec<f64>,
    pub queries: u64,
    pub budget_exhausted: bool,
}

impl CdfEstimate {
    /// `F_hat(v)`: 0 left of the grid, `f_hat[k]` on `[k eps, (k + 1) eps)`,
    /// and 1 from one step past the last grid price.
    pub fn cdf(&self, v: f64) -> f64 {
        let Some(&last) = self.grid.last() else {
            return if v >= 0.0 { 1.0 } else { 0.0 };
        };
        if v < self.grid[0] {
            0.0
        } else if v >= last + self.eps {
            1.0
        } else {
            let k = self.grid.partition_point(|&g| g <= v) - 1;
            self.f_hat[k]
        }
    }
}

/// Least-squares nondecreasing fit (pool adjacent violators), clipped to
/// `[0, 1]`.
pub fn isotonic_increasing(ys: &[f64]) -> Vec<f64> {
    // blocks of (mean, weight)
    let mut blocks: Vec<(f64, f64)> = Vec::with_capacity(ys.len());
    for &y in ys {
        blocks.push((y, 1.0));
        while blocks.len() > 1 {
            let (m2, w2) = blocks[blocks.len() - 1];
            let (m1, w1) = blocks[blocks.len() - 2];
            if m1 <= m2 {
                break;
            }
            blocks.pop();
            let w = w1 + w2;
            *blocks.last_mut().unwrap() = ((m1 * w1 + m2 * w2) / w, w);
        }
    }
    blocks
        .into_iter()
        .flat_map(|(m, w)| std::iter::repeat_n(m.clamp(0.0, 1.0), w as usize))
        .collect()
}

/// Learns the CDF of a distribution on `[0, 1]` to Levy distance `O(eps)`
/// by estimating the sale probability at every multiple of `eps`.
pub fn learn_cdf_general(s: &mut PricingSession, eps: f64) -> Result<CdfEstimate, EstimatorError> {
    let (log, budget_exhausted) = estimate_grid(s, eps)?;
    let grid: Vec<f64> = log.iter().map(|e| e.price).collect();
    let q_hats: Vec<f64> = log.iter().map(|e| e.q_hat).collect();
    let raw: Vec<f64> = q_hats.iter().map(|q| 1.0 - q).collect();
    let f_hat = isotonic_increasing(&raw);
    let queries = log.iter().map(|e| e.queries).sum();
    Ok(CdfEstimate { eps, grid, q_hats, f_hat, queries, budget_exhausted })
}
