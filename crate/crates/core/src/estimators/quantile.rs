use crate::oracle::PricingSession;

use super::{require_unit, EstimatorError};

/// Empirical sale probability at one price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileEstimate {
    pub price: f64,
    pub q_hat: f64,
    pub eps: f64,
    pub delta: f64,
    pub queries: u64,
    /// False when the budget ran out before all planned posts were made.
    pub reliable: bool,
}

/// Number of posts that make `|q_hat - Q(p)| < eps` hold with probability at
/// least `1 - delta`: `ceil(2 ln(2 / delta) / eps^2)`.
pub fn sample_count(eps: f64, delta: f64) -> u64 {
    (2.0 * (2.0 / delta).ln() / (eps * eps)).ceil() as u64
}

/// Posts `p` exactly [`sample_count`] times and reports the sold fraction.
///
/// If the budget runs out midway, the fraction over the posts that were made
/// is returned with `reliable = false` (and `q_hat = 0` if none were).
pub fn estimate_quantile(
    s: &mut PricingSession,
    p: f64,
    eps: f64,
    delta: f64,
) -> Result<QuantileEstimate, EstimatorError> {
    require_unit("eps", eps, true)?;
    require_unit("delta", delta, false)?;
    let m = sample_count(eps, delta);
    let mut sold = 0u64;
    let mut done = 0u64;
    while done < m {
        match s.post_price(p) {
            Ok(o) => {
                sold += u64::from(o.sold);
                done += 1;
            }
            Err(_) => break,
        }
    }
    let q_hat = if done == 0 { 0.0 } else { sold as f64 / done as f64 };
    Ok(QuantileEstimate { price: p, q_hat, eps, delta, queries: done, reliable: done == m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{DiscreteDist, UniformDist};
    use std::sync::Arc;

    #[test]
    fn sample_count_formula() {
        assert_eq!(sample_count(0.1, 0.5), 278);
        assert_eq!(sample_count(0.05, 0.1), 2397);
        assert_eq!(sample_count(1.0, 0.1), (2.0 * 20f64.ln()).ceil() as u64);
    }

    #[test]
    fn point_mass_below_price_gives_zero() {
        let mut s = PricingSession::new(Arc::new(DiscreteDist::point_mass(0.3)), 3);
        let e = estimate_quantile(&mut s, 0.5, 0.05, 0.1).unwrap();
        assert_eq!(e.q_hat, 0.0);
        assert_eq!(e.queries, 2397);
        assert!(e.reliable);
    }

    #[test]
    fn coverage_on_uniform() {
        let root = PricingSession::new(Arc::new(UniformDist::new(0.0, 1.0).unwrap()), 11);
        let hits = (0..1000)
            .filter(|&t| {
                let mut s = root.fork(t);
                let e = estimate_quantile(&mut s, 0.5, 0.1, 0.5).unwrap();
                assert_eq!(s.queries_used(), 278);
                (e.q_hat - 0.5).abs() <= 0.1
            })
            .count();
        assert!(hits >= 950, "coverage {hits}/1000");
    }

    #[test]
    fn budget_cut_is_flagged() {
        let mut s = PricingSession::new(Arc::new(UniformDist::new(0.0, 1.0).unwrap()), 1).with_budget(10);
        let e = estimate_quantile(&mut s, 0.5, 0.1, 0.5).unwrap();
        assert_eq!(e.queries, 10);
        assert!(!e.reliable);
        let e = estimate_quantile(&mut s, 0.5, 0.1, 0.5).unwrap();
        assert_eq!((e.queries, e.q_hat), (0, 0.0));
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut s = PricingSession::new(Arc::new(UniformDist::new(0.0, 1.0).unwrap()), 1);
        assert!(estimate_quantile(&mut s, 0.5, 0.0, 0.1).is_err());
        assert!(estimate_quantile(&mut s, 0.5, 0.1, 1.0).is_err());
        assert!(estimate_quantile(&mut s, 0.5, 1.0, 0.1).is_ok());
    }
}
