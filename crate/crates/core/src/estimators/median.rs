use crate::oracle::PricingSession;

use super::{require_unit, EstimatorError};

// relative guard on the cached logarithm bounds against rounding
const LOG_SLACK: f64 = 1e-9;

/// Result of the confidence-bound binary search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedianResult {
    pub p_star: f64,
    /// Confidence radius certified for `p_star`: `|Q(p_star) - target|` is at
    /// most this much with the requested probability.
    pub eps_star: f64,
    pub queries: u64,
    /// Number of search prices visited, counting the first.
    pub rounds: u64,
    /// Search bracket when the run stopped.
    pub bracket: (f64, f64),
    pub budget_exhausted: bool,
}

impl MedianResult {
    pub fn converged(&self, eps: f64) -> bool {
        !self.budget_exhausted && self.eps_star <= eps
    }
}

/// Finds `p` with `|Q(p) - 1/2| <= eps` with probability `1 - delta`,
/// searching `[0, 1]`.
pub fn find_median(s: &mut PricingSession, eps: f64, delta: f64) -> Result<MedianResult, EstimatorError> {
    find_quantile_price(s, 0.5, eps, delta, 0.0, 1.0)
}

/// Binary search for a price with sale probability `target`, combined with a
/// confidence-bound test at each probe.
///
/// A global step counter `t` and per-price counters `(n, k)` drive two radii
/// `18 sqrt(ln(t/delta)/n)` (the certificate) and `12 sqrt(ln(t/delta)/n)`
/// (the move test). The best certificate so far is kept and the search stops
/// once it reaches `eps`. The bracket must contain the target price.
pub fn find_quantile_price(
    s: &mut PricingSession,
    target: f64,
    eps: f64,
    delta: f64,
    lo: f64,
    hi: f64,
) -> Result<MedianResult, EstimatorError> {
    require_unit("target", target, false)?;
    require_unit("eps", eps, true)?;
    require_unit("delta", delta, false)?;
    if !(lo < hi) {
        return Err(EstimatorError::InvalidParameter(format!("empty bracket [{lo}, {hi}]")));
    }
    let (mut l, mut r) = (lo, hi);
    let mut p = 0.5 * (l + r);
    let (mut n, mut k) = (0u64, 0u64);
    let mut p_star = p;
    let mut eps_star = 1.0f64;
    let mut rounds = 1u64;
    let mut t = 0u64;
    let mut budget_exhausted = false;
    let log_t = |t: u64| (t as f64 / delta).ln();
    // ln(t / delta) is bracketed by its values at `anchor` and `2 anchor`, so
    // most steps settle both tests without evaluating the logarithm
    let mut anchor = 0u64;
    let (mut ln_lo, mut ln_hi) = (0.0, 0.0);
    // the newest step of the current round has not been compared with eps_star
    let mut unfolded = false;
    let fold = |t: u64, n: u64, p: f64, p_star: &mut f64, eps_star: &mut f64| {
        let eps_p = 18.0 * (log_t(t) / n as f64).sqrt();
        if eps_p < *eps_star {
            *p_star = p;
            *eps_star = eps_p;
        }
    };
    while eps_star > eps {
        let Ok(out) = s.post_price(p) else {
            budget_exhausted = true;
            break;
        };
        t += 1;
        n += 1;
        k += u64::from(out.sold);
        if t >= 2 * anchor {
            anchor = t;
            ln_lo = log_t(t) * (1.0 - LOG_SLACK);
            ln_hi = log_t(2 * t) * (1.0 + LOG_SLACK);
        }
        let nf = n as f64;
        // once ln(t / delta) > 1 the radius shrinks at every step of a round,
        // so only a round's last step can improve the certificate
        if ln_lo > 1.0 {
            unfolded = true;
            if 324.0 * ln_lo <= eps * eps * nf * (1.0 + LOG_SLACK) {
                fold(t, n, p, &mut p_star, &mut eps_star);
                unfolded = false;
                if eps_star <= eps {
                    break;
                }
            }
        } else {
            fold(t, n, p, &mut p_star, &mut eps_star);
        }
        let freq = k as f64 / nf;
        let dev = (target - freq).abs();
        let moves = if nf * dev * dev < 144.0 * ln_lo {
            false
        } else if nf * dev * dev > 144.0 * ln_hi {
            true
        } else {
            dev > 12.0 * (log_t(t) / nf).sqrt()
        };
        if moves {
            if unfolded {
                fold(t, n, p, &mut p_star, &mut eps_star);
                unfolded = false;
            }
            if freq < target {
                r = p;
            } else {
                l = p;
            }
            n = 0;
            k = 0;
            p = 0.5 * (l + r);
            rounds += 1;
        }
    }
    if unfolded && n > 0 {
        fold(t, n, p, &mut p_star, &mut eps_star);
    }
    Ok(MedianResult { p_star, eps_star, queries: t, rounds, bracket: (l, r), budget_exhausted })
}
