use crate::dist::standard_normal_inv_cdf;
use crate::oracle::PricingSession;

use super::{estimate_quantile, find_quantile_price, require_unit, EstimatorError};

// keeps the inverse normal quantile finite
const Q_CLAMP: f64 = 1e-6;
// failure probability for each search and each quantile estimate
const STEP_DELTA: f64 = 0.05;

/// Estimate of a normal law's location (and scale, when it was unknown).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalMeanEstimate {
    pub mu_hat: f64,
    pub sigma_hat: f64,
    pub queries: u64,
    /// Some empirical sale probability was 0 or 1 and had to be clamped.
    pub clamped: bool,
    pub budget_exhausted: bool,
}

/// `Q^{-1}` of the standard normal: the `z` with `P[Z >= z] = q`.
fn std_q_inv(q: f64) -> f64 {
    -standard_normal_inv_cdf(q)
}

fn clamp_q(q: f64) -> (f64, bool) {
    let c = q.clamp(Q_CLAMP, 1.0 - Q_CLAMP);
    (c, c != q)
}

/// Location of `Normal(mu, sigma)` from one price and its sale probability:
/// `p - sigma * Q01^{-1}(q)`.
pub fn mean_from_quantile(p: f64, q: f64, sigma: f64) -> f64 {
    p - sigma * std_q_inv(q)
}

/// Solves `mu + sigma * Q01^{-1}(q_i) = p_i` for `i = 1, 2`.
pub fn solve_two_point_system(p1: f64, q1: f64, p2: f64, q2: f64) -> Result<(f64, f64), EstimatorError> {
    let (z1, z2) = (std_q_inv(q1), std_q_inv(q2));
    let dz = z1 - z2;
    if dz.abs() < 1e-12 {
        return Err(EstimatorError::DegenerateSystem { z1, z2 });
    }
    let sigma = (p1 - p2) / dz;
    if !(sigma > 0.0) {
        return Err(EstimatorError::DegenerateSystem { z1, z2 });
    }
    Ok((p1 - sigma * z1, sigma))
}

/// Mean of a normal buyer with known `sigma`.
///
/// A coarse median search (accuracy 1/4) finds a price whose sale probability
/// is bounded away from 0 and 1; that price's sale probability is then
/// estimated to `eps / sigma` and inverted. When `eps >= sigma` the search
/// price is already close enough and is returned as is.
pub fn estimate_normal_mean_known_sigma(
    s: &mut PricingSession,
    sigma: f64,
    eps: f64,
) -> Result<NormalMeanEstimate, EstimatorError> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(EstimatorError::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    require_unit("eps", eps, false)?;
    let start = s.queries_used();
    let m = find_quantile_price(s, 0.5, 0.25, STEP_DELTA, 0.0, 1.0)?;
    let mut out = NormalMeanEstimate {
        mu_hat: m.p_star,
        sigma_hat: sigma,
        queries: 0,
        clamped: false,
        budget_exhausted: m.budget_exhausted,
    };
    if !m.budget_exhausted && eps / sigma < 1.0 {
        let e = estimate_quantile(s, m.p_star, eps / sigma, STEP_DELTA)?;
        out.budget_exhausted = !e.reliable;
        let (q, clamped) = clamp_q(e.q_hat);
        out.mu_hat = mean_from_quantile(m.p_star, q, sigma);
        out.clamped = clamped;
    }
    out.queries = s.queries_used() - start;
    Ok(out)
}

/// Mean and scale of a normal buyer with `sigma <= sigma_bar`.
///
/// Two searches find prices with sale probabilities near 1/4 and 3/4, each
/// to accuracy 1/12, inside `[-sigma_bar z, 1 + sigma_bar z]` with
/// `z = Phi^{-1}(3/4)`; both sale probabilities are then estimated to
/// `eps / sigma_bar` and the two-point system is solved.
pub fn estimate_normal_mean_sigma_bound(
    s: &mut PricingSession,
    sigma_bar: f64,
    eps: f64,
) -> Result<NormalMeanEstimate, EstimatorError> {
    if !(sigma_bar.is_finite() && sigma_bar > 0.0) {
        return Err(EstimatorError::InvalidParameter(format!(
            "sigma_bar must be positive, got {sigma_bar}"
        )));
    }
    require_unit("eps", eps, false)?;
    let start = s.queries_used();
    let z = standard_normal_inv_cdf(0.75);
    let (lo, hi) = (-sigma_bar * z, 1.0 + sigma_bar * z);
    let upper = find_quantile_price(s, 0.25, 1.0 / 12.0, STEP_DELTA, lo, hi)?;
    let mut out = NormalMeanEstimate {
        mu_hat: upper.p_star,
        sigma_hat: sigma_bar,
        queries: 0,
        clamped: false,
        budget_exhausted: upper.budget_exhausted,
    };
    if !out.budget_exhausted {
        let lower = find_quantile_price(s, 0.75, 1.0 / 12.0, STEP_DELTA, lo, hi)?;
        let (p1, p2) = (upper.p_star, lower.p_star);
        out.mu_hat = 0.5 * (p1 + p2);
        out.sigma_hat = ((p1 - p2) / (2.0 * z)).max(0.0);
        out.budget_exhausted = lower.budget_exhausted;
        if !out.budget_exhausted && eps / sigma_bar < 1.0 {
            let e1 = estimate_quantile(s, p1, eps / sigma_bar, STEP_DELTA)?;
            let e2 = estimate_quantile(s, p2, eps / sigma_bar, STEP_DELTA)?;
            out.budget_exhausted = !(e1.reliable && e2.reliable);
            let (q1, c1) = clamp_q(e1.q_hat);
            let (q2, c2) = clamp_q(e2.q_hat);
            out.clamped = c1 || c2;
            if !out.budget_exhausted {
                let (mu, sigma) = solve_two_point_system(p1, q1, p2, q2)?;
                out.mu_hat = mu;
                out.sigma_hat = sigma;
            }
        }
    }
    out.queries = s.queries_used() - start;
    Ok(out)
}
