use crate::dist::ValueDistribution;

// a ln(a / b) with 0 ln 0 = 0
fn xlogx_ratio(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else if b == 0.0 {
        f64::INFINITY
    } else {
        a * (a / b).ln()
    }
}

/// `KL(Bern(q) || Bern(q'))` in nats. Infinite when `q'` puts zero mass
/// where `q` does not.
pub fn kl_bernoulli(q: f64, q_prime: f64) -> f64 {
    let kl = xlogx_ratio(q, q_prime) + xlogx_ratio(1.0 - q, 1.0 - q_prime);
    kl.max(0.0)
}

/// Pinsker's bound on total variation, `sqrt(kl / 2)`.
pub fn pinsker_bound(kl: f64) -> f64 {
    (kl / 2.0).sqrt()
}

/// Smallest and largest `q'` with both `q / q'` and `(1 - q) / (1 - q')` in
/// `[1 / (1 + eps), 1 + eps]`.
pub fn kl_ratio_extremes(q: f64, eps: f64) -> (f64, f64) {
    let lo = (q / (1.0 + eps)).max(1.0 - (1.0 - q) * (1.0 + eps));
    let hi = (q * (1.0 + eps)).min(1.0 - (1.0 - q) / (1.0 + eps));
    (lo, hi)
}

/// Sum of per-query Bernoulli divergences for a fixed price sequence, the KL
/// divergence between the two query transcripts.
pub fn transcript_kl_budget(da: &dyn ValueDistribution, db: &dyn ValueDistribution, prices: &[f64]) -> f64 {
    prices.iter().map(|&p| kl_bernoulli(da.quantile(p), db.quantile(p))).sum()
}
