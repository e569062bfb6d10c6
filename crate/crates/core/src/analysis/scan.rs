use crate::dist::{revenue_at, ValueDistribution};

use super::effective_range;

/// Revenue maximizer found by exhaustive evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanResult {
    pub p_star: f64,
    pub rev_star: f64,
    pub grid_step: f64,
}

/// Evaluates exact revenue at every multiple of `step` in the (nonnegative
/// part of the) support and at every atom; returns the best, lower price on
/// ties.
pub fn dense_scan_monopoly(d: &dyn ValueDistribution, step: f64) -> ScanResult {
    assert!(step > 0.0, "scan step must be positive");
    let (lo, hi) = effective_range(d, 1e-12);
    let lo = lo.max(0.0);
    let mut best = ScanResult { p_star: lo, rev_star: revenue_at(d, lo), grid_step: step };
    let mut consider = |p: f64| {
        let r = revenue_at(d, p);
        if r > best.rev_star || (r == best.rev_star && p < best.p_star) {
            best.p_star = p;
            best.rev_star = r;
        }
    };
    if hi >= lo {
        let k0 = (lo / step).ceil() as i64;
        let k1 = (hi / step).floor() as i64;
        for k in k0..=k1 {
            consider(k as f64 * step);
        }
    }
    for a in d.atoms() {
        if a >= 0.0 {
            consider(a);
        }
    }
    best
}
