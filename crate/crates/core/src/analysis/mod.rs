//! Ground-truth oracles used to score estimators and to verify the lower-bound
//! constructions. Everything here reads exact CDFs and never touches a
//! pricing session.

mod distance;
mod divergence;
mod flatness;
mod report;
mod scan;
mod shape;

use thiserror::Error;

pub use distance::{kolmogorov_distance, levy_distance, sample_ks_distance};
pub use divergence::{kl_bernoulli, kl_ratio_extremes, pinsker_bound, transcript_kl_budget};
pub use flatness::{flatness_bound_check, flatness_sweep, FlatnessReport, FlatnessSweep};
pub use report::{CheckLine, CheckStatus};
pub use scan::{dense_scan_monopoly, ScanResult};
pub use shape::{check_mhr, check_regular, ShapeCheck};

use crate::dist::ValueDistribution;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AnalysisError {
    /// The hazard rate needs a density and `F(v) < 1`.
    #[error("hazard rate undefined at v = {0}")]
    UndefinedHazard(f64),
}

/// Default number of grid points for shape checks.
pub const DEFAULT_GRID: usize = 10_000;

/// `ln(1 / |F^{-1}(1/2 + eps/3) - F^{-1}(1/2 - eps/3)|)`, the log reciprocal
/// width of the median neighbourhood. Infinite when the neighbourhood
/// collapses to a point, as with an atom at the median.
pub fn concentration_a_f(d: &dyn ValueDistribution, eps: f64) -> f64 {
    let width = (d.inv_cdf(0.5 + eps / 3.0) - d.inv_cdf(0.5 - eps / 3.0)).abs();
    if width == 0.0 {
        f64::INFINITY
    } else {
        -width.ln()
    }
}

/// Finite range `[lo, hi]` carrying all but `tail` of the mass on each side.
pub(crate) fn effective_range(d: &dyn ValueDistribution, tail: f64) -> (f64, f64) {
    let (lo, hi) = d.support();
    let lo = if lo.is_finite() { lo } else { d.inv_cdf(tail) };
    let hi = if hi.is_finite() { hi } else { d.inv_cdf(1.0 - tail) };
    (lo, hi)
}
