use std::collections::BTreeMap;

use serde::Serialize;

use super::{BenchError, ExperimentRecord};

/// Least-squares line through `(ln(1/eps), ln(median queries))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Median of a nonempty sample; the mean of the middle pair for even sizes.
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Ordinary least squares on at least three points with distinct `x`.
pub fn fit_slope_points(points: Vec<(f64, f64)>) -> Result<SlopeFit, BenchError> {
    if points.len() < 3 {
        return Err(BenchError::InsufficientData(format!("{} points, need 3", points.len())));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(BenchError::InsufficientData("all eps values coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(SlopeFit { points, slope, intercept, r2 })
}

/// Fits query-count scaling over the successful records, one point per
/// distinct `eps`.
pub fn fit_slope(records: &[ExperimentRecord]) -> Result<SlopeFit, BenchError> {
    let mut by_eps: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.success) {
        by_eps.entry(r.eps.to_bits()).or_default().push(r.queries as f64);
    }
    if by_eps.len() < 3 {
        return Err(BenchError::InsufficientData(format!(
            "{} eps values with a successful trial, need 3",
            by_eps.len()
        )));
    }
    let points = by_eps
        .into_iter()
        .map(|(bits, qs)| ((1.0 / f64::from_bits(bits)).ln(), median(&qs).ln()))
        .collect();
    fit_slope_points(points)
}
