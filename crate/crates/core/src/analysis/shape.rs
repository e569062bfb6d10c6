use crate::dist::{revenue_in_quantile_space, ValueDistribution};

use super::{effective_range, AnalysisError};

/// Outcome of a grid check: the largest violation seen, where it happened and
/// the allowed tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeCheck {
    pub passed: bool,
    /// Largest second difference (regularity) or hazard drop (MHR).
    pub worst: f64,
    /// Quantile (regularity) or value (MHR) where `worst` occurred.
    pub witness: f64,
    pub tolerance: f64,
}

impl ShapeCheck {
    /// Tolerance minus worst violation; negative on failure.
    pub fn margin(&self) -> f64 {
        self.tolerance - self.worst
    }
}

/// Concavity of `R(q) = q F^{-1}(1 - q)` on `q = j / grid_points`: every
/// second difference must be at most `1e-9` times the curve's scale.
pub fn check_regular(d: &dyn ValueDistribution, grid_points: usize) -> ShapeCheck {
    let n = grid_points.max(2);
    let rs: Vec<f64> = (0..=n).map(|j| revenue_in_quantile_space(d, j as f64 / n as f64)).collect();
    let scale = rs.iter().filter(|r| r.is_finite()).fold(1.0f64, |m, r| m.max(r.abs()));
    let tolerance = 1e-9 * scale;
    let mut worst = f64::NEG_INFINITY;
    let mut witness = 0.0;
    for j in 1..n {
        let second = rs[j - 1] - 2.0 * rs[j] + rs[j + 1];
        if second.is_finite() && second > worst {
            worst = second;
            witness = j as f64 / n as f64;
        }
    }
    ShapeCheck { passed: worst <= tolerance, worst, witness, tolerance }
}

/// Monotone hazard rate `f / (1 - F)` on `grid_points` values spread over the
/// support, excluding its top endpoint. Each step may drop by at most `1e-9`
/// relative.
pub fn check_mhr(d: &dyn ValueDistribution, grid_points: usize) -> Result<ShapeCheck, AnalysisError> {
    let (lo, hi) = effective_range(d, 1e-6);
    let n = grid_points.max(2);
    let mut prev: Option<f64> = None;
    let mut out = ShapeCheck { passed: true, worst: f64::NEG_INFINITY, witness: lo, tolerance: 0.0 };
    for j in 0..n {
        let v = lo + (hi - lo) * j as f64 / n as f64;
        let survival = d.quantile(v);
        let f = d.density(v).ok_or(AnalysisError::UndefinedHazard(v))?;
        if survival <= 0.0 {
            return Err(AnalysisError::UndefinedHazard(v));
        }
        let h = f / survival;
        if let Some(hp) = prev {
            let drop = hp - h;
            let tol = 1e-9 * hp.abs().max(1.0);
            if drop - tol > out.worst - out.tolerance {
                out = ShapeCheck { passed: drop <= tol, worst: drop, witness: v, tolerance: tol };
            }
        }
        prev = Some(h);
    }
    Ok(out)
}
