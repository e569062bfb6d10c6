use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::{revenue_at, DistSpec, MhrVariant, ValueDistribution};

use super::effective_range;

// revenue evaluations between p1 and p4 for the interior maximum
const INTERIOR_POINTS: usize = 4000;

/// Revenue at four equidistant prices against the best revenue between them.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatnessReport {
    pub p: [f64; 4],
    pub rev: [f64; 4],
    pub rev_min: f64,
    pub rev_max: f64,
    /// `p4 / p1`.
    pub c: f64,
    /// `rev_max - rev_min`.
    pub eps_flat: f64,
    /// Largest revenue found on `[p1, p4]`, probes included.
    pub interior_sup: f64,
    /// `(interior_sup - rev_max) / (c * eps_flat)`; 0 when the four revenues
    /// coincide and nothing inside beats them.
    pub excess_ratio: f64,
}

/// Measures how far the revenue curve rises above its values at four
/// equidistant prices spanning `[p1, p4]`.
pub fn flatness_bound_check(d: &dyn ValueDistribution, p1: f64, p4: f64) -> FlatnessReport {
    assert!(0.0 < p1 && p1 < p4, "need 0 < p1 < p4");
    let step = (p4 - p1) / 3.0;
    let p = [p1, p1 + step, p1 + 2.0 * step, p4];
    let rev = p.map(|x| revenue_at(d, x));
    let rev_min = rev.iter().copied().fold(f64::INFINITY, f64::min);
    let rev_max = rev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let interior_sup = (0..=INTERIOR_POINTS)
        .map(|j| revenue_at(d, p1 + (p4 - p1) * j as f64 / INTERIOR_POINTS as f64))
        .fold(rev_max, f64::max);
    let c = p4 / p1;
    let eps_flat = rev_max - rev_min;
    let excess = interior_sup - rev_max;
    let excess_ratio = if eps_flat > 0.0 {
        excess / (c * eps_flat)
    } else if excess <= 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    FlatnessReport { p, rev, rev_min, rev_max, c, eps_flat, interior_sup, excess_ratio }
}

/// Summary of a randomized flatness sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatnessSweep {
    pub draws: usize,
    pub max_ratio: f64,
    pub worst: Option<(DistSpec, FlatnessReport)>,
}

fn random_regular_family(rng: &mut ChaCha8Rng) -> DistSpec {
    match rng.random_range(0..4) {
        0 => {
            let a = if rng.random_bool(0.3) { 0.0 } else { rng.random_range(0.0..0.6) };
            let b = rng.random_range(a + 0.05..=1.0);
            DistSpec::Uniform { a, b }
        }
        1 => DistSpec::Normal { mu: rng.random_range(0.0..=1.0), sigma: rng.random_range(0.05..=1.0) },
        2 => {
            let eps: f64 = rng.random_range(1e-4..=0.01);
            let x = rng.random_range(0.1..=0.9 - 4.0 * eps.sqrt());
            DistSpec::Bump { x, eps }
        }
        _ => {
            let which = if rng.random_bool(0.5) { MhrVariant::D } else { MhrVariant::DPrime };
            DistSpec::MhrPair { which, eps: rng.random_range(1e-4..=0.01) }
        }
    }
}

/// Draws `draws` random (regular distribution, window) pairs with
/// `p4 / p1 <= 4` and records the largest excess ratio.
pub fn flatness_sweep(draws: usize, seed: u64) -> FlatnessSweep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = FlatnessSweep { draws, max_ratio: 0.0, worst: None };
    for _ in 0..draws {
        let spec = random_regular_family(&mut rng);
        let d = spec.build().expect("sampled parameters are valid");
        let (_, hi) = effective_range(d.as_ref(), 1e-6);
        let p1 = rng.random_range(0.01..hi * 0.95);
        let p4 = p1 + rng.random_range(0.05..=1.0) * ((4.0 * p1).min(hi) - p1);
        if !(p4 > p1) {
            continue;
        }
        let rep = flatness_bound_check(d.as_ref(), p1, p4);
        if rep.excess_ratio > out.max_ratio || out.worst.is_none() {
            out.max_ratio = out.max_ratio.max(rep.excess_ratio);
            out.worst = Some((spec, rep));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::UniformDist;

    #[test]
    fn uniform_interior_peak() {
        let u = UniformDist::new(0.0, 1.0).unwrap();
        let r = flatness_bound_check(&u, 0.2, 0.8);
        assert!((r.interior_sup - 0.25).abs() < 1e-12);
        assert!((r.rev_max - 0.24).abs() < 1e-12 && (r.rev_min - 0.16).abs() < 1e-12);
        assert!((r.c - 4.0).abs() < 1e-12);
        // (0.25 - 0.24) / (4 * 0.08)
        assert!((r.excess_ratio - 0.01 / 0.32).abs() < 1e-9);
        for i in 1..3 {
            assert!(((r.p[i + 1] - r.p[i]) - (r.p[i] - r.p[i - 1])).abs() < 1e-12);
        }
    }

    #[test]
    fn monotone_segment_has_no_excess() {
        let u = UniformDist::new(0.0, 1.0).unwrap();
        let r = flatness_bound_check(&u, 0.6, 0.9);
        assert_eq!(r.interior_sup, r.rev_max);
        assert!((r.rev_max - 0.24).abs() < 1e-12);
        assert_eq!(r.excess_ratio, 0.0);
    }

    #[test]
    fn small_sweep_is_bounded_and_reproducible() {
        let a = flatness_sweep(200, 5);
        let b = flatness_sweep(200, 5);
        assert_eq!(a, b);
        assert!(a.max_ratio.is_finite() && a.max_ratio < 60.0);
    }
}
