use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dist::ValueDistribution;

/// Kolmogorov distance between the empirical CDF of `n` seeded samples and
/// the exact CDF, checked on both sides of every distinct sample value.
pub fn sample_ks_distance(d: &dyn ValueDistribution, n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs: Vec<f64> = (0..n).map(|_| d.sample(&mut rng)).collect();
    xs.sort_by(f64::total_cmp);
    let nf = n as f64;
    let mut worst: f64 = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && xs[j] == xs[i] {
            j += 1;
        }
        worst = worst
            .max((i as f64 / nf - d.cdf_left(xs[i])).abs())
            .max((j as f64 / nf - d.cdf(xs[i])).abs());
        i = j;
    }
    worst
}

/// Levy distance between two CDFs, found by bisection on `eps` for the
/// sandwich `A(x - eps) - eps <= B(x) <= A(x + eps) + eps` at grid points
/// `x` spaced `grid_step` apart over `[lo - grid_step, hi + grid_step]`.
/// Accurate to about one grid step.
pub fn levy_distance(
    fa: &dyn Fn(f64) -> f64,
    fb: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    grid_step: f64,
) -> f64 {
    assert!(grid_step > 0.0 && lo <= hi, "bad grid");
    let n = ((hi - lo) / grid_step).ceil() as usize + 2;
    let xs: Vec<f64> = (0..=n).map(|j| lo - grid_step + j as f64 * grid_step).collect();
    let b: Vec<f64> = xs.iter().map(|&x| fb(x)).collect();
    let holds = |e: f64| {
        xs.iter()
            .zip(&b)
            .all(|(&x, &bx)| fa(x - e) - e <= bx && bx <= fa(x + e) + e)
    };
    if holds(0.0) {
        return 0.0;
    }
    let (mut bad, mut good) = (0.0, 1.0);
    while good - bad > grid_step * 1e-3 {
        let mid = 0.5 * (bad + good);
        if holds(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// Largest `|A(x) - B(x)|` over a grid on `[lo, hi]` and at each extra point
/// (typically atoms) from both sides.
pub fn kolmogorov_distance(
    fa: &dyn Fn(f64) -> f64,
    fb: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    grid_step: f64,
    extra_points: &[f64],
) -> f64 {
    assert!(grid_step > 0.0 && lo <= hi, "bad grid");
    let n = ((hi - lo) / grid_step).ceil() as usize;
    let grid = (0..=n).map(|j| (lo + j as f64 * grid_step).min(hi));
    let extra = extra_points.iter().flat_map(|&a| [a, a - 1e-12 * a.abs().max(1.0)]);
    grid.chain(extra).map(|x| (fa(x) - fb(x)).abs()).fold(0.0, f64::max)
}
