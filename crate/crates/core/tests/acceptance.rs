//! End-to-end acceptance suite. Each criterion prints one `pass`/`fail` line
//! with its measurements; the process fails if any criterion fails.
//!
//! Reference values (optimal revenues, sample counts, iteration caps, losses)
//! are computed here from first principles rather than taken from the
//! library.

use std::sync::Arc;
use std::time::Instant;

use pricing_query::analysis::{flatness_sweep, kl_bernoulli, kl_ratio_extremes, levy_distance};
use pricing_query::bench::{emit_lowerbound_family, run_experiment, ExperimentConfig, LowerBoundFamily};
use pricing_query::dist::{
    EqualRevenueGridDist, NormalDist, RegularBumpDist, SharedDist, UniformDist, ValueDistribution,
};
use pricing_query::estimators::{
    estimate_normal_mean_known_sigma, estimate_normal_mean_sigma_bound, estimate_quantile, find_median,
    find_monopoly_general, learn_cdf_general, NormalMeanEstimate, RegularMonopolySearch,
};
use pricing_query::oracle::PricingSession;

struct Outcome {
    passed: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { passed: true, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, note: impl Into<String>) {
        let note = note.into();
        self.passed &= ok;
        self.notes.push(if ok { note } else { format!("FAILED {note}") });
    }
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Least-squares slope of `ln(queries)` against `ln(1 / eps)`.
fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let xy: Vec<(f64, f64)> = points.iter().map(|&(e, q)| ((1.0 / e).ln(), q.ln())).collect();
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Best revenue `p (1 - F(p-))` over a grid of step `step` on `[0, 1]` plus
/// the given extra prices.
fn scan_revenue(d: &dyn ValueDistribution, step: f64, extra: &[f64]) -> f64 {
    let n = (1.0 / step).round() as usize;
    (0..=n)
        .map(|k| k as f64 * step)
        .chain(extra.iter().copied())
        .map(|p| p * (1.0 - d.cdf_left(p)))
        .fold(0.0, f64::max)
}

fn shared<D: ValueDistribution + 'static>(d: D) -> SharedDist {
    Arc::new(d)
}

fn rate(hits: usize, total: usize) -> f64 {
    hits as f64 / total as f64
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let (eps, delta) = (0.05, 0.1);
    let planned = (2.0 * 20f64.ln() / (eps * eps)).ceil() as u64;
    let root = PricingSession::new(shared(UniformDist::new(0.0, 1.0).unwrap()), 101);
    let mut hits = 0;
    let mut exact_counts = true;
    for t in 0..1000 {
        let mut s = root.fork(t);
        let e = estimate_quantile(&mut s, 0.5, eps, delta).unwrap();
        exact_counts &= e.queries == planned && s.queries_used() == planned;
        hits += usize::from((e.q_hat - 0.5).abs() <= eps);
    }
    out.check(rate(hits, 1000) >= 0.95, format!("coverage {hits}/1000 (need 950)"));
    out.check(exact_counts, format!("every trial used exactly {planned} queries"));
    out
}

fn median_suite(out: &mut Outcome, name: &str, d: SharedDist, seed: u64) {
    let root = PricingSession::new(d.clone(), seed);
    let mut points = Vec::new();
    for (eps, trials) in [(0.08, 30u64), (0.04, 30), (0.02, 200)] {
        let mut hits = 0;
        let mut queries = Vec::new();
        for t in 0..trials {
            let mut s = root.fork(t);
            let r = find_median(&mut s, eps, 0.1).unwrap();
            if (d.cdf(r.p_star) - 0.5).abs() <= eps {
                hits += 1;
                queries.push(r.queries as f64);
            }
        }
        if eps == 0.02 {
            out.check(rate(hits, 200) >= 0.9, format!("{name} eps 0.02 success {hits}/200"));
        }
        points.push((eps, median(&queries)));
    }
    let slope = loglog_slope(&points);
    out.check((1.5..=2.5).contains(&slope), format!("{name} slope {slope:.3}"));
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    median_suite(&mut out, "U(0,1)", shared(UniformDist::new(0.0, 1.0).unwrap()), 201);
    median_suite(&mut out, "U(0,1/2)", shared(UniformDist::new(0.0, 0.5).unwrap()), 202);
    out
}

fn normal_suite(
    out: &mut Outcome,
    name: &str,
    seed: u64,
    slope_eps: &[f64],
    slope_trials: u64,
    run: &dyn Fn(&mut PricingSession, f64) -> NormalMeanEstimate,
) {
    let (mu, k) = (0.5, 3.0);
    let root = PricingSession::new(shared(NormalDist::new(mu, 1.0).unwrap()), seed);
    let eps = 0.05;
    let mut errors: Vec<f64> = (0..200)
        .map(|t| {
            let mut s = root.fork(t);
            (run(&mut s, eps).mu_hat - mu).abs()
        })
        .collect();
    let hits = errors.iter().filter(|&&e| e <= k * eps).count();
    errors.sort_by(f64::total_cmp);
    let k90 = errors[179] / eps;
    out.check(rate(hits, 200) >= 0.9, format!("{name} |mu_hat - mu| <= 3 eps in {hits}/200 (90th pct K = {k90:.2})"));
    let points: Vec<(f64, f64)> = slope_eps
        .iter()
        .map(|&e| {
            let qs: Vec<f64> = (0..slope_trials)
                .map(|t| {
                    let mut s = root.fork(1000 + t);
                    run(&mut s, e).queries as f64
                })
                .collect();
            (e, median(&qs))
        })
        .collect();
    let slope = loglog_slope(&points);
    out.check((1.5..=2.5).contains(&slope), format!("{name} slope {slope:.3}"));
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    normal_suite(&mut out, "known sigma", 301, &[0.005, 0.0025, 0.00125], 9, &|s, e| {
        estimate_normal_mean_known_sigma(s, 1.0, e).unwrap()
    });
    // the two fixed-accuracy searches cost about a million queries, so the
    // quadratic term only dominates at smaller eps
    normal_suite(&mut out, "sigma <= 2", 302, &[0.0025, 0.00125, 0.000625], 5, &|s, e| {
        estimate_normal_mean_sigma_bound(s, 2.0, e).unwrap()
    });
    out
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let families: [(&str, SharedDist); 2] = [
        ("uniform", shared(UniformDist::new(0.0, 1.0).unwrap())),
        ("bump(0.5,0.01)", shared(RegularBumpDist::new(0.5, 0.01).unwrap())),
    ];
    for (fi, (name, d)) in families.into_iter().enumerate() {
        let best = scan_revenue(d.as_ref(), 1e-5, &[]);
        let root = PricingSession::new(d.clone(), 401 + fi as u64);
        let mut points = Vec::new();
        for eps in [0.04f64, 0.02, 0.01] {
            let levels = 1 + ((1.0 / eps).ln() / (2.0 / 3f64.sqrt()).ln()).ceil() as u64;
            let cap = levels.pow(3);
            let mut hits = 0;
            let mut queries = Vec::new();
            let (mut longest, mut most_iters) = (0usize, 0u64);
            for t in 0..50 {
                let mut s = root.fork(t);
                let mut search = RegularMonopolySearch::new(eps).unwrap();
                let mut iters = 0u64;
                while search.step(&mut s).is_some() {
                    iters += 1;
                    longest = longest.max(search.list().len());
                }
                most_iters = most_iters.max(iters);
                let res = search.finish();
                let gap = best - res.p_hat * (1.0 - d.cdf_left(res.p_hat));
                if gap <= 10.0 * eps {
                    hits += 1;
                    queries.push(res.queries as f64);
                }
            }
            out.check(rate(hits, 50) >= 0.9, format!("{name} eps {eps} gap <= 10 eps in {hits}/50"));
            out.check(longest <= 3, format!("{name} eps {eps} longest list {longest}"));
            out.check(most_iters <= cap, format!("{name} eps {eps} iterations {most_iters} <= {cap}"));
            points.push((eps, median(&queries)));
        }
        let slope = loglog_slope(&points);
        out.check((1.5..=2.6).contains(&slope), format!("{name} slope {slope:.3}"));
    }
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let (i, eps_dist, grid_eps) = (3usize, 0.02, 0.004);
    let d = shared(EqualRevenueGridDist::new(i, eps_dist).unwrap());
    let p_opt = 0.5 + 4.0 * i as f64 * eps_dist;
    let atoms: Vec<f64> = (1..=6).map(|k| 0.5 + 4.0 * k as f64 * eps_dist).collect();
    let best = scan_revenue(d.as_ref(), 1e-5, &atoms);
    out.check((best - 0.27).abs() < 1e-12, format!("optimal revenue {best:.12}"));
    let root = PricingSession::new(d.clone(), 501);
    let (mut near, mut small_gap) = (0, 0);
    for t in 0..50 {
        let mut s = root.fork(t);
        let r = find_monopoly_general(&mut s, grid_eps).unwrap();
        near += usize::from((r.p_hat - p_opt).abs() <= grid_eps + 1e-12);
        let gap = best - r.p_hat * (1.0 - d.cdf_left(r.p_hat));
        small_gap += usize::from(gap <= 4.0 * grid_eps);
    }
    out.check(rate(near, 50) >= 0.9, format!("price within one step of {p_opt} in {near}/50"));
    out.check(rate(small_gap, 50) >= 0.9, format!("gap <= 4 eps in {small_gap}/50"));
    let points: Vec<(f64, f64)> = [0.05, 0.025, 0.0125]
        .iter()
        .map(|&e| {
            let qs: Vec<f64> = (0..3)
                .map(|t| {
                    let mut s = root.fork(100 + t);
                    find_monopoly_general(&mut s, e).unwrap().queries as f64
                })
                .collect();
            (e, median(&qs))
        })
        .collect();
    let slope = loglog_slope(&points);
    out.check((2.5..=3.5).contains(&slope), format!("slope {slope:.3}"));
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let eps: f64 = 0.02;
    let k = 1 + (1.0 / eps + 1e-9).floor() as u64;
    let delta = 1.0 / (3.0 * k as f64);
    let per_price = (2.0 * (2.0 / delta).ln() / (eps * eps)).ceil() as u64;
    let u = UniformDist::new(0.0, 1.0).unwrap();
    let root = PricingSession::new(shared(u), 601);
    let mut hits = 0;
    let mut exact = true;
    let mut worst: f64 = 0.0;
    for t in 0..50 {
        let mut s = root.fork(t);
        let est = learn_cdf_general(&mut s, eps).unwrap();
        exact &= est.queries == k * per_price && s.queries_used() == k * per_price;
        let (truth, learned) = (|v: f64| v.clamp(0.0, 1.0), |v: f64| est.cdf(v));
        let levy = levy_distance(&truth, &learned, 0.0, 1.0, 1e-4);
        worst = worst.max(levy);
        hits += usize::from(levy <= 2.0 * eps);
    }
    out.check(rate(hits, 50) >= 0.9, format!("levy <= 2 eps in {hits}/50 (worst {worst:.4})"));
    out.check(exact, format!("queries = {k} x {per_price} = {}", k * per_price));
    out
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let mut worst_ratio: f64 = 0.0;
    let mut all_below = true;
    let mut formula_agrees = true;
    for i in 1..=200 {
        let q = i as f64 / 201.0;
        for j in 1..=200 {
            let eps = 0.7 * j as f64 / 201.0;
            let (lo, hi) = kl_ratio_extremes(q, eps);
            for qp in [lo, hi] {
                let kl = kl_bernoulli(q, qp);
                let direct = q * (q / qp).ln() + (1.0 - q) * ((1.0 - q) / (1.0 - qp)).ln();
                formula_agrees &= (kl - direct.max(0.0)).abs() <= 1e-15;
                all_below &= kl < eps * eps;
                worst_ratio = worst_ratio.max(kl / (eps * eps));
            }
        }
    }
    out.check(all_below, format!("max kl / eps^2 = {worst_ratio:.4} over 200 x 200 x 2 points"));
    out.check(formula_agrees, "library kl matches the closed form");
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    let mhr = emit_lowerbound_family(LowerBoundFamily::Mhr, 0.001).unwrap();
    out.check(mhr.passed() && mhr.certificate > 0.001, format!("mhr min worse gap {:.4e} > 0.001", mhr.certificate));
    let levy = emit_lowerbound_family(LowerBoundFamily::RegularLevy, 0.01).unwrap();
    out.check(
        levy.passed() && levy.certificate >= 0.005 - 1e-4,
        format!("regular-levy {} members, min levy {:.4e}", levy.members.len(), levy.certificate),
    );
    let general = emit_lowerbound_family(LowerBoundFamily::General, 0.01).unwrap();
    let table_ok = general.optima.len() == 6
        && general
            .optima
            .iter()
            .all(|&(i, p, r)| (p - (0.5 + 0.04 * i as f64)).abs() <= 1e-12 && (r - 0.26).abs() <= 1e-12);
    out.check(general.passed() && table_ok, format!("general optima table of {}", general.optima.len()));
    out
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::new();
    let sweep = flatness_sweep(10_000, 901);
    let worst = sweep.worst.as_ref().map(|(s, r)| format!(" at {s} c={:.3}", r.c)).unwrap_or_default();
    out.check(sweep.max_ratio <= 60.0, format!("max excess ratio {:.4}{worst}", sweep.max_ratio));
    out
}

fn criterion_10() -> Outcome {
    let mut out = Outcome::new();
    let dir = tempfile::tempdir().unwrap();
    let configs = [
        "estimator=monopoly-regular\ndist=bump:0.5,0.01\neps-list=0.08,0.04\ntrials=4\nseed=77\nworkers=3",
        "estimator=median\ndist=uniform:0,0.5\neps-list=0.2,0.1\ntrials=8\nseed=5\nworkers=2",
        "estimator=normal-mean-bound\ndist=normal:0.5,1\nsigma-bar=2\neps=0.2\ntrials=4\nseed=9",
    ];
    for (ci, text) in configs.iter().enumerate() {
        let mut runs = Vec::new();
        for rep in 0..2 {
            let mut cfg = ExperimentConfig::from_text(text).unwrap();
            let path = dir.path().join(format!("run{ci}_{rep}.csv"));
            cfg.output = Some(path.clone());
            run_experiment(&cfg).unwrap();
            let text = std::fs::read_to_string(&path).unwrap();
            let stripped: Vec<String> =
                text.lines().map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string()).collect();
            runs.push(stripped);
        }
        let same = runs[0] == runs[1] && runs[0].len() > 1;
        out.check(same, format!("config {ci}: {} identical lines", runs[0].len()));
    }
    out
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("quantile estimator contract", criterion_1),
        ("median search", criterion_2),
        ("normal mean", criterion_3),
        ("regular monopoly", criterion_4),
        ("general monopoly", criterion_5),
        ("cdf learner", criterion_6),
        ("kl lemma sweep", criterion_7),
        ("lower-bound constructions", criterion_8),
        ("relative flatness sweep", criterion_9),
        ("reproducibility", criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let label = format!("criterion {:>2} {name}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let verdict = if o.passed { "pass" } else { "fail" };
        println!("{label:<42} {verdict} [{:.1}s] {}", start.elapsed().as_secs_f64(), o.notes.join("; "));
        failed += usize::from(!o.passed);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
