use std::fmt;

use super::BenchError;
use crate::analysis::{
    check_mhr, check_regular, dense_scan_monopoly, effective_range, levy_distance, sample_ks_distance, CheckLine,
    CheckStatus, DEFAULT_GRID,
};
use crate::dist::{revenue_at, DistSpec, UniformDist, ValueDistribution};

const KS_SAMPLES: usize = 20_000;
const KS_SEED: u64 = 1;
// two-sided Kolmogorov critical value at level 0.001
const KS_CRITICAL: f64 = 1.95;
const INTEGRAL_CELLS: usize = 1_000_000;
const INTEGRAL_TOL: f64 = 1e-5;
const CDF_TOL: f64 = 1e-12;

/// Structured outcome of running every applicable checker on one spec.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub spec: String,
    pub lines: Vec<CheckLine>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        !self.lines.iter().any(CheckLine::failed)
    }

    pub fn line(&self, name: &str) -> Option<&CheckLine> {
        self.lines.iter().find(|l| l.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dist {}", self.spec)?;
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        write!(f, "verdict {}", if self.passed() { "pass" } else { "fail" })
    }
}

/// Shape classes a family is known to belong to: `(regular, mhr)`.
fn claimed_classes(spec: &DistSpec) -> (bool, bool) {
    match spec {
        DistSpec::Uniform { .. } | DistSpec::Normal { .. } | DistSpec::MhrPair { .. } => (true, true),
        DistSpec::Bump { .. } => (true, false),
        DistSpec::GridFamily { .. } | DistSpec::Discrete { .. } => (false, false),
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |j| lo + (hi - lo) * j as f64 / n as f64)
}

fn cdf_monotone(d: &dyn ValueDistribution, lo: f64, hi: f64) -> CheckLine {
    let mut prev = f64::NEG_INFINITY;
    let mut worst = 0.0f64;
    let mut witness = lo;
    let mut in_range = true;
    for v in grid(lo - 0.05 * (hi - lo), hi + 0.05 * (hi - lo), DEFAULT_GRID) {
        let c = d.cdf(v);
        in_range &= (0.0..=1.0).contains(&c);
        if prev - c > worst {
            worst = prev - c;
            witness = v;
        }
        prev = c;
    }
    CheckLine::new("cdf-monotone", in_range && worst <= 0.0).witness(witness).margin(0.0 - worst)
}

fn quantile_consistency(d: &dyn ValueDistribution, lo: f64, hi: f64) -> CheckLine {
    let mut worst = 0.0f64;
    let mut witness = lo;
    let atoms = d.atoms();
    for v in grid(lo, hi, DEFAULT_GRID).chain(atoms.iter().copied()) {
        let q = d.quantile(v);
        // P[V >= v] lies between 1 - F(v) and 1 - F(v-) and equals the latter
        let err = (q - (1.0 - d.cdf_left(v))).abs().max((1.0 - d.cdf(v)) - q);
        if err > worst {
            worst = err;
            witness = v;
        }
    }
    CheckLine::new("quantile-consistency", worst <= CDF_TOL).witness(witness).margin(CDF_TOL - worst)
}

fn inverse_consistency(d: &dyn ValueDistribution) -> CheckLine {
    let mut worst = 0.0f64;
    let mut witness = 0.5;
    for j in 1..DEFAULT_GRID {
        let q = j as f64 / DEFAULT_GRID as f64;
        let v = d.inv_cdf(q);
        // generalized inverse: F(v) >= q and F(v-) <= q
        let err = (q - d.cdf(v)).max(d.cdf_left(v) - q).max(0.0);
        if err > worst {
            worst = err;
            witness = q;
        }
    }
    let tol = 1e-9;
    CheckLine::new("inverse-consistency", worst <= tol).witness(witness).margin(tol - worst)
}

fn density_integral(d: &dyn ValueDistribution, lo: f64, hi: f64) -> CheckLine {
    let h = (hi - lo) / INTEGRAL_CELLS as f64;
    let mut total = 0.0;
    for j in 0..INTEGRAL_CELLS {
        total += d.density(lo + (j as f64 + 0.5) * h).unwrap_or(f64::NAN);
    }
    let integral = total * h;
    let err = (integral - (d.cdf(hi) - d.cdf(lo))).abs();
    CheckLine::new("density-integral", err <= INTEGRAL_TOL)
        .margin(INTEGRAL_TOL - err)
        .detail(format!("integral={integral:.9}"))
}

fn shape_line(name: &str, claimed: bool, passed: bool, witness: f64, margin: f64) -> CheckLine {
    let line = CheckLine::new(name, passed).witness(witness).margin(margin);
    if claimed {
        line
    } else {
        line.with_status(CheckStatus::Info).detail(if passed { "holds" } else { "does not hold" })
    }
}

fn family_lines(spec: &DistSpec, d: &dyn ValueDistribution) -> Vec<CheckLine> {
    match *spec {
        DistSpec::Bump { x, eps } => {
            let s = eps.sqrt();
            let peak = x + 2.0 * s;
            let err = (d.cdf(peak) - (peak + eps)).abs();
            let u = UniformDist::new(0.0, 1.0).expect("unit interval");
            let step = eps / 100.0;
            let (fd, fu) = (|v: f64| d.cdf(v), |v: f64| u.cdf(v));
            let levy = levy_distance(&fd, &fu, 0.0, 1.0, step);
            vec![
                CheckLine::new("bump-peak", err <= 1e-12).witness(peak).margin(1e-12 - err),
                CheckLine::new("bump-levy-to-uniform", levy >= eps / 2.0 - step)
                    .margin(levy - (eps / 2.0 - step))
                    .detail(format!("levy={levy:.6e}")),
            ]
        }
        DistSpec::GridFamily { i, eps } if i >= 1 => {
            let p = 0.5 + 4.0 * i as f64 * eps;
            let scan = dense_scan_monopoly(d, 1e-5);
            let err = (scan.p_star - p).abs() + (scan.rev_star - (0.25 + eps)).abs();
            vec![CheckLine::new("grid-optimum", err <= 1e-12)
                .witness(scan.p_star)
                .margin(1e-12 - err)
                .detail(format!("rev={:.12}", revenue_at(d, p)))]
        }
        _ => Vec::new(),
    }
}

/// Parses `spec` and runs every checker that applies to it.
///
/// Shape checks for classes the family is known to belong to count toward
/// the verdict; other shape checks are informational.
pub fn validate_distribution(spec: &str) -> Result<ValidationReport, BenchError> {
    let parsed: DistSpec = spec.parse()?;
    let dist = parsed.build()?;
    let d = dist.as_ref();
    let (lo, hi) = effective_range(d, 1e-9);
    let (claims_regular, claims_mhr) = claimed_classes(&parsed);

    let mut lines = vec![cdf_monotone(d, lo, hi), quantile_consistency(d, lo, hi), inverse_consistency(d)];
    if parsed.has_density() {
        lines.push(density_integral(d, lo, hi));
    } else {
        lines.push(CheckLine::new("density-integral", true).with_status(CheckStatus::NotApplicable));
    }
    let reg = check_regular(d, DEFAULT_GRID);
    lines.push(shape_line("regular", claims_regular, reg.passed, reg.witness, reg.margin()));
    lines.push(match check_mhr(d, DEFAULT_GRID) {
        Ok(c) => shape_line("mhr", claims_mhr, c.passed, c.witness, c.margin()),
        Err(e) => CheckLine::new("mhr", true).with_status(CheckStatus::NotApplicable).detail(e.to_string()),
    });
    let ks = sample_ks_distance(d, KS_SAMPLES, KS_SEED);
    let crit = KS_CRITICAL / (KS_SAMPLES as f64).sqrt();
    lines.push(CheckLine::new("sample-ks", ks <= crit).margin(crit - ks).detail(format!("ks={ks:.6e}")));
    lines.extend(family_lines(&parsed, d));
    Ok(ValidationReport { spec: parsed.to_string(), lines })
}
