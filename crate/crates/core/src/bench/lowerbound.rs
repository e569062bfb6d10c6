use std::fmt;
use std::str::FromStr;

use super::BenchError;
use crate::analysis::{check_mhr, check_regular, dense_scan_monopoly, levy_distance, CheckLine, DEFAULT_GRID};
use crate::dist::{
    revenue_at, EqualRevenueGridDist, MhrPair, MhrVariant, RegularBumpDist, UniformDist, ValueDistribution,
};

/// Price grid size for the MHR separation certificate.
const MHR_SCAN_POINTS: usize = 100_000;

/// The hard-instance families behind the lower bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerBoundFamily {
    /// Two MHR distributions that no single price serves well.
    Mhr,
    /// Regular bump perturbations of the uniform law, far apart in Levy
    /// distance.
    RegularLevy,
    /// Equal-revenue grid distributions with one raised price each.
    General,
}

impl LowerBoundFamily {
    pub fn name(self) -> &'static str {
        match self {
            LowerBoundFamily::Mhr => "mhr",
            LowerBoundFamily::RegularLevy => "regular-levy",
            LowerBoundFamily::General => "general",
        }
    }
}

impl fmt::Display for LowerBoundFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for LowerBoundFamily {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "mhr" => Ok(LowerBoundFamily::Mhr),
            "regular-levy" => Ok(LowerBoundFamily::RegularLevy),
            "general" => Ok(LowerBoundFamily::General),
            other => Err(BenchError::Config(format!(
                "unknown family `{other}`, expected mhr, regular-levy or general"
            ))),
        }
    }
}

/// Materialized family with its validity checks and separation certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundReport {
    pub family: LowerBoundFamily,
    pub eps: f64,
    /// Spec strings of the members.
    pub members: Vec<String>,
    pub lines: Vec<CheckLine>,
    /// For the general family: `(i, price, revenue)` of each member's optimum
    /// as found by a dense scan.
    pub optima: Vec<(usize, f64, f64)>,
    /// The headline separation number: the smallest worse-of-two revenue gap
    /// (mhr), the smallest pairwise Levy distance (regular-levy), or the
    /// largest optimum error (general).
    pub certificate: f64,
}

impl LowerBoundReport {
    pub fn passed(&self) -> bool {
        !self.lines.iter().any(CheckLine::failed)
    }
}

impl fmt::Display for LowerBoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family {} eps={} members={}", self.family, self.eps, self.members.len())?;
        for m in &self.members {
            writeln!(f, "member {m}")?;
        }
        for (i, p, r) in &self.optima {
            writeln!(f, "optimum i={i} price={p:.12} revenue={r:.12}")?;
        }
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        writeln!(f, "certificate {:.6e}", self.certificate)?;
        write!(f, "verdict {}", if self.passed() { "pass" } else { "fail" })
    }
}

fn construction<E: fmt::Display>(e: E) -> BenchError {
    BenchError::Construction(e.to_string())
}

fn mhr_family(eps: f64) -> Result<LowerBoundReport, BenchError> {
    let d = MhrPair::new(MhrVariant::D, eps).map_err(construction)?;
    let dp = MhrPair::new(MhrVariant::DPrime, eps).map_err(construction)?;
    let mut lines = Vec::new();
    for (name, m) in [("mhr D", &d), ("mhr Dp", &dp)] {
        let c = check_mhr(m, DEFAULT_GRID).map_err(construction)?;
        lines.push(CheckLine::new(name, c.passed).witness(c.witness).margin(c.margin()));
    }
    // sale probabilities agree up to the factor 1 + O(eps)
    let bound = d.quantile_ratio_bound();
    let worst_ratio = (0..=DEFAULT_GRID)
        .map(|j| j as f64 / DEFAULT_GRID as f64)
        .filter(|&v| dp.quantile(v) > 0.0)
        .map(|v| {
            let r = d.quantile(v) / dp.quantile(v);
            r.max(1.0 / r)
        })
        .fold(1.0, f64::max);
    lines.push(
        CheckLine::new("quantile-ratio", worst_ratio <= bound * (1.0 + 1e-12))
            .margin(bound * (1.0 + 1e-12) - worst_ratio)
            .detail(format!("ratio={worst_ratio:.9} bound={bound:.9}")),
    );

    let step = 1.0 / MHR_SCAN_POINTS as f64;
    let opt_d = dense_scan_monopoly(&d, step).rev_star;
    let opt_dp = dense_scan_monopoly(&dp, step).rev_star;
    // every price loses more than eps on at least one of the two
    let (mut cert, mut cert_at) = (f64::INFINITY, 0.0);
    let mut best_common = 0.0f64;
    for k in 0..=MHR_SCAN_POINTS {
        let p = k as f64 * step;
        let gd = opt_d - revenue_at(&d, p);
        let gdp = opt_dp - revenue_at(&dp, p);
        if gd.max(gdp) < cert {
            cert = gd.max(gdp);
            cert_at = p;
        }
        best_common = best_common.max(gd.min(gdp));
    }
    lines.push(
        CheckLine::new("no-common-good-price", cert > eps)
            .witness(cert_at)
            .margin(cert - eps)
            .detail(format!("min_p max(gap_D, gap_Dp)={cert:.6e} optD={opt_d:.9} optDp={opt_dp:.9}")),
    );
    lines.push(
        CheckLine::new("max-min-gap", true)
            .with_status(crate::analysis::CheckStatus::Info)
            .detail(format!("max_p min(gap_D, gap_Dp)={best_common:.6e}")),
    );
    Ok(LowerBoundReport {
        family: LowerBoundFamily::Mhr,
        eps,
        members: vec![format!("mhr-pair:D,{eps}"), format!("mhr-pair:Dp,{eps}")],
        lines,
        optima: Vec::new(),
        certificate: cert,
    })
}

/// Number of bump positions `0.1 + 4 k sqrt(eps)` that fit in `[0.1, 0.9]`.
pub(crate) fn bump_count(eps: f64) -> usize {
    (0.8 / (4.0 * eps.sqrt()) + 1e-9).floor() as usize
}

fn regular_levy_family(eps: f64) -> Result<LowerBoundReport, BenchError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(BenchError::Construction(format!("eps must lie in (0, 1), got {eps}")));
    }
    let k = bump_count(eps);
    if k == 0 {
        return Err(BenchError::Construction(format!("no bump window fits for eps = {eps}")));
    }
    let s = eps.sqrt();
    let bumps: Vec<RegularBumpDist> = (0..k)
        .map(|j| RegularBumpDist::new(0.1 + 4.0 * j as f64 * s, eps))
        .collect::<Result<_, _>>()
        .map_err(construction)?;
    let uniform = UniformDist::new(0.0, 1.0).map_err(construction)?;
    let mut members: Vec<(String, &dyn ValueDistribution)> = vec![("uniform:0,1".into(), &uniform)];
    for b in &bumps {
        members.push((format!("bump:{},{eps}", b.x()), b));
    }

    let mut lines = Vec::new();
    let (mut worst_reg, mut worst_at) = (f64::INFINITY, 0.0);
    let mut all_regular = true;
    for b in &bumps {
        let c = check_regular(b, DEFAULT_GRID);
        all_regular &= c.passed;
        if c.margin() < worst_reg {
            worst_reg = c.margin();
            worst_at = b.x();
        }
    }
    lines.push(CheckLine::new("all-regular", all_regular).witness(worst_at).margin(worst_reg));
    let disjoint = bumps.windows(2).all(|w| w[0].window().1 <= w[1].window().0 + 1e-12);
    lines.push(CheckLine::new("disjoint-windows", disjoint));

    let step = eps / 100.0;
    let need = eps / 2.0 - step;
    let mut min_levy = f64::INFINITY;
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            let (da, db) = (members[a].1, members[b].1);
            let (fa, fb) = (|v: f64| da.cdf(v), |v: f64| db.cdf(v));
            min_levy = min_levy.min(levy_distance(&fa, &fb, 0.0, 1.0, step));
        }
    }
    lines.push(
        CheckLine::new("pairwise-levy", min_levy >= need)
            .margin(min_levy - need)
            .detail(format!("min={min_levy:.6e} need={need:.6e}")),
    );
    Ok(LowerBoundReport {
        family: LowerBoundFamily::RegularLevy,
        eps,
        members: members.into_iter().map(|m| m.0).collect(),
        lines,
        optima: Vec::new(),
        certificate: min_levy,
    })
}

fn general_family(eps: f64) -> Result<LowerBoundReport, BenchError> {
    let m = EqualRevenueGridDist::family_size(eps);
    if !(eps > 0.0) || m == 0 {
        return Err(BenchError::Construction(format!("grid family is empty for eps = {eps}")));
    }
    let mut optima = Vec::with_capacity(m);
    let mut members = Vec::with_capacity(m);
    let mut worst = 0.0f64;
    let mut unique = true;
    for i in 1..=m {
        let d = EqualRevenueGridDist::new(i, eps).map_err(construction)?;
        let scan = dense_scan_monopoly(&d, 1e-5);
        let (p, r) = d.optimum().expect("index is at least 1");
        worst = worst.max((scan.p_star - p).abs()).max((scan.rev_star - r).abs());
        // every other named price earns exactly 1/4
        unique &= d
            .support_points()
            .iter()
            .filter(|&&q| q != p)
            .all(|&q| (revenue_at(&d, q) - 0.25).abs() <= 1e-12);
        optima.push((i, scan.p_star, scan.rev_star));
        members.push(format!("grid-family:{i},{eps}"));
    }
    let tol = 1e-12;
    let lines = vec![
        CheckLine::new("optima-table", worst <= tol).margin(tol - worst),
        CheckLine::new("flat-elsewhere", unique),
    ];
    Ok(LowerBoundReport { family: LowerBoundFamily::General, eps, members, lines, optima, certificate: worst })
}

/// Builds one hard-instance family at accuracy `eps` and certifies its
/// separation property.
pub fn emit_lowerbound_family(family: LowerBoundFamily, eps: f64) -> Result<LowerBoundReport, BenchError> {
    match family {
        LowerBoundFamily::Mhr => mhr_family(eps),
        LowerBoundFamily::RegularLevy => regular_levy_family(eps),
        LowerBoundFamily::General => general_family(eps),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_table_at_one_percent() {
        let r = emit_lowerbound_family(LowerBoundFamily::General, 0.01).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.optima.len(), 6);
        for &(i, p, rev) in &r.optima {
            assert!((p - (0.5 + 0.04 * i as f64)).abs() <= 1e-12);
            assert!((rev - 0.26).abs() <= 1e-12);
        }
    }

    #[test]
    fn mhr_pair_has_no_common_good_price() {
        let r = emit_lowerbound_family(LowerBoundFamily::Mhr, 0.001).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.certificate > 0.001);
    }

    #[test]
    fn regular_levy_members() {
        let r = emit_lowerbound_family(LowerBoundFamily::RegularLevy, 0.01).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.members, vec!["uniform:0,1", "bump:0.1,0.01", "bump:0.5,0.01"]);
        assert!(r.certificate >= 0.005 - 1e-4);
        assert_eq!(bump_count(0.0001), 20);
    }

    #[test]
    fn construction_preconditions() {
        for (fam, eps) in [
            (LowerBoundFamily::Mhr, 0.02),
            (LowerBoundFamily::General, 0.1),
            (LowerBoundFamily::RegularLevy, 0.05),
        ] {
            assert!(matches!(emit_lowerbound_family(fam, eps), Err(BenchError::Construction(_))), "{fam}");
        }
    }

    #[test]
    fn family_names_round_trip() {
        for f in [LowerBoundFamily::Mhr, LowerBoundFamily::RegularLevy, LowerBoundFamily::General] {
            assert_eq!(f.to_string().parse::<LowerBoundFamily>().unwrap(), f);
        }
    }
}
