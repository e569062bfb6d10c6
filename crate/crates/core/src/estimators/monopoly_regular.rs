use std::collections::HashMap;

use crate::oracle::PricingSession;

use super::{estimate_quantile, require_unit, EstimatorError, MonopolyResult, QuantileEstimate};

/// An interval still to be explored, with the estimates already known at its
/// endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_est: Option<QuantileEstimate>,
    pub hi_est: Option<QuantileEstimate>,
}

impl CandidateInterval {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }
}

/// How an explored interval was resolved. Variants follow the order in which
/// the cases are tested; a revenue is "low" when it is more than `2 eps`
/// below the best of the five probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonopolyCase {
    /// Shorter than `eps`: discarded without queries.
    Narrow,
    /// No probe is low: keep the leftmost quarter.
    Flat,
    /// Only the left end is low.
    LowLeft,
    /// Only the right end is low.
    LowRight,
    /// Both ends low, interior not: the list is replaced by three pieces.
    LowBothEnds,
    /// The left end and the first interior probe are low.
    LowLeftPair,
    /// The right end and the last interior probe are low.
    LowRightPair,
    /// Estimation noise produced a pattern no case covers; handled as `Flat`.
    Fallthrough,
}

impl MonopolyCase {
    /// Case number 1 to 7; the fallthrough counts as case 2.
    pub fn number(self) -> usize {
        match self {
            MonopolyCase::Narrow => 1,
            MonopolyCase::Flat | MonopolyCase::Fallthrough => 2,
            MonopolyCase::LowLeft => 3,
            MonopolyCase::LowRight => 4,
            MonopolyCase::LowBothEnds => 5,
            MonopolyCase::LowLeftPair => 6,
            MonopolyCase::LowRightPair => 7,
        }
    }
}

/// What one iteration did.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub interval: (f64, f64),
    /// `l, p1, p2, p3, r`; absent for a narrow interval.
    pub probes: Option<[f64; 5]>,
    pub rev_hat: Option<[f64; 5]>,
    pub case: MonopolyCase,
    pub list_len_after: usize,
    pub potential_before: u64,
    pub potential_after: u64,
}

/// Counters gathered over a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RegularSearchStats {
    pub iterations: u64,
    pub iteration_bound: u64,
    pub max_list_len: usize,
    /// Occurrences of cases 1 through 7 (fallthroughs included in case 2).
    pub case_counts: [u64; 7],
    pub fallthroughs: u64,
    /// Iterations after which the potential grew.
    pub potential_increases: u64,
    /// Iterations other than narrow discards after which the potential did
    /// not strictly drop.
    pub potential_stalls: u64,
}

/// `n^3` with `n = 1 + ceil(log_{2/sqrt 3}(1/eps))`.
pub fn iteration_bound(eps: f64) -> u64 {
    let n = shrink_levels(eps);
    n * n * n
}

fn shrink_levels(eps: f64) -> u64 {
    1 + ((1.0 / eps).ln() / shrink_base_ln()).ceil() as u64
}

fn shrink_base_ln() -> f64 {
    (2.0 / 3f64.sqrt()).ln()
}

/// Interval-list search for the monopoly price of a regular distribution on
/// `[0, 1]`.
///
/// Each distinct price is estimated once, to accuracy `eps` with failure
/// probability `eps^2`, and the estimate is cached for reuse by neighbouring
/// intervals. Call [`step`](Self::step) until it returns `None`, or use
/// [`run`](Self::run).
#[derive(Debug, Clone)]
pub struct RegularMonopolySearch {
    eps: f64,
    delta: f64,
    n: u64,
    list: Vec<CandidateInterval>,
    cache: HashMap<u64, QuantileEstimate>,
    log: Vec<QuantileEstimate>,
    queries: u64,
    stats: RegularSearchStats,
    budget_exhausted: bool,
}

impl RegularMonopolySearch {
    pub fn new(eps: f64) -> Result<Self, EstimatorError> {
        require_unit("eps", eps, false)?;
        Ok(Self {
            eps,
            delta: eps * eps,
            n: shrink_levels(eps),
            list: vec![CandidateInterval { lo: 0.0, hi: 1.0, lo_est: None, hi_est: None }],
            cache: HashMap::new(),
            log: Vec::new(),
            queries: 0,
            stats: RegularSearchStats {
                iteration_bound: iteration_bound(eps),
                max_list_len: 1,
                ..Default::default()
            },
            budget_exhausted: false,
        })
    }

    pub fn list(&self) -> &[CandidateInterval] {
        &self.list
    }

    pub fn stats(&self) -> &RegularSearchStats {
        &self.stats
    }

    pub fn is_done(&self) -> bool {
        self.list.is_empty() || self.budget_exhausted
    }

    /// `n^2 a1 + n a2 + a3` over the three longest intervals, where
    /// `a = ceil(log_{2/sqrt 3}(d / eps))` for `d >= eps` and 0 otherwise.
    pub fn potential(&self) -> u64 {
        let mut lens: Vec<f64> = self.list.iter().map(CandidateInterval::len).collect();
        lens.sort_by(|a, b| b.total_cmp(a));
        lens.resize(3.max(lens.len()), 0.0);
        let a = |d: f64| {
            if d < self.eps {
                0
            } else {
                ((d / self.eps).ln() / shrink_base_ln()).ceil().max(0.0) as u64
            }
        };
        let n = self.n;
        n * n * a(lens[0]) + n * a(lens[1]) + a(lens[2])
    }

    fn estimate(&mut self, s: &mut PricingSession, p: f64) -> Option<QuantileEstimate> {
        if let Some(e) = self.cache.get(&p.to_bits()) {
            return Some(*e);
        }
        let e = estimate_quantile(s, p, self.eps, self.delta).expect("eps and delta validated in new");
        self.queries += e.queries;
        self.log.push(e);
        if e.reliable {
            self.cache.insert(p.to_bits(), e);
            Some(e)
        } else {
            self.budget_exhausted = true;
            None
        }
    }

    fn interval(&self, lo: f64, hi: f64) -> CandidateInterval {
        CandidateInterval {
            lo,
            hi,
            lo_est: self.cache.get(&lo.to_bits()).copied(),
            hi_est: self.cache.get(&hi.to_bits()).copied(),
        }
    }

    fn insert(&mut self, lo: f64, hi: f64) {
        let iv = self.interval(lo, hi);
        let at = self.list.partition_point(|c| c.lo < lo);
        self.list.insert(at, iv);
    }

    /// Explores one interval. Returns `None` once the list is empty or the
    /// budget has run out.
    pub fn step(&mut self, s: &mut PricingSession) -> Option<StepReport> {
        if self.is_done() {
            return None;
        }
        let potential_before = self.potential();
        let idx = usize::from(self.list.len() > 1);
        let iv = self.list.remove(idx);
        let (l, r) = (iv.lo, iv.hi);
        let mut probes = None;
        let mut rev_hat = None;
        let case = if r - l < self.eps {
            MonopolyCase::Narrow
        } else {
            let pts = [l, (3.0 * l + r) / 4.0, (l + r) / 2.0, (l + 3.0 * r) / 4.0, r];
            let mut rev = [0.0; 5];
            for (i, &p) in pts.iter().enumerate() {
                let e = self.estimate(s, p)?;
                rev[i] = p * e.q_hat;
            }
            probes = Some(pts);
            rev_hat = Some(rev);
            let best = rev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let low = rev.map(|x| x < best - 2.0 * self.eps);
            let [ll, l1, l2, l3, lr] = low;
            let case = if !low.iter().any(|&b| b) {
                MonopolyCase::Flat
            } else if ll && !l1 && !l2 && !l3 && !lr {
                MonopolyCase::LowLeft
            } else if lr && !ll && !l1 && !l2 && !l3 {
                MonopolyCase::LowRight
            } else if ll && lr && !l1 && !l2 && !l3 {
                MonopolyCase::LowBothEnds
            } else if ll && l1 {
                MonopolyCase::LowLeftPair
            } else if lr && l3 {
                MonopolyCase::LowRightPair
            } else {
                MonopolyCase::Fallthrough
            };
            let (p1, p3) = (pts[1], pts[3]);
            match case {
                MonopolyCase::Flat | MonopolyCase::Fallthrough => self.insert(l, p1),
                MonopolyCase::LowLeft => {
                    self.list.retain(|c| c.hi > l);
                    self.insert(l, p1);
                    self.insert(p1, r);
                }
                MonopolyCase::LowRight => {
                    self.list.retain(|c| c.lo < r);
                    self.insert(l, p3);
                    self.insert(p3, r);
                }
                MonopolyCase::LowBothEnds => {
                    self.list.clear();
                    self.insert(l, p1);
                    self.insert(p1, p3);
                    self.insert(p3, r);
                }
                MonopolyCase::LowLeftPair => {
                    self.list.retain(|c| c.hi > l);
                    self.insert(p1, r);
                }
                MonopolyCase::LowRightPair => {
                    self.list.retain(|c| c.lo < r);
                    self.insert(l, p3);
                }
                MonopolyCase::Narrow => unreachable!("narrow intervals are never probed"),
            }
            case
        };
        debug_assert!(self.list.len() <= 3, "candidate list grew to {}", self.list.len());
        debug_assert!(self.list.windows(2).all(|w| w[0].hi <= w[1].lo));

        let potential_after = self.potential();
        let st = &mut self.stats;
        st.iterations += 1;
        st.max_list_len = st.max_list_len.max(self.list.len());
        st.case_counts[case.number() - 1] += 1;
        st.fallthroughs += u64::from(case == MonopolyCase::Fallthrough);
        st.potential_increases += u64::from(potential_after > potential_before);
        if case != MonopolyCase::Narrow {
            st.potential_stalls += u64::from(potential_after >= potential_before);
        }
        Some(StepReport {
            interval: (l, r),
            probes,
            rev_hat,
            case,
            list_len_after: self.list.len(),
            potential_before,
            potential_after,
        })
    }

    /// Runs to completion and returns the queried price with the largest
    /// estimated revenue.
    pub fn run(mut self, s: &mut PricingSession) -> MonopolyResult {
        while self.step(s).is_some() {}
        self.finish()
    }

    pub fn finish(self) -> MonopolyResult {
        let mut res = MonopolyResult::from_log(self.log, self.queries, self.stats.iterations, self.budget_exhausted);
        res.regular_stats = Some(self.stats);
        res
    }
}

/// Monopoly price of a regular distribution on `[0, 1]` to within `O(eps)`
/// revenue, using `O~(1/eps^2)` queries.
pub fn find_monopoly_regular(s: &mut PricingSession, eps: f64) -> Result<MonopolyResult, EstimatorError> {
    Ok(RegularMonopolySearch::new(eps)?.run(s))
}
