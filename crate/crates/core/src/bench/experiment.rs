use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{fit_slope, median, BenchError, EstimatorKind, ExperimentConfig, SlopeFit};
use crate::analysis::{check_regular, dense_scan_monopoly, effective_range, levy_distance, DEFAULT_GRID};
use crate::dist::{revenue_at, DistSpec, SharedDist};
use crate::estimators::{
    estimate_normal_mean_known_sigma, estimate_normal_mean_sigma_bound, find_median, find_monopoly_general,
    find_monopoly_regular, learn_cdf_general,
};
use crate::oracle::PricingSession;

/// Grid step of the dense revenue scan that scores monopoly estimates.
const MONOPOLY_SCAN_STEP: f64 = 1e-5;

/// One trial's outcome. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub estimator: String,
    pub dist: String,
    pub eps: f64,
    pub trial: u64,
    /// Base seed of the run; `trial` selects the random stream.
    pub seed: u64,
    pub queries: u64,
    pub loss: f64,
    pub success: bool,
    pub wall_ns: u64,
    #[serde(skip)]
    pub budget_exhausted: bool,
}

/// Ground truth each trial is scored against, computed once per run.
#[derive(Debug, Clone, Copy)]
enum Truth {
    /// `F` at the true median.
    Median { f_theta: f64 },
    Mean { mu: f64, sigma: f64, sigma_bar: f64 },
    Monopoly { rev_star: f64 },
    Cdf { lo: f64, hi: f64 },
}

/// Everything needed to run and score single trials of one configuration.
#[derive(Debug, Clone)]
pub struct TrialContext {
    kind: EstimatorKind,
    spec: DistSpec,
    spec_text: String,
    dist: SharedDist,
    truth: Truth,
    delta: f64,
    base_seed: u64,
    budget: Option<u64>,
    threshold_mult: f64,
}

impl TrialContext {
    /// Builds the distribution, checks it suits the estimator and computes
    /// the ground truth.
    pub fn new(cfg: &ExperimentConfig) -> Result<Self, BenchError> {
        cfg.check()?;
        let dist = cfg.dist.build()?;
        let kind = cfg.estimator;
        let truth = match kind {
            EstimatorKind::Median => Truth::Median { f_theta: dist.cdf(dist.inv_cdf(0.5)) },
            EstimatorKind::NormalMeanKnown | EstimatorKind::NormalMeanBound => {
                let DistSpec::Normal { mu, sigma } = cfg.dist else {
                    return Err(BenchError::Config(format!("{kind} needs a normal distribution, got {}", cfg.dist)));
                };
                let sigma_bar = cfg.sigma_bar.unwrap_or(sigma);
                if cfg.validate && kind == EstimatorKind::NormalMeanBound && sigma > sigma_bar {
                    return Err(BenchError::Config(format!("sigma {sigma} exceeds sigma-bar {sigma_bar}")));
                }
                Truth::Mean { mu, sigma, sigma_bar }
            }
            EstimatorKind::MonopolyRegular | EstimatorKind::MonopolyGeneral => {
                if cfg.validate && kind == EstimatorKind::MonopolyRegular {
                    let c = check_regular(dist.as_ref(), DEFAULT_GRID);
                    if !c.passed {
                        return Err(BenchError::Config(format!(
                            "{} is not regular (revenue curve bends up near q = {:.6}); pass --no-validate to run anyway",
                            cfg.dist, c.witness
                        )));
                    }
                }
                Truth::Monopoly { rev_star: dense_scan_monopoly(dist.as_ref(), MONOPOLY_SCAN_STEP).rev_star }
            }
            EstimatorKind::CdfGeneral => {
                let (lo, hi) = effective_range(dist.as_ref(), 1e-9);
                Truth::Cdf { lo: lo.min(0.0), hi: hi.max(1.0) }
            }
        };
        Ok(Self {
            kind,
            spec_text: cfg.dist.to_string(),
            spec: cfg.dist.clone(),
            dist,
            truth,
            delta: cfg.delta,
            base_seed: cfg.base_seed,
            budget: cfg.budget,
            threshold_mult: cfg.threshold_mult,
        })
    }

    pub fn spec(&self) -> &DistSpec {
        &self.spec
    }

    pub fn dist(&self) -> &SharedDist {
        &self.dist
    }

    /// Loss threshold for success at accuracy `eps`.
    pub fn threshold(&self, eps: f64) -> f64 {
        self.threshold_mult * eps
    }

    /// Fresh session for trial `trial`: stream `trial` of the base seed, with
    /// the configured budget.
    pub fn session(&self, trial: u64) -> PricingSession {
        let root = PricingSession::new(self.dist.clone(), self.base_seed);
        let s = root.fork(trial);
        match self.budget {
            Some(b) => s.with_budget(b),
            None => s,
        }
    }

    pub fn run_trial(&self, eps: f64, trial: u64) -> Result<ExperimentRecord, BenchError> {
        self.run_on(&mut self.session(trial), eps, trial)
    }

    /// Runs one trial on a caller-supplied session, e.g. one that records a
    /// transcript.
    pub fn run_on(&self, s: &mut PricingSession, eps: f64, trial: u64) -> Result<ExperimentRecord, BenchError> {
        let start = Instant::now();
        let before = s.queries_used();
        let d = self.dist.as_ref();
        let (loss, exhausted) = match (self.kind, self.truth) {
            (EstimatorKind::Median, Truth::Median { f_theta }) => {
                let r = find_median(s, eps, self.delta)?;
                ((d.cdf(r.p_star) - f_theta).abs(), r.budget_exhausted)
            }
            (EstimatorKind::NormalMeanKnown, Truth::Mean { mu, sigma, .. }) => {
                let r = estimate_normal_mean_known_sigma(s, sigma, eps)?;
                ((r.mu_hat - mu).abs(), r.budget_exhausted)
            }
            (EstimatorKind::NormalMeanBound, Truth::Mean { mu, sigma_bar, .. }) => {
                let r = estimate_normal_mean_sigma_bound(s, sigma_bar, eps)?;
                ((r.mu_hat - mu).abs(), r.budget_exhausted)
            }
            (EstimatorKind::MonopolyRegular, Truth::Monopoly { rev_star }) => {
                let r = find_monopoly_regular(s, eps)?;
                ((rev_star - revenue_at(d, r.p_hat)).abs(), r.budget_exhausted)
            }
            (EstimatorKind::MonopolyGeneral, Truth::Monopoly { rev_star }) => {
                let r = find_monopoly_general(s, eps)?;
                ((rev_star - revenue_at(d, r.p_hat)).abs(), r.budget_exhausted)
            }
            (EstimatorKind::CdfGeneral, Truth::Cdf { lo, hi }) => {
                let r = learn_cdf_general(s, eps)?;
                let step = (eps / 10.0).min(1e-3);
                let truth = |v: f64| d.cdf(v);
                let learned = |v: f64| r.cdf(v);
                (levy_distance(&truth, &learned, lo, hi, step), r.budget_exhausted)
            }
            _ => unreachable!("truth is built for the estimator kind"),
        };
        let wall_ns = u64::try_from(start.elapsed().as_nanos()).unwrap_or(u64::MAX);
        Ok(ExperimentRecord {
            estimator: self.kind.to_string(),
            dist: self.spec_text.clone(),
            eps,
            trial,
            seed: self.base_seed,
            queries: s.queries_used() - before,
            loss,
            success: !exhausted && loss <= self.threshold(eps),
            wall_ns,
            budget_exhausted: exhausted,
        })
    }
}

/// Destination for records as they complete. Every record is flushed, so an
/// interrupted run leaves a readable prefix.
pub enum RecordSink {
    Csv(csv::Writer<File>),
    Jsonl(BufWriter<File>),
    Discard,
}

impl RecordSink {
    /// JSON lines for `.json` and `.jsonl` paths, CSV otherwise.
    pub fn create(path: &Path) -> Result<Self, BenchError> {
        let json = matches!(path.extension().and_then(|e| e.to_str()), Some("json" | "jsonl"));
        Ok(if json {
            RecordSink::Jsonl(BufWriter::new(File::create(path)?))
        } else {
            RecordSink::Csv(csv::Writer::from_path(path)?)
        })
    }

    pub fn write(&mut self, r: &ExperimentRecord) -> Result<(), BenchError> {
        match self {
            RecordSink::Csv(w) => {
                w.serialize(r)?;
                w.flush()?;
            }
            RecordSink::Jsonl(w) => {
                serde_json::to_writer(&mut *w, r)?;
                w.write_all(b"\n")?;
                w.flush()?;
            }
            RecordSink::Discard => {}
        }
        Ok(())
    }
}

/// Per-accuracy aggregate of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsSummary {
    pub eps: f64,
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    pub budget_exhausted: u64,
    pub median_queries: f64,
    pub max_loss: f64,
    pub threshold: f64,
}

impl EpsSummary {
    /// Success rate is at least `1 - delta - slack`.
    pub fn meets_rate(&self, delta: f64, slack: f64) -> bool {
        self.success_rate >= 1.0 - delta - slack
    }
}

/// Everything a benchmark run produced.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    #[serde(skip)]
    pub records: Vec<ExperimentRecord>,
    pub summaries: Vec<EpsSummary>,
    pub slope: Option<SlopeFit>,
    /// Why there is no slope, when there is none.
    pub slope_note: Option<String>,
}

impl ExperimentOutput {
    /// Every accuracy level reached `1 - delta - 0.1` successes.
    pub fn all_pass(&self) -> bool {
        self.summaries.iter().all(|s| s.meets_rate(self.config.delta, 0.1))
    }
}

fn summarize(records: &[ExperimentRecord], ctx: &TrialContext, eps_list: &[f64]) -> Vec<EpsSummary> {
    eps_list
        .iter()
        .map(|&eps| {
            let rs: Vec<_> = records.iter().filter(|r| r.eps == eps).collect();
            let successes = rs.iter().filter(|r| r.success).count() as u64;
            let qs: Vec<f64> = rs.iter().map(|r| r.queries as f64).collect();
            EpsSummary {
                eps,
                trials: rs.len() as u64,
                successes,
                success_rate: successes as f64 / rs.len().max(1) as f64,
                budget_exhausted: rs.iter().filter(|r| r.budget_exhausted).count() as u64,
                median_queries: if qs.is_empty() { 0.0 } else { median(&qs) },
                max_loss: rs.iter().map(|r| r.loss).fold(0.0, f64::max),
                threshold: ctx.threshold(eps),
            }
        })
        .collect()
}

/// Path of the metadata file written next to an output file.
pub fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Runs every `eps x trial` combination, in parallel over forked sessions,
/// writing records in job order to the configured output as they finish.
///
/// Trial `t` always uses stream `t` of the base seed, so output other than
/// `wall_ns` depends only on the config.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput, BenchError> {
    let ctx = TrialContext::new(cfg)?;
    let mut sink = match &cfg.output {
        Some(p) => RecordSink::create(p)?,
        None => RecordSink::Discard,
    };
    let jobs: Vec<(f64, u64)> = cfg
        .eps_list
        .iter()
        .flat_map(|&e| (0..cfg.trials).map(move |t| (e, t)))
        .collect();
    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let workers = cfg.worker_count().clamp(1, jobs.len());
    let mut records = Vec::with_capacity(jobs.len());
    let mut failure: Option<BenchError> = None;

    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<(usize, Result<ExperimentRecord, BenchError>)>();
        for _ in 0..workers {
            let tx = tx.clone();
            let (ctx, jobs, next, abort) = (&ctx, &jobs, &next, &abort);
            scope.spawn(move || loop {
                if abort.load(Ordering::Relaxed) {
                    break;
                }
                let j = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(eps, trial)) = jobs.get(j) else { break };
                if tx.send((j, ctx.run_trial(eps, trial))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        // the receiver is the only writer; it releases records in job order
        let mut pending = BTreeMap::new();
        for (j, res) in rx {
            match res {
                Ok(r) => {
                    pending.insert(j, r);
                }
                Err(e) => {
                    abort.store(true, Ordering::Relaxed);
                    failure.get_or_insert(e);
                }
            }
            while let Some(r) = pending.remove(&records.len()) {
                if failure.is_none() {
                    if let Err(e) = sink.write(&r) {
                        abort.store(true, Ordering::Relaxed);
                        failure = Some(e);
                    }
                }
                records.push(r);
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }

    let summaries = summarize(&records, &ctx, &cfg.eps_list);
    let (slope, slope_note) = match fit_slope(&records) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let out = ExperimentOutput { config: cfg.clone(), records, summaries, slope, slope_note };
    if let Some(p) = &cfg.output {
        let meta = File::create(meta_path(p))?;
        serde_json::to_writer_pretty(BufWriter::new(meta), &out)?;
    }
    Ok(out)
}
