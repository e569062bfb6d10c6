use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pricing_query::analysis::flatness_sweep;
use pricing_query::bench::{
    emit_lowerbound_family, parse_key_values, run_experiment, validate_distribution, BenchError,
    ExperimentConfig, LowerBoundFamily, TrialContext,
};

#[derive(Parser)]
#[command(name = "pricing", version, about = "Learn buyer value distributions from posted-price feedback")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded trial batches and fit the query-count scaling exponent.
    Bench(RunArgs),
    /// Run a single trial and print its record.
    Estimate {
        #[command(flatten)]
        run: RunArgs,
        /// Trial index, which selects the random stream.
        #[arg(long, default_value_t = 0)]
        trial: u64,
        /// Write every posted price and its outcome to this CSV file.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Check a distribution spec against every applicable checker.
    Validate {
        /// Spec such as `bump:0.5,0.01`.
        #[arg(long)]
        dist: String,
    },
    /// Build a hard-instance family and certify its separation.
    Lowerbound {
        /// mhr, regular-levy or general.
        family: String,
        #[arg(long)]
        eps: f64,
    },
    /// Randomized relative-flatness sweep over regular families.
    Flatness {
        #[arg(long, default_value_t = 10_000)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest acceptable excess ratio.
        #[arg(long, default_value_t = 60.0)]
        bound: f64,
    },
}

/// Experiment flags; each overrides the same key in `--config`.
#[derive(Args)]
struct RunArgs {
    /// Flat `key = value` file with the same keys as the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    estimator: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    /// Comma-separated, strictly decreasing.
    #[arg(long)]
    eps_list: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    budget: Option<String>,
    /// CSV output, or JSON lines when the name ends in `.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threshold_mult: Option<String>,
    #[arg(long)]
    no_validate: bool,
    #[arg(long)]
    sigma_bar: Option<String>,
    #[arg(long)]
    workers: Option<String>,
}

/// Query budget per trial when none is configured.
const DEFAULT_BUDGET: &str = "1000000000";

impl RunArgs {
    fn config(&self) -> Result<ExperimentConfig, BenchError> {
        let mut map: BTreeMap<String, String> = match &self.config {
            Some(p) => parse_key_values(&std::fs::read_to_string(p)?)?,
            None => BTreeMap::new(),
        };
        let flags = [
            ("dist", self.dist.clone()),
            ("estimator", self.estimator.clone()),
            ("eps", self.eps.clone()),
            ("eps-list", self.eps_list.clone()),
            ("delta", self.delta.clone()),
            ("trials", self.trials.clone()),
            ("seed", self.seed.clone()),
            ("budget", self.budget.clone()),
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
            ("threshold-mult", self.threshold_mult.clone()),
            ("no-validate", self.no_validate.then(|| "true".to_string())),
            ("sigma-bar", self.sigma_bar.clone()),
            ("workers", self.workers.clone()),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                if k == "eps" {
                    map.remove("eps-list");
                }
                map.insert(k.to_string(), v);
            }
        }
        map.entry("budget".into()).or_insert_with(|| DEFAULT_BUDGET.into());
        ExperimentConfig::from_map(&map)
    }
}

fn status(ok: bool) -> ExitCode {
    ExitCode::from(if ok { 0 } else { 1 })
}

fn bench(args: RunArgs) -> Result<ExitCode, BenchError> {
    let cfg = args.config()?;
    let out = run_experiment(&cfg)?;
    println!("eps,trials,successes,success_rate,budget_exhausted,median_queries,max_loss,threshold");
    for s in &out.summaries {
        println!(
            "{},{},{},{:.4},{},{},{:.6e},{}",
            s.eps, s.trials, s.successes, s.success_rate, s.budget_exhausted, s.median_queries, s.max_loss, s.threshold
        );
    }
    match (&out.slope, &out.slope_note) {
        (Some(f), _) => println!("slope {:.4} intercept {:.4} r2 {:.4}", f.slope, f.intercept, f.r2),
        (None, Some(note)) => println!("slope n/a ({note})"),
        (None, None) => println!("slope n/a"),
    }
    Ok(status(out.all_pass()))
}

fn estimate(args: RunArgs, trial: u64, transcript: Option<PathBuf>) -> Result<ExitCode, BenchError> {
    let cfg = args.config()?;
    let ctx = TrialContext::new(&cfg)?;
    let mut session = ctx.session(trial);
    if transcript.is_some() {
        session = session.with_transcript();
    }
    let rec = ctx.run_on(&mut session, cfg.eps_list[0], trial)?;
    if let Some(p) = transcript {
        session.save_transcript(&p)?;
    }
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.serialize(&rec)?;
    w.flush()?;
    Ok(status(rec.success))
}

fn run(cli: Cli) -> Result<ExitCode, BenchError> {
    match cli.command {
        Command::Bench(args) => bench(args),
        Command::Estimate { run, trial, transcript } => estimate(run, trial, transcript),
        Command::Validate { dist } => {
            let report = validate_distribution(&dist)?;
            println!("{report}");
            Ok(status(report.passed()))
        }
        Command::Lowerbound { family, eps } => {
            let report = emit_lowerbound_family(family.parse::<LowerBoundFamily>()?, eps)?;
            println!("{report}");
            Ok(status(report.passed()))
        }
        Command::Flatness { draws, seed, bound } => {
            let sweep = flatness_sweep(draws, seed);
            println!("draws {} max_excess_ratio {:.6} bound {bound}", sweep.draws, sweep.max_ratio);
            if let Some((spec, rep)) = &sweep.worst {
                println!(
                    "worst {spec} p1={:.6} p4={:.6} c={:.4} eps_flat={:.6e}",
                    rep.p[0], rep.p[3], rep.c, rep.eps_flat
                );
            }
            Ok(status(sweep.max_ratio <= bound))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
