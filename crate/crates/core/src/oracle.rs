//! The simulated buyer.
//!
//! A [`PricingSession`] is the only handle estimators get on a distribution.
//! It answers one question per call (did a fresh buyer accept this price?)
//! and keeps exact count of how many times it was asked.

use std::io::{self, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dist::SharedDist;

/// Feedback from one posted price: whether the buyer's value was at least the
/// price.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryOutcome {
    pub sold: bool,
}

#[derive(Debug, Clone, Copy, Error, PartialEq, Eq)]
#[error("query budget of {budget} exhausted")]
pub struct BudgetExhausted {
    pub budget: u64,
}

/// Seeded, counted, optionally budgeted access to a value distribution.
///
/// Sessions with the same distribution, seed and stream answer the same price
/// sequence identically. Different streams of one seed never share random
/// numbers.
#[derive(Debug, Clone)]
pub struct PricingSession {
    dist: SharedDist,
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
    queries: u64,
    budget: Option<u64>,
    transcript: Option<Vec<(f64, bool)>>,
}

impl PricingSession {
    pub fn new(dist: SharedDist, seed: u64) -> Self {
        Self::on_stream(dist, seed, 0, None, false)
    }

    fn on_stream(
        dist: SharedDist,
        seed: u64,
        stream: u64,
        budget: Option<u64>,
        transcript: bool,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self {
            dist,
            seed,
            stream,
            rng,
            queries: 0,
            budget,
            transcript: transcript.then(Vec::new),
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }

    /// Records every `(price, sold)` pair from now on.
    pub fn with_transcript(mut self) -> Self {
        self.transcript.get_or_insert_with(Vec::new);
        self
    }

    /// Posts price `p` to a fresh buyer. A value equal to `p` buys.
    pub fn post_price(&mut self, p: f64) -> Result<QueryOutcome, BudgetExhausted> {
        if let Some(budget) = self.budget {
            if self.queries >= budget {
                return Err(BudgetExhausted { budget });
            }
        }
        let v = self.dist.sample(&mut self.rng);
        let sold = v >= p;
        self.queries += 1;
        if let Some(t) = self.transcript.as_mut() {
            t.push((p, sold));
        }
        Ok(QueryOutcome { sold })
    }

    /// An independent session on the same distribution, drawing from stream
    /// `stream_id` of this session's seed. The fork starts with zero queries
    /// and inherits the budget limit and transcript setting, not their state.
    pub fn fork(&self, stream_id: u64) -> Self {
        Self::on_stream(
            self.dist.clone(),
            self.seed,
            stream_id,
            self.budget,
            self.transcript.is_some(),
        )
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn queries_used(&self) -> u64 {
        self.queries
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    /// Queries left before the budget runs out, or `None` without a budget.
    pub fn remaining(&self) -> Option<u64> {
        self.budget.map(|b| b.saturating_sub(self.queries))
    }

    pub fn transcript(&self) -> Option<&[(f64, bool)]> {
        self.transcript.as_deref()
    }

    /// Writes the transcript as `price,sold` lines under a header. Writes only
    /// the header when transcripts are off.
    pub fn write_transcript<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "price,sold")?;
        for &(p, sold) in self.transcript.as_deref().unwrap_or(&[]) {
            writeln!(out, "{p},{}", u8::from(sold))?;
        }
        out.flush()
    }

    pub fn save_transcript(&self, path: &Path) -> io::Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_transcript(io::BufWriter::new(file))
    }
}
