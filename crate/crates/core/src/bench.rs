//! Benchmark records and runners for path lengths, guess counts and equilibrium counts.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use num::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{BimatrixGame, Label};
use crate::gale::lemke_path_length;
use crate::generators::{all_permutations, permutation_equilibria, MorrisSpec, MorrisVariant};
use crate::lh::{lh_solve_with, LhOptions};
use crate::rational::Rational;
use crate::support::{randomized_support_search, Universe};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Lh,
    Support,
    CombinatorialLemke,
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Solver::Lh => "lh",
            Solver::Support => "support",
            Solver::CombinatorialLemke => "combinatorial-lemke",
        })
    }
}

/// One CSV row. `path_length` is set for path solvers, `guesses` for support search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub instance: String,
    pub m: usize,
    pub n: usize,
    pub solver: Solver,
    pub missing_label: Option<Label>,
    pub seed: Option<u64>,
    pub path_length: Option<u64>,
    pub guesses: Option<u64>,
    /// The step cap stopped the run; `path_length` holds the steps taken.
    pub truncated: bool,
    /// Seconds.
    pub wall_time: f64,
}

impl BenchRecord {
    /// Ordering key for output: instance, then label, then seed.
    pub fn sort_key(&self) -> (usize, &str, Option<Label>, Option<u64>) {
        (self.m, &self.instance, self.missing_label, self.seed)
    }
}

/// Sorts records by [`BenchRecord::sort_key`].
pub fn sort_records(records: &mut [BenchRecord]) {
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

/// Which missing labels a path benchmark runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelSelection {
    All,
    /// Label 1.
    One,
    /// Label `m/2`.
    Half,
}

impl LabelSelection {
    pub fn labels(self, m: usize) -> Vec<Label> {
        match self {
            LabelSelection::All => (1..=m).collect(),
            LabelSelection::One => vec![1],
            LabelSelection::Half => vec![(m / 2).max(1)],
        }
    }
}

impl FromStr for LabelSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(LabelSelection::All),
            "1" => Ok(LabelSelection::One),
            "half" => Ok(LabelSelection::Half),
            _ => Err(Error::InvalidArgument(format!("label selection must be all, 1 or half, got {s:?}"))),
        }
    }
}

fn instance_name(spec: &MorrisSpec) -> String {
    match spec.variant {
        MorrisVariant::Single => format!("morris-{}", spec.m),
        MorrisVariant::Triple => format!("triple-morris-{}", spec.m),
    }
}

/// Combinatorial Lemke path length on a Morris or triple Morris polytope.
pub fn morris_path_record(spec: &MorrisSpec, missing_label: Label, step_cap: Option<u64>) -> Result<BenchRecord> {
    let poly = spec.polytope()?;
    let start = Instant::now();
    let outcome = lemke_path_length(&poly, missing_label, step_cap)?;
    let wall_time = start.elapsed().as_secs_f64();
    let (steps, truncated) = match outcome {
        Ok(s) => (s, false),
        Err(s) => (s, true),
    };
    Ok(BenchRecord {
        instance: instance_name(spec),
        m: poly.m(),
        n: poly.n(),
        solver: Solver::CombinatorialLemke,
        missing_label: Some(missing_label),
        seed: None,
        path_length: Some(steps),
        guesses: None,
        truncated,
        wall_time,
    })
}

/// All `(m, label)` jobs of a Morris path benchmark, in output order.
pub fn morris_jobs(variant: MorrisVariant, ms: impl IntoIterator<Item = usize>, labels: LabelSelection) -> Vec<(MorrisSpec, Label)> {
    ms.into_iter()
        .flat_map(|m| labels.labels(m).into_iter().map(move |k| (MorrisSpec { m, variant }, k)))
        .collect()
}

/// Sequential Morris path benchmark.
pub fn morris_bench(
    variant: MorrisVariant,
    ms: impl IntoIterator<Item = usize>,
    labels: LabelSelection,
    step_cap: Option<u64>,
) -> Result<Vec<BenchRecord>> {
    morris_jobs(variant, ms, labels)
        .into_iter()
        .map(|(spec, k)| morris_path_record(&spec, k, step_cap))
        .collect()
}

/// LH path length on a game, with truncation at the step cap.
pub fn lh_record(instance: &str, game: &BimatrixGame, missing_label: Label, step_cap: Option<u64>) -> Result<BenchRecord> {
    let options = LhOptions {
        step_cap,
        ..LhOptions::default()
    };
    let start = Instant::now();
    let (length, truncated) = match lh_solve_with(game, missing_label, &options) {
        Ok(r) => (r.path_length as u64, false),
        Err(Error::BudgetExceeded(_)) => (step_cap.unwrap_or(0), true),
        Err(e) => return Err(e),
    };
    Ok(BenchRecord {
        instance: instance.to_string(),
        m: game.m(),
        n: game.n(),
        solver: Solver::Lh,
        missing_label: Some(missing_label),
        seed: None,
        path_length: Some(length),
        guesses: None,
        truncated,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Guess count of one randomized support search.
pub fn support_record(instance: &str, game: &BimatrixGame, universe: Universe, seed: u64) -> Result<BenchRecord> {
    let start = Instant::now();
    let (_, stats) = randomized_support_search(game, universe, seed)?;
    Ok(BenchRecord {
        instance: instance.to_string(),
        m: game.m(),
        n: game.n(),
        solver: Solver::Support,
        missing_label: None,
        seed: Some(seed),
        path_length: None,
        guesses: Some(stats.guesses),
        truncated: false,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// `r_m = a_m / a_{m-2}` for consecutive even `m` among complete combinatorial Lemke
/// records with the given missing label. Truncated records are ignored.
pub fn growth_ratios(records: &[BenchRecord], missing_label: Label) -> Vec<(usize, f64)> {
    let mut lengths: Vec<(usize, u64)> = records
        .iter()
        .filter(|r| r.solver == Solver::CombinatorialLemke && !r.truncated && r.missing_label == Some(missing_label))
        .filter_map(|r| r.path_length.map(|l| (r.m, l)))
        .collect();
    lengths.sort_unstable();
    lengths.dedup_by_key(|(m, _)| *m);
    lengths
        .windows(2)
        .filter(|w| w[1].0 == w[0].0 + 2 && w[0].1 > 0)
        .map(|w| (w[1].0, w[1].1 as f64 / w[0].1 as f64))
        .collect()
}

/// Exact equilibrium-count statistics over all `n!` permutation games.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationSummary {
    pub n: usize,
    pub permutations: u64,
    pub total_equilibria: u64,
    pub single_cycle: u64,
}

impl PermutationSummary {
    pub fn mean(&self) -> Rational {
        if self.permutations.is_zero() {
            return Rational::zero();
        }
        Rational::new(self.total_equilibria.into(), self.permutations.into())
    }

    pub fn single_cycle_fraction(&self) -> Rational {
        if self.permutations.is_zero() {
            return Rational::zero();
        }
        Rational::new(self.single_cycle.into(), self.permutations.into())
    }
}

/// Refuses `n > 10`.
pub fn permutation_exhaustive(n: usize) -> Result<PermutationSummary> {
    if n == 0 || n > 10 {
        return Err(Error::BudgetExceeded(format!("exhaustive permutation count needs 1 <= n <= 10, got {n}")));
    }
    let mut summary = PermutationSummary {
        n,
        permutations: 0,
        total_equilibria: 0,
        single_cycle: 0,
    };
    for spec in all_permutations(n) {
        summary.permutations += 1;
        summary.total_equilibria += permutation_equilibria(&spec).len() as u64;
        if spec.cycles().len() == 1 {
            summary.single_cycle += 1;
        }
    }
    Ok(summary)
}

/// Appends records as CSV, writing the header only when `write_header` is set. Each
/// record is written with a single `write_all` and flushed.
pub struct BenchWriter<W: Write> {
    out: W,
    header_pending: bool,
}

impl<W: Write> BenchWriter<W> {
    pub fn new(out: W, write_header: bool) -> Self {
        Self {
            out,
            header_pending: write_header,
        }
    }

    pub fn write(&mut self, record: &BenchRecord) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(self.header_pending).from_writer(Vec::new());
        w.serialize(record).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        self.out.write_all(&bytes).and_then(|_| self.out.flush()).map_err(|e| Error::InvalidArgument(format!("writing record: {e}")))?;
        self.header_pending = false;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}
