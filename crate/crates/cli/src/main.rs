use std::fs::{self, OpenOptions};
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use galelemke::bench::{
    growth_ratios, lh_record, morris_jobs, morris_path_record, permutation_exhaustive, sort_records, support_record, BenchRecord,
    BenchWriter, LabelSelection,
};
use galelemke::format::{parse_any, parse_profile, write_bgame, write_uvg};
use galelemke::game::{labels_of_profile, missing_labels, unit_vector_game, BimatrixGame, UnitVectorGame};
use galelemke::generators::{
    permutation_game, random_game, random_permutation, MorrisSpec, MorrisVariant, PermutationGameSpec, RandomGameOptions,
};
use galelemke::lh::{lh_solve_with, LhOptions, DEFAULT_STEP_CAP};
use galelemke::matrix::Matrix;
use galelemke::path::write_path_csv;
use galelemke::rational::format_rational;
use galelemke::support::{count_equilibrium_supports, enumerate_equilibria, expected_guesses, mean_and_standard_error, randomized_support_search, SupportBudget, Universe};
use galelemke::Error;
use num::ToPrimitive;
use rayon::prelude::*;

const EXIT_PARSE: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_IO: u8 = 1;
const EXIT_NOT_EQUILIBRIUM: u8 = 1;

#[derive(Parser)]
#[command(name = "galelemke", version, about = "Exact Lemke-Howson, support enumeration and hard game generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a game file.
    Gen(GenArgs),
    /// Solve a game and print an equilibrium.
    Solve(SolveArgs),
    /// Check whether a profile is an equilibrium.
    Verify(VerifyArgs),
    /// Measure path lengths, guess counts or equilibrium counts.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Morris,
    TripleMorris,
    Permutation,
    Random,
}

#[derive(Args)]
struct GenArgs {
    family: Family,
    /// Dimension (even for Morris families, rows for random games).
    #[arg(long)]
    m: Option<usize>,
    /// Size of a permutation game, or columns of a random game.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Explicit permutation for the permutation family, e.g. `2,3,1`.
    #[arg(long, value_delimiter = ',')]
    pi: Option<Vec<usize>>,
    /// Smallest random payoff.
    #[arg(long, default_value_t = 0)]
    min: i64,
    /// Largest random payoff.
    #[arg(long, default_value_t = 99)]
    max: i64,
    /// Shuffle the columns of a Morris game with this seed.
    #[arg(long)]
    permute_columns: Option<u64>,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Lh,
    Support,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Lh)]
    method: Method,
    #[arg(long, default_value_t = 1)]
    missing_label: usize,
    /// Randomized support search with this seed; without it, all equilibria are enumerated.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "all-m-subsets")]
    universe: Universe,
    /// Write the LH path as CSV.
    #[arg(long)]
    path_csv: Option<PathBuf>,
    /// Pivot limit; overrides GALELEMKE_STEP_CAP.
    #[arg(long)]
    step_cap: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    /// `x1 ... xm ; y1 ... yn`; read from the first line of standard input when omitted.
    #[arg(long)]
    profile: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchFamily {
    Morris,
    TripleMorris,
    Permutation,
    Support,
    Random,
}

#[derive(Args)]
struct BenchArgs {
    family: BenchFamily,
    /// Even dimensions, `a..b` inclusive or a single value.
    #[arg(long, default_value = "4..16")]
    m: String,
    /// Permutation size, or columns of random games.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "1")]
    labels: LabelSelection,
    /// Seeds `a..b` (exclusive end) for support and random benchmarks.
    #[arg(long, default_value = "0..1000")]
    seeds: String,
    #[arg(long, default_value = "all-m-subsets")]
    universe: Universe,
    /// Count over all n! permutations.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long)]
    step_cap: Option<u64>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// CSV file to append to; standard output when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Parse { .. }) | CliError::Usage(_) => EXIT_PARSE,
            CliError::Core(Error::BudgetExceeded(_)) => EXIT_BUDGET,
            CliError::Core(_) => EXIT_SOLVER,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) | CliError::Usage(e) => f.write_str(e),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn io_err(what: &str, path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{what} {}: {e}", path.display()))
}

fn step_cap(flag: Option<u64>) -> CliResult<Option<u64>> {
    if let Some(cap) = flag {
        return Ok(Some(cap));
    }
    match std::env::var("GALELEMKE_STEP_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("GALELEMKE_STEP_CAP must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(Some(DEFAULT_STEP_CAP)),
    }
}

fn read_game(path: &Path) -> CliResult<BimatrixGame> {
    let text = fs::read_to_string(path).map_err(|e| io_err("reading", path, e))?;
    Ok(parse_any(&text)?)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| io_err("writing", p, e)),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn require(v: Option<usize>, flag: &str) -> CliResult<usize> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this family")))
}

fn permute_columns(u: &UnitVectorGame, seed: u64) -> CliResult<UnitVectorGame> {
    let pi = random_permutation(u.n(), seed)?;
    let order: Vec<usize> = pi.as_slice().iter().map(|j| j - 1).collect();
    let ell = order.iter().map(|&j| u.ell()[j]).collect();
    let rows = (0..u.m()).map(|i| order.iter().map(|&j| u.b()[(i, j)].clone()).collect()).collect();
    Ok(UnitVectorGame::new(u.m(), ell, Matrix::from_rows(rows)?)?)
}

fn cmd_gen(args: &GenArgs) -> CliResult<()> {
    let text = match args.family {
        Family::Morris | Family::TripleMorris => {
            let variant = if matches!(args.family, Family::Morris) { MorrisVariant::Single } else { MorrisVariant::Triple };
            let spec = MorrisSpec { m: require(args.m, "m")?, variant };
            let mut game = spec.game()?;
            if let Some(seed) = args.permute_columns {
                game = permute_columns(&game, seed)?;
            }
            write_uvg(&game)
        }
        Family::Permutation => {
            let spec = match &args.pi {
                Some(pi) => PermutationGameSpec::new(pi.clone())?,
                None => random_permutation(require(args.n, "n")?, args.seed)?,
            };
            write_bgame(&permutation_game(&spec))
        }
        Family::Random => {
            if args.min > args.max {
                return Err(CliError::Usage("--min exceeds --max".into()));
            }
            let options = RandomGameOptions {
                payoffs: args.min..=args.max,
                ..RandomGameOptions::default()
            };
            write_bgame(&random_game(require(args.m, "m")?, require(args.n, "n")?, args.seed, &options)?)
        }
    };
    emit(args.out.as_deref(), &text)
}

fn cmd_solve(args: &SolveArgs) -> CliResult<()> {
    let game = read_game(&args.file)?;
    let mut out = String::new();
    match (args.method, args.seed) {
        (Method::Lh, _) => {
            let options = LhOptions {
                step_cap: step_cap(args.step_cap)?,
                ..LhOptions::default()
            };
            let result = lh_solve_with(&game, args.missing_label, &options)?;
            out.push_str(&format!("{}\n", result.equilibrium));
            out.push_str(&format!("missing_label: {}\npath_length: {}\n", args.missing_label, result.path_length));
            if let Some(p) = &args.path_csv {
                let file = fs::File::create(p).map_err(|e| io_err("creating", p, e))?;
                write_path_csv(&result.path, file).map_err(|e| CliError::Io(e.to_string()))?;
            }
        }
        (Method::Support, Some(seed)) => {
            let (p, stats) = randomized_support_search(&game, args.universe, seed)?;
            out.push_str(&format!("{p}\nguesses: {}\nuniverse: {}\n", stats.guesses, stats.universe));
        }
        (Method::Support, None) => {
            let all = enumerate_equilibria(&game, &SupportBudget::default())?;
            if all.is_empty() {
                return Err(Error::NotFound("support enumeration found no equilibrium".into()).into());
            }
            for p in &all {
                out.push_str(&format!("{p}\n"));
            }
            out.push_str(&format!("equilibria: {}\n", all.len()));
        }
    }
    emit(None, &out)
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<bool> {
    let game = read_game(&args.file)?;
    let line = match &args.profile {
        Some(p) => p.clone(),
        None => {
            let mut line = String::new();
            io::stdin().lock().read_line(&mut line).map_err(|e| CliError::Io(e.to_string()))?;
            line
        }
    };
    let profile = parse_profile(line.trim(), game.m(), game.n())?;
    let (xl, yl) = labels_of_profile(&game, &profile)?;
    let missing = missing_labels(&game, &profile)?;
    let ok = missing.is_empty();
    let mut out = format!("equilibrium: {ok}\nlabels: {xl} | {yl}\n");
    if !ok {
        let list: Vec<String> = missing.iter().map(ToString::to_string).collect();
        out.push_str(&format!("missing: {}\n", list.join(",")));
    }
    emit(None, &out)?;
    Ok(ok)
}

fn parse_range(text: &str, inclusive: bool) -> CliResult<(u64, u64)> {
    let bad = || CliError::Usage(format!("invalid range {text:?}"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
        }
        None => {
            let v: u64 = text.trim().parse().map_err(|_| bad())?;
            (v, if inclusive { v } else { v + 1 })
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn even_range(text: &str) -> CliResult<Vec<usize>> {
    let (lo, hi) = parse_range(text, true)?;
    let ms: Vec<usize> = (lo..=hi).filter(|m| m % 2 == 0 && *m >= 2).map(|m| m as usize).collect();
    if ms.is_empty() {
        return Err(CliError::Usage(format!("no even dimension in {text:?}")));
    }
    Ok(ms)
}

fn pool(jobs: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))
}

struct Sink {
    writer: BenchWriter<Box<dyn Write>>,
    to_stdout: bool,
}

impl Sink {
    fn open(out: Option<&Path>) -> CliResult<Self> {
        let (writer, header, to_stdout): (Box<dyn Write>, bool, bool) = match out {
            Some(p) => {
                let fresh = fs::metadata(p).map(|m| m.len() == 0).unwrap_or(true);
                let file = OpenOptions::new().create(true).append(true).open(p).map_err(|e| io_err("opening", p, e))?;
                (Box::new(file), fresh, false)
            }
            None => (Box::new(io::stdout()), true, true),
        };
        Ok(Self {
            writer: BenchWriter::new(writer, header),
            to_stdout,
        })
    }

    fn write_all(&mut self, records: &[BenchRecord]) -> CliResult<()> {
        for r in records {
            self.writer.write(r)?;
        }
        Ok(())
    }

    fn summary(&self, line: &str) {
        if self.to_stdout {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    }
}

fn cmd_bench(args: &BenchArgs) -> CliResult<()> {
    let cap = step_cap(args.step_cap)?;
    let threads = pool(args.jobs)?;
    match args.family {
        BenchFamily::Morris | BenchFamily::TripleMorris => {
            let variant = if matches!(args.family, BenchFamily::Morris) { MorrisVariant::Single } else { MorrisVariant::Triple };
            let jobs = morris_jobs(variant, even_range(&args.m)?, args.labels);
            let mut records = threads.install(|| {
                jobs.par_iter()
                    .map(|(spec, k)| morris_path_record(spec, *k, cap))
                    .collect::<Result<Vec<_>, _>>()
            })?;
            sort_records(&mut records);
            let mut sink = Sink::open(args.out.as_deref())?;
            sink.write_all(&records)?;
            for r in records.iter().filter(|r| r.truncated) {
                sink.summary(&format!("{} label {}: truncated at {} pivots", r.instance, r.missing_label.unwrap_or(0), r.path_length.unwrap_or(0)));
            }
            for (m, ratio) in growth_ratios(&records, 1) {
                sink.summary(&format!("r_{m} = {ratio:.4}"));
            }
        }
        BenchFamily::Permutation => {
            let n = require(args.n, "n")?;
            if !args.exhaustive {
                return Err(CliError::Usage("the permutation benchmark needs --exhaustive".into()));
            }
            let s = permutation_exhaustive(n)?;
            println!("n,permutations,total_equilibria,mean,single_cycle_fraction");
            println!("{},{},{},{},{}", s.n, s.permutations, s.total_equilibria, format_rational(&s.mean()), format_rational(&s.single_cycle_fraction()));
        }
        BenchFamily::Support => {
            let (lo, hi) = parse_range(&args.seeds, false)?;
            let mut summaries = Vec::new();
            let mut sink = Sink::open(args.out.as_deref())?;
            for m in even_range(&args.m)? {
                let game = unit_vector_game(&MorrisSpec { m, variant: MorrisVariant::Triple }.game()?);
                let instance = format!("triple-morris-{m}");
                let records = threads.install(|| {
                    (lo..hi)
                        .into_par_iter()
                        .map(|seed| support_record(&instance, &game, args.universe, seed))
                        .collect::<Result<Vec<_>, _>>()
                })?;
                sink.write_all(&records)?;
                let guesses: Vec<u64> = records.iter().filter_map(|r| r.guesses).collect();
                let (mean, se) = mean_and_standard_error(&guesses);
                let mut line = format!("{instance} {}: mean guesses {mean:.4} (standard error {se:.4}, {} seeds)", args.universe.name(), guesses.len());
                if let Ok(e) = count_equilibrium_supports(&game, args.universe, 1 << 20) {
                    let u = galelemke::support::SupportUniverse::new(&game, args.universe)?.len();
                    let expected = expected_guesses(u, e)?;
                    line.push_str(&format!("; |U| = {u}, |E| = {e}, expected {} = {:.4}", format_rational(&expected), expected.to_f64().unwrap_or(f64::NAN)));
                }
                summaries.push(line);
            }
            for line in summaries {
                sink.summary(&line);
            }
        }
        BenchFamily::Random => {
            let (lo, hi) = parse_range(&args.seeds, false)?;
            let mut sink = Sink::open(args.out.as_deref())?;
            for m in parse_range(&args.m, true).map(|(a, b)| a..=b)? {
                let m = m as usize;
                let n = args.n.unwrap_or(m);
                let jobs: Vec<(u64, usize)> = (lo..hi).flat_map(|s| (1..=m + n).map(move |k| (s, k))).collect();
                let mut records = threads.install(|| {
                    jobs.par_iter()
                        .map(|&(seed, k)| {
                            let game = random_game(m, n, seed, &RandomGameOptions::default())?;
                            let mut r = lh_record(&format!("random-{m}x{n}-{seed}"), &game, k, cap)?;
                            r.seed = Some(seed);
                            Ok(r)
                        })
                        .collect::<Result<Vec<_>, Error>>()
                })?;
                sort_records(&mut records);
                sink.write_all(&records)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a).map(|_| true),
        Command::Solve(a) => cmd_solve(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_NOT_EQUILIBRIUM),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
