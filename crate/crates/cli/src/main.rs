//! Command-line driver for the box-reduction library.
//!
//! Five subcommands cover the whole workflow:
//!
//! * `reduce` — read a dataset of observation boxes, compute the maximal
//!   intersections, and print them in the original coordinates (optionally
//!   writing the region-in-box containment matrix for downstream mass
//!   estimation).
//! * `check` — recompute the same reduction with the exhaustive reference
//!   (or compare against a fixture file) and report `EQUAL` or the first
//!   disagreement.
//! * `bench` — time the reduction across dataset sizes and fit the growth
//!   exponent on a log-log scale.
//! * `gen` — produce synthetic two-dimensional current-status data.
//! * `loglik` — evaluate the log-likelihood of a candidate mass vector
//!   against a containment matrix.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 malformed file,
//! 4 invalid data, 5 reference refused (instance too large), 6 cross-check
//! mismatch.

mod format;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use boxreduce::simbench::{
    fit_loglog_slope, gen_current_status, run_benchmark, summarize, Algorithm, BenchConfig,
    BenchError,
};
use boxreduce::{
    canonicalize, clique_matrix, default_max_n, oracle_reduce_with_max_n, reduce2d, reduce_nd,
    CanonicalMaximal, MassVector, MaximalIntersection, OracleError,
};

use format::{
    parse_alpha, parse_cliques, parse_dataset, parse_fixture, read_input, region_label,
    write_dataset, write_dense_cliques, write_output, write_reduction, write_support_cliques,
    CliError, Dataset,
};

#[derive(Parser)]
#[command(
    name = "boxreduce",
    version,
    about = "Maximal intersections of axis-aligned observation boxes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliqueFormat {
    /// `cliques <m> <n>` header, then one row per region listing 1-based
    /// box indices.
    #[value(name = "support")]
    Support,
    /// Comma-separated 0/1 rows, one per region, one column per box.
    #[value(name = "dense")]
    Dense,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    /// Two-dimensional column sweep.
    #[value(name = "sweep2d")]
    Sweep2d,
    /// General slice sweep, run on the same two-dimensional data.
    #[value(name = "sweepnd")]
    Sweepnd,
    /// Exhaustive grid reference; only sensible at small sizes.
    #[value(name = "oracle")]
    Oracle,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(arg: AlgorithmArg) -> Algorithm {
        match arg {
            AlgorithmArg::Sweep2d => Algorithm::Sweep2d,
            AlgorithmArg::Sweepnd => Algorithm::SweepNd,
            AlgorithmArg::Oracle => Algorithm::Oracle,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the maximal intersections of a dataset of boxes
    Reduce {
        /// Input dataset file, or `-` for standard input
        input: String,
        /// Dataset dimension, required when the file has no `dim <d>` header
        #[arg(long)]
        dim: Option<usize>,
        /// Append the canonical integer coordinates to every output line
        #[arg(long)]
        canonical: bool,
        /// Write the region-in-box containment matrix to this file
        #[arg(long)]
        cliques: Option<PathBuf>,
        /// Format of the --cliques file
        #[arg(long, value_enum, default_value_t = CliqueFormat::Support)]
        clique_format: CliqueFormat,
        /// Output file (defaults to standard output)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cross-check the sweep against the exhaustive reference or a fixture
    Check {
        /// Input dataset file, or `-` for standard input
        input: String,
        /// Dataset dimension, required when the file has no `dim <d>` header
        #[arg(long)]
        dim: Option<usize>,
        /// Compare against this expected-output fixture instead of the
        /// exhaustive reference
        #[arg(long)]
        expect: Option<PathBuf>,
    },
    /// Time the reduction across dataset sizes and fit the growth exponent
    Bench {
        /// Dataset sizes to time, e.g. `--sizes 1000,2000,4000`
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Replicates per size
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// Base seed; every (size, replicate) derives its own stream from it
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fit the slope over this many of the largest sizes
        #[arg(long, default_value_t = 4)]
        klast: usize,
        /// Algorithm to time
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Sweep2d)]
        algorithm: AlgorithmArg,
        /// Per-run budget in seconds; the first run to exceed it skips the rest
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        /// Write one CSV row per timed run to this file
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Generate synthetic two-dimensional current-status data
    Gen {
        /// Number of boxes to generate
        #[arg(long)]
        n: usize,
        /// Seed for the deterministic generator
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (defaults to standard output)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the log-likelihood of a mass vector
    Loglik {
        /// Containment matrix file (support or dense format, auto-detected)
        #[arg(long)]
        cliques: PathBuf,
        /// Mass vector file: whitespace-separated probabilities
        #[arg(long)]
        alpha: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(error) = run(cli.command) {
        eprintln!("error: {error}");
        std::process::exit(error.exit_code());
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Reduce {
            input,
            dim,
            canonical,
            cliques,
            clique_format,
            output,
        } => cmd_reduce(&input, dim, canonical, cliques, clique_format, output),
        Command::Check { input, dim, expect } => cmd_check(&input, dim, expect),
        Command::Bench {
            sizes,
            reps,
            seed,
            klast,
            algorithm,
            budget,
            csv,
        } => cmd_bench(sizes, reps, seed, klast, algorithm, budget, csv),
        Command::Gen { n, seed, output } => cmd_gen(n, seed, output),
        Command::Loglik { cliques, alpha } => cmd_loglik(&cliques, &alpha),
    }
}

fn validation(error: impl std::fmt::Display) -> CliError {
    CliError::Validation(error.to_string())
}

fn display_name(input: &str) -> &str {
    if input == "-" {
        "<stdin>"
    } else {
        input
    }
}

fn load_dataset(input: &str, dim: Option<usize>) -> Result<Dataset, CliError> {
    let text = read_input(input)?;
    parse_dataset(&text, display_name(input), dim)
}

fn cmd_reduce(
    input: &str,
    dim: Option<usize>,
    canonical: bool,
    cliques: Option<PathBuf>,
    clique_format: CliqueFormat,
    output: Option<PathBuf>,
) -> Result<(), CliError> {
    let ds = load_dataset(input, dim)?;
    let (rects, map) = canonicalize(&ds.boxes).map_err(validation)?;
    let maximals = if ds.dim == 2 {
        reduce2d(&rects)
    } else {
        reduce_nd(&rects)
    }
    .map_err(validation)?;

    if let Some(path) = &cliques {
        let matrix = clique_matrix(&maximals, &rects).map_err(validation)?;
        let text = match clique_format {
            CliqueFormat::Support => write_support_cliques(&matrix),
            CliqueFormat::Dense => write_dense_cliques(&matrix),
        };
        write_output(Some(path.as_path()), &text)?;
    }

    let mut items = Vec::with_capacity(maximals.len());
    for maximal in maximals {
        let real = map.map_back(&maximal.intervals).map_err(validation)?;
        items.push(MaximalIntersection {
            canonical: maximal,
            real,
        });
    }
    write_output(output.as_deref(), &write_reduction(&items, ds.dim, canonical))
}

fn oracle_bound_from_env(d: usize) -> Result<usize, CliError> {
    match std::env::var("BOXREDUCE_ORACLE_MAX_N") {
        Ok(raw) => raw.trim().parse().map_err(|_| {
            CliError::Validation(format!(
                "BOXREDUCE_ORACLE_MAX_N: bad value `{raw}` (expected a box count)"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(default_max_n(d)),
        Err(error) => Err(CliError::Validation(format!(
            "BOXREDUCE_ORACLE_MAX_N: {error}"
        ))),
    }
}

fn cmd_check(input: &str, dim: Option<usize>, expect: Option<PathBuf>) -> Result<(), CliError> {
    let ds = load_dataset(input, dim)?;
    let (rects, _map) = canonicalize(&ds.boxes).map_err(validation)?;
    let candidate = reduce_nd(&rects).map_err(validation)?;

    // In two dimensions both sweeps apply; they must agree with each other
    // before either is compared to the reference.
    if ds.dim == 2 {
        let column_sweep = reduce2d(&rects).map_err(validation)?;
        let a: BTreeSet<&CanonicalMaximal> = candidate.iter().collect();
        let b: BTreeSet<&CanonicalMaximal> = column_sweep.iter().collect();
        if a != b {
            return Err(CliError::Mismatch(
                "the column sweep and the slice sweep disagree on this dataset".to_string(),
            ));
        }
    }

    let reference = match &expect {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let fixture = parse_fixture(&text, &path.display().to_string())?;
            let fixture_dim = fixture[0].intervals.len();
            if fixture_dim != ds.dim {
                return Err(CliError::Validation(format!(
                    "fixture is {fixture_dim}-dimensional but the dataset is {}-dimensional",
                    ds.dim
                )));
            }
            fixture
        }
        None => {
            let max_n = oracle_bound_from_env(ds.dim)?;
            oracle_reduce_with_max_n(&rects, ds.dim, max_n).map_err(|error| match error {
                OracleError::TooLarge { .. } => CliError::OracleRefused(format!(
                    "{error}; set BOXREDUCE_ORACLE_MAX_N to raise the bound or use --expect"
                )),
                other => CliError::Validation(other.to_string()),
            })?
        }
    };

    let swept: BTreeSet<CanonicalMaximal> = candidate.into_iter().collect();
    let expected: BTreeSet<CanonicalMaximal> = reference.into_iter().collect();
    if swept == expected {
        println!("EQUAL m={}", swept.len());
        return Ok(());
    }
    let mut message = format!(
        "outputs disagree: sweep found {} regions, reference has {}",
        swept.len(),
        expected.len()
    );
    if let Some(missing) = expected.difference(&swept).next() {
        message.push_str(&format!(
            "\n  missing from sweep output: {}",
            region_label(missing)
        ));
    }
    if let Some(extra) = swept.difference(&expected).next() {
        message.push_str(&format!(
            "\n  not in the reference:      {}",
            region_label(extra)
        ));
    }
    Err(CliError::Mismatch(message))
}

fn cmd_bench(
    sizes: Vec<usize>,
    reps: usize,
    seed: u64,
    klast: usize,
    algorithm: AlgorithmArg,
    budget: u64,
    csv: Option<PathBuf>,
) -> Result<(), CliError> {
    let mut config = BenchConfig::new(sizes, reps, seed, algorithm.into());
    config.budget = Duration::from_secs(budget);
    let report = run_benchmark(&config).map_err(validation)?;

    for summary in summarize(&report) {
        println!(
            "n={} replicates={} mean_secs={:.6e} sd_secs={:.6e} mean_regions={:.2}",
            summary.n, summary.replicates, summary.mean_secs, summary.sd_secs, summary.mean_regions
        );
    }
    for skip in &report.skipped {
        println!("skipped n={} replicate={}: {}", skip.n, skip.replicate, skip.reason);
    }
    match fit_loglog_slope(&report, klast) {
        Ok(slope) => println!("slope over the {klast} largest sizes: {slope:.4}"),
        Err(BenchError::InsufficientSizes { have, need }) => {
            println!("slope: n/a ({have} sizes with timings, need {need})");
        }
        Err(BenchError::KLastTooSmall { .. }) => {
            println!("slope: n/a (--klast must be at least 2)");
        }
        Err(error) => return Err(validation(error)),
    }
    if let Some(path) = csv {
        std::fs::write(&path, report.records_csv()).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}

fn cmd_gen(n: usize, seed: u64, output: Option<PathBuf>) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Validation(
            "--n must be positive: an empty dataset has nothing to reduce".to_string(),
        ));
    }
    let boxes = gen_current_status(n, seed);
    write_output(output.as_deref(), &write_dataset(&boxes))
}

fn cmd_loglik(cliques: &PathBuf, alpha: &PathBuf) -> Result<(), CliError> {
    let matrix_text = std::fs::read_to_string(cliques).map_err(|source| CliError::Io {
        path: cliques.display().to_string(),
        source,
    })?;
    let matrix = parse_cliques(&matrix_text, &cliques.display().to_string())?;
    let alpha_text = std::fs::read_to_string(alpha).map_err(|source| CliError::Io {
        path: alpha.display().to_string(),
        source,
    })?;
    let masses = parse_alpha(&alpha_text, &alpha.display().to_string())?;
    let mass = MassVector::new(masses).map_err(validation)?;
    let value: f64 = matrix.log_likelihood(&mass).map_err(validation)?;
    if value == f64::NEG_INFINITY {
        println!("-inf");
    } else {
        println!("{value}");
    }
    Ok(())
}
