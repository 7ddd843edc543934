//! Synthetic bivariate current-status data and timing harness.
//!
//! The generator draws, for each observation, two latent event times and two
//! inspection times, all standard exponential and independent. Each
//! coordinate is only known to lie before or after its inspection time, so
//! every observation becomes one of four quadrant boxes anchored at the
//! inspection point: `(0, u]` or `(u, inf)` on the first axis crossed with
//! `(0, v]` or `(v, inf)` on the second.
//!
//! The benchmark times canonicalization plus the region sweep — the part
//! whose growth is under study — over a grid of dataset sizes with several
//! replicates each, and fits the empirical growth exponent as the slope of
//! log mean time against log size over the largest sizes.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use thiserror::Error;

use crate::geometry::{canonicalize, AxisInterval, GeometryError, ObservationBox};
use crate::oracle::{oracle_reduce_with_max_n, OracleError};
use crate::sweep2d::{reduce2d_regions, SweepError};
use crate::sweepnd::reduce_nd_regions;

/// Default per-run time budget; once a single run exceeds it, all remaining
/// runs are skipped.
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(1000);

#[derive(Debug, Error, PartialEq)]
pub enum BenchError {
    #[error(transparent)]
    Input(#[from] GeometryError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("no dataset sizes given")]
    NoSizes,
    #[error("replicates must be at least 1")]
    NoReplicates,
    #[error("slope fit needs the largest {need} sizes, the report has {have}")]
    InsufficientSizes { have: usize, need: usize },
    #[error("slope fit needs at least 2 sizes, got k_last = {k_last}")]
    KLastTooSmall { k_last: usize },
    #[error("mean time at n = {n} is not positive, cannot take its log")]
    NonpositiveMean { n: usize },
}

/// Builds the observation box of one current-status observation: latent
/// event times `(x, y)` inspected at `(u, v)`.
pub fn quadrant_box(x: f64, y: f64, u: f64, v: f64) -> ObservationBox<f64> {
    let first = if x <= u {
        AxisInterval::open_closed(0.0, u)
    } else {
        AxisInterval::unbounded_above(u)
    };
    let second = if y <= v {
        AxisInterval::open_closed(0.0, v)
    } else {
        AxisInterval::unbounded_above(v)
    };
    ObservationBox::new(vec![first, second]).expect("positive inspection times form valid boxes")
}

/// Draws `n` current-status observations. Per observation the draw order is
/// fixed — event times `x`, `y`, then inspection times `u`, `v`, all standard
/// exponential — so a seed pins the dataset exactly.
pub fn gen_current_status(n: usize, seed: u64) -> Vec<ObservationBox<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // An exactly-zero draw would make a degenerate inspection interval;
    // redraw instead (the event has probability zero anyway).
    let positive = |rng: &mut ChaCha8Rng| loop {
        let t: f64 = rng.sample(Exp1);
        if t > 0.0 {
            return t;
        }
    };
    (0..n)
        .map(|_| {
            let x = positive(&mut rng);
            let y = positive(&mut rng);
            let u = positive(&mut rng);
            let v = positive(&mut rng);
            quadrant_box(x, y, u, v)
        })
        .collect()
}

/// Splitmix64 step, the usual seed spreader.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Derives the RNG seed of one benchmark run from the base seed, dataset
/// size, and replicate number, so every run is independently reproducible.
pub fn run_seed(base: u64, n: usize, replicate: usize) -> u64 {
    splitmix64(base ^ splitmix64(n as u64 ^ splitmix64(replicate as u64)))
}

/// Which reducer a benchmark exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// Two-dimensional column sweep.
    Sweep2d,
    /// General slice sweep, run on the same two-dimensional data.
    SweepNd,
    /// Exhaustive grid reference; only sensible at small sizes.
    Oracle,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub replicates: usize,
    pub base_seed: u64,
    pub algorithm: Algorithm,
    /// Per-run budget; the first run to exceed it skips everything after.
    pub budget: Duration,
}

impl BenchConfig {
    pub fn new(sizes: Vec<usize>, replicates: usize, base_seed: u64, algorithm: Algorithm) -> Self {
        BenchConfig { sizes, replicates, base_seed, algorithm, budget: DEFAULT_BUDGET }
    }
}

/// One timed run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimingRecord {
    pub n: usize,
    pub replicate: usize,
    pub seed: u64,
    pub elapsed: Duration,
    /// Number of maximal intersections the run found.
    pub regions: usize,
}

/// Why a run was skipped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkipReason {
    /// The run at size `n`, replicate `replicate` exceeded the budget.
    BudgetExceeded { n: usize, replicate: usize },
}

impl std::fmt::Display for SkipReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SkipReason::BudgetExceeded { n, replicate } => {
                write!(f, "budget exceeded by size {n} replicate {replicate}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkippedRun {
    pub n: usize,
    pub replicate: usize,
    pub reason: SkipReason,
}

/// All timings and skips of one benchmark invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub records: Vec<TimingRecord>,
    pub skipped: Vec<SkippedRun>,
}

/// Mean and spread of the timings at one size.
#[derive(Clone, Debug, PartialEq)]
pub struct SizeSummary {
    pub n: usize,
    pub replicates: usize,
    pub mean_secs: f64,
    /// Sample standard deviation; zero with a single replicate.
    pub sd_secs: f64,
    pub mean_regions: f64,
}

/// Runs the configured benchmark sequentially. Generation is untimed; each
/// timed region covers canonicalization plus the sweep, and the wall clock is
/// monotonic. A run that exceeds the budget is still recorded, but every
/// remaining run — later replicates and larger sizes alike — is skipped.
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchReport, BenchError> {
    if config.sizes.is_empty() {
        return Err(BenchError::NoSizes);
    }
    if config.replicates == 0 {
        return Err(BenchError::NoReplicates);
    }
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    let mut tripped: Option<SkipReason> = None;

    for &n in &config.sizes {
        for replicate in 0..config.replicates {
            if let Some(reason) = tripped {
                skipped.push(SkippedRun { n, replicate, reason });
                continue;
            }
            let seed = run_seed(config.base_seed, n, replicate);
            let boxes = gen_current_status(n, seed);

            let start = Instant::now();
            let (rects, _map) = canonicalize(&boxes)?;
            let regions = match config.algorithm {
                Algorithm::Sweep2d => reduce2d_regions(&rects)?.regions.len(),
                Algorithm::SweepNd => reduce_nd_regions(&rects)?.regions.len(),
                // The caller chose the oracle deliberately, so lift its usual
                // size refusal.
                Algorithm::Oracle => oracle_reduce_with_max_n(&rects, 2, n)?.len(),
            };
            let elapsed = start.elapsed();

            records.push(TimingRecord { n, replicate, seed, elapsed, regions });
            if elapsed > config.budget {
                tripped = Some(SkipReason::BudgetExceeded { n, replicate });
            }
        }
    }
    Ok(BenchReport { records, skipped })
}

/// Per-size means in ascending size order.
pub fn summarize(report: &BenchReport) -> Vec<SizeSummary> {
    let mut by_n: std::collections::BTreeMap<usize, Vec<&TimingRecord>> =
        std::collections::BTreeMap::new();
    for r in &report.records {
        by_n.entry(r.n).or_default().push(r);
    }
    by_n.into_iter()
        .map(|(n, rs)| {
            let count = rs.len();
            let secs: Vec<f64> = rs.iter().map(|r| r.elapsed.as_secs_f64()).collect();
            let mean = secs.iter().sum::<f64>() / count as f64;
            let var = if count > 1 {
                secs.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (count - 1) as f64
            } else {
                0.0
            };
            let mean_regions =
                rs.iter().map(|r| r.regions as f64).sum::<f64>() / count as f64;
            SizeSummary { n, replicates: count, mean_secs: mean, sd_secs: var.sqrt(), mean_regions }
        })
        .collect()
}

/// Ordinary least-squares slope of `ln(mean seconds)` against `ln(n)` over
/// the `k_last` largest sizes in the report: the empirical growth exponent.
pub fn fit_loglog_slope(report: &BenchReport, k_last: usize) -> Result<f64, BenchError> {
    if k_last < 2 {
        return Err(BenchError::KLastTooSmall { k_last });
    }
    let summaries = summarize(report);
    if summaries.len() < k_last {
        return Err(BenchError::InsufficientSizes { have: summaries.len(), need: k_last });
    }
    let window = &summaries[summaries.len() - k_last..];
    let mut points = Vec::with_capacity(k_last);
    for s in window {
        if s.mean_secs <= 0.0 {
            return Err(BenchError::NonpositiveMean { n: s.n });
        }
        points.push(((s.n as f64).ln(), s.mean_secs.ln()));
    }
    let xbar = points.iter().map(|p| p.0).sum::<f64>() / k_last as f64;
    let ybar = points.iter().map(|p| p.1).sum::<f64>() / k_last as f64;
    let sxy: f64 = points.iter().map(|p| (p.0 - xbar) * (p.1 - ybar)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - xbar) * (p.0 - xbar)).sum();
    Ok(sxy / sxx)
}

impl BenchReport {
    /// One CSV row per timed run.
    pub fn records_csv(&self) -> String {
        let mut out = String::from("n,replicate,seed,elapsed_secs,regions\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.n,
                r.replicate,
                r.seed,
                r.elapsed.as_secs_f64(),
                r.regions
            ));
        }
        out
    }

    /// One CSV row per size.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("n,replicates,mean_secs,sd_secs,mean_regions\n");
        for s in summarize(self) {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                s.n, s.replicates, s.mean_secs, s.sd_secs, s.mean_regions
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ExtReal;

    fn bounds(b: &ObservationBox<f64>, axis: usize) -> (ExtReal<f64>, ExtReal<f64>) {
        (b.axis(axis).lower, b.axis(axis).upper)
    }

    #[test]
    fn quadrant_box_picks_the_observed_side_of_each_inspection() {
        // Event before the first inspection, after the second.
        let b = quadrant_box(0.2, 0.9, 0.5, 0.3);
        assert_eq!(bounds(&b, 0), (ExtReal::Finite(0.0), ExtReal::Finite(0.5)));
        assert!(!b.axis(0).lower_closed && b.axis(0).upper_closed);
        assert_eq!(bounds(&b, 1), (ExtReal::Finite(0.3), ExtReal::PosInf));
        assert!(!b.axis(1).lower_closed && !b.axis(1).upper_closed);

        // Event after both inspections.
        let b = quadrant_box(0.7, 0.9, 0.5, 0.3);
        assert_eq!(bounds(&b, 0), (ExtReal::Finite(0.5), ExtReal::PosInf));
        assert_eq!(bounds(&b, 1), (ExtReal::Finite(0.3), ExtReal::PosInf));

        // Event before both inspections.
        let b = quadrant_box(0.1, 0.1, 0.5, 0.3);
        assert_eq!(bounds(&b, 0), (ExtReal::Finite(0.0), ExtReal::Finite(0.5)));
        assert_eq!(bounds(&b, 1), (ExtReal::Finite(0.0), ExtReal::Finite(0.3)));

        // Ties observe the event: x == u lands in (0, u].
        let b = quadrant_box(0.5, 0.4, 0.5, 0.3);
        assert_eq!(bounds(&b, 0), (ExtReal::Finite(0.0), ExtReal::Finite(0.5)));
        assert_eq!(bounds(&b, 1), (ExtReal::Finite(0.3), ExtReal::PosInf));
    }

    #[test]
    fn generation_is_seed_deterministic() {
        let a = gen_current_status(64, 7);
        let b = gen_current_status(64, 7);
        assert_eq!(a, b);
        let c = gen_current_status(64, 8);
        assert_ne!(a, c);
    }

    #[test]
    fn run_seeds_separate_sizes_and_replicates() {
        let mut seeds = std::collections::HashSet::new();
        for n in [10usize, 20, 30] {
            for rep in 0..5 {
                assert!(seeds.insert(run_seed(42, n, rep)));
            }
        }
    }

    #[test]
    fn benchmark_reruns_reproduce_everything_but_the_clock() {
        let config = BenchConfig::new(vec![8, 16], 2, 99, Algorithm::Sweep2d);
        let a = run_benchmark(&config).unwrap();
        let b = run_benchmark(&config).unwrap();
        assert_eq!(a.records.len(), 4);
        assert!(a.skipped.is_empty());
        let strip =
            |r: &BenchReport| -> Vec<(usize, usize, u64, usize)> {
                r.records.iter().map(|t| (t.n, t.replicate, t.seed, t.regions)).collect()
            };
        assert_eq!(strip(&a), strip(&b));
    }

    #[test]
    fn all_three_algorithms_count_the_same_regions() {
        for algorithm in [Algorithm::Sweep2d, Algorithm::SweepNd, Algorithm::Oracle] {
            let config = BenchConfig::new(vec![12], 3, 5, algorithm);
            let report = run_benchmark(&config).unwrap();
            let counts: Vec<usize> = report.records.iter().map(|r| r.regions).collect();
            // Same seeds, same data, same regions, whatever the reducer.
            let base = run_benchmark(&BenchConfig::new(vec![12], 3, 5, Algorithm::Sweep2d))
                .unwrap();
            let expect: Vec<usize> = base.records.iter().map(|r| r.regions).collect();
            assert_eq!(counts, expect);
        }
    }

    #[test]
    fn exhausted_budget_skips_the_rest() {
        let mut config = BenchConfig::new(vec![4, 8], 2, 3, Algorithm::Sweep2d);
        config.budget = Duration::ZERO;
        let report = run_benchmark(&config).unwrap();
        assert_eq!(report.records.len(), 1);
        let reason = SkipReason::BudgetExceeded { n: 4, replicate: 0 };
        assert_eq!(
            report.skipped,
            vec![
                SkippedRun { n: 4, replicate: 1, reason },
                SkippedRun { n: 8, replicate: 0, reason },
                SkippedRun { n: 8, replicate: 1, reason },
            ]
        );
    }

    #[test]
    fn slope_of_exact_quadratic_timings_is_two() {
        let records = [10usize, 20, 40, 80]
            .iter()
            .flat_map(|&n| {
                (0..3).map(move |replicate| TimingRecord {
                    n,
                    replicate,
                    seed: 0,
                    elapsed: Duration::from_secs_f64((n as f64 / 1000.0).powi(2)),
                    regions: n,
                })
            })
            .collect();
        let report = BenchReport { records, skipped: vec![] };
        let slope = fit_loglog_slope(&report, 4).unwrap();
        assert!((slope - 2.0).abs() < 1e-9);
        assert_eq!(
            fit_loglog_slope(&report, 5).unwrap_err(),
            BenchError::InsufficientSizes { have: 4, need: 5 }
        );
        assert_eq!(
            fit_loglog_slope(&report, 1).unwrap_err(),
            BenchError::KLastTooSmall { k_last: 1 }
        );
    }

    #[test]
    fn summaries_average_per_size() {
        let records = vec![
            TimingRecord { n: 5, replicate: 0, seed: 1, elapsed: Duration::from_secs(1), regions: 2 },
            TimingRecord { n: 5, replicate: 1, seed: 2, elapsed: Duration::from_secs(3), regions: 4 },
        ];
        let report = BenchReport { records, skipped: vec![] };
        let summary = summarize(&report);
        assert_eq!(summary.len(), 1);
        assert_eq!(summary[0].n, 5);
        assert_eq!(summary[0].replicates, 2);
        assert!((summary[0].mean_secs - 2.0).abs() < 1e-12);
        assert!((summary[0].sd_secs - 2.0f64.sqrt()).abs() < 1e-12);
        assert!((summary[0].mean_regions - 3.0).abs() < 1e-12);

        let csv = report.records_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("n,replicate,seed,elapsed_secs,regions\n"));
    }
}
