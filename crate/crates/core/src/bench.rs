//! Benchmark protocol: for every distribution spec, generate `repetitions`
//! instances, build one workload per instance, run every algorithm on that
//! identical workload, normalize by the query count, then average across
//! repetitions.

use std::fmt;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::binned::{BinnedError, BinnedIndex};
use crate::generate::{generate, DistributionSpec, GenerateError};
use crate::instance::SortedInstance;
use crate::search::{Algorithm, ProbeMetrics};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid benchmark configuration: {0}")]
    Config(String),
    #[error("generating {spec}: {source}")]
    Generate {
        spec: String,
        #[source]
        source: GenerateError,
    },
    #[error("building binned index for {spec}: {source}")]
    Binned {
        spec: String,
        #[source]
        source: BinnedError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryWorkload {
    pub keys: Vec<i64>,
    /// How many keys are members of the instance.
    pub hit_count: usize,
}

/// Draws `max(1, floor(n * query_ratio))` keys: `ceil(hit_fraction * count)`
/// members and the rest guaranteed misses, shuffled.
///
/// Misses mostly come from gap interiors so they run full search paths; one
/// in ten lies outside the value range. An instance without any room for a
/// miss (all gaps 1 and both ends at the `i64` limits) gets members instead.
pub fn make_workload(
    instance: &SortedInstance,
    query_ratio: f64,
    hit_fraction: f64,
    seed: u64,
) -> Result<QueryWorkload, BenchError> {
    check_ratios(query_ratio, hit_fraction)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = ((instance.len() as f64 * query_ratio + 1e-9).floor() as usize).max(1);
    let hits = ((hit_fraction * count as f64 - 1e-9).ceil().max(0.0) as usize).min(count);

    let mut keys = Vec::with_capacity(count);
    for _ in 0..hits {
        keys.push(instance[rng.random_range(0..instance.len())]);
    }
    let mut hit_count = hits;
    for _ in hits..count {
        match sample_miss(instance, &mut rng) {
            Some(key) => keys.push(key),
            None => {
                keys.push(instance[rng.random_range(0..instance.len())]);
                hit_count += 1;
            }
        }
    }
    keys.shuffle(&mut rng);
    Ok(QueryWorkload { keys, hit_count })
}

fn sample_miss(instance: &SortedInstance, rng: &mut ChaCha8Rng) -> Option<i64> {
    let n = instance.len();
    let interior = |i: usize, rng: &mut ChaCha8Rng| -> Option<i64> {
        let (a, b) = (instance[i] as i128, instance[i + 1] as i128);
        let width = b - a - 1;
        (width >= 1).then(|| (a + 1 + rng.random_range(0..width as u64) as i128) as i64)
    };
    if n >= 2 && !rng.random_ratio(1, 10) {
        // rejection sampling first, then a scan for sparse interiors
        for _ in 0..64 {
            let i = rng.random_range(0..n - 1);
            if let Some(key) = interior(i, rng) {
                return Some(key);
            }
        }
        let start = rng.random_range(0..n - 1);
        for i in (start..n - 1).chain(0..start) {
            if let Some(key) = interior(i, rng) {
                return Some(key);
            }
        }
    }
    let below = instance.first().checked_sub(1 + rng.random_range(0..16));
    let above = instance.last().checked_add(1 + rng.random_range(0..16));
    match (below, above) {
        (Some(b), Some(a)) => Some(if rng.random_bool(0.5) { b } else { a }),
        (b, a) => b
            .or(a)
            .or_else(|| instance.first().checked_sub(1))
            .or_else(|| instance.last().checked_add(1)),
    }
}

fn check_ratios(query_ratio: f64, hit_fraction: f64) -> Result<(), BenchError> {
    if !(query_ratio > 0.0 && query_ratio <= 1.0) {
        return Err(BenchError::Config(format!("query ratio must lie in (0, 1], got {query_ratio}")));
    }
    if !(0.0..=1.0).contains(&hit_fraction) {
        return Err(BenchError::Config(format!("hit fraction must lie in [0, 1], got {hit_fraction}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub algorithms: Vec<Algorithm>,
    pub specs: Vec<DistributionSpec>,
    /// Instances generated per spec.
    pub repetitions: usize,
    /// Queries per element.
    pub query_ratio: f64,
    pub hit_fraction: f64,
    pub seed: u64,
    /// Run repetitions on the rayon pool. Timings are noisier in parallel.
    pub parallel: bool,
}

impl BenchmarkConfig {
    pub const DEFAULT_REPETITIONS: usize = 10;
    pub const DEFAULT_QUERY_RATIO: f64 = 1.0 / 1000.0;
    pub const DEFAULT_HIT_FRACTION: f64 = 0.8;

    pub fn new(algorithms: Vec<Algorithm>, specs: Vec<DistributionSpec>) -> Self {
        Self {
            algorithms,
            specs,
            repetitions: Self::DEFAULT_REPETITIONS,
            query_ratio: Self::DEFAULT_QUERY_RATIO,
            hit_fraction: Self::DEFAULT_HIT_FRACTION,
            seed: 0,
            parallel: true,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.algorithms.is_empty() {
            return Err(BenchError::Config("no algorithms selected".into()));
        }
        if self.repetitions == 0 {
            return Err(BenchError::Config("repetitions must be at least 1".into()));
        }
        if self.algorithms.contains(&Algorithm::InterpolationBinary { theta: 0 }) {
            return Err(BenchError::Config("theta must be at least 1".into()));
        }
        check_ratios(self.query_ratio, self.hit_fraction)
    }
}

fn mix(mut z: u64) -> u64 {
    // SplitMix64 finalizer
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn sub_seed(config: &BenchmarkConfig, spec_index: usize, repetition: usize, stream: u64) -> u64 {
    let spec_seed = config.specs[spec_index].seed;
    mix(mix(mix(mix(config.seed) ^ spec_seed) ^ spec_index as u64) ^ repetition as u64) ^ stream
}

/// The instance and workload that repetition `repetition` of spec
/// `spec_index` uses; [`run_benchmark`] produces exactly these.
pub fn prepare_run(
    config: &BenchmarkConfig,
    spec_index: usize,
    repetition: usize,
) -> Result<(SortedInstance, QueryWorkload), BenchError> {
    let base = &config.specs[spec_index];
    let spec = DistributionSpec {
        seed: sub_seed(config, spec_index, repetition, 0),
        ..base.clone()
    };
    let instance = generate(&spec).map_err(|source| BenchError::Generate {
        spec: describe(base),
        source,
    })?;
    let workload = make_workload(
        &instance,
        config.query_ratio,
        config.hit_fraction,
        mix(sub_seed(config, spec_index, repetition, 1)),
    )?;
    Ok((instance, workload))
}

fn describe(spec: &DistributionSpec) -> String {
    format!("{} n={}", spec.kind.name(), spec.n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRow {
    pub distribution: String,
    pub n: usize,
    pub algorithm: Algorithm,
    pub mean_accesses_per_query: f64,
    pub mean_iterations_per_query: f64,
    pub mean_comparisons_per_query: f64,
    pub mean_time_ns_per_query: f64,
    /// Sample standard deviation across repetitions (0 for one repetition).
    pub stddev_accesses: f64,
    pub stddev_iterations: f64,
    /// Worst single query over all repetitions.
    pub max_accesses: u64,
    pub max_iterations: u64,
    /// Queries answered "found", summed over repetitions.
    pub found: u64,
    pub queries: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchmarkReport {
    pub rows: Vec<BenchmarkRow>,
}

impl BenchmarkReport {
    pub fn row(&self, distribution: &str, n: usize, algorithm: Algorithm) -> Option<&BenchmarkRow> {
        self.rows
            .iter()
            .find(|r| r.distribution == distribution && r.n == n && r.algorithm == algorithm)
    }
}

impl fmt::Display for BenchmarkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<12} {:>10} {:<7} {:>12} {:>12} {:>14} {:>10}",
            "distribution", "n", "algo", "accesses/q", "iters/q", "time ns/q", "sd acc"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<12} {:>10} {:<7} {:>12.3} {:>12.3} {:>14.1} {:>10.3}",
                r.distribution,
                r.n,
                r.algorithm.to_string(),
                r.mean_accesses_per_query,
                r.mean_iterations_per_query,
                r.mean_time_ns_per_query,
                r.stddev_accesses
            )?;
        }
        Ok(())
    }
}

/// Totals of one algorithm over one workload.
#[derive(Debug, Clone, Copy, Default)]
struct RunTotals {
    metrics: ProbeMetrics,
    max_accesses: u64,
    max_iterations: u64,
    found: u64,
    elapsed_ns: f64,
}

fn run_workload(algorithm: Algorithm, instance: &SortedInstance, binned: Option<&BinnedIndex>, keys: &[i64]) -> RunTotals {
    let mut totals = RunTotals::default();
    let start = Instant::now();
    for &key in keys {
        let result = match (algorithm, binned) {
            (Algorithm::Binned, Some(index)) => index.search(key),
            _ => algorithm.search(instance, key),
        };
        totals.metrics += result.metrics;
        totals.max_accesses = totals.max_accesses.max(result.metrics.accesses);
        totals.max_iterations = totals.max_iterations.max(result.metrics.iterations);
        totals.found += result.outcome.is_found() as u64;
    }
    totals.elapsed_ns = start.elapsed().as_nanos() as f64;
    totals
}

fn run_repetition(config: &BenchmarkConfig, spec_index: usize, repetition: usize) -> Result<(Vec<RunTotals>, usize), BenchError> {
    let (instance, workload) = prepare_run(config, spec_index, repetition)?;
    let binned = if config.algorithms.contains(&Algorithm::Binned) {
        Some(BinnedIndex::new(instance.clone()).map_err(|source| BenchError::Binned {
            spec: describe(&config.specs[spec_index]),
            source,
        })?)
    } else {
        None
    };
    let totals = config
        .algorithms
        .iter()
        .map(|&a| run_workload(a, &instance, binned.as_ref(), &workload.keys))
        .collect();
    Ok((totals, workload.keys.len()))
}

fn mean_sd(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn run_benchmark(config: &BenchmarkConfig) -> Result<BenchmarkReport, BenchError> {
    config.validate()?;
    let mut report = BenchmarkReport::default();
    for (spec_index, spec) in config.specs.iter().enumerate() {
        let reps: Vec<usize> = (0..config.repetitions).collect();
        let runs: Vec<(Vec<RunTotals>, usize)> = if config.parallel {
            reps.par_iter()
                .map(|&r| run_repetition(config, spec_index, r))
                .collect::<Result<_, _>>()?
        } else {
            reps.iter()
                .map(|&r| run_repetition(config, spec_index, r))
                .collect::<Result<_, _>>()?
        };

        for (a, &algorithm) in config.algorithms.iter().enumerate() {
            let per_rep = |f: &dyn Fn(&RunTotals, f64) -> f64| -> Vec<f64> {
                runs.iter().map(|(t, q)| f(&t[a], *q as f64)).collect()
            };
            let (acc, sd_acc) = mean_sd(&per_rep(&|t, q| t.metrics.accesses as f64 / q));
            let (iter, sd_iter) = mean_sd(&per_rep(&|t, q| t.metrics.iterations as f64 / q));
            let (cmp, _) = mean_sd(&per_rep(&|t, q| t.metrics.comparisons as f64 / q));
            let (time, _) = mean_sd(&per_rep(&|t, q| t.elapsed_ns / q));
            report.rows.push(BenchmarkRow {
                distribution: spec.kind.name().to_string(),
                n: spec.n,
                algorithm,
                mean_accesses_per_query: acc,
                mean_iterations_per_query: iter,
                mean_comparisons_per_query: cmp,
                mean_time_ns_per_query: time,
                stddev_accesses: sd_acc,
                stddev_iterations: sd_iter,
                max_accesses: runs.iter().map(|(t, _)| t[a].max_accesses).max().unwrap_or(0),
                max_iterations: runs.iter().map(|(t, _)| t[a].max_iterations).max().unwrap_or(0),
                found: runs.iter().map(|(t, _)| t[a].found).sum(),
                queries: runs.iter().map(|(_, q)| *q as u64).sum(),
            });
        }
    }
    Ok(report)
}
