use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};

use sortsearch::bench::{run_benchmark, BenchmarkConfig};
use sortsearch::binned::{smoothness_delta, BinnedIndex};
use sortsearch::generate::{gap_summary, generate, Distribution, DistributionSpec};
use sortsearch::io::{read_instance, split_subinstances, write_instance, write_report_csv, Format};
use sortsearch::stats::{l2_from_uniform, nonuniformity_report};
use sortsearch::{Algorithm, Outcome, SortedInstance};

/// Exit status for a search whose key is not in the set.
const EXIT_NOT_FOUND: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "sortsearch", version, about = "Search sorted integer sets and benchmark the searches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic sorted instance and print its gap summary
    Generate(GenerateArgs),
    /// Look up one key and print the outcome with probe counts
    Search(SearchArgs),
    /// Run the benchmark matrix and print a table (optionally a CSV)
    Bench(BenchArgs),
    /// Cut an instance into consecutive fixed-size chunks
    Split(SplitArgs),
    /// Print gap statistics and a comparison against a matched null model
    Analyze(AnalyzeArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// uniform, increasing, stepwise, paretian or gaussian
    #[arg(long)]
    dist: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// First value of the instance
    #[arg(long, default_value_t = 0)]
    start: i64,
    #[arg(long)]
    out: PathBuf,
    /// text or binary; defaults to binary for `.bin` paths, text otherwise
    #[arg(long)]
    format: Option<Format>,

    /// uniform: the constant gap [default: 10]
    #[arg(long)]
    gap: Option<u64>,
    /// increasing: first gap [default: 1]
    #[arg(long)]
    initial_gap: Option<u64>,
    /// increasing: added to the gap at every position [default: 1]
    #[arg(long)]
    growth_step: Option<u64>,
    /// stepwise: ascending gap per zone [default: 1,10,100,1000]
    #[arg(long, value_delimiter = ',')]
    zone_gaps: Option<Vec<u64>>,
    /// paretian: fraction of elements in the head [default: 0.8]
    #[arg(long)]
    split: Option<f64>,
    /// paretian: mean of the exponential base gaps [default: 100]
    #[arg(long)]
    base_gap: Option<f64>,
    /// gaussian: gap mean [default: 1000]
    #[arg(long)]
    mean: Option<f64>,
    /// gaussian: gap standard deviation [default: 100]
    #[arg(long)]
    std: Option<f64>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    key: i64,
    /// bs, is, ibs, ibsN, as or binned
    #[arg(long, default_value = "as")]
    algo: Algorithm,
    /// Threshold factor for ibs
    #[arg(long)]
    theta: Option<u32>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Flat key=value file; explicit flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    dists: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    algos: Option<Vec<Algorithm>>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Queries per element
    #[arg(long)]
    query_ratio: Option<f64>,
    /// Fraction of queries that are members
    #[arg(long)]
    hit_fraction: Option<f64>,
    /// Run repetitions one at a time (steadier timings, less memory)
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out_csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SplitArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    chunk: usize,
    /// Chunks are written to `<prefix>_01.<ext>`, `<prefix>_02.<ext>`, ...
    #[arg(long)]
    out_prefix: PathBuf,
    /// Output format; defaults to the input's
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Seed for the null model
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Search(args) => cmd_search(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Split(args) => cmd_split(args),
        Command::Analyze(args) => cmd_analyze(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn usage_error(message: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ArgumentConflict, message).exit()
}

fn load(path: &Path) -> Result<(SortedInstance, Format)> {
    let format = Format::sniff(path).with_context(|| format!("cannot open {}", path.display()))?;
    let instance = read_instance(path, format, false).with_context(|| format!("cannot read {}", path.display()))?;
    Ok((instance, format))
}

fn format_for(path: &Path, explicit: Option<Format>) -> Format {
    explicit.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some("bin") => Format::Binary,
        _ => Format::Text,
    })
}

fn distribution(args: &GenerateArgs) -> Distribution {
    let name = args.dist.to_ascii_lowercase();
    let misplaced = |flags: &[(&str, bool)]| {
        if let Some((flag, _)) = flags.iter().find(|(_, set)| *set) {
            usage_error(format!("--{flag} does not apply to --dist {name}"));
        }
    };
    let uniform = ("gap", args.gap.is_some());
    let increasing = [("initial-gap", args.initial_gap.is_some()), ("growth-step", args.growth_step.is_some())];
    let stepwise = ("zone-gaps", args.zone_gaps.is_some());
    let paretian = [("split", args.split.is_some()), ("base-gap", args.base_gap.is_some())];
    let gaussian = [("mean", args.mean.is_some()), ("std", args.std.is_some())];

    match name.as_str() {
        "uniform" => {
            misplaced(&[increasing[0], increasing[1], stepwise, paretian[0], paretian[1], gaussian[0], gaussian[1]]);
            Distribution::UniformGap {
                gap: args.gap.unwrap_or(Distribution::DEFAULT_UNIFORM_GAP),
            }
        }
        "increasing" => {
            misplaced(&[uniform, stepwise, paretian[0], paretian[1], gaussian[0], gaussian[1]]);
            Distribution::IncreasingGap {
                initial_gap: args.initial_gap.unwrap_or(1),
                growth_step: args.growth_step.unwrap_or(1),
            }
        }
        "stepwise" => {
            misplaced(&[uniform, increasing[0], increasing[1], paretian[0], paretian[1], gaussian[0], gaussian[1]]);
            Distribution::StepwiseGap {
                zone_gaps: args
                    .zone_gaps
                    .clone()
                    .unwrap_or_else(|| Distribution::DEFAULT_STEPWISE_GAPS.to_vec()),
            }
        }
        "paretian" => {
            misplaced(&[uniform, increasing[0], increasing[1], stepwise, gaussian[0], gaussian[1]]);
            Distribution::Paretian {
                split: args.split.unwrap_or(0.8),
                base_gap: args.base_gap.unwrap_or(100.0),
            }
        }
        "gaussian" => {
            misplaced(&[uniform, increasing[0], increasing[1], stepwise, paretian[0], paretian[1]]);
            Distribution::GaussianGap {
                mean: args.mean.unwrap_or(1000.0),
                std: args.std.unwrap_or(100.0),
            }
        }
        _ => usage_error(format!(
            "unknown distribution {:?} (expected uniform, increasing, stepwise, paretian or gaussian)",
            args.dist
        )),
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode> {
    if args.n == 0 {
        usage_error("--n must be at least 1");
    }
    let spec = DistributionSpec::new(distribution(&args), args.n)
        .with_start(args.start)
        .with_seed(args.seed);
    let instance = generate(&spec)?;
    let format = format_for(&args.out, args.format);
    write_instance(&instance, &args.out, format).with_context(|| format!("cannot write {}", args.out.display()))?;
    println!("n={} first={} last={}", instance.len(), instance.first(), instance.last());
    match gap_summary(&instance) {
        Ok(summary) => println!("{summary}"),
        Err(_) => println!("gaps=0"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_search(args: SearchArgs) -> Result<ExitCode> {
    let algo = match (args.algo, args.theta) {
        (algo, None) => algo,
        (Algorithm::InterpolationBinary { .. }, Some(0)) => usage_error("--theta must be at least 1"),
        (Algorithm::InterpolationBinary { .. }, Some(theta)) => Algorithm::InterpolationBinary { theta },
        (algo, Some(_)) => usage_error(format!("--theta only applies to ibs, not {algo}")),
    };
    let (instance, _) = load(&args.input)?;
    let result = match algo {
        Algorithm::Binned => BinnedIndex::new(instance)?.search(args.key),
        other => other.search(&instance, args.key),
    };
    let m = result.metrics;
    match result.outcome {
        Outcome::Found(index) => {
            println!(
                "found index={index} accesses={} iterations={} comparisons={}",
                m.accesses, m.iterations, m.comparisons
            );
            Ok(ExitCode::SUCCESS)
        }
        Outcome::Absent => {
            println!("absent accesses={} iterations={} comparisons={}", m.accesses, m.iterations, m.comparisons);
            Ok(ExitCode::from(EXIT_NOT_FOUND))
        }
    }
}

/// Parses a flat `key = value` file; `#` starts a comment.
fn read_config(path: &Path) -> Result<HashMap<String, String>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut entries = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{}:{}: expected key = value", path.display(), i + 1);
        };
        let key = key.trim().replace('-', "_");
        let key = match key.as_str() {
            "dists" => "distributions".to_string(),
            "algos" => "algorithms".to_string(),
            "reps" => "repetitions".to_string(),
            _ => key,
        };
        entries.insert(key, value.trim().to_string());
    }
    Ok(entries)
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|e| anyhow::anyhow!("{key}: {s:?}: {e}")))
        .collect()
}

fn parse_one<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| anyhow::anyhow!("{key}: {value:?}: {e}"))
}

fn bench_distribution(name: &str) -> Result<Distribution> {
    Ok(match name.to_ascii_lowercase().as_str() {
        "uniform" => Distribution::uniform(),
        "increasing" => Distribution::increasing(),
        "stepwise" => Distribution::stepwise(),
        "paretian" => Distribution::paretian(),
        "gaussian" => Distribution::gaussian(),
        other => bail!("unknown distribution {other:?} (expected uniform, increasing, stepwise, paretian or gaussian)"),
    })
}

fn bench_config(args: &BenchArgs) -> Result<BenchmarkConfig> {
    let file = match &args.config {
        Some(path) => read_config(path)?,
        None => HashMap::new(),
    };
    let known = [
        "distributions",
        "sizes",
        "algorithms",
        "repetitions",
        "seed",
        "query_ratio",
        "hit_fraction",
        "parallel",
    ];
    if let Some(key) = file.keys().find(|k| !known.contains(&k.as_str())) {
        bail!("unknown config key {key:?}");
    }
    let get = |key: &str| file.get(key).map(String::as_str);

    let dists = match &args.dists {
        Some(d) => d.clone(),
        None => get("distributions").map_or(Ok(vec![]), |v| parse_list("distributions", v))?,
    };
    let sizes = match &args.sizes {
        Some(s) => s.clone(),
        None => get("sizes").map_or(Ok(vec![]), |v| parse_list("sizes", v))?,
    };
    let algorithms = match &args.algos {
        Some(a) => a.clone(),
        None => get("algorithms").map_or(Ok(Algorithm::STANDARD.to_vec()), |v| parse_list("algorithms", v))?,
    };
    if dists.is_empty() || sizes.is_empty() {
        bail!("bench needs at least one distribution and one size (--dists, --sizes or a config file)");
    }

    let mut specs = Vec::new();
    for name in &dists {
        let kind = bench_distribution(name)?;
        specs.extend(sizes.iter().map(|&n| DistributionSpec::new(kind.clone(), n)));
    }
    let mut config = BenchmarkConfig::new(algorithms, specs);
    if let Some(v) = args.reps.map(Ok).or_else(|| get("repetitions").map(|v| parse_one("repetitions", v))) {
        config.repetitions = v?;
    }
    if let Some(v) = args.seed.map(Ok).or_else(|| get("seed").map(|v| parse_one("seed", v))) {
        config.seed = v?;
    }
    if let Some(v) = args.query_ratio.map(Ok).or_else(|| get("query_ratio").map(|v| parse_one("query_ratio", v))) {
        config.query_ratio = v?;
    }
    if let Some(v) = args.hit_fraction.map(Ok).or_else(|| get("hit_fraction").map(|v| parse_one("hit_fraction", v))) {
        config.hit_fraction = v?;
    }
    if let Some(v) = get("parallel") {
        config.parallel = parse_one("parallel", v)?;
    }
    if args.sequential {
        config.parallel = false;
    }
    Ok(config)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    let config = bench_config(&args)?;
    let report = run_benchmark(&config)?;
    print!("{report}");
    if let Some(path) = &args.out_csv {
        write_report_csv(&report, path).with_context(|| format!("cannot write {}", path.display()))?;
        eprintln!("wrote {} rows to {}", report.rows.len(), path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_split(args: SplitArgs) -> Result<ExitCode> {
    if args.chunk == 0 {
        usage_error("--chunk must be at least 1");
    }
    let (instance, input_format) = load(&args.input)?;
    let format = args.format.unwrap_or(input_format);
    let chunks = split_subinstances(&instance, args.chunk)?;
    let width = chunks.len().to_string().len().max(2);
    let prefix = args.out_prefix.to_string_lossy();
    for (i, chunk) in chunks.iter().enumerate() {
        let path = PathBuf::from(format!("{prefix}_{:0width$}.{}", i + 1, format.extension()));
        write_instance(chunk, &path, format).with_context(|| format!("cannot write {}", path.display()))?;
        println!("{}", path.display());
    }
    let dropped = instance.len() - chunks.len() * args.chunk;
    if dropped > 0 {
        eprintln!("dropped {dropped} trailing elements that do not fill a chunk");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode> {
    let (instance, _) = load(&args.input)?;
    if instance.len() < 2 {
        bail!("need at least 2 elements, got {}", instance.len());
    }
    let summary = gap_summary(&instance)?;
    let delta = smoothness_delta(&instance)?;
    let l2 = l2_from_uniform(&instance)?;
    println!("n={}", instance.len());
    println!("{summary}");
    println!("delta={} max_gap={} min_gap={}", delta.ratio(), delta.max_gap, delta.min_gap);
    println!("l2={} l2_normalized={}", l2.raw, l2.normalized);
    if instance.len() < 3 {
        eprintln!("note: null-model comparison needs at least 3 elements; skipped");
        return Ok(ExitCode::SUCCESS);
    }
    let report = nonuniformity_report(&instance, args.seed)?;
    println!(
        "null_spearman={} null_pearson={}",
        report.correlation.spearman, report.correlation.pearson
    );
    println!(
        "null_l2={} null_l2_normalized={}",
        report.l2_null.raw, report.l2_null.normalized
    );
    Ok(ExitCode::SUCCESS)
}
