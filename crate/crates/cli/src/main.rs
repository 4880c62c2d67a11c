//! `spibb`: runs the finite-MDP benchmarks, writes helicopter datasets and
//! turns result CSVs into plot tables.

mod config;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use spibb_core::benchmark::{
    emit_plot_data, read_records, run_gridworld_benchmark, run_random_mdps_benchmark, summarize,
    write_records, Algorithm, Behavior, BenchmarkConfig, BenchmarkRecord,
};
use spibb_core::envgen::DEFAULT_EPISODE_CAP;
use spibb_core::helicopter::{generate_heli_dataset, write_heli_dataset, UniformHeliPolicy};

use config::ConfigFile;

#[derive(Debug, Parser)]
#[command(name = "spibb", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gridworld benchmark with datasets collected by the baseline.
    Gridworld(RunArgs),
    /// Gridworld benchmark with datasets collected by a uniform random policy.
    GridworldRandomBehavior(RunArgs),
    /// Random-MDP benchmark over a grid of baseline qualities.
    RandomMdps(RunArgs),
    /// Samples a helicopter dataset with the uniform random policy.
    HeliDataset(HeliArgs),
    /// Summary tables, heatmap tables and a plotting script from a result CSV.
    Plot(PlotArgs),
}

const RUN_KEYS: [&str; 11] = [
    "runs",
    "seed",
    "sizes",
    "algos",
    "n-wedge",
    "kappa",
    "delta-hcpi",
    "delta-rob",
    "eta",
    "workers",
    "out",
];

#[derive(Debug, Args)]
struct RunArgs {
    /// `key = value` file with defaults for any of the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    runs: Option<u64>,
    /// Master seed; every run derives its own streams from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Dataset sizes in trajectories.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Algorithms, e.g. basic-rl,pi-b-spibb,pi-leq-b-spibb,ramdp,robust-mdp,hcpi,baseline.
    #[arg(long, value_delimiter = ',')]
    algos: Option<Vec<Algorithm>>,
    #[arg(long = "n-wedge", value_delimiter = ',')]
    n_wedge: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    kappa: Option<Vec<f64>>,
    #[arg(long = "delta-hcpi", value_delimiter = ',')]
    delta_hcpi: Option<Vec<f64>>,
    #[arg(long = "delta-rob", value_delimiter = ',')]
    delta_rob: Option<Vec<f64>>,
    /// Baseline qualities (random MDPs only).
    #[arg(long, value_delimiter = ',')]
    eta: Option<Vec<f64>>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct HeliArgs {
    #[arg(long, default_value_t = 10_000)]
    trajectories: usize,
    /// Scales both transition noise deviations.
    #[arg(long, default_value_t = 1.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_EPISODE_CAP)]
    episode_cap: usize,
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PlotArgs {
    /// Result CSV written by one of the benchmark subcommands.
    input: PathBuf,
    /// Output directory; defaults to `<input stem>_plots` next to the input.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
enum Benchmark {
    Gridworld,
    GridworldRandomBehavior,
    RandomMdps,
}

impl Benchmark {
    fn name(self) -> &'static str {
        match self {
            Benchmark::Gridworld => "gridworld",
            Benchmark::GridworldRandomBehavior => "gridworld-random-behavior",
            Benchmark::RandomMdps => "random-mdps",
        }
    }

    fn default_n_wedge(self) -> u64 {
        match self {
            Benchmark::RandomMdps => 10,
            _ => 20,
        }
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gridworld(args) => run(Benchmark::Gridworld, args),
        Command::GridworldRandomBehavior(args) => run(Benchmark::GridworldRandomBehavior, args),
        Command::RandomMdps(args) => run(Benchmark::RandomMdps, args),
        Command::HeliDataset(args) => heli_dataset(args),
        Command::Plot(args) => plot(args),
    }
}

fn benchmark_config(kind: Benchmark, args: RunArgs) -> Result<(BenchmarkConfig, PathBuf)> {
    let file = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    file.check_keys(&RUN_KEYS)?;

    let mut config = BenchmarkConfig {
        behavior: match kind {
            Benchmark::GridworldRandomBehavior => Behavior::UniformRandom,
            _ => Behavior::Baseline,
        },
        ..BenchmarkConfig::default()
    };
    config.grid.n_wedges = vec![kind.default_n_wedge()];

    if let Some(v) = file.scalar("runs", args.runs)? {
        config.runs = v;
    }
    if let Some(v) = file.scalar("seed", args.seed)? {
        config.master_seed = v;
    }
    if let Some(v) = file.list("sizes", args.sizes)? {
        config.sizes = v;
    }
    if let Some(v) = file.list("algos", args.algos)? {
        config.algorithms = v;
    }
    if let Some(v) = file.list("n-wedge", args.n_wedge)? {
        config.grid.n_wedges = v;
    }
    if let Some(v) = file.list("kappa", args.kappa)? {
        config.grid.kappas = v;
    }
    if let Some(v) = file.list("delta-hcpi", args.delta_hcpi)? {
        config.grid.delta_hcpis = v;
    }
    if let Some(v) = file.list("delta-rob", args.delta_rob)? {
        config.grid.delta_robs = v;
    }
    if let Some(v) = file.list("eta", args.eta)? {
        config.etas = v;
    }
    if let Some(v) = file.scalar("workers", args.workers)? {
        config.workers = v;
    }
    let out = file
        .scalar("out", args.out)?
        .unwrap_or_else(|| PathBuf::from("results"));
    Ok((config, out))
}

fn run(kind: Benchmark, args: RunArgs) -> Result<()> {
    let (config, out) = benchmark_config(kind, args)?;
    let records = match kind {
        Benchmark::RandomMdps => run_random_mdps_benchmark(&config)?,
        _ => run_gridworld_benchmark(&config)?,
    };
    std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let path = out.join(format!("{}.csv", kind.name()));
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    write_records(BufWriter::new(file), &records)?;
    print_summary(&records)?;
    let failed = records.iter().filter(|r| r.failed).count();
    eprintln!(
        "wrote {} records ({failed} failed) to {}",
        records.len(),
        path.display()
    );
    Ok(())
}

fn print_summary(records: &[BenchmarkRecord]) -> Result<()> {
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into());
    let mut stdout = std::io::stdout().lock();
    writeln!(
        stdout,
        "{:>5} {:>6} {:<16} {:>10} {:>9} {:>9}",
        "eta", "size", "algorithm", "hyper", "mean", "cvar_1%"
    )?;
    for row in summarize(records) {
        writeln!(
            stdout,
            "{:>5} {:>6} {:<16} {:>10} {:>9} {:>9}",
            row.eta.map(|e| e.to_string()).unwrap_or_else(|| "-".into()),
            row.dataset_size,
            row.algorithm,
            row.hyperparam_value
                .map(|v| v.to_string())
                .unwrap_or_else(|| "-".into()),
            opt(row.mean),
            opt(row.cvar_1),
        )?;
    }
    Ok(())
}

fn heli_dataset(args: HeliArgs) -> Result<()> {
    let dataset = generate_heli_dataset(
        &UniformHeliPolicy,
        args.trajectories,
        args.noise,
        args.seed,
        args.episode_cap,
    )?;
    std::fs::create_dir_all(&args.out)?;
    let path = args
        .out
        .join(format!("heli_noise{}_seed{}.txt", args.noise, args.seed));
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    let mut writer = BufWriter::new(file);
    write_heli_dataset(&mut writer, &dataset)?;
    writer.flush()?;
    eprintln!(
        "wrote {} transitions in {} trajectories to {}",
        dataset.n_transitions(),
        dataset.trajectories.len(),
        path.display()
    );
    Ok(())
}

fn plot(args: PlotArgs) -> Result<()> {
    let file =
        File::open(&args.input).with_context(|| format!("opening {}", args.input.display()))?;
    let records = read_records(std::io::BufReader::new(file))?;
    let out = args.out.unwrap_or_else(|| default_plot_dir(&args.input));
    for path in emit_plot_data(&records, &out)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn default_plot_dir(input: &Path) -> PathBuf {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "results".into());
    input.with_file_name(format!("{stem}_plots"))
}
