//! Command-line interface: simulate series, test pairs, run experiment
//! grids, cluster corpora, and encode protein sequences.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};

use ctsboot::bootstrap::{run_test, Method, TestConfig};
use ctsboot::cluster::{classical_mds, distance_matrix, pvalue_clustering, pvalue_matrix};
use ctsboot::distances::DistanceKind;
use ctsboot::experiments::{run_grid, scenario_model, FULL_REPLICATES, FULL_RUNS};
use ctsboot::io;
use ctsboot::models::{self, ModelFamily, ModelSpec};
use ctsboot::rng::RandomStream;
use ctsboot::{CategoricalSeries, Error, Result};

#[derive(Parser)]
#[command(
    name = "ctsboot",
    version,
    about = "Dissimilarities, bootstrap two-sample tests, and clustering \
             for categorical time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate series from a scenario or a model file.
    Simulate(SimulateArgs),
    /// Test whether two series share a generating process.
    Test(TestArgs),
    /// Run a rejection-rate experiment grid.
    Bench(BenchArgs),
    /// Cluster a corpus by pairwise tests and embed it for plotting.
    Cluster(ClusterArgs),
    /// Encode FASTA protein sequences as categorical series.
    Encode(EncodeArgs),
}

/// Flags shared by the pairwise test and the clustering pipeline.
#[derive(Args)]
struct TestFlags {
    /// Dissimilarity measure: cc, b, or mle.
    #[arg(long, default_value = "cc")]
    metric: String,

    /// Resampling scheme: ba, mbb, or sb.
    #[arg(long, default_value = "mbb")]
    method: String,

    /// Bootstrap replicates.
    #[arg(short = 'B', long = "replicates", visible_alias = "B", default_value_t = 250)]
    replicates: usize,

    /// Significance level.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,

    /// Feature lags, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    lags: Vec<usize>,

    /// Block length for mbb (default: cube-root-of-length rule).
    #[arg(long)]
    block_size: Option<usize>,

    /// Restart probability for sb (default: length^(-1/3)).
    #[arg(long)]
    cont_prob: Option<f64>,

    /// Model family for the mle metric and the ba scheme: mc, hmm, or
    /// ndarma.
    #[arg(long, default_value = "mc")]
    model: String,

    /// Hidden-state count for --model hmm.
    #[arg(long, default_value_t = 2)]
    states: usize,

    /// Autoregressive order for --model ndarma.
    #[arg(long, default_value_t = 1)]
    order: usize,

    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl TestFlags {
    fn family(&self) -> Result<ModelFamily> {
        match self.model.as_str() {
            "mc" | "markov" => Ok(ModelFamily::MarkovChain),
            "hmm" | "hidden-markov" => Ok(ModelFamily::HiddenMarkov { states: self.states }),
            "ndarma" => Ok(ModelFamily::Ndarma { ar: self.order }),
            other => Err(Error::InvalidConfig(format!(
                "unknown model family {other:?} (expected mc, hmm, or ndarma)"
            ))),
        }
    }

    fn to_config(&self) -> Result<TestConfig> {
        Ok(TestConfig {
            metric: DistanceKind::parse(&self.metric)?,
            method: Method::parse(&self.method)?,
            replicates: self.replicates,
            alpha: self.alpha,
            lags: self.lags.clone(),
            block_size: self.block_size,
            cont_prob: self.cont_prob,
            family: self.family()?,
        })
    }
}

#[derive(Args)]
#[command(group = ArgGroup::new("source").required(true).args(["scenario", "spec"]))]
struct SimulateArgs {
    /// Scenario number (1-5).
    #[arg(long)]
    scenario: Option<u8>,

    /// TOML model file to simulate from instead of a scenario.
    #[arg(long)]
    spec: Option<PathBuf>,

    /// Scenario offset delta (scenario source only).
    #[arg(long, conflicts_with = "spec")]
    delta: Option<f64>,

    /// Series length.
    #[arg(long, visible_alias = "T", default_value_t = 200)]
    length: usize,

    /// Number of series to write.
    #[arg(long, default_value_t = 1)]
    count: usize,

    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TestArgs {
    /// First sequence file (exactly one series).
    file1: PathBuf,

    /// Second sequence file (exactly one series).
    file2: PathBuf,

    #[command(flatten)]
    flags: TestFlags,
}

#[derive(Args)]
struct BenchArgs {
    /// TOML grid configuration (defaults when omitted).
    #[arg(long)]
    config: Option<PathBuf>,

    /// CSV output file (stdout when omitted); tuning sweeps go to a
    /// companion *_sweep.csv.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also write aligned text tables to this file.
    #[arg(long)]
    text: Option<PathBuf>,

    /// Full scale: 1000 runs with 500 replicates each.
    #[arg(long)]
    full: bool,

    /// Override the configured master seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Suppress per-cell progress on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct ClusterArgs {
    /// Sequence file with the corpus, one series per line.
    corpus: PathBuf,

    #[command(flatten)]
    flags: TestFlags,

    /// Embedding dimension (clamped to the corpus size).
    #[arg(long, default_value_t = 2)]
    dim: usize,

    /// Output prefix: writes <prefix>_pvalues.csv, <prefix>_partition.csv,
    /// and <prefix>_coords.csv (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    /// FASTA file of protein sequences.
    fasta: PathBuf,

    /// Residue-class mapping file (default: 3-class hydrophobicity).
    #[arg(long)]
    mapping: Option<PathBuf>,

    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn read_series_file(path: &Path) -> Result<Vec<CategoricalSeries>> {
    let series = io::parse_sequences(&read_text(path)?)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    if series.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{}: file contains no series",
            path.display()
        )));
    }
    Ok(series)
}

fn read_single_series(path: &Path) -> Result<CategoricalSeries> {
    let mut series = read_series_file(path)?;
    if series.len() != 1 {
        return Err(Error::InvalidInput(format!(
            "{}: expected exactly one series, found {}",
            path.display(),
            series.len()
        )));
    }
    Ok(series.pop().expect("length checked"))
}

fn write_out(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    if args.count == 0 {
        return Err(Error::InvalidConfig("count must be at least 1".into()));
    }
    let from_file: Option<ModelSpec> = match &args.spec {
        Some(path) => Some(io::ModelFile::from_toml(&read_text(path)?)?.to_spec()?),
        None => None,
    };
    let delta = args.delta.unwrap_or(0.0);
    let master = RandomStream::new(args.seed);
    let mut series = Vec::with_capacity(args.count);
    for i in 0..args.count {
        let stream = master.child(i as u64);
        let model = match (&args.scenario, &from_file) {
            (Some(id), _) => scenario_model(*id, delta, &stream.child(0))?,
            (None, Some(model)) => model.clone(),
            (None, None) => unreachable!("clap enforces the source group"),
        };
        series.push(models::simulate(&model, args.length, &stream.child(1))?);
    }
    write_out(args.out.as_deref(), &io::format_sequences(&series))
}

fn cmd_test(args: &TestArgs) -> Result<()> {
    let s1 = read_single_series(&args.file1)?;
    let s2 = read_single_series(&args.file2)?;
    let cfg = args.flags.to_config()?;
    let result = run_test(&s1, &s2, &cfg, &RandomStream::new(args.flags.seed))?;
    println!("observed: {}", result.observed);
    println!("critical: {}", result.critical);
    println!("p-value: {}", result.pvalue);
    if let Some(b) = result.block_size {
        println!("block-size: {b}");
    }
    if let Some(p) = result.cont_prob {
        println!("cont-prob: {p}");
    }
    println!("reject: {}", result.reject);
    Ok(())
}

fn sweep_sibling(path: &Path) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    let ext = path
        .extension()
        .map(|e| format!(".{}", e.to_string_lossy()))
        .unwrap_or_default();
    path.with_file_name(format!("{stem}_sweep{ext}"))
}

fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let run_config = match &args.config {
        Some(path) => io::RunConfig::from_toml(&read_text(path)?)?,
        None => io::RunConfig::default(),
    };
    let mut grid = run_config.to_grid()?;
    if args.full {
        grid.runs = FULL_RUNS;
        grid.replicates = FULL_REPLICATES;
    }
    if let Some(seed) = args.seed {
        grid.seed = seed;
    }
    let quiet = args.quiet;
    let cells = run_grid(&grid, |cell| {
        if !quiet {
            let s = &cell.spec;
            eprintln!(
                "scenario {} delta {} T={} {}/{}: rate {:.3}",
                s.scenario,
                s.delta,
                s.series_len,
                s.metric.as_str(),
                s.method.as_str(),
                cell.rate
            );
        }
    })?;

    let main_csv = io::rejection_csv(&cells, grid.seed);
    let has_sweep = cells
        .iter()
        .any(|c| c.spec.block_size.is_some() || c.spec.cont_prob.is_some());
    match &args.out {
        Some(path) => {
            write_out(Some(path), &main_csv)?;
            if has_sweep {
                let sweep = sweep_sibling(path);
                write_out(Some(&sweep), &io::sweep_csv(&cells, grid.seed))?;
                if !quiet {
                    eprintln!("sweep rows written to {}", sweep.display());
                }
            }
        }
        None => {
            print!("{main_csv}");
            if has_sweep {
                println!();
                print!("{}", io::sweep_csv(&cells, grid.seed));
            }
        }
    }
    if let Some(path) = &args.text {
        write_out(Some(path), &io::text_tables(&cells))?;
    }
    Ok(())
}

fn cmd_cluster(args: &ClusterArgs) -> Result<()> {
    let corpus = read_series_file(&args.corpus)?;
    let cfg = args.flags.to_config()?;
    let master = RandomStream::new(args.flags.seed);

    let pvalues = pvalue_matrix(&corpus, &cfg, &master.child(0))?;
    let partition = pvalue_clustering(&pvalues, cfg.alpha)?;
    let distances = distance_matrix(
        &corpus,
        cfg.metric,
        &cfg.lags,
        &cfg.family,
        &master.child(1),
    )?;
    let dim = args.dim.min(corpus.len()).max(1);
    let mds = classical_mds(&distances, dim)?;
    if mds.padded {
        eprintln!("note: fewer than {dim} positive eigenvalues; trailing coordinates are 0");
    }

    let seed_line = format!("# seed: {}\n", args.flags.seed);
    let pvalues_csv = format!("{seed_line}{}", io::matrix_csv(pvalues.matrix()));
    let partition_text = format!("{seed_line}{}", io::partition_csv(&partition));
    let coords_csv = format!("{seed_line}{}", io::coords_csv(&mds.coords));
    match &args.out {
        Some(prefix) => {
            let name = |suffix: &str| {
                let mut s = prefix.as_os_str().to_os_string();
                s.push(suffix);
                PathBuf::from(s)
            };
            write_out(Some(&name("_pvalues.csv")), &pvalues_csv)?;
            write_out(Some(&name("_partition.csv")), &partition_text)?;
            write_out(Some(&name("_coords.csv")), &coords_csv)?;
            println!("clusters: {}", partition.num_clusters);
        }
        None => {
            println!("# pvalues");
            print!("{pvalues_csv}");
            println!("# partition");
            print!("{partition_text}");
            println!("# coords");
            print!("{coords_csv}");
        }
    }
    Ok(())
}

fn cmd_encode(args: &EncodeArgs) -> Result<()> {
    let classes = match &args.mapping {
        Some(path) => io::ResidueClasses::parse(&read_text(path)?)?,
        None => io::ResidueClasses::default(),
    };
    let encoded = io::encode_fasta(&read_text(&args.fasta)?, &classes)?;
    if encoded.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{}: file contains no records",
            args.fasta.display()
        )));
    }
    let mut out = format!("#alphabet: {}\n", classes.alphabet().labels().join(","));
    for (name, series) in &encoded {
        out.push_str(&format!("# {name}\n"));
        out.push_str(&series.labels().join(","));
        out.push('\n');
    }
    write_out(args.out.as_deref(), &out)
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Test(args) => cmd_test(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Cluster(args) => cmd_cluster(args),
        Command::Encode(args) => cmd_encode(args),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
