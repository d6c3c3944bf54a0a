//! `commdet`: community detection from the command line.

mod suite;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use commdet_core::experiment::{run_experiment, ExperimentSpec, Method, RunOptions, Sweep};
use commdet_core::io::{load_edge_list, load_gml, load_ground_truth, Dataset, DatasetManifest, GroundTruth};
use commdet_core::metrics::MetricKind;
use commdet_core::similarity::SimilarityMode;

#[derive(Parser)]
#[command(
    name = "commdet",
    version,
    about = "Community detection with revised medoid-shift and classical baselines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a single graph file.
    Cluster(ClusterArgs),
    /// Run every experiment listed in a TOML config.
    Suite(SuiteArgs),
    /// List manifest entries and whether their files are present.
    Datasets {
        #[arg(long, default_value = "data/datasets.toml")]
        manifest: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Edgelist,
    Gml,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricChoice {
    Modularity,
    Nmi,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum AssignmentFormat {
    /// `name label` per line.
    Text,
    Csv,
    Json,
}

#[derive(clap::Args)]
struct ClusterArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Format,
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Neighborhood size (rms).
    #[arg(long)]
    k: Option<u64>,
    /// Cluster count (spectral).
    #[arg(long)]
    num_clusters: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Louvain resolution.
    #[arg(long)]
    resolution: Option<f64>,
    /// Similarity used by rms.
    #[arg(long, value_parser = parse_similarity)]
    similarity: Option<SimilarityMode>,
    /// Girvan–Newman: stop at the first split with this many communities.
    #[arg(long)]
    target: Option<usize>,
    /// Girvan–Newman: treat every edge as length 1.
    #[arg(long)]
    ignore_weights: bool,
    /// Use edge weights (otherwise every edge counts 1).
    #[arg(long)]
    weighted: bool,
    /// Input edges are directed; both orientations are summed.
    #[arg(long)]
    directed: bool,
    /// Reference communities file, or `embedded` for GML node values.
    #[arg(long)]
    ground_truth: Option<String>,
    /// Write the per-node assignment here.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    output_format: AssignmentFormat,
    /// Defaults to `both` with ground truth, else `modularity`.
    #[arg(long, value_enum)]
    metric: Option<MetricChoice>,
}

#[derive(clap::Args)]
struct SuiteArgs {
    config: PathBuf,
    /// Overrides the config's manifest.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Overrides the config's results file.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_parser = parse_output_format)]
    output_format: Option<commdet_core::io::OutputFormat>,
    /// Leave runtime out of the results so repeated runs are byte-identical.
    #[arg(long)]
    no_runtime: bool,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: commdet_core::Error| e.to_string())
}

fn parse_similarity(s: &str) -> Result<SimilarityMode, String> {
    s.parse().map_err(|e: commdet_core::Error| e.to_string())
}

fn parse_output_format(s: &str) -> Result<commdet_core::io::OutputFormat, String> {
    s.parse().map_err(|e: commdet_core::Error| e.to_string())
}

fn cluster(args: ClusterArgs) -> Result<()> {
    let wants_nmi = matches!(args.metric, Some(MetricChoice::Nmi | MetricChoice::Both));
    if wants_nmi && args.ground_truth.is_none() {
        bail!("--metric nmi/both requires --ground-truth");
    }
    let (graph, embedded) = match args.format {
        Format::Edgelist => (load_edge_list(&args.input, args.directed, args.weighted)?, None),
        Format::Gml => load_gml(&args.input)?,
    };
    let graph = if args.weighted { graph } else { graph.unweighted() };
    let truth: Option<GroundTruth> = match args.ground_truth.as_deref() {
        None => None,
        Some("embedded") => Some(embedded.context("--ground-truth embedded: the GML file has no node values")?),
        Some(path) => Some(load_ground_truth(path)?),
    };
    let name = args
        .input
        .file_stem()
        .map_or("input".to_string(), |s| s.to_string_lossy().into_owned());
    let ds = Dataset::new(name.clone(), graph, truth.as_ref())?;

    let mut spec = ExperimentSpec::new(name, args.method);
    spec.k = args.k.map(|k| Sweep(vec![k]));
    spec.num_clusters = args.num_clusters.map(|c| Sweep(vec![c]));
    spec.seeds = args.seed.map(|s| Sweep(vec![s]));
    spec.similarity = args.similarity;
    spec.target = args.target;
    spec.ignore_weights = args.ignore_weights;
    if let Some(r) = args.resolution {
        spec.resolution = r;
    }
    let metric = args.metric.unwrap_or(if truth.is_some() {
        MetricChoice::Both
    } else {
        MetricChoice::Modularity
    });
    spec.metrics = match metric {
        MetricChoice::Modularity => vec![MetricKind::Modularity],
        MetricChoice::Nmi => vec![MetricKind::Nmi],
        MetricChoice::Both => vec![MetricKind::Modularity, MetricKind::Nmi],
    };

    let results = run_experiment(&spec, &ds, RunOptions::default())?;
    let r = &results[0];
    println!("method: {} ({})", r.method, r.params);
    println!("nodes: {}", ds.graph.node_count());
    println!("communities: {}", r.communities);
    for m in &r.metrics {
        println!("{}: {:.6}", m.kind, m.value);
    }
    if let Some(c) = r.converged {
        println!("converged: {c}");
    }
    if let Some(ms) = r.runtime_ms {
        println!("runtime_ms: {ms:.3}");
    }
    if let Some(path) = &args.output {
        let p = r.partition.as_ref().expect("point records carry their partition");
        write_assignment(path, ds.graph.node_names(), p.labels(), args.output_format)?;
    }
    Ok(())
}

fn write_assignment(path: &Path, names: &[String], labels: &[usize], format: AssignmentFormat) -> Result<()> {
    let mut out = String::new();
    match format {
        AssignmentFormat::Text => {
            for (n, l) in names.iter().zip(labels) {
                let _ = writeln!(out, "{n} {l}");
            }
        }
        AssignmentFormat::Csv => {
            out.push_str("node,community\n");
            for (n, l) in names.iter().zip(labels) {
                let _ = writeln!(out, "{n},{l}");
            }
        }
        AssignmentFormat::Json => {
            #[derive(serde::Serialize)]
            struct Row<'a> {
                node: &'a str,
                community: usize,
            }
            let rows: Vec<Row> = names
                .iter()
                .zip(labels)
                .map(|(n, &community)| Row { node: n, community })
                .collect();
            out = serde_json::to_string_pretty(&rows)? + "\n";
        }
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

fn run_suite_command(args: SuiteArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let mut config = suite::parse_config(&text, &args.config)?;
    if args.no_runtime {
        config.record_runtime = false;
    }
    if let Some(f) = args.output_format {
        config.format = f;
    }
    let manifest_path = args
        .manifest
        .or_else(|| config.manifest.clone())
        .unwrap_or_else(|| PathBuf::from("data/datasets.toml"));
    let manifest = DatasetManifest::load(&manifest_path)?;

    let outcome = suite::run_suite(&config, &manifest);
    if !outcome.results.is_empty() {
        print!("{}", suite::render_table(&outcome.results));
        if let Some(path) = args.output.or(config.output.clone()) {
            suite::write_output(&outcome.results, config.format, &path)?;
            eprintln!("wrote {}", path.display());
        }
    }
    if outcome.failures.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    eprintln!(
        "{} of {} experiment(s) failed:",
        outcome.failures.len(),
        config.experiments.len()
    );
    for (label, err) in &outcome.failures {
        eprintln!("  {label}: {err}");
    }
    Ok(ExitCode::FAILURE)
}

fn list_datasets(manifest: &Path) -> Result<()> {
    let m = DatasetManifest::load(manifest)?;
    println!("data directory: {}", m.data_dir().display());
    for e in m.entries() {
        let status = match (m.is_available(&e.name), e.sha256.is_some()) {
            (true, true) => "present",
            (true, false) => "present, unpinned",
            (false, _) => "missing",
        };
        println!(
            "{:<12} {:<8} {:<18} {}",
            e.name,
            e.format.to_string(),
            status,
            e.path.display()
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Cluster(args) => cluster(args).map(|()| ExitCode::SUCCESS),
        Command::Suite(args) => run_suite_command(args),
        Command::Datasets { manifest } => list_datasets(&manifest).map(|()| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
