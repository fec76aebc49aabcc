//! `exc`: extrinsic means and confidence regions from data files.

mod dataset;
mod output;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use exc_core::projective::{render_region_svg, synthesize_affine_points, Viewport, DEFAULT_SYNTHETIC_SEED};
use exc_core::simulation::{run_experiment, ExperimentConfig, ExperimentReport};
use serde::Serialize;

use crate::dataset::{DatasetFile, Dims, Format, InputError, Manifold};
use crate::output::{csv_sibling, emit_json, write_atomic};
use crate::report::{analyze, Analysis, TOOL_VERSION};

#[derive(Parser)]
#[command(name = "exc", version, about = "Extrinsic means and non-asymptotic confidence regions on spheres and Grassmannians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the extrinsic mean and confidence region of a data file.
    Analyze(AnalyzeArgs),
    /// Write the synthetic planar projective-shape data set.
    Synthesize(SynthesizeArgs),
    /// Run a Monte Carlo coverage or rate experiment from a JSON config.
    Simulate(SimulateArgs),
    /// Draw the confidence region of a planar projective-shape data set as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct InputArgs {
    /// CSV (unit vectors or flattened real frames) or json_dataset file.
    input: PathBuf,
    #[arg(long, value_enum)]
    manifold: Option<Manifold>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Subspace dimension.
    #[arg(long)]
    m: Option<usize>,
    /// Dimension of the ambient vector space.
    #[arg(long)]
    ambient_dim: Option<usize>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Also draw the region (planar projective shape only).
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthesizeArgs {
    #[arg(long, default_value_t = DEFAULT_SYNTHETIC_SEED)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    config: PathBuf,
    /// JSON report path; a CSV with one row per sample size is written next to it.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config's thread count.
    #[arg(long)]
    threads: Option<usize>,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    svg: PathBuf,
}

/// Failures caused by the user's input rather than by the computation.
fn is_input_error(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.is::<InputError>()
            || c.is::<serde_json::Error>()
            || c.is::<std::io::Error>()
            || c.is::<tempfile::PersistError>()
            || matches!(
                c.downcast_ref::<exc_core::error::Error>(),
                Some(
                    exc_core::error::Error::InvalidAlpha(_)
                        | exc_core::error::Error::InvalidSampleSize
                        | exc_core::error::Error::InvalidExperiment(_)
                )
            )
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("EXC_LOG_LEVEL", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Synthesize(a) => cmd_synthesize(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Render(a) => cmd_render(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            for cause in e.chain() {
                eprintln!("error: {cause}");
            }
            ExitCode::from(if is_input_error(&e) { 2 } else { 1 })
        }
    }
}

fn load_and_analyze(input: &InputArgs) -> anyhow::Result<Analysis> {
    let dims = Dims {
        ambient_dim: input.ambient_dim,
        m: input.m,
    };
    let data = dataset::load(&input.input, input.manifold, dims)?;
    log::info!("read {} observations in dimension {} from {}", data.len(), data.ambient_dim(), input.input.display());
    analyze(&data, input.alpha)
}

fn render(analysis: &Analysis, path: &Path) -> anyhow::Result<()> {
    let quadric = analysis
        .quadric
        .as_ref()
        .ok_or_else(|| InputError::new("--svg needs projective-shape data with a unique affine mean"))?;
    if quadric.m != 2 {
        return Err(InputError::new(format!("--svg needs planar data (RP^2), got RP^{}", quadric.m)).into());
    }
    let mut points: Vec<[f64; 2]> = analysis.affine_points.iter().map(|p| [p[0], p[1]]).collect();
    let data = points.clone();
    points.push([quadric.z[0], quadric.z[1]]);
    let viewport = Viewport::fit(&points, 0.15)?;
    let svg = render_region_svg(quadric, &data, &viewport)?;
    write_atomic(path, svg.as_bytes())
}

fn cmd_analyze(args: AnalyzeArgs) -> anyhow::Result<()> {
    let mut analysis = load_and_analyze(&args.input)?;
    if let Some(svg) = &args.svg {
        render(&analysis, svg)?;
        if let Some(p) = analysis.report.projective.as_mut() {
            p.svg = Some(svg.display().to_string());
        }
    }
    emit_json(&analysis.report, args.out.as_deref())
}

fn cmd_render(args: RenderArgs) -> anyhow::Result<()> {
    if args.input.manifold.is_some_and(|m| m != Manifold::ProjectiveShape) {
        return Err(InputError::new("render supports --manifold projective-shape only").into());
    }
    let input = InputArgs {
        manifold: Some(Manifold::ProjectiveShape),
        ..args.input
    };
    render(&load_and_analyze(&input)?, &args.svg)
}

fn cmd_synthesize(args: SynthesizeArgs) -> anyhow::Result<()> {
    let rows = synthesize_affine_points(args.seed, 100)
        .into_iter()
        .map(|[x, y]| serde_json::json!([x, y, 1.0]))
        .collect();
    let file = DatasetFile {
        format: Format::JsonDataset,
        manifold: Manifold::ProjectiveShape,
        ambient_dim: Some(3),
        m: None,
        rows,
    };
    emit_json(&file, Some(&args.out))
}

#[derive(Serialize)]
struct SimulationOutput<'a> {
    tool_version: &'static str,
    #[serde(flatten)]
    report: &'a ExperimentReport,
}

fn cmd_simulate(args: SimulateArgs) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let mut config: ExperimentConfig =
        serde_json::from_str(&text).with_context(|| format!("invalid experiment config {}", args.config.display()))?;
    match &mut config {
        ExperimentConfig::Coverage(c) => {
            c.threads = args.threads.unwrap_or(c.threads);
            c.seed = args.seed.unwrap_or(c.seed);
        }
        ExperimentConfig::Rate(r) => {
            r.threads = args.threads.unwrap_or(r.threads);
            r.seed = args.seed.unwrap_or(r.seed);
        }
    }
    let report = run_experiment(&config)?;
    emit_json(
        &SimulationOutput {
            tool_version: TOOL_VERSION,
            report: &report,
        },
        Some(&args.out),
    )?;
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record([
        "n",
        "replicates",
        "coverage_frequency",
        "trivial_frequency",
        "median_radius",
        "radius_q05",
        "radius_q95",
        "trivial_bound",
    ])?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for g in &report.grid {
        csv.write_record([
            g.n.to_string(),
            g.replicates.to_string(),
            g.coverage_frequency.to_string(),
            g.trivial_frequency.to_string(),
            opt(g.median_radius),
            opt(g.radius_quantiles.map(|q| q[0])),
            opt(g.radius_quantiles.map(|q| q[1])),
            opt(g.trivial_bound),
        ])?;
    }
    write_atomic(&csv_sibling(&args.out), &csv.into_inner()?)
}
