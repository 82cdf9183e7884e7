//! `vbm`: batch biomarker computation over a directory of vessel masks.

mod compare;
mod compute;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vbm::{analyze, load_mask, render_overlay, NetworkKind, PipelineConfig, DEFAULT_THRESHOLD};

const EXIT_DATA: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "vbm", version, about = "Retinal vasculature biomarkers from binary vessel masks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute all biomarkers for every artery and vein mask in a directory.
    Compute(ComputeArgs),
    /// Compare two labelled groups of a cohort table.
    Compare(CompareArgs),
    /// Draw the skeleton, particular points and branching angles of one mask.
    Overlay(OverlayArgs),
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Filename suffix of arteriole masks [default: _a.png]
    #[arg(long)]
    pub artery_suffix: Option<String>,
    /// Filename suffix of venule masks [default: _v.png]
    #[arg(long)]
    pub vein_suffix: Option<String>,
    /// Run seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub overlays: bool,
    /// `image_area` or `fixed:<pixels²>` [default: image_area]
    #[arg(long)]
    pub norm: Option<String>,
    /// Flat TOML file with any of these options; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads [default: all cores]
    #[arg(long)]
    pub workers: Option<usize>,
    /// Gray level above which a pixel is vessel [default: 127]
    #[arg(long)]
    pub threshold: Option<u8>,
    /// Random grid rotations tried besides the unrotated grid [default: 16]
    #[arg(long)]
    pub rotations: Option<usize>,
    /// Explicit box sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub box_sizes: Option<Vec<usize>>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    table: PathBuf,
    /// Two columns per line: image id and group name.
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OverlayArgs {
    #[arg(long)]
    mask: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: u8,
}

fn overlay(args: &OverlayArgs) -> anyhow::Result<()> {
    let mask = load_mask(&args.mask, args.threshold)?;
    let id = args.mask.file_stem().and_then(|s| s.to_str()).unwrap_or("mask");
    let a = analyze(id, &mask, NetworkKind::Arterioles, &PipelineConfig::default(), 0);
    render_overlay(&mask, &a.skeleton, &a.topology.points, &a.topology.angles)?.save(&args.out)?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(args) => {
            let cfg = match config::RunConfig::resolve(&args) {
                Ok(c) => c,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            match compute::run(&cfg) {
                Ok(true) => Ok(()),
                Ok(false) => {
                    eprintln!(
                        "error: some masks failed; see {}",
                        cfg.out.join(compute::ERROR_LOG).display()
                    );
                    return ExitCode::from(EXIT_DATA);
                }
                Err(e) => Err(e),
            }
        }
        Command::Compare(args) => compare::run(&args.table, &args.labels, &args.out),
        Command::Overlay(args) => overlay(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", compute::describe(&e));
            ExitCode::from(EXIT_DATA)
        }
    }
}
