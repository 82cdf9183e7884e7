use std::path::{Path, PathBuf};

use serde::Deserialize;
use vbm::multifractal::ExclusionPolicy;
use vbm::{MultifractalConfig, NormMode, PipelineConfig, DEFAULT_THRESHOLD};

use crate::ComputeArgs;

/// Keys accepted in a `--config` file. Every key is optional; command-line
/// flags override them.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub artery_suffix: Option<String>,
    pub vein_suffix: Option<String>,
    pub seed: Option<u64>,
    pub overlays: Option<bool>,
    pub norm: Option<String>,
    pub workers: Option<usize>,
    pub threshold: Option<u8>,
    pub rotations: Option<usize>,
    pub box_sizes: Option<Vec<usize>>,
    pub min_box: Option<usize>,
    pub box_steps: Option<usize>,
    pub exclude_saturated: Option<bool>,
    pub min_pixels: Option<u32>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub out: PathBuf,
    pub artery_suffix: String,
    pub vein_suffix: String,
    pub seed: u64,
    pub overlays: bool,
    pub workers: Option<usize>,
    pub threshold: u8,
    pub pipeline: PipelineConfig,
}

impl RunConfig {
    /// Merges flags over the optional config file. Errors are usage errors.
    pub fn resolve(args: &ComputeArgs) -> Result<Self, String> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let input = args
            .input
            .clone()
            .or(file.input)
            .ok_or("missing --input directory")?;
        let out = args.out.clone().or(file.out).ok_or("missing --out directory")?;
        let artery_suffix = args
            .artery_suffix
            .clone()
            .or(file.artery_suffix)
            .unwrap_or_else(|| "_a.png".into());
        let vein_suffix = args
            .vein_suffix
            .clone()
            .or(file.vein_suffix)
            .unwrap_or_else(|| "_v.png".into());
        if artery_suffix == vein_suffix || artery_suffix.is_empty() || vein_suffix.is_empty() {
            return Err(format!(
                "artery and vein suffixes must be distinct and non-empty (got {artery_suffix:?} and {vein_suffix:?})"
            ));
        }
        let norm = match args.norm.as_deref().or(file.norm.as_deref()) {
            Some(s) => s.parse::<NormMode>().map_err(|e| e.to_string())?,
            None => NormMode::ImageArea,
        };
        let defaults = MultifractalConfig::default();
        let default_excl = ExclusionPolicy::default();
        let multifractal = MultifractalConfig {
            box_sizes: args.box_sizes.clone().or(file.box_sizes),
            min_box: file.min_box.unwrap_or(defaults.min_box),
            box_steps: file.box_steps.unwrap_or(defaults.box_steps),
            exclusions: ExclusionPolicy {
                exclude_saturated: file.exclude_saturated.unwrap_or(default_excl.exclude_saturated),
                min_pixels: file.min_pixels.unwrap_or(default_excl.min_pixels),
            },
            rotations: args.rotations.or(file.rotations).unwrap_or(defaults.rotations),
            ..defaults
        };
        let workers = args.workers.or(file.workers);
        if workers == Some(0) {
            return Err("--workers must be at least 1".into());
        }
        Ok(Self {
            input,
            out,
            artery_suffix,
            vein_suffix,
            seed: args.seed.or(file.seed).unwrap_or(0),
            overlays: args.overlays || file.overlays.unwrap_or(false),
            workers,
            threshold: args.threshold.or(file.threshold).unwrap_or(DEFAULT_THRESHOLD),
            pipeline: PipelineConfig {
                norm,
                multifractal,
                ..Default::default()
            },
        })
    }
}
