use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use log::{error, info, warn};
use rayon::prelude::*;
use vbm::{analyze, derive_seed, load_mask, render_overlay, reports_to_table, serialize_report};
use vbm::{BiomarkerReport, NetworkKind};

use crate::config::RunConfig;

pub const TABLE_FILE: &str = "biomarkers.csv";
pub const ERROR_LOG: &str = "errors.log";
pub const REPORT_DIR: &str = "json";
pub const OVERLAY_DIR: &str = "overlays";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Job {
    pub image_id: String,
    pub kind: NetworkKind,
    pub path: PathBuf,
}

/// Finds artery and vein masks by filename suffix, sorted by (image, kind).
pub fn discover(cfg: &RunConfig) -> Result<Vec<Job>> {
    let mut suffixes = [
        (cfg.artery_suffix.as_str(), NetworkKind::Arterioles),
        (cfg.vein_suffix.as_str(), NetworkKind::Venules),
    ];
    // Longest suffix first, so that one suffix ending the other is no problem.
    suffixes.sort_by_key(|(s, _)| std::cmp::Reverse(s.len()));
    let entries = fs::read_dir(&cfg.input)
        .with_context(|| format!("cannot read input directory {}", cfg.input.display()))?;
    let mut jobs = Vec::new();
    for entry in entries {
        let entry = entry?;
        if !entry.file_type()?.is_file() {
            continue;
        }
        let name = entry.file_name();
        let Some(name) = name.to_str() else {
            warn!("skipping non-UTF-8 file name {:?}", entry.file_name());
            continue;
        };
        for (suffix, kind) in suffixes {
            if let Some(id) = name.strip_suffix(suffix) {
                if !id.is_empty() {
                    jobs.push(Job {
                        image_id: id.to_owned(),
                        kind,
                        path: entry.path(),
                    });
                }
                break;
            }
        }
    }
    jobs.sort();
    Ok(jobs)
}

/// The error and its causes on one line. Causes whose text already appears
/// earlier in the line are skipped; several library errors print their
/// source as part of their own message.
pub fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let msg = cause.to_string();
        if out.contains(&msg) {
            continue;
        }
        if !out.is_empty() {
            out.push_str(": ");
        }
        out.push_str(&msg);
    }
    out
}

fn file_stem(job: &Job) -> String {
    format!("{}_{}", job.image_id, job.kind)
}

fn process(job: &Job, cfg: &RunConfig) -> Result<BiomarkerReport> {
    let mask = load_mask(&job.path, cfg.threshold)?;
    let seed = derive_seed(cfg.seed, &job.image_id);
    let a = analyze(&job.image_id, &mask, job.kind, &cfg.pipeline, seed);
    if cfg.overlays {
        let img = render_overlay(&mask, &a.skeleton, &a.topology.points, &a.topology.angles)?;
        img.save(cfg.out.join(OVERLAY_DIR).join(format!("{}.png", file_stem(job))))?;
    }
    let json = serialize_report(&a.report)?;
    let path = cfg.out.join(REPORT_DIR).join(format!("{}.json", file_stem(job)));
    fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok(a.report)
}

fn create_dir(p: &Path) -> Result<()> {
    fs::create_dir_all(p).with_context(|| format!("cannot create {}", p.display()))
}

/// Returns whether every image succeeded.
pub fn run(cfg: &RunConfig) -> Result<bool> {
    let jobs = discover(cfg)?;
    if jobs.is_empty() {
        bail!(
            "no masks ending in {:?} or {:?} in {}",
            cfg.artery_suffix,
            cfg.vein_suffix,
            cfg.input.display()
        );
    }
    create_dir(&cfg.out)?;
    create_dir(&cfg.out.join(REPORT_DIR))?;
    if cfg.overlays {
        create_dir(&cfg.out.join(OVERLAY_DIR))?;
    }

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.workers {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().context("cannot start worker pool")?;
    info!("processing {} masks", jobs.len());
    let results: Vec<Result<BiomarkerReport>> =
        pool.install(|| jobs.par_iter().map(|j| process(j, cfg)).collect());

    let mut reports = Vec::with_capacity(jobs.len());
    let mut log = String::new();
    for (job, r) in jobs.iter().zip(results) {
        match r {
            Ok(report) => reports.push(report),
            Err(e) => {
                let msg = describe(&e);
                error!("{}: {msg}", job.path.display());
                log.push_str(&format!("{}\t{}\t{msg}\n", job.path.display(), job.kind));
            }
        }
    }
    let table = reports_to_table(&reports)?;
    fs::write(cfg.out.join(TABLE_FILE), table).context("writing cohort table")?;
    fs::write(cfg.out.join(ERROR_LOG), &log).context("writing error log")?;
    info!(
        "wrote {} rows to {}",
        reports.len(),
        cfg.out.join(TABLE_FILE).display()
    );
    Ok(log.is_empty())
}
