//! Full per-network biomarker computation and report serialization.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{geometry_biomarkers, REFERENCE_AREA};
use crate::graph::{analyze_topology, ArmMode, TopologyAnalysis};
use crate::mask_io::BinaryMask;
use crate::morphology::{extract_edges, skeletonize, Skeleton};
use crate::multifractal::{optimized_multifractal, MultifractalConfig};

pub const TOOLBOX_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Denominator used by the geometry biomarkers.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum NormMode {
    /// Height × width of the mask being analyzed.
    #[default]
    ImageArea,
    /// A fixed area in pixels², e.g. 1444² for the reference resolution.
    Fixed(f64),
}

impl NormMode {
    pub const REFERENCE: NormMode = NormMode::Fixed(REFERENCE_AREA);

    pub fn area_for(self, mask: &BinaryMask) -> f64 {
        match self {
            NormMode::ImageArea => (mask.width() * mask.height()) as f64,
            NormMode::Fixed(a) => a,
        }
    }
}

impl FromStr for NormMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "image_area" {
            return Ok(NormMode::ImageArea);
        }
        let value = s
            .strip_prefix("fixed:")
            .ok_or_else(|| Error::Validation(format!("unknown normalization mode {s:?}")))?;
        let area: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Validation(format!("invalid fixed area {value:?}")))?;
        if !(area.is_finite() && area > 0.0) {
            return Err(Error::Validation(format!("fixed area must be positive, got {area}")));
        }
        Ok(NormMode::Fixed(area))
    }
}

impl fmt::Display for NormMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormMode::ImageArea => f.write_str("image_area"),
            NormMode::Fixed(a) => write!(f, "fixed:{a}"),
        }
    }
}

impl Serialize for NormMode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NormMode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkKind {
    Arterioles,
    Venules,
}

impl NetworkKind {
    pub const ALL: [NetworkKind; 2] = [NetworkKind::Arterioles, NetworkKind::Venules];

    pub fn as_str(self) -> &'static str {
        match self {
            NetworkKind::Arterioles => "arterioles",
            NetworkKind::Venules => "venules",
        }
    }
}

impl fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NetworkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arterioles" => Ok(NetworkKind::Arterioles),
            "venules" => Ok(NetworkKind::Venules),
            _ => Err(Error::Validation(format!("unknown network kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub norm: NormMode,
    pub multifractal: MultifractalConfig,
    #[serde(skip)]
    pub arm_mode: ArmMode,
}

/// How the reported fractal values were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractalProvenance {
    pub rotation_used: f64,
    pub degraded: bool,
    pub d0_r_squared: f64,
    pub d1_r_squared: f64,
    pub d2_r_squared: f64,
}

/// The 11 biomarkers of one vessel network. Missing values are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiomarkerReport {
    pub image_id: String,
    pub network_kind: NetworkKind,
    pub ovlen: f64,
    pub ovper: f64,
    pub ovarea: f64,
    pub end_count: usize,
    pub inter_count: usize,
    pub tortuosity: Option<f64>,
    pub branching_angle: Option<f64>,
    pub d0: Option<f64>,
    pub d1: Option<f64>,
    pub d2: Option<f64>,
    pub singularity_length: Option<f64>,
    pub norm_area: f64,
    pub seed: u64,
    pub toolbox_version: String,
    pub fractal: Option<FractalProvenance>,
}

impl BiomarkerReport {
    pub fn value(&self, b: Biomarker) -> Option<f64> {
        match b {
            Biomarker::Ovlen => Some(self.ovlen),
            Biomarker::Ovper => Some(self.ovper),
            Biomarker::Ovarea => Some(self.ovarea),
            Biomarker::End => Some(self.end_count as f64),
            Biomarker::Inter => Some(self.inter_count as f64),
            Biomarker::Tor => self.tortuosity,
            Biomarker::Ba => self.branching_angle,
            Biomarker::D0 => self.d0,
            Biomarker::D1 => self.d1,
            Biomarker::D2 => self.d2,
            Biomarker::Sl => self.singularity_length,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Biomarker {
    Ovlen,
    Ovper,
    Ovarea,
    End,
    Inter,
    Tor,
    Ba,
    D0,
    D1,
    D2,
    Sl,
}

impl Biomarker {
    pub const ALL: [Biomarker; 11] = [
        Biomarker::Ovlen,
        Biomarker::Ovper,
        Biomarker::Ovarea,
        Biomarker::End,
        Biomarker::Inter,
        Biomarker::Tor,
        Biomarker::Ba,
        Biomarker::D0,
        Biomarker::D1,
        Biomarker::D2,
        Biomarker::Sl,
    ];

    /// 1-based position in the biomarker list.
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn code(self) -> &'static str {
        match self {
            Biomarker::Ovlen => "OVLEN",
            Biomarker::Ovper => "OVPER",
            Biomarker::Ovarea => "OVAREA",
            Biomarker::End => "END",
            Biomarker::Inter => "INTER",
            Biomarker::Tor => "TOR",
            Biomarker::Ba => "BA",
            Biomarker::D0 => "D0",
            Biomarker::D1 => "D1",
            Biomarker::D2 => "D2",
            Biomarker::Sl => "SL",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Biomarker::Ovlen => "Overall length",
            Biomarker::Ovper => "Overall perimeter",
            Biomarker::Ovarea => "Overall area",
            Biomarker::End => "Endpoints",
            Biomarker::Inter => "Intersection points",
            Biomarker::Tor => "Median tortuosity",
            Biomarker::Ba => "Median branching angle",
            Biomarker::D0 => "Capacity dimension",
            Biomarker::D1 => "Entropy dimension",
            Biomarker::D2 => "Correlation dimension",
            Biomarker::Sl => "Singularity length",
        }
    }

    pub fn from_code(code: &str) -> Option<Biomarker> {
        Biomarker::ALL.into_iter().find(|b| b.code() == code)
    }
}

/// Per-image seed; depends only on the run seed and the image id, so batch
/// order cannot change it.
pub fn derive_seed(run_seed: u64, image_id: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(run_seed.to_le_bytes());
    h.update(image_id.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// A report together with the intermediates needed to draw an overlay.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: BiomarkerReport,
    pub skeleton: Skeleton,
    pub topology: TopologyAnalysis,
}

pub fn analyze(
    image_id: &str,
    mask: &BinaryMask,
    kind: NetworkKind,
    config: &PipelineConfig,
    seed: u64,
) -> Analysis {
    let norm_area = config.norm.area_for(mask);
    let skeleton = skeletonize(mask);
    let edges = extract_edges(mask);
    let geometry = geometry_biomarkers(mask, &skeleton, &edges, norm_area);
    let topology = analyze_topology(&skeleton, config.arm_mode);
    // A mask too small or too sparse for the box schedule has no fractal values.
    let fractal = optimized_multifractal(mask, &config.multifractal, seed).ok();
    let t = topology.biomarkers;
    let report = BiomarkerReport {
        image_id: image_id.to_owned(),
        network_kind: kind,
        ovlen: geometry.ovlen,
        ovper: geometry.ovper,
        ovarea: geometry.ovarea,
        end_count: t.end_count,
        inter_count: t.inter_count,
        tortuosity: t.median_tortuosity,
        branching_angle: t.median_branching_angle,
        d0: fractal.as_ref().map(|f| f.d0.value),
        d1: fractal.as_ref().map(|f| f.d1.value),
        d2: fractal.as_ref().map(|f| f.d2.value),
        singularity_length: fractal.as_ref().map(|f| f.singularity_length),
        norm_area,
        seed,
        toolbox_version: TOOLBOX_VERSION.to_owned(),
        fractal: fractal.as_ref().map(|f| FractalProvenance {
            rotation_used: f.rotation_used,
            degraded: f.degraded,
            d0_r_squared: f.d0.r_squared,
            d1_r_squared: f.d1.r_squared,
            d2_r_squared: f.d2.r_squared,
        }),
    };
    Analysis {
        report,
        skeleton,
        topology,
    }
}

pub fn compute_all(
    image_id: &str,
    mask: &BinaryMask,
    kind: NetworkKind,
    config: &PipelineConfig,
    seed: u64,
) -> BiomarkerReport {
    analyze(image_id, mask, kind, config, seed).report
}

pub fn serialize_report(report: &BiomarkerReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)?)
}

pub fn parse_report(text: &str) -> Result<BiomarkerReport> {
    Ok(serde_json::from_str(text)?)
}

const META_BEFORE: [&str; 2] = ["image_id", "kind"];
const META_AFTER: [&str; 3] = ["norm_area", "seed", "version"];

pub fn table_header() -> Vec<&'static str> {
    META_BEFORE
        .into_iter()
        .chain(Biomarker::ALL.iter().map(|b| b.code()))
        .chain(META_AFTER)
        .collect()
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV with one row per report, in the given order.
pub fn reports_to_table(reports: &[BiomarkerReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(table_header())?;
    for r in reports {
        let mut row = vec![r.image_id.clone(), r.network_kind.to_string()];
        row.push(cell(Some(r.ovlen)));
        row.push(cell(Some(r.ovper)));
        row.push(cell(Some(r.ovarea)));
        row.push(r.end_count.to_string());
        row.push(r.inter_count.to_string());
        for b in &Biomarker::ALL[5..] {
            row.push(cell(r.value(*b)));
        }
        row.push(cell(Some(r.norm_area)));
        row.push(r.seed.to_string());
        row.push(r.toolbox_version.clone());
        w.write_record(&row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Validation(format!("flushing table: {e}")))?;
    Ok(String::from_utf8(bytes).expect("table is UTF-8"))
}

/// One parsed row of a cohort table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub image_id: String,
    pub kind: NetworkKind,
    /// Biomarker values in list order.
    pub values: [Option<f64>; 11],
}

impl TableRow {
    pub fn value(&self, b: Biomarker) -> Option<f64> {
        self.values[b as usize]
    }
}

pub fn parse_table(text: &str) -> Result<Vec<TableRow>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers()?.clone();
    let expected = table_header();
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::Validation(format!(
            "unexpected table header {:?}",
            header.iter().collect::<Vec<_>>()
        )));
    }
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let mut values = [None; 11];
        for (i, v) in values.iter_mut().enumerate() {
            let raw = rec[2 + i].trim();
            if !raw.is_empty() {
                *v = Some(raw.parse().map_err(|_| {
                    Error::Validation(format!("row {}: bad {} value {raw:?}", line + 1, Biomarker::ALL[i].code()))
                })?);
            }
        }
        rows.push(TableRow {
            image_id: rec[0].to_owned(),
            kind: rec[1].parse()?,
            values,
        });
    }
    Ok(rows)
}
