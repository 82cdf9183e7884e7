use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use log::warn;
use vbm::stats::{rank_test, summarize, SIGNIFICANCE};
use vbm::{parse_table, Biomarker, NetworkKind, TableRow};

/// Parses `image_id group` lines; commas, tabs or spaces separate the two
/// columns. Blank lines and `#` comments are ignored.
pub fn parse_labels(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty());
        match (parts.next(), parts.next(), parts.next()) {
            (Some(id), Some(group), None) => out.push((id.to_owned(), group.to_owned())),
            _ => bail!("labels line {}: expected two columns, got {line:?}", i + 1),
        }
    }
    Ok(out)
}

pub fn run(table: &Path, labels: &Path, out: &Path) -> Result<()> {
    let table_text =
        fs::read_to_string(table).with_context(|| format!("cannot read table {}", table.display()))?;
    let rows = parse_table(&table_text).with_context(|| format!("parsing {}", table.display()))?;
    let label_text = fs::read_to_string(labels)
        .with_context(|| format!("cannot read labels {}", labels.display()))?;
    let label_map: BTreeMap<String, String> = parse_labels(&label_text)?.into_iter().collect();

    for id in label_map.keys() {
        if !rows.iter().any(|r| &r.image_id == id) {
            warn!("label for {id} has no row in the table");
        }
    }
    let mut groups: Vec<&str> = Vec::new();
    let mut labelled: Vec<(&TableRow, &str)> = Vec::new();
    for row in &rows {
        match label_map.get(&row.image_id) {
            Some(g) => {
                if !groups.contains(&g.as_str()) {
                    groups.push(g);
                }
                labelled.push((row, g));
            }
            None => warn!("{} ({}) has no label; excluded", row.image_id, row.kind),
        }
    }
    groups.sort_unstable();
    if groups.len() != 2 {
        bail!("need exactly two groups, found {}: {groups:?}", groups.len());
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["kind", "number", "biomarker", groups[0], groups[1], "p_value", "significant"])?;
    for kind in NetworkKind::ALL {
        for b in Biomarker::ALL {
            let values = |g: &str| -> Vec<Option<f64>> {
                labelled
                    .iter()
                    .filter(|(r, lg)| r.kind == kind && *lg == g)
                    .map(|(r, _)| r.value(b))
                    .collect()
            };
            let (a, c) = (values(groups[0]), values(groups[1]));
            if a.is_empty() && c.is_empty() {
                continue;
            }
            let cell = |v: &[Option<f64>]| {
                summarize(v.iter().copied())
                    .map(|s| s.to_string())
                    .unwrap_or_default()
            };
            let p = match rank_test(a.iter().copied(), c.iter().copied()) {
                Ok(p) => Some(p),
                Err(e) => {
                    warn!("{kind} {}: {e}", b.code());
                    None
                }
            };
            w.write_record([
                kind.as_str(),
                &b.number().to_string(),
                b.code(),
                &cell(&a),
                &cell(&c),
                &p.map(|p| p.to_string()).unwrap_or_default(),
                if p.is_some_and(|p| p < SIGNIFICANCE) { "yes" } else { "no" },
            ])?;
        }
    }
    let bytes = w.into_inner().context("flushing comparison table")?;
    fs::write(out, bytes).with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}
