//! Group summaries and the two-sample rank-sum test used for cohort tables.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Combined sample size up to which p-values are computed by exact
/// enumeration of the rank-sum distribution.
pub const EXACT_MAX_TOTAL: usize = 20;

pub const MIN_GROUP_SIZE: usize = 3;

/// p-values below this are flagged as significant in comparison tables.
pub const SIGNIFICANCE: f64 = 0.05;

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Linear interpolation between order statistics of sorted data.
fn quantile_sorted(v: &[f64], q: f64) -> f64 {
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
}

pub fn median(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| quantile_sorted(&sorted(values), 0.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub n: usize,
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.3} ({:.3}-{:.3})", self.median, self.q1, self.q3)
    }
}

fn present<T: Into<Option<f64>>>(values: impl IntoIterator<Item = T>) -> Vec<f64> {
    values
        .into_iter()
        .filter_map(Into::into)
        .filter(|v| !v.is_nan())
        .collect()
}

/// Median and quartiles; missing values (`None` or NaN) are skipped.
pub fn summarize<T: Into<Option<f64>>>(values: impl IntoIterator<Item = T>) -> Result<Summary> {
    let v = sorted(&present(values));
    if v.is_empty() {
        return Err(Error::InsufficientData("no values to summarize".into()));
    }
    Ok(Summary {
        median: quantile_sorted(&v, 0.5),
        q1: quantile_sorted(&v, 0.25),
        q3: quantile_sorted(&v, 0.75),
        n: v.len(),
    })
}

/// Twice the mid-rank of every value in the pooled sample, so tied ranks stay
/// integral. Returns the doubled ranks (pooled order: `a` then `b`) and the
/// tie-group sizes.
fn doubled_ranks(a: &[f64], b: &[f64]) -> (Vec<u64>, Vec<usize>) {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&i, &j| pooled[i].total_cmp(&pooled[j]));
    let mut ranks = vec![0u64; pooled.len()];
    let mut ties = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end + 1 < order.len() && pooled[order[end + 1]] == pooled[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end+1; mid-rank doubled is their sum.
        let r2 = (start + 1 + end + 1) as u64;
        for &i in &order[start..=end] {
            ranks[i] = r2;
        }
        ties.push(end - start + 1);
        start = end + 1;
    }
    (ranks, ties)
}

/// Exact two-sided p-value: probability, over all equally likely splits of
/// the pooled ranks, that the first group's rank sum lies at least as far
/// from its mean as observed.
fn exact_p(ranks: &[u64], n_a: usize) -> f64 {
    let total: u64 = ranks.iter().sum();
    let max = total as usize;
    // counts[k][s]: subsets of size k with doubled rank sum s.
    let mut counts = vec![vec![0f64; max + 1]; n_a + 1];
    counts[0][0] = 1.0;
    for &r in ranks {
        let r = r as usize;
        for k in (1..=n_a).rev() {
            let (lower, upper) = counts.split_at_mut(k);
            let prev = &lower[k - 1];
            let cur = &mut upper[0];
            for s in (r..=max).rev() {
                cur[s] += prev[s - r];
            }
        }
    }
    let n = ranks.len() as u64;
    let mean2 = n_a as u64 * (n + 1); // E[2W] = n_a (N + 1)
    let observed: u64 = ranks[..n_a].iter().sum();
    let dev = observed.abs_diff(mean2);
    let row = &counts[n_a];
    let all: f64 = row.iter().sum();
    let extreme: f64 = row
        .iter()
        .enumerate()
        .filter(|&(s, _)| (s as u64).abs_diff(mean2) >= dev)
        .map(|(_, c)| c)
        .sum();
    extreme / all
}

fn normal_p(ranks: &[u64], ties: &[usize], n_a: usize, n_b: usize) -> f64 {
    let (na, nb) = (n_a as f64, n_b as f64);
    let n = na + nb;
    let w = ranks[..n_a].iter().sum::<u64>() as f64 / 2.0;
    let u = w - na * (na + 1.0) / 2.0;
    let mu = na * nb / 2.0;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (n * (n - 1.0));
    let var = na * nb / 12.0 * ((n + 1.0) - tie_term);
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((u - mu).abs() - 0.5).max(0.0) / var.sqrt();
    erfc(z / std::f64::consts::SQRT_2).clamp(f64::MIN_POSITIVE, 1.0)
}

/// Two-sided Wilcoxon rank-sum (Mann–Whitney) p-value for unpaired groups.
///
/// Exact when the combined size is at most [`EXACT_MAX_TOTAL`], otherwise the
/// tie-corrected normal approximation with continuity correction.
pub fn rank_test<A, B>(group_a: impl IntoIterator<Item = A>, group_b: impl IntoIterator<Item = B>) -> Result<f64>
where
    A: Into<Option<f64>>,
    B: Into<Option<f64>>,
{
    let a = present(group_a);
    let b = present(group_b);
    if a.len() < MIN_GROUP_SIZE || b.len() < MIN_GROUP_SIZE {
        return Err(Error::InsufficientData(format!(
            "rank test needs at least {MIN_GROUP_SIZE} values per group, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (ranks, ties) = doubled_ranks(&a, &b);
    let p = if a.len() + b.len() <= EXACT_MAX_TOTAL {
        exact_p(&ranks, a.len())
    } else {
        normal_p(&ranks, &ties, a.len(), b.len())
    };
    Ok(p.min(1.0))
}

/// One row of a two-group comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub biomarker: String,
    /// `(group name, summary)` per group, in the order given.
    pub groups: Vec<(String, Summary)>,
    pub p_value: f64,
}

impl GroupSummary {
    pub fn is_significant(&self) -> bool {
        self.p_value < SIGNIFICANCE
    }
}

pub fn compare_groups(
    biomarker: &str,
    (name_a, a): (&str, &[Option<f64>]),
    (name_b, b): (&str, &[Option<f64>]),
) -> Result<GroupSummary> {
    let p_value = rank_test(a.iter().copied(), b.iter().copied())?;
    Ok(GroupSummary {
        biomarker: biomarker.to_string(),
        groups: vec![
            (name_a.to_string(), summarize(a.iter().copied())?),
            (name_b.to_string(), summarize(b.iter().copied())?),
        ],
        p_value,
    })
}
