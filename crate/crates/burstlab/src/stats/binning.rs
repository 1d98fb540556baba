//! Frequency-class binning and per-class Lv summaries.

use serde::{Deserialize, Serialize};

use super::{FrequencyClass, StatsError};
use crate::ingest::Channel;
use crate::localvar::{ExcludedTrain, LvRecord};
use crate::trains::Role;

/// How frequency classes tile the observed f range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BinScheme {
    /// Classes of fixed width in log10 f, the first edge at `start`
    /// (f units). Edges extend until the largest observed f is covered.
    Log { width: f64, start: f64 },
    /// Explicit ascending class edges in f units; class i is
    /// [edges\[i\], edges\[i+1\]).
    Explicit(Vec<f64>),
}

impl Default for BinScheme {
    /// Width 0.25 in log10 f starting at f = 3, the smallest count local
    /// variation is defined for.
    fn default() -> BinScheme {
        BinScheme::Log {
            width: 0.25,
            start: 3.0,
        }
    }
}

impl BinScheme {
    /// Class edges (f units) covering frequencies up to and including
    /// `max_f`. The last edge is strictly above `max_f` because class upper
    /// bounds are exclusive.
    pub fn edges(&self, max_f: f64) -> Result<Vec<f64>, StatsError> {
        match self {
            BinScheme::Log { width, start } => {
                let valid = width.is_finite() && *width > 0.0 && start.is_finite() && *start > 0.0;
                if !valid {
                    return Err(StatsError::InvalidBins);
                }
                let mut edges = vec![*start];
                let mut k = 1;
                while *edges.last().unwrap() <= max_f {
                    edges.push(start * 10f64.powf(k as f64 * width));
                    k += 1;
                }
                Ok(edges)
            }
            BinScheme::Explicit(edges) => {
                if edges.len() < 2 || edges.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(StatsError::InvalidBins);
                }
                Ok(edges.clone())
            }
        }
    }
}

/// One class with the records assigned to it.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyBin {
    pub class: FrequencyClass,
    pub members: Vec<LvRecord>,
    /// Trains whose f falls in this class but were excluded from Lv
    /// (fewer than 3 spikes).
    pub excluded_count: u64,
}

/// Binning result: every class of the scheme, populated or not, plus the
/// count of records falling outside the scheme's edges.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedRecords {
    pub bins: Vec<FrequencyBin>,
    pub out_of_range: u64,
}

fn class_index(edges: &[f64], f: f64) -> Option<usize> {
    if f < edges[0] || f >= *edges.last().unwrap() {
        return None;
    }
    Some(edges.partition_point(|e| *e <= f) - 1)
}

/// Assign each record to exactly one frequency class.
///
/// Under the default scheme the classes tile [3, max f], so every record
/// lands somewhere; explicit edges may leave records out of range, which
/// are counted rather than silently dropped. Excluded trains are tallied
/// per class so downstream counts reflect the exclusions.
pub fn bin_by_frequency(
    records: &[LvRecord],
    excluded: &[ExcludedTrain],
    scheme: &BinScheme,
) -> Result<BinnedRecords, StatsError> {
    if records.is_empty() {
        return Err(StatsError::NoRecords);
    }
    let max_f = records.iter().map(|r| r.n).max().unwrap() as f64;
    let edges = scheme.edges(max_f)?;
    let n_classes = edges.len() - 1;

    let mut members: Vec<Vec<LvRecord>> = vec![Vec::new(); n_classes];
    let mut excluded_counts = vec![0u64; n_classes];
    let mut out_of_range = 0u64;
    for record in records {
        match class_index(&edges, record.n as f64) {
            Some(i) => members[i].push(*record),
            None => out_of_range += 1,
        }
    }
    for train in excluded {
        match class_index(&edges, train.n as f64) {
            Some(i) => excluded_counts[i] += 1,
            None => out_of_range += 1,
        }
    }

    let bins = members
        .into_iter()
        .zip(excluded_counts)
        .enumerate()
        .map(|(i, (members, excluded_count))| {
            let mean_log10_f = if members.is_empty() {
                None
            } else {
                let mean_f = members.iter().map(|r| r.n as f64).sum::<f64>() / members.len() as f64;
                Some(mean_f.log10())
            };
            FrequencyBin {
                class: FrequencyClass {
                    lo: edges[i],
                    hi: edges[i + 1],
                    mean_log10_f,
                    member_count: members.len() as u64,
                },
                members,
                excluded_count,
            }
        })
        .collect();

    Ok(BinnedRecords { bins, out_of_range })
}

/// Per-class Lv summary: mean, population standard deviation, and the
/// normalized Lv histogram.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinSummary {
    pub class: FrequencyClass,
    pub role: Role,
    pub channel: Channel,
    pub mu_lv: f64,
    /// Population standard deviation (divide by n).
    pub sigma_lv: f64,
    /// Fraction of members per Lv bin of `hist_width` over [0, 3);
    /// fractions sum to 1.
    pub histogram: Vec<f64>,
    pub hist_width: f64,
    pub excluded_count: u64,
    /// Single member or zero spread; z-values over this class are
    /// undefined.
    pub degenerate: bool,
}

/// Summarize one populated frequency class.
pub fn bin_summary(
    bin: &FrequencyBin,
    role: Role,
    channel: Channel,
    hist_width: f64,
) -> Result<BinSummary, StatsError> {
    if bin.members.is_empty() {
        return Err(StatsError::EmptyClass);
    }
    let n = bin.members.len() as f64;
    let mu_lv = bin.members.iter().map(|r| r.lv).sum::<f64>() / n;
    let var = bin
        .members
        .iter()
        .map(|r| (r.lv - mu_lv) * (r.lv - mu_lv))
        .sum::<f64>()
        / n;
    let sigma_lv = var.sqrt();

    let n_hist = (3.0 / hist_width).ceil() as usize;
    let mut histogram = vec![0u64; n_hist];
    for record in &bin.members {
        let idx = ((record.lv / hist_width) as usize).min(n_hist - 1);
        histogram[idx] += 1;
    }
    let histogram = histogram
        .into_iter()
        .map(|count| count as f64 / n)
        .collect();

    Ok(BinSummary {
        class: bin.class,
        role,
        channel,
        mu_lv,
        sigma_lv,
        histogram,
        hist_width,
        excluded_count: bin.excluded_count,
        degenerate: bin.members.len() < 2 || sigma_lv == 0.0,
    })
}
