//! The one-shot analysis behind `burstlab analyze`: ingest, all selected
//! train families, frequency-class summaries, Zipf tables, z-values,
//! correlations, optional permutation-null summaries, and the output files.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use super::config::RunConfig;
use super::output;
use crate::ingest::{load_log, Channel, IngestError, LogSummary};
use crate::localvar::{analyze_trains, LvAnalysis};
use crate::nullmodel::{permute_null, NullOptions, Seed};
use crate::stats::{
    bin_by_frequency, bin_summary, pearson_cross_user, pearson_same_user, z_channel_vs_full,
    z_cross_channel, zipf_ranks, BinSummary, ChannelPair, Comparison, CorrelationRecord,
    FrequencyBin, PairMode, StatsError, ZDenominator, ZScoreRecord, ZipfRecord,
};
use crate::trains::{build_trains, Role};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot open input `{path}`: {source}")]
    Input {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("failed to write `{path}`: {message}")]
    Output { path: PathBuf, message: String },
}

/// Train census of one family, for summary.json.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub role: Role,
    pub channel: Channel,
    pub trains: u64,
    pub lv_records: u64,
    pub excluded: u64,
    pub out_of_range: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub log: LogSummary,
    pub families: Vec<FamilyReport>,
}

/// Everything computed for one (role, channel) family.
pub(crate) struct FamilyResult {
    pub analysis: LvAnalysis,
    pub bins: Vec<FrequencyBin>,
    pub out_of_range: u64,
    /// Summaries of the populated classes, in class order.
    pub summaries: Vec<BinSummary>,
    pub zipf: Vec<ZipfRecord>,
}

fn validate(config: &RunConfig) -> Result<(), PipelineError> {
    if config.input.as_os_str().is_empty() {
        return Err(PipelineError::Config("no input path set".into()));
    }
    if !(config.lv_hist_width > 0.0 && config.lv_hist_width <= 3.0) {
        return Err(PipelineError::Config(format!(
            "lv_hist_width must be in (0, 3], got {}",
            config.lv_hist_width
        )));
    }
    if config.window.start > config.window.end {
        return Err(PipelineError::Config(
            "window start is after its end".into(),
        ));
    }
    if config.roles.is_empty() || config.channels.is_empty() {
        return Err(PipelineError::Config(
            "at least one role and one channel must be selected".into(),
        ));
    }
    Ok(())
}

fn analyze_family(analysis: LvAnalysis, config: &RunConfig) -> Result<FamilyResult, PipelineError> {
    let zipf = zipf_ranks(&analysis.frequencies());
    let (bins, out_of_range) =
        match bin_by_frequency(&analysis.records, &analysis.excluded, &config.bins) {
            Ok(binned) => (binned.bins, binned.out_of_range),
            Err(StatsError::NoRecords) => (Vec::new(), 0),
            Err(e) => return Err(e.into()),
        };
    let summaries = bins
        .iter()
        .filter(|b| !b.members.is_empty())
        .map(|b| bin_summary(b, analysis.role, analysis.channel, config.lv_hist_width))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FamilyResult {
        analysis,
        bins,
        out_of_range,
        summaries,
        zipf,
    })
}

/// z rows for one (filtered channel, reference) pairing over the union of
/// their class grids. Classes present on only one side produce undefined
/// rows instead of disappearing.
fn zscore_rows(
    k_side: &FamilyResult,
    reference: &FamilyResult,
    comparison: Comparison,
    denominator: ZDenominator,
) -> Vec<ZScoreRecord> {
    let by_lo = |family: &FamilyResult| -> BTreeMap<u64, BinSummary> {
        family
            .summaries
            .iter()
            .map(|s| (s.class.lo.to_bits(), s.clone()))
            .collect()
    };
    let k_map = by_lo(k_side);
    let ref_map = by_lo(reference);
    let mut rows = Vec::new();
    let mut los: Vec<u64> = k_map.keys().chain(ref_map.keys()).copied().collect();
    los.sort_unstable();
    los.dedup();
    for lo in los {
        let row = match (k_map.get(&lo), ref_map.get(&lo)) {
            (Some(k), Some(reference)) => {
                let f_k = crate::stats::f_term(k, denominator);
                match comparison {
                    Comparison::MentionVsRetweet => z_cross_channel(k, reference, f_k, denominator),
                    _ => z_channel_vs_full(k, reference, f_k, denominator),
                }
            }
            // one side unpopulated: report the class with an undefined z
            (Some(k), None) => ZScoreRecord {
                class: k.class,
                comparison,
                z: None,
                f_term: crate::stats::f_term(k, denominator),
                denominator,
            },
            (None, Some(reference)) => ZScoreRecord {
                class: reference.class,
                comparison,
                z: None,
                f_term: 0.0,
                denominator,
            },
            (None, None) => unreachable!("lo came from one of the maps"),
        };
        rows.push(row);
    }
    rows
}

/// Union of the two families' class bounds, ascending.
fn union_grid(a: &[FrequencyBin], b: &[FrequencyBin]) -> Vec<(f64, f64)> {
    let mut grid: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
    for bin in a.iter().chain(b) {
        grid.insert(bin.class.lo.to_bits(), (bin.class.lo, bin.class.hi));
    }
    grid.into_values().collect()
}

/// Run the full analysis and write every output file into `out_dir`.
///
/// Outputs: `manifest.json`, `summary.json`, `bins.csv`, `lv_hist.csv`,
/// `zipf.csv`, `zscores.csv`, `correlations.csv`, and `null_bins.csv` when
/// null seeds are configured. Identical config and input give byte-identical
/// files.
pub fn run_pipeline(config: &RunConfig, out_dir: &Path) -> Result<RunReport, PipelineError> {
    validate(config)?;
    let file = File::open(&config.input).map_err(|source| PipelineError::Input {
        path: config.input.clone(),
        source,
    })?;
    let (log, log_summary) = load_log(BufReader::new(file), &config.ingest_options())?;

    // per-family analysis, in configured (role, channel) order
    let mut families: Vec<FamilyResult> = Vec::new();
    for &role in &config.roles {
        for &channel in &config.channels {
            let trains = build_trains(&log, role, channel);
            let analysis = analyze_trains(trains, role, channel, config.freq_mode);
            families.push(analyze_family(analysis, config)?);
        }
    }
    let family = |role: Role, channel: Channel| -> Option<&FamilyResult> {
        families
            .iter()
            .find(|f| f.analysis.role == role && f.analysis.channel == channel)
    };

    // z-values per role: rt and mention against the full trains, then
    // mention against rt
    let mut zscores: Vec<(Role, ZScoreRecord)> = Vec::new();
    for &role in &config.roles {
        for denominator in config.z_denominator.modes() {
            for channel in [Channel::Retweet, Channel::Mention] {
                if let (Some(k), Some(full)) = (family(role, channel), family(role, Channel::All)) {
                    let comparison = match channel {
                        Channel::Retweet => Comparison::FullVsRetweet,
                        _ => Comparison::FullVsMention,
                    };
                    zscores.extend(
                        zscore_rows(k, full, comparison, denominator)
                            .into_iter()
                            .map(|r| (role, r)),
                    );
                }
            }
            if let (Some(mention), Some(retweet)) = (
                family(role, Channel::Mention),
                family(role, Channel::Retweet),
            ) {
                zscores.extend(
                    zscore_rows(mention, retweet, Comparison::MentionVsRetweet, denominator)
                        .into_iter()
                        .map(|r| (role, r)),
                );
            }
        }
    }

    // correlations per role, channel pair, and mode over the union grid
    let mut correlations: Vec<CorrelationRecord> = Vec::new();
    for &role in &config.roles {
        for pair in ChannelPair::ALL {
            let (first_channel, second_channel) = pair.channels();
            let (Some(first), Some(second)) =
                (family(role, first_channel), family(role, second_channel))
            else {
                continue;
            };
            for mode in [PairMode::CrossUser, PairMode::SameUser] {
                for &(lo, hi) in &union_grid(&first.bins, &second.bins) {
                    let record = match mode {
                        PairMode::CrossUser => pearson_cross_user(
                            &first.analysis.records,
                            &second.analysis.records,
                            lo,
                            hi,
                            role,
                            pair,
                        ),
                        PairMode::SameUser => pearson_same_user(
                            &first.analysis.records,
                            &second.analysis.records,
                            lo,
                            hi,
                            role,
                            pair,
                        ),
                    };
                    correlations.push(record);
                }
            }
        }
    }

    // permutation-null summaries
    let mut null_summaries: Vec<(u64, BinSummary)> = Vec::new();
    for &seed in &config.null_seeds {
        let options = NullOptions {
            seed: Seed(seed),
            scope: config.null_scope,
            preservation: config.null_preservation,
        };
        for &role in &config.roles {
            for &channel in &config.channels {
                let permuted = permute_null(&log, role, channel, &options);
                let analysis = analyze_trains(permuted, role, channel, config.freq_mode);
                match bin_by_frequency(&analysis.records, &analysis.excluded, &config.bins) {
                    Ok(binned) => {
                        for bin in binned.bins.iter().filter(|b| !b.members.is_empty()) {
                            null_summaries.push((
                                seed,
                                bin_summary(bin, role, channel, config.lv_hist_width)?,
                            ));
                        }
                    }
                    Err(StatsError::NoRecords) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }

    let report = RunReport {
        log: log_summary,
        families: families
            .iter()
            .map(|f| FamilyReport {
                role: f.analysis.role,
                channel: f.analysis.channel,
                trains: f.analysis.total_trains(),
                lv_records: f.analysis.records.len() as u64,
                excluded: f.analysis.excluded.len() as u64,
                out_of_range: f.out_of_range,
            })
            .collect(),
    };

    // all computation done; write files sequentially
    output::write_all(
        out_dir,
        config,
        &report,
        &families,
        &zscores,
        &correlations,
        &null_summaries,
    )?;
    Ok(report)
}
