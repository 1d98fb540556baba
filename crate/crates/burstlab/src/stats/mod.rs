//! Frequency-class statistics over local-variation records.
//!
//! Users are grouped into frequency classes (bins of f), and each class is
//! summarized by the mean, spread, and distribution of its members' local
//! variation. On top of that sit Zipf rank tables, z-value comparisons of
//! channels within a class, and Pearson correlations of local variation
//! across channel pairs.

mod binning;
mod pearson;
mod zipf;
mod zscore;

pub use binning::{
    bin_by_frequency, bin_summary, BinScheme, BinSummary, BinnedRecords, FrequencyBin,
};
pub use pearson::{
    pearson, pearson_cross_user, pearson_same_user, ChannelPair, CorrelationRecord, PairMode,
};
pub use zipf::{zipf_ranks, ZipfRecord};
pub use zscore::{
    f_term, z_channel_vs_full, z_cross_channel, Comparison, ZDenominator, ZScoreRecord,
};

use serde::Serialize;
use thiserror::Error;

/// One frequency class: a half-open interval [lo, hi) of f values, with
/// the member census of the record set it was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyClass {
    pub lo: f64,
    pub hi: f64,
    /// log10 of the mean member frequency; `None` for empty classes.
    pub mean_log10_f: Option<f64>,
    pub member_count: u64,
}

impl FrequencyClass {
    pub fn contains(&self, f: f64) -> bool {
        self.lo <= f && f < self.hi
    }

    /// Mean member frequency in f units.
    pub fn mean_f(&self) -> Option<f64> {
        self.mean_log10_f.map(|m| 10f64.powf(m))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("no records to bin")]
    NoRecords,
    #[error("cannot summarize an empty frequency class")]
    EmptyClass,
    #[error("bin edges must be ascending with at least two entries")]
    InvalidBins,
}
