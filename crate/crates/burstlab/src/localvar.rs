//! Local variation of a spike train.
//!
//! For an ordered train with inter-event intervals d_1, ..., d_{N-1} the
//! statistic is
//!
//! ```text
//! Lv = 3/(N-2) * sum_i ((d_{i+1} - d_i) / (d_{i+1} + d_i))^2
//! ```
//!
//! comparing each interval with its neighbor, so the value reflects local
//! rate fluctuations rather than the global rate. Lv sits near 1 for
//! Poisson-like irregular trains, approaches 3 when bursts dominate, and
//! falls toward 0 for regular (clock-like) trains. The sum runs over the
//! N - 2 interior spikes, hence the N >= 3 requirement.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{Channel, UserId};
use crate::trains::{Role, SpikeTrain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LvError {
    #[error("train has {n} spikes, local variation needs at least 3")]
    TooFewSpikes { n: u64 },
    #[error("non-positive inter-event interval at index {index} (dedup the train first)")]
    ZeroInterval { index: usize },
}

/// Local variation of an ordered, deduplicated timestamp sequence.
///
/// Timestamps may be integer-valued; arithmetic is double precision and the
/// summation runs in input order. Scale and translation of the timestamps
/// leave the value unchanged, and every valid result lies in [0, 3).
pub fn local_variation(times: &[f64]) -> Result<f64, LvError> {
    let n = times.len();
    if n < 3 {
        return Err(LvError::TooFewSpikes { n: n as u64 });
    }
    let mut intervals = Vec::with_capacity(n - 1);
    for (index, pair) in times.windows(2).enumerate() {
        let d = pair[1] - pair[0];
        if d <= 0.0 {
            return Err(LvError::ZeroInterval { index });
        }
        intervals.push(d);
    }
    let mut sum = 0.0;
    for pair in intervals.windows(2) {
        let (backward, forward) = (pair[0], pair[1]);
        let ratio = (forward - backward) / (forward + backward);
        sum += ratio * ratio;
    }
    Ok(3.0 * sum / (n - 2) as f64)
}

/// [`local_variation`] over a train.
pub fn local_variation_train(train: &SpikeTrain) -> Result<f64, LvError> {
    local_variation(train.times())
}

/// Local-variation result for one included train.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LvRecord {
    pub user: UserId,
    /// Train frequency f (spike count under the configured counting mode).
    pub n: u64,
    pub lv: f64,
}

/// Train skipped by the local-variation pass, with the reason.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExcludedTrain {
    pub user: UserId,
    pub n: u64,
    #[serde(skip)]
    pub reason: LvError,
}

/// Whether the reported frequency counts spikes before or after the
/// one-second dedup. Post-dedup keeps frequency classes and Lv describing
/// the same object and is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FreqMode {
    #[default]
    PostDedup,
    PreDedup,
}

impl fmt::Display for FreqMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FreqMode::PostDedup => "post-dedup",
            FreqMode::PreDedup => "pre-dedup",
        })
    }
}

impl FromStr for FreqMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "post-dedup" => Ok(FreqMode::PostDedup),
            "pre-dedup" => Ok(FreqMode::PreDedup),
            other => Err(format!(
                "unknown frequency mode `{other}` (expected post-dedup|pre-dedup)"
            )),
        }
    }
}

/// Local-variation results for one (role, channel) train family.
#[derive(Debug, Clone, PartialEq)]
pub struct LvAnalysis {
    pub role: Role,
    pub channel: Channel,
    pub records: Vec<LvRecord>,
    pub excluded: Vec<ExcludedTrain>,
}

impl LvAnalysis {
    pub fn total_trains(&self) -> u64 {
        (self.records.len() + self.excluded.len()) as u64
    }

    /// Frequencies of all trains, included and excluded.
    pub fn frequencies(&self) -> BTreeMap<UserId, u64> {
        self.records
            .iter()
            .map(|r| (r.user, r.n))
            .chain(self.excluded.iter().map(|e| (e.user, e.n)))
            .collect()
    }
}

/// Dedup every train and compute Lv, in parallel across users.
///
/// Results are ordered by user id regardless of the parallel schedule.
/// Trains that fail the N >= 3 precondition land in `excluded` rather than
/// being silently dropped.
pub fn analyze_trains(
    trains: BTreeMap<UserId, SpikeTrain>,
    role: Role,
    channel: Channel,
    freq_mode: FreqMode,
) -> LvAnalysis {
    let entries: Vec<(UserId, SpikeTrain)> = trains.into_iter().collect();
    let outcomes: Vec<(UserId, u64, Result<f64, LvError>)> = entries
        .into_par_iter()
        .map(|(user, train)| {
            let n_pre = train.n();
            let deduped = train.dedup_one_second();
            let n = match freq_mode {
                FreqMode::PostDedup => deduped.n(),
                FreqMode::PreDedup => n_pre,
            };
            (user, n, local_variation_train(&deduped))
        })
        .collect();

    let mut records = Vec::new();
    let mut excluded = Vec::new();
    for (user, n, outcome) in outcomes {
        match outcome {
            Ok(lv) => records.push(LvRecord { user, n, lv }),
            Err(reason) => excluded.push(ExcludedTrain { user, n, reason }),
        }
    }
    LvAnalysis {
        role,
        channel,
        records,
        excluded,
    }
}
