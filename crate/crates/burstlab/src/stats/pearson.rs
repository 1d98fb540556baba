//! Pearson correlation of local variation between channel pairs.
//!
//! Cross-user mode asks how similar the Lv values of two independently
//! chosen users from the same frequency class are: both channels' values
//! are sorted descending and paired by rank (unsorted pairing would wash
//! the coefficient out by random matching), truncating the longer side.
//! Same-user mode pairs the two channels' Lv of the same user, no sorting.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::FrequencyClass;
use crate::ingest::{Channel, UserId};
use crate::localvar::LvRecord;
use crate::trains::Role;

/// Sample Pearson correlation of equal-length paired observations.
///
/// `None` when fewer than 2 pairs or either side has zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sum_xy = 0.0;
    let mut sum_xx = 0.0;
    let mut sum_yy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sum_xy += dx * dy;
        sum_xx += dx * dx;
        sum_yy += dy * dy;
    }
    if sum_xx == 0.0 || sum_yy == 0.0 {
        return None;
    }
    Some((sum_xy / (sum_xx * sum_yy).sqrt()).clamp(-1.0, 1.0))
}

/// Channel pair being correlated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelPair {
    FullRetweet,
    FullMention,
    RetweetMention,
}

impl ChannelPair {
    pub const ALL: [ChannelPair; 3] = [
        ChannelPair::FullRetweet,
        ChannelPair::FullMention,
        ChannelPair::RetweetMention,
    ];

    pub fn channels(self) -> (Channel, Channel) {
        match self {
            ChannelPair::FullRetweet => (Channel::All, Channel::Retweet),
            ChannelPair::FullMention => (Channel::All, Channel::Mention),
            ChannelPair::RetweetMention => (Channel::Retweet, Channel::Mention),
        }
    }
}

impl fmt::Display for ChannelPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelPair::FullRetweet => "full_rt",
            ChannelPair::FullMention => "full_mention",
            ChannelPair::RetweetMention => "rt_mention",
        })
    }
}

/// How users from the two channels are paired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMode {
    CrossUser,
    SameUser,
}

impl fmt::Display for PairMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairMode::CrossUser => "cross_user",
            PairMode::SameUser => "same_user",
        })
    }
}

/// One correlation result; `r` is `None` when undefined (fewer than 2
/// pairs or zero variance).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationRecord {
    /// Class census of the first channel in the pair.
    pub class: FrequencyClass,
    pub role: Role,
    pub pair: ChannelPair,
    pub mode: PairMode,
    /// log10 mean frequency of the second channel's members in the class;
    /// the two channels' class means are close but not equal.
    pub other_mean_log10_f: Option<f64>,
    pub r: Option<f64>,
    pub n_pairs: u64,
}

fn in_class(records: &[LvRecord], lo: f64, hi: f64) -> Vec<&LvRecord> {
    records
        .iter()
        .filter(|r| {
            let f = r.n as f64;
            lo <= f && f < hi
        })
        .collect()
}

fn class_stats(members: &[&LvRecord], lo: f64, hi: f64) -> FrequencyClass {
    let mean_log10_f = if members.is_empty() {
        None
    } else {
        let mean_f = members.iter().map(|r| r.n as f64).sum::<f64>() / members.len() as f64;
        Some(mean_f.log10())
    };
    FrequencyClass {
        lo,
        hi,
        mean_log10_f,
        member_count: members.len() as u64,
    }
}

/// Correlate the Lv of two different users drawn from the same frequency
/// class in the two channels: sort each side descending, truncate to the
/// shorter side, pair by rank.
pub fn pearson_cross_user(
    first: &[LvRecord],
    second: &[LvRecord],
    lo: f64,
    hi: f64,
    role: Role,
    pair: ChannelPair,
) -> CorrelationRecord {
    let a = in_class(first, lo, hi);
    let b = in_class(second, lo, hi);
    let class = class_stats(&a, lo, hi);
    let other = class_stats(&b, lo, hi);

    let mut xs: Vec<f64> = a.iter().map(|r| r.lv).collect();
    let mut ys: Vec<f64> = b.iter().map(|r| r.lv).collect();
    xs.sort_by(|p, q| q.total_cmp(p));
    ys.sort_by(|p, q| q.total_cmp(p));
    let n_pairs = xs.len().min(ys.len());
    xs.truncate(n_pairs);
    ys.truncate(n_pairs);

    CorrelationRecord {
        class,
        role,
        pair,
        mode: PairMode::CrossUser,
        other_mean_log10_f: other.mean_log10_f,
        r: pearson(&xs, &ys),
        n_pairs: n_pairs as u64,
    }
}

/// Correlate the two channels' Lv of the same user, over users present in
/// the class in both channels. Identity pairing, in user-id order.
pub fn pearson_same_user(
    first: &[LvRecord],
    second: &[LvRecord],
    lo: f64,
    hi: f64,
    role: Role,
    pair: ChannelPair,
) -> CorrelationRecord {
    let a = in_class(first, lo, hi);
    let b = in_class(second, lo, hi);
    let class = class_stats(&a, lo, hi);
    let other = class_stats(&b, lo, hi);

    let by_user: BTreeMap<UserId, f64> = b.iter().map(|r| (r.user, r.lv)).collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for record in &a {
        if let Some(&lv) = by_user.get(&record.user) {
            xs.push(record.lv);
            ys.push(lv);
        }
    }

    CorrelationRecord {
        class,
        role,
        pair,
        mode: PairMode::SameUser,
        other_mean_log10_f: other.mean_log10_f,
        r: pearson(&xs, &ys),
        n_pairs: xs.len() as u64,
    }
}
