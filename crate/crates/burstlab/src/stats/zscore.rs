//! z-value comparisons of mean local variation between channels within a
//! frequency class.
//!
//! Within a class, z = (mu_k - mu_0) / (sigma_k / sqrt(f_k)) compares a
//! filtered channel k against a reference: the all-channel train family
//! for the within-channel comparisons, or the retweet family when mention
//! is compared across channels.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{BinSummary, FrequencyClass};
use crate::ingest::Channel;

/// Which pair of train families a z-value compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    FullVsRetweet,
    FullVsMention,
    MentionVsRetweet,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::FullVsRetweet => "full_vs_rt",
            Comparison::FullVsMention => "full_vs_mention",
            Comparison::MentionVsRetweet => "mention_vs_rt",
        })
    }
}

/// What the sqrt(f) denominator term counts.
///
/// The standard-error reading divides by the class's user count; the
/// literal alternative divides by the class's mean frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZDenominator {
    #[default]
    UserCount,
    Frequency,
}

impl fmt::Display for ZDenominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZDenominator::UserCount => "user-count",
            ZDenominator::Frequency => "frequency",
        })
    }
}

impl FromStr for ZDenominator {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "user-count" => Ok(ZDenominator::UserCount),
            "frequency" => Ok(ZDenominator::Frequency),
            other => Err(format!(
                "unknown z denominator `{other}` (expected user-count|frequency)"
            )),
        }
    }
}

/// One z-value; `z` is `None` when the statistic is undefined (zero spread
/// or an unpopulated side) rather than fabricated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZScoreRecord {
    /// Class of the filtered channel k (the side whose sigma and f enter).
    pub class: FrequencyClass,
    pub comparison: Comparison,
    pub z: Option<f64>,
    /// The f term actually used under sqrt.
    pub f_term: f64,
    pub denominator: ZDenominator,
}

/// The f term for a summary under the chosen denominator mode.
pub fn f_term(summary: &BinSummary, denominator: ZDenominator) -> f64 {
    match denominator {
        ZDenominator::UserCount => summary.class.member_count as f64,
        ZDenominator::Frequency => summary.class.mean_f().unwrap_or(0.0),
    }
}

fn z_value(
    mu_k: f64,
    sigma_k: f64,
    mu_0: f64,
    f_k: f64,
    class: FrequencyClass,
    comparison: Comparison,
    denominator: ZDenominator,
) -> ZScoreRecord {
    let z = if sigma_k > 0.0 && f_k > 0.0 {
        Some((mu_k - mu_0) / (sigma_k / f_k.sqrt()))
    } else {
        None
    };
    ZScoreRecord {
        class,
        comparison,
        z,
        f_term: f_k,
        denominator,
    }
}

/// Compare a filtered channel (retweet or mention) against the all-channel
/// reference over the same frequency class and role.
pub fn z_channel_vs_full(
    channel_summary: &BinSummary,
    full_summary: &BinSummary,
    f_k: f64,
    denominator: ZDenominator,
) -> ZScoreRecord {
    debug_assert_eq!(channel_summary.role, full_summary.role);
    debug_assert_eq!(full_summary.channel, Channel::All);
    debug_assert_eq!(channel_summary.class.lo, full_summary.class.lo);
    let comparison = match channel_summary.channel {
        Channel::Retweet => Comparison::FullVsRetweet,
        Channel::Mention => Comparison::FullVsMention,
        other => panic!("z against the full train is defined for rt and mention, not {other}"),
    };
    z_value(
        channel_summary.mu_lv,
        channel_summary.sigma_lv,
        full_summary.mu_lv,
        f_k,
        channel_summary.class,
        comparison,
        denominator,
    )
}

/// Compare mention against retweet over the same frequency class and role;
/// mention supplies the spread and f term.
pub fn z_cross_channel(
    mention_summary: &BinSummary,
    retweet_summary: &BinSummary,
    f_at: f64,
    denominator: ZDenominator,
) -> ZScoreRecord {
    debug_assert_eq!(mention_summary.role, retweet_summary.role);
    debug_assert_eq!(mention_summary.channel, Channel::Mention);
    debug_assert_eq!(retweet_summary.channel, Channel::Retweet);
    debug_assert_eq!(mention_summary.class.lo, retweet_summary.class.lo);
    z_value(
        mention_summary.mu_lv,
        mention_summary.sigma_lv,
        retweet_summary.mu_lv,
        f_at,
        mention_summary.class,
        Comparison::MentionVsRetweet,
        denominator,
    )
}
