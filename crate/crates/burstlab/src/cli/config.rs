//! Run configuration and the reproducibility manifest.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ingest::{Channel, DirectionConvention, IngestOptions, SelfPolicy, Window};
use crate::localvar::FreqMode;
use crate::nullmodel::{CountPreservation, PermutationScope};
use crate::stats::{BinScheme, ZDenominator};
use crate::trains::Role;

/// Which z denominator modes a run reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZDenominatorChoice {
    UserCount,
    Frequency,
    /// Emit rows for both modes.
    #[default]
    Both,
}

impl ZDenominatorChoice {
    pub fn modes(self) -> Vec<ZDenominator> {
        match self {
            ZDenominatorChoice::UserCount => vec![ZDenominator::UserCount],
            ZDenominatorChoice::Frequency => vec![ZDenominator::Frequency],
            ZDenominatorChoice::Both => vec![ZDenominator::UserCount, ZDenominator::Frequency],
        }
    }
}

impl fmt::Display for ZDenominatorChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZDenominatorChoice::UserCount => "user-count",
            ZDenominatorChoice::Frequency => "frequency",
            ZDenominatorChoice::Both => "both",
        })
    }
}

impl FromStr for ZDenominatorChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "user-count" => Ok(ZDenominatorChoice::UserCount),
            "frequency" => Ok(ZDenominatorChoice::Frequency),
            "both" => Ok(ZDenominatorChoice::Both),
            other => Err(format!(
                "unknown z denominator choice `{other}` (expected user-count|frequency|both)"
            )),
        }
    }
}

/// Everything that defines an `analyze` run. Serialized verbatim as
/// `manifest.json` next to the outputs; re-running from the manifest
/// reproduces the outputs byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub input: PathBuf,
    pub window: Window,
    pub direction: DirectionConvention,
    pub self_policy: SelfPolicy,
    pub strict: bool,
    pub roles: Vec<Role>,
    pub channels: Vec<Channel>,
    pub bins: BinScheme,
    pub lv_hist_width: f64,
    pub freq_mode: FreqMode,
    pub z_denominator: ZDenominatorChoice,
    /// Seeds for permutation-null summaries; empty skips the null pass.
    pub null_seeds: Vec<u64>,
    pub null_scope: PermutationScope,
    pub null_preservation: CountPreservation,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            input: PathBuf::new(),
            window: Window::default(),
            direction: DirectionConvention::default(),
            self_policy: SelfPolicy::default(),
            strict: false,
            roles: Role::BOTH.to_vec(),
            channels: Channel::ANALYSIS_CHANNELS.to_vec(),
            bins: BinScheme::default(),
            lv_hist_width: 0.1,
            freq_mode: FreqMode::default(),
            z_denominator: ZDenominatorChoice::default(),
            null_seeds: Vec::new(),
            null_scope: PermutationScope::default(),
            null_preservation: CountPreservation::default(),
        }
    }
}

impl RunConfig {
    pub fn ingest_options(&self) -> IngestOptions {
        IngestOptions {
            window: self.window,
            direction: self.direction,
            self_policy: self.self_policy,
            strict: self.strict,
        }
    }
}
