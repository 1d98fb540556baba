//! Per-user spike-train construction.
//!
//! Each user is described by up to 8 trains: one per role (active = acting,
//! passive = receiving) and analysis channel (all, retweet, mention, reply).
//! A train is the ascending sequence of event timestamps seen by that
//! (user, role, channel) triple.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ingest::{Channel, EventLog, UserId};

/// Which side of a directed interaction a train describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// The acting (who) side; train count is the user's activity.
    Active,
    /// The receiving (whom) side; train count is the user's popularity.
    Passive,
}

impl Role {
    pub const BOTH: [Role; 2] = [Role::Active, Role::Passive];
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Active => "active",
            Role::Passive => "passive",
        })
    }
}

impl FromStr for Role {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "active" | "who" => Ok(Role::Active),
            "passive" | "whom" => Ok(Role::Passive),
            other => Err(format!("unknown role `{other}` (expected active|passive)")),
        }
    }
}

/// Identifies one spike train within an analysis run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TrainKey {
    pub user: UserId,
    pub role: Role,
    pub channel: Channel,
}

/// Ascending event timestamps of one train.
///
/// Times are kept as f64 seconds. Log-derived trains hold exact integer
/// values (epoch seconds are far below 2^53), synthetic trains hold real
/// values. Runs of equal times are allowed until [`SpikeTrain::dedup_one_second`]
/// collapses them.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeTrain {
    times: Vec<f64>,
}

impl SpikeTrain {
    /// Build from arbitrary times; sorts ascending.
    pub fn new(mut times: Vec<f64>) -> SpikeTrain {
        times.sort_by(f64::total_cmp);
        SpikeTrain { times }
    }

    /// Build from times already sorted ascending.
    pub fn from_sorted(times: Vec<f64>) -> SpikeTrain {
        debug_assert!(times.windows(2).all(|w| w[0] <= w[1]));
        SpikeTrain { times }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn into_times(self) -> Vec<f64> {
        self.times
    }

    /// Spike count N.
    pub fn n(&self) -> u64 {
        self.times.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Collapse each run of equal timestamps to its first spike.
    ///
    /// Integer-second data makes "within one second" mean exact equality.
    /// The result is strictly increasing; applying the operation twice
    /// equals applying it once.
    pub fn dedup_one_second(mut self) -> SpikeTrain {
        self.times.dedup();
        self
    }
}

/// Group event timestamps into per-user trains for one (role, channel) view.
///
/// Active trains collect each event under its who user, passive trains under
/// its whom user; `Channel::All` aggregates the three channels. Trains come
/// out sorted because the log is sorted, and the map iterates in user-id
/// order, so the result is independent of input event order.
pub fn build_trains(log: &EventLog, role: Role, channel: Channel) -> BTreeMap<UserId, SpikeTrain> {
    let mut times: BTreeMap<UserId, Vec<f64>> = BTreeMap::new();
    for event in log.events() {
        if !channel.includes(event.channel) {
            continue;
        }
        let user = match role {
            Role::Active => event.who,
            Role::Passive => event.whom,
        };
        times.entry(user).or_default().push(event.timestamp as f64);
    }
    times
        .into_iter()
        .map(|(user, t)| (user, SpikeTrain::from_sorted(t)))
        .collect()
}

/// Free-function form of [`SpikeTrain::dedup_one_second`].
pub fn dedup_one_second(train: SpikeTrain) -> SpikeTrain {
    train.dedup_one_second()
}

/// Spike count of a train: activity for active trains, popularity for
/// passive ones.
pub fn frequency(train: &SpikeTrain) -> u64 {
    train.n()
}
