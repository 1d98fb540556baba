//! Null and synthetic spike trains.
//!
//! Two kinds of surrogate live here: the permutation null, which reassigns
//! the observed timestamp multiset across users while preserving each
//! user's spike count, and seeded Poisson/Gamma renewal generators used to
//! calibrate the local-variation estimator.
//!
//! Every operation is driven by ChaCha8 seeded from a caller-supplied
//! 64-bit [`Seed`], never from OS entropy, so identical inputs and seeds
//! give bit-identical outputs on every platform.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp, Gamma};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{Channel, EventLog, UserId};
use crate::trains::{Role, SpikeTrain};

/// Seed for the portable ChaCha8 generator behind every randomized
/// operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    pub(crate) fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Seed {
    type Err = std::num::ParseIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(Seed)
    }
}

/// Which event pool the timestamps are shuffled within.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PermutationScope {
    /// Shuffle within the selected (role, channel) event view.
    #[default]
    PerChannel,
    /// Shuffle across all channels of the role, then read off the
    /// requested channel.
    Global,
}

impl fmt::Display for PermutationScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PermutationScope::PerChannel => "per-channel",
            PermutationScope::Global => "global",
        })
    }
}

impl FromStr for PermutationScope {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "per-channel" => Ok(PermutationScope::PerChannel),
            "global" => Ok(PermutationScope::Global),
            other => Err(format!(
                "unknown permutation scope `{other}` (expected per-channel|global)"
            )),
        }
    }
}

/// Whether per-user spike counts survive the shuffle exactly or only in
/// expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountPreservation {
    /// Shuffle timestamps among events; each user keeps its count.
    #[default]
    Exact,
    /// Keep timestamps in place and redraw each event's user from the
    /// empirical count distribution.
    Expected,
}

impl fmt::Display for CountPreservation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountPreservation::Exact => "exact",
            CountPreservation::Expected => "expected",
        })
    }
}

impl FromStr for CountPreservation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(CountPreservation::Exact),
            "expected" => Ok(CountPreservation::Expected),
            other => Err(format!(
                "unknown count preservation `{other}` (expected exact|expected)"
            )),
        }
    }
}

/// Knobs of the permutation null.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullOptions {
    pub seed: Seed,
    pub scope: PermutationScope,
    pub preservation: CountPreservation,
}

impl NullOptions {
    pub fn new(seed: Seed) -> NullOptions {
        NullOptions {
            seed,
            scope: PermutationScope::default(),
            preservation: CountPreservation::default(),
        }
    }
}

/// Shuffled timestamp reassignment before dedup.
///
/// Under the default options the multiset of timestamps in the (role,
/// channel) view is randomly redistributed over its events, so every user
/// keeps exactly its original spike count and the global sorted timestamp
/// multiset is unchanged. Exposed separately from [`permute_null`] so those
/// two properties can be checked before dedup runs.
pub fn permute_view(
    log: &EventLog,
    role: Role,
    channel: Channel,
    options: &NullOptions,
) -> BTreeMap<UserId, SpikeTrain> {
    let pool: Vec<(UserId, Channel, f64)> = log
        .events()
        .iter()
        .filter(|e| match options.scope {
            PermutationScope::PerChannel => channel.includes(e.channel),
            PermutationScope::Global => true,
        })
        .map(|e| {
            let user = match role {
                Role::Active => e.who,
                Role::Passive => e.whom,
            };
            (user, e.channel, e.timestamp as f64)
        })
        .collect();
    if pool.is_empty() {
        return BTreeMap::new();
    }

    let mut rng = options.seed.rng();
    let mut users: Vec<UserId> = pool.iter().map(|&(u, _, _)| u).collect();
    let mut times: Vec<f64> = pool.iter().map(|&(_, _, t)| t).collect();
    match options.preservation {
        CountPreservation::Exact => times.shuffle(&mut rng),
        CountPreservation::Expected => {
            let mut counts: BTreeMap<UserId, u64> = BTreeMap::new();
            for user in &users {
                *counts.entry(*user).or_default() += 1;
            }
            let ids: Vec<UserId> = counts.keys().copied().collect();
            let weights: Vec<u64> = counts.values().copied().collect();
            let dist = WeightedIndex::new(&weights).expect("pool is nonempty");
            for user in users.iter_mut() {
                *user = ids[dist.sample(&mut rng)];
            }
        }
    }

    let mut grouped: BTreeMap<UserId, Vec<f64>> = BTreeMap::new();
    for ((user, time), &(_, event_channel, _)) in users.into_iter().zip(times).zip(&pool) {
        if channel.includes(event_channel) {
            grouped.entry(user).or_default().push(time);
        }
    }
    grouped
        .into_iter()
        .map(|(user, t)| (user, SpikeTrain::new(t)))
        .collect()
}

/// The permutation null: shuffle the (role, channel) timestamp multiset
/// across users, re-sort each train, and apply the one-second dedup, the
/// same order the real-data pipeline uses.
pub fn permute_null(
    log: &EventLog,
    role: Role,
    channel: Channel,
    options: &NullOptions,
) -> BTreeMap<UserId, SpikeTrain> {
    permute_view(log, role, channel, options)
        .into_iter()
        .map(|(user, train)| (user, train.dedup_one_second()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GenError {
    #[error("rate must be positive and finite, got {0}")]
    InvalidRate(f64),
    #[error("shape must be positive and finite, got {0}")]
    InvalidShape(f64),
    #[error("a renewal train needs at least 3 spikes, got {0}")]
    TooFewSpikes(usize),
}

/// Stationary Poisson train: `n` cumulative exponential inter-event
/// intervals at the given event rate.
///
/// Times are real-valued and ascending. Equal neighbors can appear only
/// when an interval underflows the f64 resolution of the running sum; the
/// standard dedup step removes them.
pub fn gen_poisson(rate: f64, n: usize, seed: Seed) -> Result<SpikeTrain, GenError> {
    if !rate.is_finite() || rate <= 0.0 {
        return Err(GenError::InvalidRate(rate));
    }
    if n < 3 {
        return Err(GenError::TooFewSpikes(n));
    }
    let intervals = Exp::new(rate).expect("rate validated");
    let mut rng = seed.rng();
    let mut t = 0.0;
    let times = (0..n)
        .map(|_| {
            t += intervals.sample(&mut rng);
            t
        })
        .collect();
    Ok(SpikeTrain::from_sorted(times))
}

/// Gamma renewal train: `n` i.i.d. Gamma(shape) inter-event intervals
/// scaled so the train's event rate is `rate`.
///
/// shape < 1 yields bursty trains (sample Lv above 1), shape > 1 regular
/// ones (Lv below 1), and shape = 1 is distributionally identical to
/// [`gen_poisson`].
pub fn gen_gamma(shape: f64, rate: f64, n: usize, seed: Seed) -> Result<SpikeTrain, GenError> {
    if !shape.is_finite() || shape <= 0.0 {
        return Err(GenError::InvalidShape(shape));
    }
    if !rate.is_finite() || rate <= 0.0 {
        return Err(GenError::InvalidRate(rate));
    }
    if n < 3 {
        return Err(GenError::TooFewSpikes(n));
    }
    // mean interval = shape * scale = 1/rate
    let intervals = Gamma::new(shape, 1.0 / (shape * rate)).expect("parameters validated");
    let mut rng = seed.rng();
    let mut t = 0.0;
    let times = (0..n)
        .map(|_| {
            t += intervals.sample(&mut rng);
            t
        })
        .collect();
    Ok(SpikeTrain::from_sorted(times))
}
