//! Spike-train statistics for directed social-interaction logs.
//!
//! The library turns a timestamped edge list (`who whom epoch CHANNEL`, the
//! layout of the public Higgs Twitter activity file) into per-user
//! communication spike trains and characterizes their temporal structure:
//!
//! - [`ingest`]: parse and validate event logs, census summaries.
//! - [`trains`]: the 8 per-user train families (active/passive x
//!   {all, retweet, mention, reply}), one-second dedup, frequencies.
//! - [`localvar`]: the local-variation statistic of a train.
//! - [`nullmodel`]: permutation surrogates plus seeded Poisson/Gamma
//!   renewal generators for estimator calibration.
//! - [`stats`]: frequency-class binning, Zipf ranks, z-value channel
//!   comparisons, and Pearson correlations of local variation.
//! - [`cli`]: the `burstlab` command-line pipeline and its manifest.
//!
//! All randomized operations take an explicit [`nullmodel::Seed`] and run on
//! ChaCha8, so identical inputs and seeds give bit-identical outputs on any
//! platform.

pub mod cli;
pub mod ingest;
pub mod localvar;
pub mod nullmodel;
pub mod stats;
pub mod trains;

pub use ingest::{Channel, EventLog, InteractionEvent, LogSummary, UserId, Window};
pub use localvar::{local_variation, LvRecord};
pub use nullmodel::Seed;
pub use trains::{Role, SpikeTrain, TrainKey};
