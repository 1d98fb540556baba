//! Zipf rank tables of user frequencies.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::ingest::UserId;

/// One rank entry: f is non-increasing in rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ZipfRecord {
    pub rank: u64,
    pub user: UserId,
    pub f: u64,
}

/// Rank users from high f to low; ties break by ascending user id so the
/// table is deterministic.
pub fn zipf_ranks(freqs: &BTreeMap<UserId, u64>) -> Vec<ZipfRecord> {
    let mut entries: Vec<(UserId, u64)> = freqs.iter().map(|(&u, &f)| (u, f)).collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    entries
        .into_iter()
        .enumerate()
        .map(|(i, (user, f))| ZipfRecord {
            rank: i as u64 + 1,
            user,
            f,
        })
        .collect()
}
