#![allow(dead_code)]

//! Shared helpers for the integration and acceptance suites: an
//! independent local-variation oracle, the deterministic synthetic event
//! fixture, and dataset discovery.

use std::path::PathBuf;

use burstlab::ingest::{DEFAULT_WINDOW_END, DEFAULT_WINDOW_START};
use burstlab::nullmodel::{gen_gamma, gen_poisson, Seed};

/// Local variation evaluated directly from the raw timestamps (the tau
/// form), independent of the library's interval-sequence implementation.
pub fn lv_direct(times: &[f64]) -> f64 {
    let n = times.len();
    assert!(n >= 3, "oracle needs at least 3 spikes");
    let mut sum = 0.0;
    for i in 1..n - 1 {
        let forward = times[i + 1] - times[i];
        let backward = times[i] - times[i - 1];
        let ratio = (forward - backward) / (forward + backward);
        sum += ratio * ratio;
    }
    3.0 * sum / (n - 2) as f64
}

/// Tiny deterministic generator for test-local randomness; keeps the test
/// crates free of extra dependencies.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

enum TrainKind {
    Bursty,  // gamma, shape 0.2
    Poisson, // exponential intervals
    Regular, // gamma, shape 10
}

/// A renewal train rescaled to exactly span the default observation
/// window, truncated to integer seconds. Rescaling leaves local variation
/// unchanged.
fn window_train(kind: &TrainKind, n: usize, seed: Seed) -> Vec<i64> {
    let train = match kind {
        TrainKind::Bursty => gen_gamma(0.2, 1.0, n, seed).unwrap(),
        TrainKind::Poisson => gen_poisson(1.0, n, seed).unwrap(),
        TrainKind::Regular => gen_gamma(10.0, 1.0, n, seed).unwrap(),
    };
    let times = train.times();
    let last = *times.last().unwrap();
    let span = (DEFAULT_WINDOW_END - DEFAULT_WINDOW_START) as f64;
    times
        .iter()
        .map(|t| DEFAULT_WINDOW_START + (t / last * span) as i64)
        .collect()
}

/// Ids that absorb the opposite side of generated events, two uses each,
/// so they never reach the 3 spikes needed for a local-variation record.
struct SinkIds {
    next: u64,
    uses: u8,
}

impl SinkIds {
    fn new(start: u64) -> SinkIds {
        SinkIds {
            next: start,
            uses: 0,
        }
    }

    fn take(&mut self) -> u64 {
        if self.uses == 2 {
            self.next += 1;
            self.uses = 0;
        }
        self.uses += 1;
        self.next
    }
}

/// The ~10k-event synthetic fixture.
///
/// Active users all send with bursty timing (three activity tiers), so
/// every populated activity class is bursty. Passive users come in three
/// popularity tiers with bursty, Poisson, and regular receive timing, so
/// the popularity classes reproduce the burst / random / regular regimes
/// at log10 mean frequency below 2.5, between 2.5 and 3, and above 3.
/// Fully deterministic: fixed seeds, fixed id ranges.
pub fn fixture_lines() -> String {
    let mut rng = Lcg(0x5EED_0F13);
    let mut events: Vec<(u64, u64, i64, &'static str)> = Vec::new();

    let mut whom_sink = SinkIds::new(50_000);
    let mut who_sink = SinkIds::new(80_000);
    let channel = |rng: &mut Lcg| -> &'static str {
        let r = rng.next_f64();
        if r < 0.6 {
            "RT"
        } else if r < 0.9 {
            "MT"
        } else {
            "RE"
        }
    };

    // active side: bursty senders in three activity tiers
    let active_tiers: [(u64, u64, usize); 3] =
        [(1001, 1025, 40), (1101, 1108, 150), (1201, 1204, 400)];
    for (first, last, n) in active_tiers {
        for user in first..=last {
            for t in window_train(&TrainKind::Bursty, n, Seed(user)) {
                events.push((user, whom_sink.take(), t, channel(&mut rng)));
            }
        }
    }

    // passive side: three popularity tiers with distinct receive timing
    let passive_tiers: [(u64, u64, usize, TrainKind); 3] = [
        (2001, 2025, 40, TrainKind::Bursty),
        (3001, 3005, 600, TrainKind::Poisson),
        (4001, 4002, 1200, TrainKind::Regular),
    ];
    for (first, last, n, kind) in passive_tiers {
        for user in first..=last {
            for t in window_train(&kind, n, Seed(user)) {
                events.push((who_sink.take(), user, t, channel(&mut rng)));
            }
        }
    }

    events.sort_by_key(|e| e.2);
    let mut lines = String::with_capacity(events.len() * 32);
    for (who, whom, t, tag) in events {
        lines.push_str(&format!("{who} {whom} {t} {tag}\n"));
    }
    lines
}

/// The public Higgs activity file, if available: `BURSTLAB_DATASET` or
/// `data/higgs-activity_time.txt` at the workspace root.
pub fn dataset_path() -> Option<PathBuf> {
    let path = std::env::var_os("BURSTLAB_DATASET")
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/higgs-activity_time.txt")
        });
    path.exists().then_some(path)
}
