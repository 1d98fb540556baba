//! Event-log ingestion.
//!
//! Input is line-oriented text, one directed interaction per line:
//!
//! ```text
//! userA userB timestamp channelTag
//! ```
//!
//! with whitespace-separated fields, `#`-prefixed comment lines, integer
//! epoch timestamps (GMT), and channel tags `RT`, `MT`, `RE`. Under the
//! default direction convention `userA` is the acting side (who) and
//! `userB` the receiving side (whom); `--direction b-active` flips this
//! for differently-oriented files.

use std::collections::HashSet;
use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default observation window start: 2012-07-01 00:00:00 GMT.
pub const DEFAULT_WINDOW_START: i64 = 1_341_100_800;
/// Default observation window end: 2012-07-07 23:59:59 GMT.
pub const DEFAULT_WINDOW_END: i64 = 1_341_705_599;

/// Opaque numeric user identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UserId(pub u64);

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for UserId {
    type Err = std::num::ParseIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(UserId)
    }
}

/// Interaction channel.
///
/// `All` is an analysis-time aggregate of the three concrete channels;
/// stored events always carry one of `Retweet`, `Mention`, `Reply`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Retweet,
    Mention,
    Reply,
    All,
}

impl Channel {
    /// The three channels events can carry.
    pub const EVENT_CHANNELS: [Channel; 3] = [Channel::Retweet, Channel::Mention, Channel::Reply];

    /// The four analysis channels, aggregate first.
    pub const ANALYSIS_CHANNELS: [Channel; 4] = [
        Channel::All,
        Channel::Retweet,
        Channel::Mention,
        Channel::Reply,
    ];

    /// Tag used in the event-log line format.
    pub fn tag(self) -> &'static str {
        match self {
            Channel::Retweet => "RT",
            Channel::Mention => "MT",
            Channel::Reply => "RE",
            Channel::All => "ALL",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Channel> {
        match tag {
            "RT" => Some(Channel::Retweet),
            "MT" => Some(Channel::Mention),
            "RE" => Some(Channel::Reply),
            _ => None,
        }
    }

    /// Whether events stored on `event_channel` belong to this analysis view.
    pub fn includes(self, event_channel: Channel) -> bool {
        self == Channel::All || self == event_channel
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Channel::Retweet => "rt",
            Channel::Mention => "mention",
            Channel::Reply => "reply",
            Channel::All => "all",
        };
        f.write_str(name)
    }
}

impl FromStr for Channel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rt" | "retweet" => Ok(Channel::Retweet),
            "mention" | "mt" => Ok(Channel::Mention),
            "reply" | "re" => Ok(Channel::Reply),
            "all" => Ok(Channel::All),
            other => Err(format!(
                "unknown channel `{other}` (expected all|rt|mention|reply)"
            )),
        }
    }
}

/// Inclusive observation window in epoch seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub start: i64,
    pub end: i64,
}

impl Window {
    pub fn new(start: i64, end: i64) -> Window {
        Window { start, end }
    }

    pub fn contains(&self, t: i64) -> bool {
        self.start <= t && t <= self.end
    }
}

impl Default for Window {
    fn default() -> Window {
        Window::new(DEFAULT_WINDOW_START, DEFAULT_WINDOW_END)
    }
}

/// One directed, timestamped interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractionEvent {
    pub who: UserId,
    pub whom: UserId,
    pub timestamp: i64,
    pub channel: Channel,
}

/// Which column of the input file is the acting user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DirectionConvention {
    /// First column acts on the second (`userA userB` means A -> B).
    #[default]
    AActive,
    /// Second column acts on the first.
    BActive,
}

impl fmt::Display for DirectionConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DirectionConvention::AActive => "a-active",
            DirectionConvention::BActive => "b-active",
        })
    }
}

impl FromStr for DirectionConvention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a-active" => Ok(DirectionConvention::AActive),
            "b-active" => Ok(DirectionConvention::BActive),
            other => Err(format!(
                "unknown direction `{other}` (expected a-active|b-active)"
            )),
        }
    }
}

/// What to do with events where who == whom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelfPolicy {
    /// Skip self-interactions and count them in the summary.
    #[default]
    Drop,
    Keep,
}

impl fmt::Display for SelfPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelfPolicy::Drop => "drop",
            SelfPolicy::Keep => "keep",
        })
    }
}

impl FromStr for SelfPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "drop" => Ok(SelfPolicy::Drop),
            "keep" => Ok(SelfPolicy::Keep),
            other => Err(format!(
                "unknown self policy `{other}` (expected keep|drop)"
            )),
        }
    }
}

/// Ingestion policy knobs.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct IngestOptions {
    pub window: Window,
    pub direction: DirectionConvention,
    pub self_policy: SelfPolicy,
    /// Fail on the first malformed line instead of skip-and-count.
    pub strict: bool,
}

/// Why a single line failed to parse.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LineError {
    #[error("expected 4 whitespace-separated fields, found {0}")]
    FieldCount(usize),
    #[error("invalid user id `{0}`")]
    BadUserId(String),
    #[error("invalid timestamp `{0}`")]
    BadTimestamp(String),
    #[error("unknown channel tag `{0}`")]
    UnknownChannel(String),
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {source}")]
    Malformed {
        line: u64,
        #[source]
        source: LineError,
    },
    #[error("failed to read event log")]
    Io(#[from] io::Error),
    #[error("no events remain after window and policy filtering")]
    EmptyLog,
}

/// Event counts and distinct user counts for one channel.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelCounts {
    pub events: u64,
    pub who_users: u64,
    pub whom_users: u64,
}

/// One-pass census of a loaded log.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogSummary {
    pub total_events: u64,
    /// Distinct ids appearing in either role, any channel.
    pub total_users: u64,
    pub retweet: ChannelCounts,
    pub mention: ChannelCounts,
    pub reply: ChannelCounts,
    pub malformed_lines: u64,
    pub self_interactions_dropped: u64,
    pub outside_window: u64,
}

impl LogSummary {
    pub fn channel(&self, channel: Channel) -> &ChannelCounts {
        match channel {
            Channel::Retweet => &self.retweet,
            Channel::Mention => &self.mention,
            Channel::Reply => &self.reply,
            Channel::All => panic!("per-channel counts are not kept for the aggregate"),
        }
    }
}

/// A validated, windowed event log sorted ascending by timestamp.
///
/// Ties keep their input order, so the sequence is a deterministic function
/// of (timestamp, input position). The log is immutable once loaded.
#[derive(Debug, Clone, PartialEq)]
pub struct EventLog {
    events: Vec<InteractionEvent>,
    window: Window,
}

impl EventLog {
    pub fn events(&self) -> &[InteractionEvent] {
        &self.events
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Serialize back to the line format (a-active orientation).
    ///
    /// Loading the produced text with default direction reproduces the log
    /// exactly.
    pub fn write_lines<W: Write>(&self, mut w: W) -> io::Result<()> {
        for e in &self.events {
            writeln!(
                w,
                "{} {} {} {}",
                e.who,
                e.whom,
                e.timestamp,
                e.channel.tag()
            )?;
        }
        Ok(())
    }
}

/// Parse one event line under the a-active direction convention.
///
/// The caller is expected to have stripped comments and blank lines.
pub fn parse_line(line: &str) -> Result<InteractionEvent, LineError> {
    let mut fields = line.split_whitespace();
    let (a, b, ts, tag) = match (fields.next(), fields.next(), fields.next(), fields.next()) {
        (Some(a), Some(b), Some(ts), Some(tag)) if fields.next().is_none() => (a, b, ts, tag),
        _ => return Err(LineError::FieldCount(line.split_whitespace().count())),
    };
    let who: UserId = a.parse().map_err(|_| LineError::BadUserId(a.to_string()))?;
    let whom: UserId = b.parse().map_err(|_| LineError::BadUserId(b.to_string()))?;
    let timestamp: i64 = ts
        .parse()
        .map_err(|_| LineError::BadTimestamp(ts.to_string()))?;
    let channel =
        Channel::from_tag(tag).ok_or_else(|| LineError::UnknownChannel(tag.to_string()))?;
    Ok(InteractionEvent {
        who,
        whom,
        timestamp,
        channel,
    })
}

/// Load, filter, and summarize an event log in one pass.
///
/// Comment (`#`) and blank lines are ignored. Malformed lines are skipped
/// and counted unless `options.strict` is set, in which case the first one
/// aborts the load with its line number.
pub fn load_log<R: BufRead>(
    reader: R,
    options: &IngestOptions,
) -> Result<(EventLog, LogSummary), IngestError> {
    let mut events: Vec<InteractionEvent> = Vec::new();
    let mut summary = LogSummary::default();
    // distinct-user tracking: [rt, mention, reply] x (who, whom), plus global
    let mut who_sets: [HashSet<u64>; 3] = Default::default();
    let mut whom_sets: [HashSet<u64>; 3] = Default::default();
    let mut all_users: HashSet<u64> = HashSet::new();

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx as u64 + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut event = match parse_line(trimmed) {
            Ok(event) => event,
            Err(source) => {
                if options.strict {
                    return Err(IngestError::Malformed {
                        line: line_no,
                        source,
                    });
                }
                summary.malformed_lines += 1;
                continue;
            }
        };
        if options.direction == DirectionConvention::BActive {
            std::mem::swap(&mut event.who, &mut event.whom);
        }
        if event.who == event.whom && options.self_policy == SelfPolicy::Drop {
            summary.self_interactions_dropped += 1;
            continue;
        }
        if !options.window.contains(event.timestamp) {
            summary.outside_window += 1;
            continue;
        }

        let ch = match event.channel {
            Channel::Retweet => 0,
            Channel::Mention => 1,
            Channel::Reply => 2,
            Channel::All => unreachable!("parse_line never yields the aggregate channel"),
        };
        who_sets[ch].insert(event.who.0);
        whom_sets[ch].insert(event.whom.0);
        all_users.insert(event.who.0);
        all_users.insert(event.whom.0);
        events.push(event);
    }

    if events.is_empty() {
        return Err(IngestError::EmptyLog);
    }
    // stable sort: equal timestamps keep input order
    events.sort_by_key(|e| e.timestamp);

    summary.total_events = events.len() as u64;
    summary.total_users = all_users.len() as u64;
    for (i, counts) in [
        &mut summary.retweet,
        &mut summary.mention,
        &mut summary.reply,
    ]
    .into_iter()
    .enumerate()
    {
        counts.who_users = who_sets[i].len() as u64;
        counts.whom_users = whom_sets[i].len() as u64;
    }
    for e in &events {
        match e.channel {
            Channel::Retweet => summary.retweet.events += 1,
            Channel::Mention => summary.mention.events += 1,
            Channel::Reply => summary.reply.events += 1,
            Channel::All => unreachable!(),
        }
    }

    Ok((
        EventLog {
            events,
            window: options.window,
        },
        summary,
    ))
}
