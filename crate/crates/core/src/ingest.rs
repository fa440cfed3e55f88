//! Activity-stream ingestion.
//!
//! Input is line-delimited JSON: one `post` record per thread and one
//! `activity` record per comment, reply or reaction. Records may appear in
//! any order; threads come back with activities sorted by
//! `(timestamp, activity_id)` and validated.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: duplicate activity id `{activity_id}` in post `{post_id}`")]
    DuplicateActivity {
        line: usize,
        post_id: String,
        activity_id: String,
    },
    #[error("line {line}: duplicate post id `{post_id}`")]
    DuplicatePost { line: usize, post_id: String },
    #[error("line {line}: activity `{activity_id}` references unknown post `{post_id}`")]
    UnknownPost {
        line: usize,
        post_id: String,
        activity_id: String,
    },
    #[error("line {line}: activity `{activity_id}` at {timestamp} precedes post creation at {created_at}")]
    BeforePost {
        line: usize,
        activity_id: String,
        timestamp: i64,
        created_at: i64,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActivityKind {
    Comment,
    Reply,
    Reaction,
}

impl ActivityKind {
    /// Comments and replies carry text and can embed URLs.
    pub fn carries_text(self) -> bool {
        matches!(self, ActivityKind::Comment | ActivityKind::Reply)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReactionKind {
    Like,
    Love,
    Haha,
    Wow,
    Sad,
    Angry,
}

impl ReactionKind {
    pub const ALL: [ReactionKind; 6] = [
        ReactionKind::Like,
        ReactionKind::Love,
        ReactionKind::Haha,
        ReactionKind::Wow,
        ReactionKind::Sad,
        ReactionKind::Angry,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Activity {
    pub activity_id: String,
    pub kind: ActivityKind,
    pub reaction_kind: Option<ReactionKind>,
    pub actor_id: String,
    pub timestamp: i64,
    pub parent_id: Option<String>,
    pub text: Option<String>,
}

impl Activity {
    fn check_shape(&self) -> Result<(), String> {
        match (self.kind, self.reaction_kind) {
            (ActivityKind::Reaction, None) => {
                return Err(format!("reaction `{}` has no reaction_kind", self.activity_id))
            }
            (ActivityKind::Comment | ActivityKind::Reply, Some(_)) => {
                return Err(format!("non-reaction `{}` carries a reaction_kind", self.activity_id))
            }
            _ => {}
        }
        if self.kind == ActivityKind::Reaction && self.text.is_some() {
            return Err(format!("reaction `{}` carries text", self.activity_id));
        }
        Ok(())
    }
}

/// Half-open interval `[start, end)` in epoch seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeWindow {
    start: i64,
    end: i64,
}

impl TimeWindow {
    /// Returns `None` unless `start < end`.
    pub fn new(start: i64, end: i64) -> Option<Self> {
        (start < end).then_some(TimeWindow { start, end })
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.end
    }
}

/// An original post and its time-ordered activities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostThread {
    pub post_id: String,
    pub page_id: String,
    pub created_at: i64,
    activities: Vec<Activity>,
}

impl PostThread {
    /// Builds a thread, sorting activities and checking the thread invariants.
    pub fn new(
        post_id: impl Into<String>,
        page_id: impl Into<String>,
        created_at: i64,
        mut activities: Vec<Activity>,
    ) -> Result<Self, String> {
        let post_id = post_id.into();
        let mut seen = HashSet::with_capacity(activities.len());
        for a in &activities {
            a.check_shape()?;
            if a.timestamp < created_at {
                return Err(format!(
                    "activity `{}` at {} precedes post creation at {}",
                    a.activity_id, a.timestamp, created_at
                ));
            }
            if !seen.insert(a.activity_id.as_str()) {
                return Err(format!(
                    "duplicate activity id `{}` in post `{}`",
                    a.activity_id, post_id
                ));
            }
        }
        sort_activities(&mut activities);
        Ok(PostThread {
            post_id,
            page_id: page_id.into(),
            created_at,
            activities,
        })
    }

    pub fn activities(&self) -> &[Activity] {
        &self.activities
    }

    pub fn activity(&self, activity_id: &str) -> Option<&Activity> {
        self.activities.iter().find(|a| a.activity_id == activity_id)
    }

    /// Comments and replies in thread order.
    pub fn text_activities(&self) -> impl Iterator<Item = &Activity> {
        self.activities.iter().filter(|a| a.kind.carries_text())
    }

    /// Same thread with every timestamp moved by `offset` seconds.
    pub fn shifted(&self, offset: i64) -> PostThread {
        let mut out = self.clone();
        out.created_at += offset;
        for a in &mut out.activities {
            a.timestamp += offset;
        }
        out
    }
}

fn sort_activities(activities: &mut [Activity]) {
    activities.sort_by(|a, b| {
        a.timestamp
            .cmp(&b.timestamp)
            .then_with(|| a.activity_id.cmp(&b.activity_id))
    });
}

/// Number of activities of any kind with `start <= timestamp < end`.
pub fn count_activities(thread: &PostThread, window: TimeWindow) -> usize {
    count_in_range(&thread.activities, window.start, window.end)
}

/// Like [`count_activities`] but accepts empty or inverted ranges (count 0).
pub(crate) fn count_in_range(activities: &[Activity], start: i64, end: i64) -> usize {
    if end <= start {
        return 0;
    }
    let lo = activities.partition_point(|a| a.timestamp < start);
    let hi = activities.partition_point(|a| a.timestamp < end);
    hi - lo
}

/// Same count over a sorted list of bare timestamps.
pub(crate) fn count_in_range_ts(times: &[i64], start: i64, end: i64) -> usize {
    if end <= start {
        return 0;
    }
    times.partition_point(|&t| t < end) - times.partition_point(|&t| t < start)
}

/// Top-level comments posted before `created_at + minutes * 60`.
pub fn n_comment(thread: &PostThread, minutes: u32) -> usize {
    let cutoff = thread.created_at + i64::from(minutes) * 60;
    thread
        .activities
        .iter()
        .take_while(|a| a.timestamp < cutoff)
        .filter(|a| a.kind == ActivityKind::Comment)
        .count()
}

/// Total top-level comments in the thread, regardless of time.
pub fn n_comment_all(thread: &PostThread) -> usize {
    thread
        .activities
        .iter()
        .filter(|a| a.kind == ActivityKind::Comment)
        .count()
}

/// Comments that arrived during window `index` (1-based) of `window_minutes`.
pub fn acc_n_comment(thread: &PostThread, index: u32, window_minutes: u32) -> usize {
    assert!(index >= 1, "window index is 1-based");
    n_comment(thread, index * window_minutes) - n_comment(thread, (index - 1) * window_minutes)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum Record {
    Post {
        post_id: String,
        page_id: String,
        created_at: i64,
    },
    Activity {
        post_id: String,
        activity_id: String,
        kind: ActivityKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reaction_kind: Option<ReactionKind>,
        actor_id: String,
        timestamp: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        parent_id: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        text: Option<String>,
    },
}

struct PendingThread {
    page_id: String,
    created_at: i64,
    activities: Vec<(usize, Activity)>,
}

/// Parses a line-delimited record stream into threads.
///
/// Threads are returned in the order their `post` records appear. Blank
/// lines are skipped.
pub fn parse_thread_file<R: BufRead>(reader: R) -> Result<Vec<PostThread>, IngestError> {
    let mut order: Vec<String> = Vec::new();
    let mut posts: HashMap<String, PendingThread> = HashMap::new();
    let mut orphans: Vec<(usize, String, Activity)> = Vec::new();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(&line).map_err(|e| IngestError::Malformed {
            line: line_no,
            message: e.to_string(),
        })?;
        match record {
            Record::Post {
                post_id,
                page_id,
                created_at,
            } => {
                if posts.contains_key(&post_id) {
                    return Err(IngestError::DuplicatePost { line: line_no, post_id });
                }
                order.push(post_id.clone());
                posts.insert(
                    post_id,
                    PendingThread {
                        page_id,
                        created_at,
                        activities: Vec::new(),
                    },
                );
            }
            Record::Activity {
                post_id,
                activity_id,
                kind,
                reaction_kind,
                actor_id,
                timestamp,
                parent_id,
                text,
            } => {
                let activity = Activity {
                    activity_id,
                    kind,
                    reaction_kind,
                    actor_id,
                    timestamp,
                    parent_id,
                    text,
                };
                activity
                    .check_shape()
                    .map_err(|message| IngestError::Malformed { line: line_no, message })?;
                match posts.get_mut(&post_id) {
                    Some(p) => p.activities.push((line_no, activity)),
                    None => orphans.push((line_no, post_id, activity)),
                }
            }
        }
    }

    // Activities may precede their post record in the file.
    for (line, post_id, activity) in orphans {
        match posts.get_mut(&post_id) {
            Some(p) => p.activities.push((line, activity)),
            None => {
                return Err(IngestError::UnknownPost {
                    line,
                    post_id,
                    activity_id: activity.activity_id,
                })
            }
        }
    }

    let mut threads = Vec::with_capacity(order.len());
    for post_id in order {
        let mut pending = posts.remove(&post_id).expect("post recorded in order list");
        pending.activities.sort_by_key(|(line, _)| *line);
        let mut seen = HashSet::with_capacity(pending.activities.len());
        for (line, a) in &pending.activities {
            if !seen.insert(a.activity_id.clone()) {
                return Err(IngestError::DuplicateActivity {
                    line: *line,
                    post_id: post_id.clone(),
                    activity_id: a.activity_id.clone(),
                });
            }
            if a.timestamp < pending.created_at {
                return Err(IngestError::BeforePost {
                    line: *line,
                    activity_id: a.activity_id.clone(),
                    timestamp: a.timestamp,
                    created_at: pending.created_at,
                });
            }
        }
        let mut activities: Vec<Activity> = pending.activities.into_iter().map(|(_, a)| a).collect();
        sort_activities(&mut activities);
        threads.push(PostThread {
            post_id,
            page_id: pending.page_id,
            created_at: pending.created_at,
            activities,
        });
    }
    Ok(threads)
}

/// Writes threads in the line-delimited format read by [`parse_thread_file`].
pub fn write_threads<W: Write>(threads: &[PostThread], mut out: W) -> std::io::Result<()> {
    for t in threads {
        let post = Record::Post {
            post_id: t.post_id.clone(),
            page_id: t.page_id.clone(),
            created_at: t.created_at,
        };
        serde_json::to_writer(&mut out, &post)?;
        out.write_all(b"\n")?;
        for a in &t.activities {
            let rec = Record::Activity {
                post_id: t.post_id.clone(),
                activity_id: a.activity_id.clone(),
                kind: a.kind,
                reaction_kind: a.reaction_kind,
                actor_id: a.actor_id.clone(),
                timestamp: a.timestamp,
                parent_id: a.parent_id.clone(),
                text: a.text.clone(),
            };
            serde_json::to_writer(&mut out, &rec)?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()
}
