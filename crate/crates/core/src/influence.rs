//! Per-comment temporal influence features.
//!
//! The influence ratio compares activity in the window after a comment with
//! activity in the window before it (the comment itself counts toward the
//! preceding window, so the denominator is never zero). The preceding
//! influenced vector (PIV) holds per-bucket activity counts over the
//! stretch before the comment, most recent bucket first.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::ingest::{count_in_range, Activity, PostThread};
use crate::urlclass::{classify_text, BlacklistIndex, UrlLabel, Whitelist};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InfluenceError {
    #[error("no comment or reply `{comment_id}` in post `{post_id}`")]
    UnknownComment { post_id: String, comment_id: String },
    #[error("window width must be positive")]
    ZeroWindow,
    #[error("vector length must be positive")]
    ZeroLength,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IrLabel {
    Decrease,
    Increase,
}

impl IrLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            IrLabel::Decrease => "decrease",
            IrLabel::Increase => "increase",
        }
    }
}

impl FromStr for IrLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "decrease" => Ok(IrLabel::Decrease),
            "increase" => Ok(IrLabel::Increase),
            other => Err(format!("unknown IR label `{other}`")),
        }
    }
}

impl fmt::Display for IrLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LifeStage {
    RapidGrowth,
    SlowDecay,
    Dormancy,
}

impl LifeStage {
    pub const ALL: [LifeStage; 3] = [LifeStage::RapidGrowth, LifeStage::SlowDecay, LifeStage::Dormancy];

    pub fn as_str(self) -> &'static str {
        match self {
            LifeStage::RapidGrowth => "rapid_growth",
            LifeStage::SlowDecay => "slow_decay",
            LifeStage::Dormancy => "dormancy",
        }
    }

    /// Whether a position ratio falls inside this stage's band.
    pub fn contains(self, ratio: f64) -> bool {
        life_stage(ratio) == self
    }
}

impl FromStr for LifeStage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace(['-', ' '], "_").as_str() {
            "rapid_growth" | "rapidgrowth" => Ok(LifeStage::RapidGrowth),
            "slow_decay" | "slowdecay" => Ok(LifeStage::SlowDecay),
            "dormancy" => Ok(LifeStage::Dormancy),
            other => Err(format!("unknown stage `{other}`")),
        }
    }
}

impl fmt::Display for LifeStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const RAPID_GROWTH_END: f64 = 0.50;
pub const SLOW_DECAY_END: f64 = 0.85;

pub fn life_stage(position_ratio: f64) -> LifeStage {
    if position_ratio < RAPID_GROWTH_END {
        LifeStage::RapidGrowth
    } else if position_ratio < SLOW_DECAY_END {
        LifeStage::SlowDecay
    } else {
        LifeStage::Dormancy
    }
}

/// `Increase` only for strictly positive ratios.
pub fn ir_label(ir: f64) -> IrLabel {
    if ir > 0.0 {
        IrLabel::Increase
    } else {
        IrLabel::Decrease
    }
}

/// Raw window counts behind an influence ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IrCounts {
    /// Activities in `[t, t + ΔT)` other than the comment.
    pub upcoming: usize,
    /// Activities in `[t − ΔT, t)` plus one for the comment.
    pub preceding: usize,
}

impl IrCounts {
    /// `ln(upcoming / preceding)`, negative infinity when nothing follows.
    pub fn ratio(&self) -> f64 {
        if self.upcoming == 0 {
            f64::NEG_INFINITY
        } else {
            (self.upcoming as f64 / self.preceding as f64).ln()
        }
    }
}

fn locate<'a>(thread: &'a PostThread, comment_id: &str) -> Result<&'a Activity, InfluenceError> {
    thread
        .activities()
        .iter()
        .find(|a| a.activity_id == comment_id && a.kind.carries_text())
        .ok_or_else(|| InfluenceError::UnknownComment {
            post_id: thread.post_id.clone(),
            comment_id: comment_id.to_string(),
        })
}

pub fn ir_counts(thread: &PostThread, comment_id: &str, delta_t_seconds: u32) -> Result<IrCounts, InfluenceError> {
    if delta_t_seconds == 0 {
        return Err(InfluenceError::ZeroWindow);
    }
    let c = locate(thread, comment_id)?;
    let t = c.timestamp;
    let dt = i64::from(delta_t_seconds);
    let acts = thread.activities();
    Ok(IrCounts {
        upcoming: count_in_range(acts, t, t + dt) - 1,
        preceding: count_in_range(acts, t - dt, t) + 1,
    })
}

pub fn influence_ratio(thread: &PostThread, comment_id: &str, delta_t_seconds: u32) -> Result<f64, InfluenceError> {
    ir_counts(thread, comment_id, delta_t_seconds).map(|c| c.ratio())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piv {
    pub delta_t_seconds: u32,
    /// `components[i]` counts activities in `[t − (i+1)·δT, t − i·δT)`.
    pub components: Vec<u32>,
}

impl Piv {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.components.iter().map(|&c| u64::from(c)).sum()
    }
}

pub fn compute_piv(
    thread: &PostThread,
    comment_id: &str,
    delta_t_seconds: u32,
    k: usize,
) -> Result<Piv, InfluenceError> {
    if delta_t_seconds == 0 {
        return Err(InfluenceError::ZeroWindow);
    }
    if k == 0 {
        return Err(InfluenceError::ZeroLength);
    }
    let c = locate(thread, comment_id)?;
    Ok(piv_at(thread.activities(), c.timestamp, delta_t_seconds, k))
}

pub(crate) fn piv_at(activities: &[Activity], t: i64, delta_t_seconds: u32, k: usize) -> Piv {
    let dt = i64::from(delta_t_seconds);
    let components = (1..=k as i64)
        .map(|i| count_in_range(activities, t - i * dt, t - (i - 1) * dt) as u32)
        .collect();
    Piv {
        delta_t_seconds,
        components,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrSample {
    pub post_id: String,
    pub comment_id: String,
    pub ir: f64,
    pub label: IrLabel,
    pub stage: LifeStage,
    pub position_ratio: f64,
    pub elapsed_since_prev_seconds: Option<i64>,
}

/// Influence features for one URL-bearing comment.
#[derive(Debug, Clone, PartialEq)]
pub struct IrRecord {
    pub piv: Piv,
    pub sample: IrSample,
    pub url_label: UrlLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IrParams {
    pub delta_t_seconds: u32,
    pub k: usize,
}

impl Default for IrParams {
    fn default() -> Self {
        IrParams {
            delta_t_seconds: 60,
            k: 60,
        }
    }
}

/// One record per comment or reply that carries at least one non-whitelisted
/// URL. Output is ordered by post id, then by position in the thread.
///
/// Position ratios rank a comment among all comments and replies of its
/// thread; elapsed time is measured from the previous comment or reply.
pub fn extract_ir_dataset(
    threads: &[PostThread],
    whitelist: &Whitelist,
    index: &BlacklistIndex,
    params: IrParams,
) -> Result<Vec<IrRecord>, InfluenceError> {
    if params.delta_t_seconds == 0 {
        return Err(InfluenceError::ZeroWindow);
    }
    if params.k == 0 {
        return Err(InfluenceError::ZeroLength);
    }
    let mut order: Vec<&PostThread> = threads.iter().collect();
    order.sort_by(|a, b| a.post_id.cmp(&b.post_id));
    let per_thread: Vec<Vec<IrRecord>> = order
        .par_iter()
        .map(|t| thread_records(t, whitelist, index, params))
        .collect();
    Ok(per_thread.into_iter().flatten().collect())
}

fn thread_records(
    thread: &PostThread,
    whitelist: &Whitelist,
    index: &BlacklistIndex,
    params: IrParams,
) -> Vec<IrRecord> {
    let acts = thread.activities();
    let dt = i64::from(params.delta_t_seconds);
    let total = thread.text_activities().count();
    let mut out = Vec::new();
    let mut prev_ts: Option<i64> = None;
    let mut rank = 0usize;
    for a in acts.iter().filter(|a| a.kind.carries_text()) {
        rank += 1;
        let elapsed = prev_ts.map(|p| a.timestamp - p);
        prev_ts = Some(a.timestamp);
        let Some(label) = a.text.as_deref().and_then(|t| classify_text(t, whitelist, index)) else {
            continue;
        };
        if label == UrlLabel::Whitelist {
            continue;
        }
        let t = a.timestamp;
        let counts = IrCounts {
            upcoming: count_in_range(acts, t, t + dt) - 1,
            preceding: count_in_range(acts, t - dt, t) + 1,
        };
        let ir = counts.ratio();
        let position_ratio = rank as f64 / total as f64;
        out.push(IrRecord {
            piv: piv_at(acts, t, params.delta_t_seconds, params.k),
            sample: IrSample {
                post_id: thread.post_id.clone(),
                comment_id: a.activity_id.clone(),
                ir,
                label: ir_label(ir),
                stage: life_stage(position_ratio),
                position_ratio,
                elapsed_since_prev_seconds: elapsed,
            },
            url_label: label,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::testutil::*;
    use crate::urlclass::Category;

    #[test]
    fn symmetric_windows_give_zero() {
        // one activity before (plus the comment) vs two after
        let t = thread(
            0,
            vec![
                reaction("r0", 950, None),
                comment("c", 1000),
                comment("d", 1010),
                reaction("r1", 1059, None),
            ],
        );
        assert_eq!(
            ir_counts(&t, "c", 60).unwrap(),
            IrCounts {
                upcoming: 2,
                preceding: 2
            }
        );
        assert_eq!(influence_ratio(&t, "c", 60).unwrap(), 0.0);
        assert_eq!(ir_label(0.0), IrLabel::Decrease);
    }

    #[test]
    fn ratio_of_eight_to_two() {
        let mut acts = vec![reaction("before", 990, None), comment("c", 1000)];
        for k in 0..8 {
            acts.push(reaction(&format!("r{k}"), 1001 + k * 7, Some("c")));
        }
        // outside both windows
        acts.push(reaction("late", 1060, None));
        acts.push(reaction("early", 939, None));
        let t = thread(0, acts);
        let ir = influence_ratio(&t, "c", 60).unwrap();
        assert_eq!(ir, (8.0f64 / 2.0).ln());
        assert!((ir - 1.3863).abs() < 1e-4);
        assert_eq!(ir_label(ir), IrLabel::Increase);
    }

    #[test]
    fn nothing_after_is_negative_infinity() {
        let t = thread(0, vec![comment("c", 100)]);
        let ir = influence_ratio(&t, "c", 60).unwrap();
        assert_eq!(ir, f64::NEG_INFINITY);
        assert_eq!(ir_label(ir), IrLabel::Decrease);
    }

    #[test]
    fn unknown_comment_errors() {
        let t = thread(0, vec![comment("c", 100), reaction("r", 110, Some("c"))]);
        assert!(matches!(
            influence_ratio(&t, "zz", 60),
            Err(InfluenceError::UnknownComment { .. })
        ));
        assert!(matches!(
            influence_ratio(&t, "r", 60),
            Err(InfluenceError::UnknownComment { .. })
        ));
        assert!(matches!(
            compute_piv(&t, "zz", 60, 60),
            Err(InfluenceError::UnknownComment { .. })
        ));
        assert_eq!(compute_piv(&t, "c", 60, 0), Err(InfluenceError::ZeroLength));
    }

    #[test]
    fn ir_labels() {
        assert_eq!(ir_label(0.7), IrLabel::Increase);
        assert_eq!(ir_label(0.0), IrLabel::Decrease);
        assert_eq!(ir_label(-0.1), IrLabel::Decrease);
        assert_eq!(ir_label(f64::NEG_INFINITY), IrLabel::Decrease);
    }

    #[test]
    fn piv_buckets() {
        let t0 = 10_000;
        let t = thread(
            0,
            vec![
                reaction("a", t0 - 4000, None),
                reaction("b", t0 - 90, None),
                reaction("c", t0 - 30, None),
                comment("x", t0),
                reaction("same", t0, Some("x")),
            ],
        );
        let piv = compute_piv(&t, "x", 60, 60).unwrap();
        assert_eq!(piv.len(), 60);
        let mut expected = vec![0u32; 60];
        expected[0] = 1;
        expected[1] = 1;
        assert_eq!(piv.components, expected);

        let silent = thread(0, vec![comment("x", t0)]);
        assert_eq!(compute_piv(&silent, "x", 60, 60).unwrap().components, vec![0; 60]);
        assert_eq!(compute_piv(&t.shifted(86_400), "x", 60, 60).unwrap(), piv);
    }

    #[test]
    fn piv_before_creation_counts_existing_only() {
        let t = thread(1000, vec![comment("a", 1000), comment("x", 1030)]);
        let piv = compute_piv(&t, "x", 60, 60).unwrap();
        assert_eq!(piv.total(), 1);
    }

    #[test]
    fn stage_bands() {
        assert_eq!(life_stage(470.0 / 942.0), LifeStage::RapidGrowth);
        assert_eq!(life_stage(2802.0 / 2844.0), LifeStage::Dormancy);
        assert_eq!(life_stage(0.60), LifeStage::SlowDecay);
        assert_eq!(life_stage(0.0), LifeStage::RapidGrowth);
        assert_eq!(life_stage(0.5), LifeStage::SlowDecay);
        assert_eq!(life_stage(0.85), LifeStage::Dormancy);
        assert_eq!(life_stage(1.0), LifeStage::Dormancy);
        assert_eq!("slow-decay".parse::<LifeStage>().unwrap(), LifeStage::SlowDecay);
    }

    #[test]
    fn dataset_records() {
        let mut idx = BlacklistIndex::default();
        idx.insert("xxx.test", Category::Porn);
        let wl = Whitelist::default_list();
        let t = PostThread::new(
            "p1",
            "g",
            0,
            vec![
                comment_with_text("a", 60, "plain"),
                comment_with_text("b", 120, "https://benign.org and http://xxx.test/v"),
                comment_with_text("c", 180, "https://youtube.com/watch?v=1"),
                comment_with_text("d", 300, "ok https://benign.org"),
            ],
        )
        .unwrap();
        let none = PostThread::new("p0", "g", 0, vec![comment_with_text("a", 60, "plain")]).unwrap();
        let recs = extract_ir_dataset(&[t, none], &wl, &idx, IrParams::default()).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].url_label, UrlLabel::Blacklisted(Category::Porn));
        assert_eq!(recs[0].sample.comment_id, "b");
        assert_eq!(recs[0].sample.position_ratio, 0.5);
        assert_eq!(recs[0].sample.elapsed_since_prev_seconds, Some(60));
        assert_eq!(recs[0].sample.stage, LifeStage::SlowDecay);
        assert_eq!(recs[1].url_label, UrlLabel::Benign);
        assert_eq!(recs[1].sample.position_ratio, 1.0);
        assert_eq!(recs[1].sample.elapsed_since_prev_seconds, Some(120));
    }
}
