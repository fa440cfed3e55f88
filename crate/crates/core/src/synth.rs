//! Synthetic thread corpora with known ground truth.
//!
//! Comment arrivals follow a self-exciting process with intensity
//! `λ(t) = μ·exp(−t/τ) + Σ α·exp(−(t − t_e)/ω)` (minutes), simulated by
//! thinning. Every comment draws reactions over the next ten minutes.
//! URL-bearing comments are then planted at chosen life-cycle ranks.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::Rng as _;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;
use thiserror::Error;

use crate::influence::{life_stage, IrLabel, LifeStage};
use crate::ingest::{count_in_range_ts, write_threads, Activity, ActivityKind, PostThread, ReactionKind};
use crate::urlclass::{BlacklistIndex, Category, Severity, UrlLabel, Whitelist};
use crate::util::{derive_seed, parse_f64, rng, Rng};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("thread {post_id}: no free {stage} rank among {slots} comments for a planted URL")]
    Infeasible {
        post_id: String,
        stage: LifeStage,
        slots: usize,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// `count` URL comments of one label planted inside one life-cycle stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantSpec {
    pub label: UrlLabel,
    pub stage: LifeStage,
    pub count: usize,
}

/// Post-plant multipliers: `boost` scales the activity that follows an
/// increase plant, `suppress` is the fraction of reactions kept after a
/// decrease plant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrRegimes {
    pub boost: f64,
    pub suppress: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_threads: usize,
    /// μ, comments per minute at t = 0.
    pub base_rate: f64,
    /// τ in minutes.
    pub decay: f64,
    /// α, jump in intensity per comment.
    pub excitation: f64,
    /// ω in minutes.
    pub excitation_decay: f64,
    /// Expected reactions per comment.
    pub reaction_rate: f64,
    /// Share of organic comments posted as replies.
    pub reply_fraction: f64,
    /// Share of organic comments that link a whitelisted video.
    pub whitelist_url_rate: f64,
    pub horizon_minutes: u32,
    /// Probability that a thread receives the light and critical plants.
    pub target_fraction: f64,
    /// Multiplier on α for target threads.
    pub target_excitation: f64,
    pub plants: Vec<PlantSpec>,
    pub ir_regimes: Option<IrRegimes>,
    /// ΔT for regimes, also the bucket width of the preceding-hour context.
    pub regime_window_seconds: u32,
    /// A plant is an increase plant when the last bucket holds less than
    /// this share of the preceding hour's activity.
    pub regime_threshold: f64,
    pub page_id: String,
    pub start_time: i64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_threads: 100,
            base_rate: 2.0,
            decay: 30.0,
            excitation: 0.5,
            excitation_decay: 1.0,
            reaction_rate: 2.0,
            reply_fraction: 0.2,
            whitelist_url_rate: 0.02,
            horizon_minutes: 360,
            target_fraction: 0.5,
            target_excitation: 1.0,
            plants: Vec::new(),
            ir_regimes: None,
            regime_window_seconds: 60,
            regime_threshold: 0.05,
            page_id: "synth".into(),
            start_time: 1_600_000_000,
            seed: 0,
        }
    }
}

fn parse_plant(v: &str) -> Result<PlantSpec, String> {
    let f: Vec<&str> = v.split(',').map(str::trim).collect();
    if f.len() != 4 {
        return Err(format!("plant needs class,category,stage,count; got `{v}`"));
    }
    let label = UrlLabel::from_parts(f[0], f[1]).map_err(|e| e.to_string())?;
    let stage = LifeStage::from_str(f[2])?;
    let count = f[3].parse().map_err(|_| format!("bad plant count `{}`", f[3]))?;
    Ok(PlantSpec { label, stage, count })
}

impl SynthConfig {
    /// Reads `key = value` lines; `plant` may repeat. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, SynthError> {
        let mut cfg = SynthConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| SynthError::Config { line: idx + 1, message };
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let float = || parse_f64(value).ok_or_else(|| err(format!("bad number `{value}` for {key}")));
            let int = || {
                value
                    .parse::<u64>()
                    .map_err(|_| err(format!("bad integer `{value}` for {key}")))
            };
            match key {
                "n_threads" => cfg.n_threads = int()? as usize,
                "base_rate" => cfg.base_rate = float()?,
                "decay" => cfg.decay = float()?,
                "excitation" => cfg.excitation = float()?,
                "excitation_decay" => cfg.excitation_decay = float()?,
                "reaction_rate" => cfg.reaction_rate = float()?,
                "reply_fraction" => cfg.reply_fraction = float()?,
                "whitelist_url_rate" => cfg.whitelist_url_rate = float()?,
                "horizon" | "horizon_minutes" => {
                    cfg.horizon_minutes = u32::try_from(int()?).map_err(|_| err("horizon too large".into()))?
                }
                "target_fraction" => cfg.target_fraction = float()?,
                "target_excitation" => cfg.target_excitation = float()?,
                "plant" => cfg.plants.push(parse_plant(value).map_err(err)?),
                "ir_regimes" => {
                    if value == "none" {
                        cfg.ir_regimes = None;
                    } else {
                        let (b, s) = value
                            .split_once(',')
                            .ok_or_else(|| err("ir_regimes needs boost,suppress".into()))?;
                        let num = |s: &str| parse_f64(s).ok_or_else(|| err(format!("bad number `{s}`")));
                        cfg.ir_regimes = Some(IrRegimes {
                            boost: num(b)?,
                            suppress: num(s)?,
                        });
                    }
                }
                "regime_window_seconds" => {
                    cfg.regime_window_seconds = u32::try_from(int()?).map_err(|_| err("window too large".into()))?
                }
                "regime_threshold" => cfg.regime_threshold = float()?,
                "page_id" => cfg.page_id = value.to_string(),
                "start_time" => cfg.start_time = value.parse().map_err(|_| err(format!("bad start_time `{value}`")))?,
                "seed" => cfg.seed = int()?,
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, SynthError> {
        SynthConfig::parse(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: &str| Err(SynthError::Invalid(m.to_string()));
        let rates = [
            self.base_rate,
            self.excitation,
            self.reaction_rate,
            self.target_excitation,
        ];
        if rates.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return bad("rates must be finite and non-negative");
        }
        if !(self.decay > 0.0 && self.decay.is_finite())
            || !(self.excitation_decay > 0.0 && self.excitation_decay.is_finite())
        {
            return bad("decay and excitation_decay must be positive");
        }
        for (name, p) in [
            ("reply_fraction", self.reply_fraction),
            ("whitelist_url_rate", self.whitelist_url_rate),
            ("target_fraction", self.target_fraction),
            ("regime_threshold", self.regime_threshold),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(SynthError::Invalid(format!("{name} must lie in [0, 1]")));
            }
        }
        if self.horizon_minutes == 0 {
            return bad("horizon must be positive");
        }
        if self.regime_window_seconds == 0 {
            return bad("regime_window_seconds must be positive");
        }
        if let Some(r) = self.ir_regimes {
            if !(r.boost >= 1.0 && r.boost.is_finite()) || !(0.0..=1.0).contains(&r.suppress) {
                return bad("ir_regimes needs boost >= 1 and suppress in [0, 1]");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantTruth {
    pub comment_id: String,
    pub label: UrlLabel,
    pub stage: LifeStage,
    /// Regime applied after the plant, when regimes are enabled.
    pub direction: Option<IrLabel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreadTruth {
    pub post_id: String,
    /// Most severe planted label; `None` for non-target threads.
    pub worst: Option<Severity>,
    pub plants: Vec<PlantTruth>,
}

impl ThreadTruth {
    pub fn is_target(&self) -> bool {
        self.worst.is_some()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SynthGroundTruth {
    pub threads: Vec<ThreadTruth>,
}

impl SynthGroundTruth {
    /// Non-whitelisted plants, i.e. the comments an IR extraction should find.
    pub fn url_plant_count(&self) -> usize {
        self.threads
            .iter()
            .flat_map(|t| &t.plants)
            .filter(|p| p.label != UrlLabel::Whitelist)
            .count()
    }

    /// One row per plant, plus one row for each thread without plants.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), SynthError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "post_id",
            "target",
            "worst",
            "comment_id",
            "label_class",
            "label_category",
            "stage",
            "direction",
        ])?;
        for t in &self.threads {
            let target = if t.is_target() { "1" } else { "0" };
            let worst = t.worst.map_or("none", Severity::as_str);
            if t.plants.is_empty() {
                w.write_record([t.post_id.as_str(), target, worst, "", "", "", "", ""])?;
            }
            for p in &t.plants {
                w.write_record([
                    t.post_id.as_str(),
                    target,
                    worst,
                    p.comment_id.as_str(),
                    p.label.class_str(),
                    p.label.category().map_or("", Category::as_str),
                    p.stage.as_str(),
                    p.direction.map_or("", IrLabel::as_str),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

pub const FIXTURE_HOSTS_PER_CATEGORY: usize = 4;

fn fixture_host(category: Category, n: usize) -> String {
    format!("{}-site{n}.test", category.as_str())
}

/// The blacklist the generator's planted URLs are drawn from.
pub fn fixture_blacklist() -> BlacklistIndex {
    let mut idx = BlacklistIndex::default();
    for c in Category::ALL {
        for n in 0..FIXTURE_HOSTS_PER_CATEGORY {
            idx.insert(&fixture_host(c, n), c);
        }
    }
    idx
}

pub fn fixture_whitelist() -> Whitelist {
    Whitelist::default_list()
}

const WORDS: &[&str] = &[
    "this", "is", "so", "true", "what", "a", "story", "agree", "no", "way", "people", "really", "think", "news",
    "about", "again", "why", "not", "good", "point", "wow", "read", "more", "here", "sad", "great", "the", "they",
    "never", "ok",
];

fn filler(r: &mut Rng) -> String {
    let n = r.random_range(3..12);
    let mut s = String::new();
    for i in 0..n {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(WORDS[r.random_range(0..WORDS.len())]);
    }
    s
}

fn planted_url(r: &mut Rng, label: UrlLabel) -> String {
    let path = r.random_range(0..100_000u32);
    match label {
        UrlLabel::Whitelist => format!("https://www.youtube.com/watch?v={path}"),
        UrlLabel::Benign => format!("http://benign-{}.example.org/a/{path}", r.random_range(0..50u32)),
        UrlLabel::Blacklisted(c) => {
            let host = fixture_host(c, r.random_range(0..FIXTURE_HOSTS_PER_CATEGORY));
            let host = match r.random_range(0..3u8) {
                0 => host,
                1 => format!("www.{host}"),
                _ => format!("promo.{host}"),
            };
            format!("http://{host}/p/{path}")
        }
    }
}

/// Event times in `[0, horizon)` minutes (Ogata thinning; the intensity only
/// decays between events, so its value just after the last event bounds it).
pub fn simulate_arrivals(r: &mut Rng, mu: f64, tau: f64, alpha: f64, omega: f64, horizon: f64) -> Vec<f64> {
    let mut events = Vec::new();
    let mut t = 0.0;
    let mut excite = 0.0;
    loop {
        let bound = mu * (-t / tau).exp() + excite;
        if bound <= 0.0 {
            break;
        }
        let w: f64 = Exp1.sample(r);
        let s = t + w / bound;
        if s >= horizon {
            break;
        }
        excite *= (-(s - t) / omega).exp();
        t = s;
        let lambda = mu * (-t / tau).exp() + excite;
        if r.random::<f64>() * bound < lambda {
            events.push(t);
            excite += alpha;
        }
    }
    events
}

struct TextEvent {
    ts: i64,
    kind: ActivityKind,
    /// Index of the parent comment among text events.
    parent: Option<usize>,
    text: String,
    actor: u32,
    plant: Option<PlantSpec>,
}

struct ReactionEvent {
    ts: i64,
    parent: usize,
    kind: ReactionKind,
    actor: u32,
}

fn reaction_kind(r: &mut Rng) -> ReactionKind {
    if r.random::<f64>() < 0.7 {
        ReactionKind::Like
    } else {
        ReactionKind::ALL[r.random_range(1..ReactionKind::ALL.len())]
    }
}

fn sorted_times(texts: &[TextEvent], reactions: &[ReactionEvent]) -> Vec<i64> {
    let mut v: Vec<i64> = texts
        .iter()
        .map(|e| e.ts)
        .chain(reactions.iter().map(|e| e.ts))
        .collect();
    v.sort_unstable();
    v
}

fn generate_thread(cfg: &SynthConfig, idx: usize, width: usize) -> Result<(PostThread, ThreadTruth), SynthError> {
    let mut r = rng(derive_seed(cfg.seed, &[idx as u64]));
    let post_id = format!("post{idx:0width$}");
    let created_at = cfg.start_time + idx as i64 * 60;
    let end = created_at + i64::from(cfg.horizon_minutes) * 60;
    let to_ts = |minutes: f64| created_at + (minutes * 60.0).floor() as i64;

    let target_candidate = r.random::<f64>() < cfg.target_fraction;
    let alpha = cfg.excitation * if target_candidate { cfg.target_excitation } else { 1.0 };
    let arrivals = simulate_arrivals(
        &mut r,
        cfg.base_rate,
        cfg.decay,
        alpha,
        cfg.excitation_decay,
        f64::from(cfg.horizon_minutes),
    );

    let specs: Vec<PlantSpec> = cfg
        .plants
        .iter()
        .filter(|p| target_candidate || p.label.severity().is_none())
        .flat_map(|p| std::iter::repeat_n(*p, p.count))
        .collect();
    let slots = arrivals.len() + specs.len();

    // 1-based ranks among all comments and replies
    let mut taken: BTreeSet<usize> = BTreeSet::new();
    let mut plant_at: Vec<Option<PlantSpec>> = vec![None; slots + 1];
    for spec in &specs {
        let free: Vec<usize> = (1..=slots)
            .filter(|&k| !taken.contains(&k) && life_stage(k as f64 / slots as f64) == spec.stage)
            .collect();
        if free.is_empty() {
            return Err(SynthError::Infeasible {
                post_id,
                stage: spec.stage,
                slots,
            });
        }
        let k = free[r.random_range(0..free.len())];
        taken.insert(k);
        plant_at[k] = Some(*spec);
    }

    let mut texts: Vec<TextEvent> = Vec::with_capacity(slots);
    let mut organic = arrivals.iter().map(|&m| to_ts(m)).peekable();
    let mut comment_slots: Vec<usize> = Vec::new();
    for spec in plant_at.iter().skip(1) {
        let prev_ts = texts.last().map_or(created_at, |e| e.ts);
        let actor = r.random_range(0..5000);
        let ev = match spec {
            Some(p) => {
                let next_ts = organic.peek().copied().unwrap_or(end - 1);
                TextEvent {
                    ts: r.random_range(prev_ts..=next_ts.max(prev_ts)),
                    kind: ActivityKind::Comment,
                    parent: None,
                    text: format!("{} {}", filler(&mut r), planted_url(&mut r, p.label)),
                    actor,
                    plant: Some(*p),
                }
            }
            None => {
                let ts = organic.next().expect("one organic arrival per free slot");
                let reply = !comment_slots.is_empty() && r.random::<f64>() < cfg.reply_fraction;
                let mut text = filler(&mut r);
                if r.random::<f64>() < cfg.whitelist_url_rate {
                    text.push(' ');
                    text.push_str(&planted_url(&mut r, UrlLabel::Whitelist));
                }
                TextEvent {
                    ts,
                    kind: if reply {
                        ActivityKind::Reply
                    } else {
                        ActivityKind::Comment
                    },
                    parent: reply.then(|| comment_slots[r.random_range(0..comment_slots.len())]),
                    text,
                    actor,
                    plant: None,
                }
            }
        };
        if ev.kind == ActivityKind::Comment {
            comment_slots.push(texts.len());
        }
        texts.push(ev);
    }

    let mut reactions: Vec<ReactionEvent> = Vec::new();
    if cfg.reaction_rate > 0.0 {
        // exponential gaps at reaction_rate per ten minutes
        let per_second = cfg.reaction_rate / 600.0;
        for (i, e) in texts.iter().enumerate() {
            let mut s = e.ts as f64;
            let stop = ((e.ts + 600) as f64).min(end as f64);
            loop {
                let w: f64 = Exp1.sample(&mut r);
                s += w / per_second;
                if s >= stop {
                    break;
                }
                reactions.push(ReactionEvent {
                    ts: s.floor() as i64,
                    parent: i,
                    kind: reaction_kind(&mut r),
                    actor: r.random_range(0..5000),
                });
            }
        }
    }

    let mut directions: Vec<Option<IrLabel>> = vec![None; texts.len()];
    if let Some(reg) = cfg.ir_regimes {
        let dt = i64::from(cfg.regime_window_seconds);
        for i in 0..texts.len() {
            if texts[i].plant.is_none() {
                continue;
            }
            let t = texts[i].ts;
            let times = sorted_times(&texts, &reactions);
            let last = count_in_range_ts(&times, t - dt, t);
            let hour = count_in_range_ts(&times, t - 60 * dt, t);
            let dir = if hour == 0 || (last as f64) < cfg.regime_threshold * hour as f64 {
                IrLabel::Increase
            } else {
                IrLabel::Decrease
            };
            match dir {
                IrLabel::Increase => {
                    let mean = (reg.boost - 1.0) * (last + 1) as f64;
                    let extra = if mean > 0.0 {
                        Poisson::new(mean).expect("positive mean").sample(&mut r) as usize
                    } else {
                        0
                    };
                    let hi = (t + dt).min(end);
                    for _ in 0..extra {
                        reactions.push(ReactionEvent {
                            ts: r.random_range(t..hi),
                            parent: i,
                            kind: reaction_kind(&mut r),
                            actor: r.random_range(0..5000),
                        });
                    }
                }
                IrLabel::Decrease => {
                    reactions.retain(|e| e.ts < t || e.ts >= t + dt || r.random::<f64>() < reg.suppress);
                }
            }
            directions[i] = Some(dir);
        }
    }

    assemble(cfg, post_id, created_at, texts, reactions, directions)
}

fn assemble(
    cfg: &SynthConfig,
    post_id: String,
    created_at: i64,
    texts: Vec<TextEvent>,
    reactions: Vec<ReactionEvent>,
    directions: Vec<Option<IrLabel>>,
) -> Result<(PostThread, ThreadTruth), SynthError> {
    // Text events first so that equal timestamps keep their rank order, then
    // ids numbered in final order so id order agrees with it.
    let mut order: Vec<(i64, usize)> = texts
        .iter()
        .enumerate()
        .map(|(i, e)| (e.ts, i))
        .chain(reactions.iter().enumerate().map(|(j, e)| (e.ts, texts.len() + j)))
        .collect();
    order.sort_by_key(|&(ts, _)| ts);
    let width = order.len().to_string().len().max(4);
    let mut text_ids = vec![String::new(); texts.len()];
    for (pos, &(_, i)) in order.iter().enumerate() {
        if i < texts.len() {
            text_ids[i] = format!("a{pos:0width$}");
        }
    }
    let mut acts = Vec::with_capacity(order.len());
    for (pos, &(ts, i)) in order.iter().enumerate() {
        let activity_id = format!("a{pos:0width$}");
        acts.push(if i < texts.len() {
            let e = &texts[i];
            Activity {
                activity_id,
                kind: e.kind,
                reaction_kind: None,
                actor_id: format!("u{}", e.actor),
                timestamp: ts,
                parent_id: e.parent.map(|p| text_ids[p].clone()),
                text: Some(e.text.clone()),
            }
        } else {
            let e = &reactions[i - texts.len()];
            Activity {
                activity_id,
                kind: ActivityKind::Reaction,
                reaction_kind: Some(e.kind),
                actor_id: format!("u{}", e.actor),
                timestamp: ts,
                parent_id: Some(text_ids[e.parent].clone()),
                text: None,
            }
        });
    }
    let plants: Vec<PlantTruth> = texts
        .iter()
        .enumerate()
        .filter_map(|(i, e)| {
            e.plant.map(|p| PlantTruth {
                comment_id: text_ids[i].clone(),
                label: p.label,
                stage: p.stage,
                direction: directions[i],
            })
        })
        .collect();
    let worst = plants.iter().filter_map(|p| p.label.severity()).max();
    let thread =
        PostThread::new(post_id.clone(), cfg.page_id.clone(), created_at, acts).map_err(SynthError::Invalid)?;
    Ok((thread, ThreadTruth { post_id, worst, plants }))
}

/// Generates `cfg.n_threads` threads in parallel; the output depends only on
/// the config, never on the number of workers.
pub fn generate(cfg: &SynthConfig) -> Result<(Vec<PostThread>, SynthGroundTruth), SynthError> {
    cfg.validate()?;
    let width = cfg.n_threads.saturating_sub(1).to_string().len().max(4);
    let results: Vec<_> = (0..cfg.n_threads)
        .into_par_iter()
        .map(|i| generate_thread(cfg, i, width))
        .collect();
    let mut threads = Vec::with_capacity(results.len());
    let mut truth = SynthGroundTruth::default();
    for res in results {
        let (t, tt) = res?;
        threads.push(t);
        truth.threads.push(tt);
    }
    Ok((threads, truth))
}

/// Writes threads in the line-delimited corpus format.
pub fn emit(threads: &[PostThread], path: &Path) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    write_threads(threads, &mut out)?;
    out.flush()
}

impl SynthConfig {
    /// Renders the config back to the text format read by [`parse`](Self::parse).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n_threads = {}", self.n_threads);
        let _ = writeln!(s, "base_rate = {}", self.base_rate);
        let _ = writeln!(s, "decay = {}", self.decay);
        let _ = writeln!(s, "excitation = {}", self.excitation);
        let _ = writeln!(s, "excitation_decay = {}", self.excitation_decay);
        let _ = writeln!(s, "reaction_rate = {}", self.reaction_rate);
        let _ = writeln!(s, "reply_fraction = {}", self.reply_fraction);
        let _ = writeln!(s, "whitelist_url_rate = {}", self.whitelist_url_rate);
        let _ = writeln!(s, "horizon = {}", self.horizon_minutes);
        let _ = writeln!(s, "target_fraction = {}", self.target_fraction);
        let _ = writeln!(s, "target_excitation = {}", self.target_excitation);
        for p in &self.plants {
            let cat = p.label.category().map_or("-", Category::as_str);
            let _ = writeln!(s, "plant = {},{},{},{}", p.label.class_str(), cat, p.stage, p.count);
        }
        match self.ir_regimes {
            Some(r) => {
                let _ = writeln!(s, "ir_regimes = {},{}", r.boost, r.suppress);
            }
            None => {
                let _ = writeln!(s, "ir_regimes = none");
            }
        }
        let _ = writeln!(s, "regime_window_seconds = {}", self.regime_window_seconds);
        let _ = writeln!(s, "regime_threshold = {}", self.regime_threshold);
        let _ = writeln!(s, "page_id = {}", self.page_id);
        let _ = writeln!(s, "start_time = {}", self.start_time);
        let _ = writeln!(s, "seed = {}", self.seed);
        s
    }
}
