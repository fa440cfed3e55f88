//! Bandwagon cascade-size prediction.
//!
//! Threads are summarised by their per-window comment counts. The
//! distribution matrix maps `(window index i, comments so far j)` to the
//! final comment counts of every training thread that passed through that
//! cell; the prediction matrix replaces each multiset with a bootstrap lower
//! bound. Queries for cells never seen in training are unpredictable.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::Rng as _;
use rayon::prelude::*;
use thiserror::Error;

use crate::ingest::{acc_n_comment, n_comment, n_comment_all, PostThread};
use crate::util::{derive_seed, rng};

#[derive(Debug, Error)]
pub enum CascadeError {
    #[error("horizon {horizon} min is not a positive multiple of window {window} min")]
    Misaligned { window: u32, horizon: u32 },
    #[error("final horizon {final_minutes} min is shorter than observation horizon {horizon} min")]
    FinalBeforeHorizon { final_minutes: u32, horizon: u32 },
    #[error("observed time {observed} min is not a positive multiple of window {window} min")]
    MisalignedQuery { observed: u32, window: u32 },
    #[error("bootstrap needs at least one sample")]
    EmptySamples,
    #[error("bootstrap needs at least one resample")]
    NoResamples,
    #[error("percentile {0} outside (0, 100)")]
    BadPercentile(f64),
    #[error("matrix file: {0}")]
    Format(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// When a thread's "final" comment count is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinalHorizon {
    Minutes(u32),
    /// Every comment ever recorded for the thread.
    All,
}

impl FinalHorizon {
    pub fn final_count(self, thread: &PostThread) -> u64 {
        match self {
            FinalHorizon::Minutes(m) => n_comment(thread, m) as u64,
            FinalHorizon::All => n_comment_all(thread) as u64,
        }
    }
}

impl fmt::Display for FinalHorizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinalHorizon::Minutes(m) => write!(f, "{m}"),
            FinalHorizon::All => f.write_str("all"),
        }
    }
}

impl FromStr for FinalHorizon {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(FinalHorizon::All);
        }
        s.parse::<u32>()
            .map(FinalHorizon::Minutes)
            .map_err(|_| format!("expected minutes or `all`, got `{s}`"))
    }
}

/// Windowing shared by matrix construction and queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Windowing {
    pub window_minutes: u32,
    pub horizon_minutes: u32,
    pub final_horizon: FinalHorizon,
}

impl Windowing {
    pub fn new(window_minutes: u32, horizon_minutes: u32, final_horizon: FinalHorizon) -> Result<Self, CascadeError> {
        if window_minutes == 0 || horizon_minutes == 0 || !horizon_minutes.is_multiple_of(window_minutes) {
            return Err(CascadeError::Misaligned {
                window: window_minutes,
                horizon: horizon_minutes,
            });
        }
        if let FinalHorizon::Minutes(f) = final_horizon {
            if f < horizon_minutes {
                return Err(CascadeError::FinalBeforeHorizon {
                    final_minutes: f,
                    horizon: horizon_minutes,
                });
            }
        }
        Ok(Windowing {
            window_minutes,
            horizon_minutes,
            final_horizon,
        })
    }

    pub fn windows(&self) -> u32 {
        self.horizon_minutes / self.window_minutes
    }
}

impl Default for Windowing {
    fn default() -> Self {
        Windowing {
            window_minutes: 5,
            horizon_minutes: 120,
            final_horizon: FinalHorizon::All,
        }
    }
}

/// Discussion atmosphere vector: comments per window over the horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dav {
    pub window_minutes: u32,
    pub values: Vec<usize>,
}

pub fn compute_dav(thread: &PostThread, window_minutes: u32, horizon_minutes: u32) -> Result<Dav, CascadeError> {
    if window_minutes == 0 || !horizon_minutes.is_multiple_of(window_minutes) {
        return Err(CascadeError::Misaligned {
            window: window_minutes,
            horizon: horizon_minutes,
        });
    }
    let values = (1..=horizon_minutes / window_minutes)
        .map(|i| acc_n_comment(thread, i, window_minutes))
        .collect();
    Ok(Dav { window_minutes, values })
}

pub type CellKey = (u32, u64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionMatrix {
    pub windowing: Windowing,
    /// Final counts per cell, sorted ascending.
    cells: BTreeMap<CellKey, Vec<u64>>,
}

impl DistributionMatrix {
    pub fn empty(windowing: Windowing) -> Self {
        DistributionMatrix {
            windowing,
            cells: BTreeMap::new(),
        }
    }

    fn add_thread(&mut self, thread: &PostThread) {
        let w = self.windowing;
        let final_count = w.final_horizon.final_count(thread);
        for i in 1..=w.windows() {
            let j = n_comment(thread, i * w.window_minutes) as u64;
            self.cells.entry((i, j)).or_default().push(final_count);
        }
    }

    fn merge(mut self, other: DistributionMatrix) -> DistributionMatrix {
        for (k, mut v) in other.cells {
            self.cells.entry(k).or_default().append(&mut v);
        }
        self
    }

    pub fn cells(&self) -> &BTreeMap<CellKey, Vec<u64>> {
        &self.cells
    }

    pub fn cell(&self, i: u32, j: u64) -> Option<&[u64]> {
        self.cells.get(&(i, j)).map(Vec::as_slice)
    }

    /// Total number of stored final counts.
    pub fn cardinality(&self) -> usize {
        self.cells.values().map(Vec::len).sum()
    }
}

pub fn build_distribution_matrix(threads: &[PostThread], windowing: Windowing) -> DistributionMatrix {
    let mut d = threads
        .par_iter()
        .fold(
            || DistributionMatrix::empty(windowing),
            |mut acc, t| {
                acc.add_thread(t);
                acc
            },
        )
        .reduce(|| DistributionMatrix::empty(windowing), DistributionMatrix::merge);
    for v in d.cells.values_mut() {
        v.sort_unstable();
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapParams {
    pub resamples: usize,
    pub percentile: f64,
    pub seed: u64,
}

impl Default for BootstrapParams {
    fn default() -> Self {
        BootstrapParams {
            resamples: 1000,
            percentile: 50.0,
            seed: 0,
        }
    }
}

impl BootstrapParams {
    fn validate(&self) -> Result<(), CascadeError> {
        if self.resamples == 0 {
            return Err(CascadeError::NoResamples);
        }
        if !(self.percentile > 0.0 && self.percentile < 100.0) {
            return Err(CascadeError::BadPercentile(self.percentile));
        }
        Ok(())
    }
}

/// Nearest-rank percentile of an ascending slice.
pub fn nearest_rank<T: Copy>(sorted: &[T], percentile: f64) -> T {
    assert!(!sorted.is_empty());
    let n = sorted.len();
    let rank = ((percentile / 100.0) * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// Percentile of resample minima: draws `resamples` same-size resamples with
/// replacement and returns the nearest-rank `percentile` of their minima.
pub fn bootstrap_lower_bound(
    samples: &[u64],
    resamples: usize,
    percentile: f64,
    seed: u64,
) -> Result<u64, CascadeError> {
    if samples.is_empty() {
        return Err(CascadeError::EmptySamples);
    }
    BootstrapParams {
        resamples,
        percentile,
        seed,
    }
    .validate()?;
    let mut sorted = samples.to_vec();
    sorted.sort_unstable();
    Ok(lower_bound_sorted(&sorted, resamples, percentile, seed))
}

fn lower_bound_sorted(sorted: &[u64], resamples: usize, percentile: f64, seed: u64) -> u64 {
    let n = sorted.len();
    if sorted[0] == sorted[n - 1] {
        return sorted[0];
    }
    let mut r = rng(seed);
    // With sorted input the minimum of a resample is the value at its
    // smallest drawn index.
    let mut minima: Vec<u64> = (0..resamples)
        .map(|_| {
            let idx = (0..n).map(|_| r.random_range(0..n)).min().expect("n > 0");
            sorted[idx]
        })
        .collect();
    minima.sort_unstable();
    nearest_rank(&minima, percentile)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionMatrix {
    pub windowing: Windowing,
    pub bootstrap: BootstrapParams,
    cells: BTreeMap<CellKey, u64>,
}

pub fn build_prediction_matrix(
    d: &DistributionMatrix,
    params: BootstrapParams,
) -> Result<PredictionMatrix, CascadeError> {
    params.validate()?;
    let cells = d
        .cells
        .par_iter()
        .map(|(&(i, j), samples)| {
            let seed = derive_seed(params.seed, &[u64::from(i), j]);
            (
                (i, j),
                lower_bound_sorted(samples, params.resamples, params.percentile, seed),
            )
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(PredictionMatrix {
        windowing: d.windowing,
        bootstrap: params,
        cells,
    })
}

impl PredictionMatrix {
    pub fn cells(&self) -> &BTreeMap<CellKey, u64> {
        &self.cells
    }

    /// Lower bound on the final count for a thread with `count` comments at
    /// `observed_minutes`, or `None` when the cell was never observed.
    pub fn predict_final(&self, observed_minutes: u32, count: u64) -> Result<Option<u64>, CascadeError> {
        let window = self.windowing.window_minutes;
        if observed_minutes == 0 || !observed_minutes.is_multiple_of(window) {
            return Err(CascadeError::MisalignedQuery {
                observed: observed_minutes,
                window,
            });
        }
        Ok(self.cells.get(&(observed_minutes / window, count)).copied())
    }

    /// Writes the `i,j,bound` table.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CascadeError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "j", "bound"])?;
        for (&(i, j), &b) in &self.cells {
            w.write_record([i.to_string(), j.to_string(), b.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Provenance sidecar as `key = value` lines.
    pub fn metadata(&self) -> String {
        let w = &self.windowing;
        let b = &self.bootstrap;
        format!(
            "window_min = {}\nhorizon_min = {}\nfinal_min = {}\nresamples = {}\npercentile = {}\nseed = {}\n",
            w.window_minutes, w.horizon_minutes, w.final_horizon, b.resamples, b.percentile, b.seed
        )
    }

    pub fn read<R1: std::io::Read, R2: BufRead>(csv_in: R1, metadata: R2) -> Result<Self, CascadeError> {
        let mut kv = BTreeMap::new();
        for line in metadata.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CascadeError::Format(format!("bad metadata line `{line}`")))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| {
            kv.get(k)
                .cloned()
                .ok_or_else(|| CascadeError::Format(format!("metadata missing `{k}`")))
        };
        let num = |k: &str| -> Result<u32, CascadeError> {
            get(k)?.parse().map_err(|_| CascadeError::Format(format!("bad `{k}`")))
        };
        let final_horizon: FinalHorizon = get("final_min")?.parse().map_err(CascadeError::Format)?;
        let windowing = Windowing::new(num("window_min")?, num("horizon_min")?, final_horizon)?;
        let bootstrap = BootstrapParams {
            resamples: get("resamples")?
                .parse()
                .map_err(|_| CascadeError::Format("bad `resamples`".into()))?,
            percentile: get("percentile")?
                .parse()
                .map_err(|_| CascadeError::Format("bad `percentile`".into()))?,
            seed: get("seed")?
                .parse()
                .map_err(|_| CascadeError::Format("bad `seed`".into()))?,
        };

        let mut rdr = csv::Reader::from_reader(csv_in);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["i", "j", "bound"] {
            return Err(CascadeError::Format("header must be `i,j,bound`".into()));
        }
        let mut cells = BTreeMap::new();
        for rec in rdr.records() {
            let rec = rec?;
            let field = |n: usize| -> Result<u64, CascadeError> {
                rec.get(n)
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| CascadeError::Format(format!("bad row {:?}", rec)))
            };
            cells.insert((field(0)? as u32, field(1)?), field(2)?);
        }
        Ok(PredictionMatrix {
            windowing,
            bootstrap,
            cells,
        })
    }
}

/// Counts for the train-on-one-group, test-on-the-other protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CascadeCv {
    pub precision_hits: usize,
    pub predictable: usize,
    pub total: usize,
}

impl CascadeCv {
    pub fn precision(&self) -> Option<f64> {
        (self.predictable > 0).then(|| self.precision_hits as f64 / self.predictable as f64)
    }

    pub fn predictable_rate(&self) -> Option<f64> {
        (self.total > 0).then(|| self.predictable as f64 / self.total as f64)
    }
}

/// Builds the prediction matrix from `train` and queries every `test`
/// thread at the end of the observation horizon. A predictable thread is a
/// hit when its true final count reaches the predicted lower bound.
pub fn cross_validate(
    train: &[PostThread],
    test: &[PostThread],
    windowing: Windowing,
    params: BootstrapParams,
) -> Result<CascadeCv, CascadeError> {
    let m = build_prediction_matrix(&build_distribution_matrix(train, windowing), params)?;
    let mut cv = CascadeCv {
        total: test.len(),
        ..Default::default()
    };
    let observed = windowing.horizon_minutes;
    for t in test {
        let count = n_comment(t, observed) as u64;
        if let Some(bound) = m.predict_final(observed, count)? {
            cv.predictable += 1;
            if windowing.final_horizon.final_count(t) >= bound {
                cv.precision_hits += 1;
            }
        }
    }
    Ok(cv)
}
