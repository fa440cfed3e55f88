//! Classifiers that predict a comment's increase/decrease label from its
//! normalized PIV, plus the metrics used to report them.

mod adaboost;
mod gnb;
mod metrics;

pub use adaboost::{
    predict_adaboost, train_adaboost, train_adaboost_traced, RoundStats, Stump, StumpEnsemble, ALPHA_CAP_ERROR,
};
pub use gnb::{predict_gnb, train_gnb, ClassStats, GnbModel, VAR_SMOOTHING};
pub use metrics::{evaluate, ClassMetrics, Metrics};

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use thiserror::Error;

use crate::influence::{IrLabel, IrRecord, Piv};
use crate::util::rng;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("feature matrix has {rows} rows but {labels} labels")]
    LengthMismatch { rows: usize, labels: usize },
    #[error("row {row} has dimension {got}, expected {expected}")]
    Dimension { row: usize, got: usize, expected: usize },
    #[error("row {row} contains a non-finite value")]
    NonFinite { row: usize },
    #[error("training data needs both increase and decrease samples")]
    SingleClass,
    #[error("no samples")]
    Empty,
    #[error("input has dimension {got}, model expects {expected}")]
    InputDimension { got: usize, expected: usize },
    #[error("model file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// L1-normalized PIV; the all-zero vector maps to itself.
pub fn normalize_piv(piv: &Piv) -> Vec<f64> {
    normalize_counts(&piv.components)
}

pub fn normalize_counts(counts: &[u32]) -> Vec<f64> {
    let total: f64 = counts.iter().map(|&c| f64::from(c)).sum();
    if total == 0.0 {
        return vec![0.0; counts.len()];
    }
    counts.iter().map(|&c| f64::from(c) / total).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    rows: Vec<Vec<f64>>,
    labels: Vec<IrLabel>,
    dim: usize,
}

impl FeatureMatrix {
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<IrLabel>) -> Result<Self, LearnError> {
        if rows.len() != labels.len() {
            return Err(LearnError::LengthMismatch {
                rows: rows.len(),
                labels: labels.len(),
            });
        }
        let dim = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(LearnError::Dimension {
                    row: i,
                    got: r.len(),
                    expected: dim,
                });
            }
            if r.iter().any(|x| !x.is_finite()) {
                return Err(LearnError::NonFinite { row: i });
            }
        }
        Ok(FeatureMatrix { rows, labels, dim })
    }

    pub fn from_records(records: &[IrRecord]) -> Result<Self, LearnError> {
        FeatureMatrix::new(
            records.iter().map(|r| normalize_piv(&r.piv)).collect(),
            records.iter().map(|r| r.sample.label).collect(),
        )
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn labels(&self) -> &[IrLabel] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn require_both_classes(&self) -> Result<(), LearnError> {
        let inc = self.labels.iter().filter(|&&l| l == IrLabel::Increase).count();
        if inc == 0 || inc == self.labels.len() {
            return Err(LearnError::SingleClass);
        }
        Ok(())
    }

    /// Subsamples the majority class down to the minority size.
    pub fn balanced(&self, seed: u64) -> FeatureMatrix {
        let (mut inc, mut dec): (Vec<usize>, Vec<usize>) =
            (0..self.len()).partition(|&i| self.labels[i] == IrLabel::Increase);
        let keep = inc.len().min(dec.len());
        let mut r = rng(seed);
        inc.shuffle(&mut r);
        dec.shuffle(&mut r);
        let mut idx: Vec<usize> = inc[..keep].iter().chain(&dec[..keep]).copied().collect();
        idx.sort_unstable();
        FeatureMatrix {
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            dim: self.dim,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierKind {
    Gnb,
    AdaBoost,
}

impl ClassifierKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierKind::Gnb => "gnb",
            ClassifierKind::AdaBoost => "adaboost",
        }
    }
}

impl FromStr for ClassifierKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gnb" | "naive_bayes" | "naive-bayes" => Ok(ClassifierKind::Gnb),
            "adaboost" => Ok(ClassifierKind::AdaBoost),
            other => Err(format!("unknown classifier `{other}`")),
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainParams {
    pub n_estimators: usize,
    pub learning_rate: f64,
    /// Subsample the training majority class to the minority size.
    pub balance: bool,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            n_estimators: 50,
            learning_rate: 1.0,
            balance: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Gnb(GnbModel),
    AdaBoost(StumpEnsemble),
}

impl Model {
    pub fn train(
        kind: ClassifierKind,
        data: &FeatureMatrix,
        params: TrainParams,
        seed: u64,
    ) -> Result<Model, LearnError> {
        let balanced;
        let data = if params.balance {
            balanced = data.balanced(seed);
            &balanced
        } else {
            data
        };
        Ok(match kind {
            ClassifierKind::Gnb => Model::Gnb(train_gnb(data)?),
            ClassifierKind::AdaBoost => {
                Model::AdaBoost(train_adaboost(data, params.n_estimators, params.learning_rate)?)
            }
        })
    }

    pub fn kind(&self) -> ClassifierKind {
        match self {
            Model::Gnb(_) => ClassifierKind::Gnb,
            Model::AdaBoost(_) => ClassifierKind::AdaBoost,
        }
    }

    pub fn predict(&self, x: &[f64]) -> Result<IrLabel, LearnError> {
        match self {
            Model::Gnb(m) => predict_gnb(m, x),
            Model::AdaBoost(m) => predict_adaboost(m, x),
        }
    }

    pub fn predict_all(&self, data: &FeatureMatrix) -> Result<Vec<IrLabel>, LearnError> {
        data.rows().iter().map(|r| self.predict(r)).collect()
    }

    pub fn write<W: Write>(&self, out: W) -> std::io::Result<()> {
        match self {
            Model::Gnb(m) => m.write(out),
            Model::AdaBoost(m) => m.write(out),
        }
    }

    /// Reads either model format; the first line names the model type.
    pub fn read<R: BufRead>(input: R) -> Result<Model, LearnError> {
        let lines: Vec<String> = input.lines().collect::<Result<_, _>>()?;
        let header = lines
            .iter()
            .map(|l| l.trim())
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| LearnError::Format("empty model file".into()))?;
        match header {
            "model = gnb" => GnbModel::parse(&lines).map(Model::Gnb),
            "model = adaboost" => StumpEnsemble::parse(&lines).map(Model::AdaBoost),
            other => Err(LearnError::Format(format!("unknown model header `{other}`"))),
        }
    }
}

/// Trains on `train` records and scores predictions on `test` records.
pub fn run_experiment(
    train: &[IrRecord],
    test: &[IrRecord],
    kind: ClassifierKind,
    params: TrainParams,
    seed: u64,
) -> Result<Metrics, LearnError> {
    if train.is_empty() || test.is_empty() {
        return Err(LearnError::Empty);
    }
    let train_m = FeatureMatrix::from_records(train)?;
    let test_m = FeatureMatrix::from_records(test)?;
    let model = Model::train(kind, &train_m, params, seed)?;
    let pred = model.predict_all(&test_m)?;
    evaluate(&pred, test_m.labels())
}

/// Parses `key = value` header lines shared by the model formats.
fn header_value<'a>(lines: &'a [String], key: &str) -> Result<&'a str, LearnError> {
    lines
        .iter()
        .filter_map(|l| l.split_once('='))
        .find(|(k, _)| k.trim() == key)
        .map(|(_, v)| v.trim())
        .ok_or_else(|| LearnError::Format(format!("missing `{key}`")))
}

fn parse_f64(s: &str, what: &str) -> Result<f64, LearnError> {
    crate::util::parse_f64(s).ok_or_else(|| LearnError::Format(format!("bad {what} `{s}`")))
}

fn parse_usize(s: &str, what: &str) -> Result<usize, LearnError> {
    s.trim()
        .parse()
        .map_err(|_| LearnError::Format(format!("bad {what} `{s}`")))
}
