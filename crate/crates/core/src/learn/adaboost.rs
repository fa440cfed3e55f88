//! Discrete two-class AdaBoost over axis-aligned decision stumps.
//!
//! Each round searches every feature, every midpoint between consecutive
//! distinct values (plus the two infinite sentinels) and both polarities
//! for the stump with the smallest weighted error.

use std::io::Write;

use rayon::prelude::*;

use super::{header_value, parse_f64, parse_usize, FeatureMatrix, LearnError};
use crate::influence::IrLabel;

/// Error substituted for a perfect stump when computing its weight.
pub const ALPHA_CAP_ERROR: f64 = 1e-10;

/// Rounds whose weighted error is within this distance of 1/2 are treated
/// as no better than chance.
const CHANCE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stump {
    pub feature: usize,
    pub threshold: f64,
    /// `+1` predicts increase above the threshold, `-1` below it.
    pub polarity: i8,
    pub alpha: f64,
}

impl Stump {
    /// Vote in `{-1, +1}`.
    pub fn vote(&self, x: &[f64]) -> f64 {
        let p = f64::from(self.polarity);
        if x[self.feature] > self.threshold {
            p
        } else {
            -p
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StumpEnsemble {
    pub dim: usize,
    pub learning_rate: f64,
    pub n_estimators: usize,
    pub stumps: Vec<Stump>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundStats {
    pub weighted_error: f64,
    pub alpha: f64,
}

fn sign(label: IrLabel) -> f64 {
    match label {
        IrLabel::Increase => 1.0,
        IrLabel::Decrease => -1.0,
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    error: f64,
    feature: usize,
    threshold: f64,
    polarity: i8,
}

fn best_stump_for_feature(data: &FeatureMatrix, weights: &[f64], feature: usize, total: f64) -> Candidate {
    let rows = data.rows();
    let labels = data.labels();
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| rows[a][feature].total_cmp(&rows[b][feature]));

    // Polarity +1 with threshold -inf predicts increase everywhere.
    let mut err_pos: f64 = labels
        .iter()
        .zip(weights)
        .filter(|(l, _)| **l == IrLabel::Decrease)
        .map(|(_, w)| w)
        .sum();
    let consider = |best: &mut Candidate, err_pos: f64, threshold: f64| {
        let err_neg = total - err_pos;
        if err_pos < best.error {
            *best = Candidate {
                error: err_pos,
                feature,
                threshold,
                polarity: 1,
            };
        }
        if err_neg < best.error {
            *best = Candidate {
                error: err_neg,
                feature,
                threshold,
                polarity: -1,
            };
        }
    };
    let mut best = Candidate {
        error: f64::INFINITY,
        feature,
        threshold: f64::NEG_INFINITY,
        polarity: 1,
    };
    consider(&mut best, err_pos, f64::NEG_INFINITY);

    let mut k = 0;
    while k < order.len() {
        let v = rows[order[k]][feature];
        while k < order.len() && rows[order[k]][feature] == v {
            let i = order[k];
            // this row moves to the "at or below threshold" side
            err_pos += sign(labels[i]) * weights[i];
            k += 1;
        }
        let threshold = if k < order.len() {
            let next = rows[order[k]][feature];
            let mid = v + (next - v) / 2.0;
            if mid >= next {
                v
            } else {
                mid
            }
        } else {
            f64::INFINITY
        };
        consider(&mut best, err_pos, threshold);
    }
    best
}

fn best_stump(data: &FeatureMatrix, weights: &[f64]) -> Candidate {
    let total: f64 = weights.iter().sum();
    (0..data.dim())
        .into_par_iter()
        .map(|f| best_stump_for_feature(data, weights, f, total))
        .reduce_with(|a, b| {
            if b.error < a.error || (b.error == a.error && b.feature < a.feature) {
                b
            } else {
                a
            }
        })
        .expect("at least one feature")
}

pub fn train_adaboost(
    data: &FeatureMatrix,
    n_estimators: usize,
    learning_rate: f64,
) -> Result<StumpEnsemble, LearnError> {
    train_adaboost_traced(data, n_estimators, learning_rate).map(|(m, _)| m)
}

/// Trains and also returns the weighted error and weight of every kept round.
pub fn train_adaboost_traced(
    data: &FeatureMatrix,
    n_estimators: usize,
    learning_rate: f64,
) -> Result<(StumpEnsemble, Vec<RoundStats>), LearnError> {
    if data.is_empty() {
        return Err(LearnError::Empty);
    }
    data.require_both_classes()?;
    let n = data.len();
    let mut weights = vec![1.0 / n as f64; n];
    let mut model = StumpEnsemble {
        dim: data.dim(),
        learning_rate,
        n_estimators,
        stumps: Vec::new(),
    };
    let mut trace = Vec::new();
    if data.dim() == 0 {
        return Ok((model, trace));
    }

    for _ in 0..n_estimators {
        let cand = best_stump(data, &weights);
        let mut stump = Stump {
            feature: cand.feature,
            threshold: cand.threshold,
            polarity: cand.polarity,
            alpha: 0.0,
        };
        let total: f64 = weights.iter().sum();
        let miss: f64 = data
            .rows()
            .iter()
            .zip(data.labels())
            .zip(&weights)
            .filter(|((x, &y), _)| stump.vote(x) != sign(y))
            .map(|(_, w)| w)
            .sum();
        let error = miss / total;
        if error >= 0.5 - CHANCE_TOLERANCE {
            break;
        }
        let perfect = error <= 0.0;
        let e = if perfect { ALPHA_CAP_ERROR } else { error };
        stump.alpha = learning_rate * 0.5 * ((1.0 - e) / e).ln();
        model.stumps.push(stump);
        trace.push(RoundStats {
            weighted_error: error,
            alpha: stump.alpha,
        });
        if perfect {
            break;
        }
        for ((w, x), &y) in weights.iter_mut().zip(data.rows()).zip(data.labels()) {
            *w *= (-stump.alpha * sign(y) * stump.vote(x)).exp();
        }
        let z: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= z);
    }
    Ok((model, trace))
}

impl StumpEnsemble {
    pub fn score(&self, x: &[f64]) -> Result<f64, LearnError> {
        if x.len() != self.dim {
            return Err(LearnError::InputDimension {
                got: x.len(),
                expected: self.dim,
            });
        }
        Ok(self.stumps.iter().map(|s| s.alpha * s.vote(x)).sum())
    }

    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "model = adaboost")?;
        writeln!(out, "dim = {}", self.dim)?;
        writeln!(out, "learning_rate = {}", self.learning_rate)?;
        writeln!(out, "n_estimators = {}", self.n_estimators)?;
        writeln!(out, "feature,threshold,polarity,alpha")?;
        for s in &self.stumps {
            writeln!(out, "{},{},{},{}", s.feature, s.threshold, s.polarity, s.alpha)?;
        }
        out.flush()
    }

    pub(super) fn parse(lines: &[String]) -> Result<Self, LearnError> {
        let dim = parse_usize(header_value(lines, "dim")?, "dim")?;
        let learning_rate = parse_f64(header_value(lines, "learning_rate")?, "learning_rate")?;
        let n_estimators = parse_usize(header_value(lines, "n_estimators")?, "n_estimators")?;
        let mut stumps = Vec::new();
        let mut in_table = false;
        for line in lines.iter().map(|l| l.trim()).filter(|l| !l.is_empty()) {
            if line == "feature,threshold,polarity,alpha" {
                in_table = true;
                continue;
            }
            if !in_table {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(LearnError::Format(format!("bad stump `{line}`")));
            }
            let feature = parse_usize(f[0], "feature")?;
            if feature >= dim {
                return Err(LearnError::Format(format!("feature {feature} out of range")));
            }
            let polarity = match f[2].trim() {
                "1" => 1,
                "-1" => -1,
                other => return Err(LearnError::Format(format!("bad polarity `{other}`"))),
            };
            stumps.push(Stump {
                feature,
                threshold: parse_f64(f[1], "threshold")?,
                polarity,
                alpha: parse_f64(f[3], "alpha")?,
            });
        }
        if !in_table {
            return Err(LearnError::Format("missing stump table".into()));
        }
        Ok(StumpEnsemble {
            dim,
            learning_rate,
            n_estimators,
            stumps,
        })
    }
}

/// Sign of the weighted vote; a zero score is `Decrease`.
pub fn predict_adaboost(model: &StumpEnsemble, x: &[f64]) -> Result<IrLabel, LearnError> {
    Ok(if model.score(x)? > 0.0 {
        IrLabel::Increase
    } else {
        IrLabel::Decrease
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learn::Model;
    use rand::Rng;

    fn fm(rows: Vec<Vec<f64>>, labels: Vec<IrLabel>) -> FeatureMatrix {
        FeatureMatrix::new(rows, labels).unwrap()
    }

    use IrLabel::{Decrease as D, Increase as I};

    #[test]
    fn separable_one_dimensional() {
        let data = fm(
            vec![vec![0.1], vec![0.2], vec![0.3], vec![0.7], vec![0.8]],
            vec![D, D, D, I, I],
        );
        let m = train_adaboost(&data, 50, 1.0).unwrap();
        assert_eq!(m.stumps.len(), 1);
        assert_eq!(m.stumps[0].polarity, 1);
        assert!((m.stumps[0].threshold - 0.5).abs() < 1e-12);
        let expected_alpha = 0.5 * ((1.0 - ALPHA_CAP_ERROR) / ALPHA_CAP_ERROR).ln();
        assert_eq!(m.stumps[0].alpha, expected_alpha);
        for (x, y) in data.rows().iter().zip(data.labels()) {
            assert_eq!(predict_adaboost(&m, x).unwrap(), *y);
        }
    }

    #[test]
    fn constant_features_stop_early() {
        let balanced = fm(vec![vec![1.0, 2.0]; 4], vec![D, I, D, I]);
        assert!(train_adaboost(&balanced, 50, 1.0).unwrap().stumps.is_empty());
        let skewed = fm(vec![vec![1.0, 2.0]; 5], vec![D, I, D, D, I]);
        assert!(train_adaboost(&skewed, 50, 1.0).unwrap().stumps.len() <= 1);
    }

    #[test]
    fn single_class_rejected() {
        assert!(matches!(
            train_adaboost(&fm(vec![vec![1.0]], vec![I]), 5, 1.0),
            Err(LearnError::SingleClass)
        ));
    }

    #[test]
    fn vote_examples() {
        let one = StumpEnsemble {
            dim: 1,
            learning_rate: 1.0,
            n_estimators: 1,
            stumps: vec![Stump {
                feature: 0,
                threshold: 0.5,
                polarity: 1,
                alpha: 0.4,
            }],
        };
        assert_eq!(predict_adaboost(&one, &[0.9]).unwrap(), I);
        assert_eq!(predict_adaboost(&one, &[0.5]).unwrap(), D);
        let tie = StumpEnsemble {
            dim: 1,
            learning_rate: 1.0,
            n_estimators: 2,
            stumps: vec![
                Stump {
                    feature: 0,
                    threshold: 0.5,
                    polarity: 1,
                    alpha: 0.7,
                },
                Stump {
                    feature: 0,
                    threshold: 0.5,
                    polarity: -1,
                    alpha: 0.7,
                },
            ],
        };
        assert_eq!(predict_adaboost(&tie, &[0.9]).unwrap(), D);
        assert!(matches!(
            predict_adaboost(&tie, &[0.9, 1.0]),
            Err(LearnError::InputDimension { .. })
        ));
    }

    /// Brute-force best weighted error over all features, all split points
    /// between sorted values, both polarities.
    fn exhaustive_best_error(data: &FeatureMatrix, w: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        for f in 0..data.dim() {
            let mut values: Vec<f64> = data.rows().iter().map(|r| r[f]).collect();
            values.sort_by(f64::total_cmp);
            values.dedup();
            let mut thresholds = vec![f64::NEG_INFINITY, f64::INFINITY];
            thresholds.extend(values.windows(2).map(|p| (p[0] + p[1]) / 2.0));
            for &t in &thresholds {
                for pol in [1.0, -1.0] {
                    let e: f64 = data
                        .rows()
                        .iter()
                        .zip(data.labels())
                        .zip(w)
                        .filter(|((x, &y), _)| (if x[f] > t { pol } else { -pol }) != sign(y))
                        .map(|(_, w)| w)
                        .sum();
                    best = best.min(e / w.iter().sum::<f64>());
                }
            }
        }
        best
    }

    fn interleaved(seed: u64, n: usize) -> FeatureMatrix {
        let mut r = crate::util::rng(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..n {
            let x: f64 = r.random();
            let y: f64 = r.random();
            // checkerboard with noise: no single stump separates it
            let inc = ((x * 3.0) as i32 + (y * 2.0) as i32) % 2 == 0;
            let flip = r.random::<f64>() < 0.05;
            rows.push(vec![x, y]);
            labels.push(if inc != flip { I } else { D });
        }
        fm(rows, labels)
    }

    #[test]
    fn stump_search_matches_exhaustive() {
        let data = interleaved(3, 60);
        let w = vec![1.0 / 60.0; 60];
        let c = best_stump(&data, &w);
        let oracle = exhaustive_best_error(&data, &w);
        assert!((c.error - oracle).abs() < 1e-12);
    }

    #[test]
    fn ensemble_beats_best_single_stump() {
        for seed in 0..5 {
            let data = interleaved(seed, 120);
            let n = data.len();
            let m = train_adaboost(&data, 50, 1.0).unwrap();
            let ens_err = data
                .rows()
                .iter()
                .zip(data.labels())
                .filter(|(x, y)| predict_adaboost(&m, x).unwrap() != **y)
                .count() as f64
                / n as f64;
            let single = exhaustive_best_error(&data, &vec![1.0 / n as f64; n]);
            assert!(ens_err <= single + 1e-12, "seed {seed}: {ens_err} > {single}");
        }
    }

    #[test]
    fn file_round_trip() {
        let m = train_adaboost(&interleaved(9, 50), 10, 1.0).unwrap();
        let mut buf = Vec::new();
        m.write(&mut buf).unwrap();
        assert_eq!(Model::read(buf.as_slice()).unwrap(), Model::AdaBoost(m));
    }
}
