use std::fmt;

use super::LearnError;
use crate::influence::IrLabel;
use crate::util::fmt_g6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

/// Per-class scores (decrease, increase) and their support-weighted average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub decrease: ClassMetrics,
    pub increase: ClassMetrics,
    pub avg: ClassMetrics,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn class_metrics(pred: &[IrLabel], truth: &[IrLabel], class: IrLabel) -> ClassMetrics {
    let mut tp = 0;
    let mut predicted = 0;
    let mut support = 0;
    for (&p, &t) in pred.iter().zip(truth) {
        if p == class {
            predicted += 1;
        }
        if t == class {
            support += 1;
            if p == class {
                tp += 1;
            }
        }
    }
    let precision = ratio(tp, predicted);
    let recall = ratio(tp, support);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    ClassMetrics {
        precision,
        recall,
        f1,
        support,
    }
}

/// Precision, recall and F1 per class. A class that is never predicted has
/// precision 0; one that never occurs has recall 0.
pub fn evaluate(pred: &[IrLabel], truth: &[IrLabel]) -> Result<Metrics, LearnError> {
    if pred.len() != truth.len() {
        return Err(LearnError::LengthMismatch {
            rows: pred.len(),
            labels: truth.len(),
        });
    }
    if pred.is_empty() {
        return Err(LearnError::Empty);
    }
    let decrease = class_metrics(pred, truth, IrLabel::Decrease);
    let increase = class_metrics(pred, truth, IrLabel::Increase);
    let n = truth.len() as f64;
    let w = |f: fn(&ClassMetrics) -> f64| {
        (f(&decrease) * decrease.support as f64 + f(&increase) * increase.support as f64) / n
    };
    let avg = ClassMetrics {
        precision: w(|c| c.precision),
        recall: w(|c| c.recall),
        f1: w(|c| c.f1),
        support: truth.len(),
    };
    Ok(Metrics {
        decrease,
        increase,
        avg,
    })
}

impl Metrics {
    /// Rows in report order: decrease, increase, avg/total.
    pub fn rows(&self) -> [(&'static str, &ClassMetrics); 3] {
        [
            ("decrease", &self.decrease),
            ("increase", &self.increase),
            ("avg/total", &self.avg),
        ]
    }
}

impl fmt::Display for Metrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<10} {:>10} {:>10} {:>10} {:>8}",
            "", "precision", "recall", "f1-score", "support"
        )?;
        for (name, c) in self.rows() {
            writeln!(
                f,
                "{:<10} {:>10} {:>10} {:>10} {:>8}",
                name,
                fmt_g6(c.precision),
                fmt_g6(c.recall),
                fmt_g6(c.f1),
                c.support
            )?;
        }
        Ok(())
    }
}
