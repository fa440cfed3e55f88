use std::io::Write;

use super::{header_value, parse_f64, parse_usize, FeatureMatrix, LearnError};
use crate::influence::IrLabel;

/// Fraction of the largest feature variance added to every class variance.
pub const VAR_SMOOTHING: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub prior: f64,
    pub mean: Vec<f64>,
    pub var: Vec<f64>,
}

/// Gaussian naive Bayes over two classes, indexed decrease then increase.
#[derive(Debug, Clone, PartialEq)]
pub struct GnbModel {
    pub dim: usize,
    pub epsilon: f64,
    pub classes: [ClassStats; 2],
}

fn class_index(label: IrLabel) -> usize {
    match label {
        IrLabel::Decrease => 0,
        IrLabel::Increase => 1,
    }
}

/// Running mean and sum of squared deviations (Welford).
#[derive(Clone)]
struct Moments {
    n: usize,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Moments {
    fn new(dim: usize) -> Self {
        Moments {
            n: 0,
            mean: vec![0.0; dim],
            m2: vec![0.0; dim],
        }
    }

    fn push(&mut self, x: &[f64]) {
        self.n += 1;
        let n = self.n as f64;
        for ((m, s), &v) in self.mean.iter_mut().zip(&mut self.m2).zip(x) {
            let delta = v - *m;
            *m += delta / n;
            *s += delta * (v - *m);
        }
    }

    fn variance(&self) -> Vec<f64> {
        self.m2.iter().map(|s| s / self.n as f64).collect()
    }
}

pub fn train_gnb(data: &FeatureMatrix) -> Result<GnbModel, LearnError> {
    if data.is_empty() {
        return Err(LearnError::Empty);
    }
    data.require_both_classes()?;
    let dim = data.dim();
    let mut all = Moments::new(dim);
    let mut per = [Moments::new(dim), Moments::new(dim)];
    for (row, &label) in data.rows().iter().zip(data.labels()) {
        all.push(row);
        per[class_index(label)].push(row);
    }
    let max_var = all.variance().into_iter().fold(0.0, f64::max);
    let epsilon = if max_var > 0.0 {
        VAR_SMOOTHING * max_var
    } else {
        VAR_SMOOTHING
    };
    let n = data.len() as f64;
    let classes = per.map(|m| ClassStats {
        prior: m.n as f64 / n,
        var: m.variance().into_iter().map(|v| v + epsilon).collect(),
        mean: m.mean,
    });
    Ok(GnbModel { dim, epsilon, classes })
}

impl GnbModel {
    /// Joint log-likelihood `ln P(c) + Σ ln N(x_f; μ_cf, σ²_cf)` per class.
    pub fn joint_log_likelihood(&self, x: &[f64]) -> Result<[f64; 2], LearnError> {
        if x.len() != self.dim {
            return Err(LearnError::InputDimension {
                got: x.len(),
                expected: self.dim,
            });
        }
        Ok(self.classes.each_ref().map(|c| {
            let mut ll = c.prior.ln();
            for ((&v, &m), &s2) in x.iter().zip(&c.mean).zip(&c.var) {
                ll -= 0.5 * ((2.0 * std::f64::consts::PI * s2).ln() + (v - m) * (v - m) / s2);
            }
            ll
        }))
    }

    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "model = gnb")?;
        writeln!(out, "dim = {}", self.dim)?;
        writeln!(out, "epsilon = {}", self.epsilon)?;
        for (label, c) in [IrLabel::Decrease, IrLabel::Increase].iter().zip(&self.classes) {
            writeln!(out, "{label},prior,{}", c.prior)?;
            write_row(&mut out, *label, "mean", &c.mean)?;
            write_row(&mut out, *label, "var", &c.var)?;
        }
        out.flush()
    }

    pub(super) fn parse(lines: &[String]) -> Result<Self, LearnError> {
        let dim = parse_usize(header_value(lines, "dim")?, "dim")?;
        let epsilon = parse_f64(header_value(lines, "epsilon")?, "epsilon")?;
        let mut prior = [None, None];
        let mut mean = [None, None];
        let mut var = [None, None];
        for line in lines.iter().map(|l| l.trim()).filter(|l| l.contains(',')) {
            let mut fields = line.split(',');
            let label: IrLabel = fields.next().unwrap_or_default().parse().map_err(LearnError::Format)?;
            let idx = class_index(label);
            let kind = fields.next().unwrap_or_default();
            let values = fields.map(|f| parse_f64(f, kind)).collect::<Result<Vec<_>, _>>()?;
            match kind {
                "prior" if values.len() == 1 => prior[idx] = Some(values[0]),
                "mean" if values.len() == dim => mean[idx] = Some(values),
                "var" if values.len() == dim => var[idx] = Some(values),
                _ => return Err(LearnError::Format(format!("bad row `{line}`"))),
            }
        }
        let take = |i: usize| -> Result<ClassStats, LearnError> {
            match (prior[i], mean[i].clone(), var[i].clone()) {
                (Some(prior), Some(mean), Some(var)) => Ok(ClassStats { prior, mean, var }),
                _ => Err(LearnError::Format("incomplete class rows".into())),
            }
        };
        Ok(GnbModel {
            dim,
            epsilon,
            classes: [take(0)?, take(1)?],
        })
    }
}

fn write_row<W: Write>(out: &mut W, label: IrLabel, kind: &str, values: &[f64]) -> std::io::Result<()> {
    write!(out, "{label},{kind}")?;
    for v in values {
        write!(out, ",{v}")?;
    }
    writeln!(out)
}

/// Most likely class; exact ties resolve to `Decrease`.
pub fn predict_gnb(model: &GnbModel, x: &[f64]) -> Result<IrLabel, LearnError> {
    let [dec, inc] = model.joint_log_likelihood(x)?;
    Ok(if inc > dec {
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

    #[test]
    fn two_points() {
        let m = train_gnb(&fm(
            vec![vec![0.0], vec![1.0]],
            vec![IrLabel::Decrease, IrLabel::Increase],
        ))
        .unwrap();
        assert_eq!(m.classes[0].mean, vec![0.0]);
        assert_eq!(m.classes[1].mean, vec![1.0]);
        assert_eq!(m.classes[0].prior, 0.5);
        assert_eq!(m.classes[1].prior, 0.5);
        assert!(m.classes.iter().all(|c| c.var[0] > 0.0));
    }

    #[test]
    fn single_class_rejected() {
        let r = train_gnb(&fm(vec![vec![0.0], vec![1.0]], vec![IrLabel::Increase; 2]));
        assert!(matches!(r, Err(LearnError::SingleClass)));
    }

    #[test]
    fn duplicated_rows_same_model() {
        let mut r = crate::util::rng(11);
        let rows: Vec<Vec<f64>> = (0..40).map(|_| (0..4).map(|_| r.random::<f64>()).collect()).collect();
        let labels: Vec<IrLabel> = (0..40)
            .map(|i| {
                if i % 3 == 0 {
                    IrLabel::Increase
                } else {
                    IrLabel::Decrease
                }
            })
            .collect();
        let a = train_gnb(&fm(rows.clone(), labels.clone())).unwrap();
        let rows2: Vec<_> = rows.iter().flat_map(|r| [r.clone(), r.clone()]).collect();
        let labels2: Vec<_> = labels.iter().flat_map(|&l| [l, l]).collect();
        let b = train_gnb(&fm(rows2, labels2)).unwrap();
        for (ca, cb) in a.classes.iter().zip(&b.classes) {
            assert_eq!(ca.prior, cb.prior);
            for (x, y) in ca.mean.iter().zip(&cb.mean).chain(ca.var.iter().zip(&cb.var)) {
                assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn moments_match_two_pass() {
        let mut r = crate::util::rng(5);
        for _ in 0..20 {
            let n = r.random_range(4..60);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..3).map(|_| r.random_range(-50.0..50.0)).collect())
                .collect();
            let labels: Vec<IrLabel> = (0..n)
                .map(|i| {
                    if i % 2 == 0 {
                        IrLabel::Increase
                    } else {
                        IrLabel::Decrease
                    }
                })
                .collect();
            let m = train_gnb(&fm(rows.clone(), labels.clone())).unwrap();
            for (ci, label) in [IrLabel::Decrease, IrLabel::Increase].into_iter().enumerate() {
                let members: Vec<&Vec<f64>> = rows
                    .iter()
                    .zip(&labels)
                    .filter(|(_, &l)| l == label)
                    .map(|(r, _)| r)
                    .collect();
                let k = members.len() as f64;
                for f in 0..3 {
                    let mean = members.iter().map(|r| r[f]).sum::<f64>() / k;
                    let var = members.iter().map(|r| (r[f] - mean).powi(2)).sum::<f64>() / k;
                    let got_mean = m.classes[ci].mean[f];
                    let got_var = m.classes[ci].var[f] - m.epsilon;
                    assert!((got_mean - mean).abs() <= 1e-12 * mean.abs().max(1.0));
                    assert!((got_var - var).abs() <= 1e-12 * var.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn predictions() {
        let rows = vec![vec![-1.0], vec![1.0], vec![9.0], vec![11.0]];
        let labels = vec![
            IrLabel::Increase,
            IrLabel::Increase,
            IrLabel::Decrease,
            IrLabel::Decrease,
        ];
        let m = train_gnb(&fm(rows, labels)).unwrap();
        assert_eq!(predict_gnb(&m, &[0.0]).unwrap(), IrLabel::Increase);
        assert_eq!(predict_gnb(&m, &[10.0]).unwrap(), IrLabel::Decrease);
        // symmetric classes: the midpoint is an exact tie
        assert_eq!(predict_gnb(&m, &[5.0]).unwrap(), IrLabel::Decrease);
        assert!(matches!(
            predict_gnb(&m, &[1.0, 2.0]),
            Err(LearnError::InputDimension { .. })
        ));
    }

    #[test]
    fn agrees_with_direct_density() {
        let mut r = crate::util::rng(21);
        let rows: Vec<Vec<f64>> = (0..80)
            .map(|i| {
                (0..3)
                    .map(|_| r.random::<f64>() + if i % 2 == 0 { 0.3 } else { 0.0 })
                    .collect()
            })
            .collect();
        let labels: Vec<IrLabel> = (0..80)
            .map(|i| {
                if i % 2 == 0 {
                    IrLabel::Increase
                } else {
                    IrLabel::Decrease
                }
            })
            .collect();
        let m = train_gnb(&fm(rows, labels)).unwrap();
        for _ in 0..200 {
            let x: Vec<f64> = (0..3).map(|_| r.random_range(-0.5..1.8)).collect();
            let density = |c: &ClassStats| {
                c.prior
                    * x.iter()
                        .zip(&c.mean)
                        .zip(&c.var)
                        .map(|((v, mu), s2)| {
                            (-(v - mu).powi(2) / (2.0 * s2)).exp() / (2.0 * std::f64::consts::PI * s2).sqrt()
                        })
                        .product::<f64>()
            };
            let oracle = if density(&m.classes[1]) > density(&m.classes[0]) {
                IrLabel::Increase
            } else {
                IrLabel::Decrease
            };
            assert_eq!(predict_gnb(&m, &x).unwrap(), oracle);
        }
    }

    #[test]
    fn file_round_trip() {
        let m = train_gnb(&fm(
            vec![vec![0.1, 0.3], vec![0.7, 0.2], vec![0.5, 0.5]],
            vec![IrLabel::Decrease, IrLabel::Increase, IrLabel::Increase],
        ))
        .unwrap();
        let mut buf = Vec::new();
        m.write(&mut buf).unwrap();
        assert_eq!(Model::read(buf.as_slice()).unwrap(), Model::Gnb(m));
    }
}
