//! Two-sample Kolmogorov–Smirnov test and cascade-size summaries.

use std::fmt;

use thiserror::Error;

use crate::cascade::FinalHorizon;
use crate::ingest::PostThread;
use crate::util::fmt_g6;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("{0} sample is empty")]
    Empty(&'static str),
    #[error("sample contains a non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub d_statistic: f64,
    pub p_value: f64,
    pub n1: usize,
    pub n2: usize,
}

fn sorted_finite(xs: &[f64], name: &'static str) -> Result<Vec<f64>, StatsError> {
    if xs.is_empty() {
        return Err(StatsError::Empty(name));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Largest ECDF gap. Both pointers advance past every copy of the current
/// value before the gap is measured, so ties are never split.
fn ks_d(a: &[f64], b: &[f64]) -> f64 {
    let (n1, n2) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    // compare i/n1 and j/n2 as integers i*n2 vs j*n1 to keep d exact
    let mut best: u128 = 0;
    while i < n1 && j < n2 {
        let x = a[i].min(b[j]);
        while i < n1 && a[i] == x {
            i += 1;
        }
        while j < n2 && b[j] == x {
            j += 1;
        }
        let gap = (i as u128 * n2 as u128).abs_diff(j as u128 * n1 as u128);
        best = best.max(gap);
    }
    best as f64 / (n1 as f64 * n2 as f64)
}

/// Kolmogorov survival function `Q(λ) = P(K > λ)`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    const EPS: f64 = 1e-12;
    if lambda <= 0.0 {
        return 1.0;
    }
    let p = if lambda < 1.0 {
        // theta-function form; converges fast for small λ
        let c = -std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let mut sum = 0.0;
        for j in 1u32.. {
            let m = f64::from(2 * j - 1);
            let term = (c * m * m).exp();
            sum += term;
            if term < EPS * sum.max(f64::MIN_POSITIVE) || term == 0.0 {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * sum
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for j in 1u32.. {
            let jf = f64::from(j);
            let term = (-2.0 * jf * jf * lambda * lambda).exp();
            sum += sign * term;
            if term < EPS {
                break;
            }
            sign = -sign;
        }
        2.0 * sum
    };
    p.clamp(0.0, 1.0)
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult, StatsError> {
    let a = sorted_finite(a, "first")?;
    let b = sorted_finite(b, "second")?;
    let d = ks_d(&a, &b);
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let lambda = (n1 * n2 / (n1 + n2)).sqrt() * d;
    Ok(KsResult {
        d_statistic: d,
        p_value: kolmogorov_q(lambda),
        n1: a.len(),
        n2: b.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single sample.
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

pub fn summary_stats(samples: &[f64]) -> Result<SummaryStats, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::Empty("summary"));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let (mut mean, mut m2) = (0.0, 0.0);
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for (k, &x) in samples.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (x - mean);
        min = min.min(x);
        max = max.max(x);
    }
    let n = samples.len();
    let sd = if n > 1 { (m2 / (n - 1) as f64).sqrt() } else { 0.0 };
    Ok(SummaryStats {
        n,
        // rounding can push the running mean a hair outside the range
        mean: mean.clamp(min, max),
        sd,
        min,
        max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeComparison {
    pub targets: SummaryStats,
    pub nontargets: SummaryStats,
    pub ks: KsResult,
}

pub fn final_counts(threads: &[PostThread], horizon: FinalHorizon) -> Vec<f64> {
    threads.iter().map(|t| horizon.final_count(t) as f64).collect()
}

pub fn compare_cascades(
    targets: &[PostThread],
    nontargets: &[PostThread],
    horizon: FinalHorizon,
) -> Result<CascadeComparison, StatsError> {
    if targets.is_empty() {
        return Err(StatsError::Empty("target"));
    }
    if nontargets.is_empty() {
        return Err(StatsError::Empty("non-target"));
    }
    let a = final_counts(targets, horizon);
    let b = final_counts(nontargets, horizon);
    Ok(CascadeComparison {
        targets: summary_stats(&a)?,
        nontargets: summary_stats(&b)?,
        ks: ks_two_sample(&a, &b)?,
    })
}

impl CascadeComparison {
    pub const CSV_HEADER: &'static str = "group,n,mean,sd,min,max,d,p";

    /// Two summary rows followed by the KS row.
    pub fn csv_rows(&self) -> Vec<String> {
        let row = |name: &str, s: &SummaryStats| {
            format!(
                "{name},{},{},{},{},{},,",
                s.n,
                fmt_g6(s.mean),
                fmt_g6(s.sd),
                fmt_g6(s.min),
                fmt_g6(s.max)
            )
        };
        vec![
            row("target", &self.targets),
            row("non_target", &self.nontargets),
            format!("ks,,,,,,{},{}", fmt_g6(self.ks.d_statistic), fmt_g6(self.ks.p_value)),
        ]
    }
}

impl fmt::Display for CascadeComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<12} {:>8} {:>12} {:>12} {:>12} {:>12}",
            "", "N", "Mean", "SD", "Min", "Max"
        )?;
        for (name, s) in [("Target", &self.targets), ("Non-Target", &self.nontargets)] {
            writeln!(
                f,
                "{:<12} {:>8} {:>12} {:>12} {:>12} {:>12}",
                name,
                s.n,
                fmt_g6(s.mean),
                fmt_g6(s.sd),
                fmt_g6(s.min),
                fmt_g6(s.max)
            )?;
        }
        writeln!(
            f,
            "KS: D={}, p={}",
            fmt_g6(self.ks.d_statistic),
            fmt_g6(self.ks.p_value)
        )
    }
}
