//! End-to-end analysis of one corpus: labels, cascade cross-validation,
//! cascade-size comparison, IR dataset, classifier metrics and stage tables.

use std::error::Error;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::cascade::{cross_validate, BootstrapParams, CascadeCv, Windowing};
use crate::influence::{extract_ir_dataset, IrParams, IrRecord};
use crate::ingest::{n_comment_all, PostThread};
use crate::learn::{run_experiment, ClassifierKind, Metrics, TrainParams};
use crate::report::{self, ReportError, ThreadLabelRow};
use crate::stats::compare_cascades;
use crate::urlclass::{label_thread, BlacklistIndex, Severity, Whitelist};

/// Report files, in the order they are written.
pub const REPORT_FILES: [&str; 7] = [
    "thread_labels.csv",
    "cascade_cv.csv",
    "cascade_stats.csv",
    "ir_dataset.csv",
    "ir_metrics.csv",
    "stage_cdf.csv",
    "stage_summary.csv",
];

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PipelineParams {
    pub windowing: Windowing,
    pub bootstrap: BootstrapParams,
    pub ir: IrParams,
    pub train: TrainParams,
    pub seed: u64,
}

impl PipelineParams {
    /// Canonical `key = value` rendering, hashed into the run manifest.
    pub fn to_text(&self) -> String {
        let w = &self.windowing;
        let b = &self.bootstrap;
        format!(
            "window_min = {}\nhorizon_min = {}\nfinal_min = {}\nresamples = {}\npercentile = {}\nbootstrap_seed = {}\n\
             delta_t_s = {}\nk = {}\nn_estimators = {}\nlearning_rate = {}\nbalance = {}\nseed = {}\n",
            w.window_minutes,
            w.horizon_minutes,
            w.final_horizon,
            b.resamples,
            b.percentile,
            b.seed,
            self.ir.delta_t_seconds,
            self.ir.k,
            self.train.n_estimators,
            self.train.learning_rate,
            self.train.balance,
            self.seed
        )
    }
}

#[derive(Debug, Error)]
#[error("{stage}: {source}")]
pub struct PipelineError {
    pub stage: &'static str,
    #[source]
    pub source: Box<dyn Error + Send + Sync>,
}

fn at<E: Into<Box<dyn Error + Send + Sync>>>(stage: &'static str) -> impl FnOnce(E) -> PipelineError {
    move |e| PipelineError {
        stage,
        source: e.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineSummary {
    pub threads: usize,
    pub targets: usize,
    pub records: usize,
    pub outputs: Vec<PathBuf>,
}

struct Outputs<'a> {
    dir: &'a Path,
    written: Vec<PathBuf>,
}

impl Outputs<'_> {
    fn write<F>(&mut self, stage: &'static str, name: &str, body: F) -> Result<(), PipelineError>
    where
        F: FnOnce(&mut dyn Write) -> Result<(), ReportError>,
    {
        let path = self.dir.join(name);
        report::write_atomic(&path, body).map_err(at(stage))?;
        self.written.push(path);
        Ok(())
    }

    fn discard(&self) {
        for p in &self.written {
            let _ = fs::remove_file(p);
        }
    }
}

/// Runs every stage and writes [`REPORT_FILES`] into `out_dir`. On failure
/// the files already written are removed.
pub fn run_pipeline(
    threads: &[PostThread],
    whitelist: &Whitelist,
    index: &BlacklistIndex,
    params: &PipelineParams,
    out_dir: &Path,
) -> Result<PipelineSummary, PipelineError> {
    fs::create_dir_all(out_dir).map_err(at("setup"))?;
    let mut out = Outputs {
        dir: out_dir,
        written: Vec::new(),
    };
    let result = stages(threads, whitelist, index, params, &mut out);
    if result.is_err() {
        out.discard();
    }
    result.map(|(targets, records)| PipelineSummary {
        threads: threads.len(),
        targets,
        records,
        outputs: out.written,
    })
}

fn stages(
    threads: &[PostThread],
    whitelist: &Whitelist,
    index: &BlacklistIndex,
    params: &PipelineParams,
    out: &mut Outputs<'_>,
) -> Result<(usize, usize), PipelineError> {
    if threads.is_empty() {
        return Err(at("label")("no threads"));
    }
    let mut sorted: Vec<&PostThread> = threads.iter().collect();
    sorted.sort_by(|a, b| a.post_id.cmp(&b.post_id));

    let labels: Vec<ThreadLabelRow<'_>> = sorted
        .iter()
        .map(|t| ThreadLabelRow {
            post_id: &t.post_id,
            label: label_thread(t, whitelist, index),
            comments: n_comment_all(t),
        })
        .collect();
    out.write("label", REPORT_FILES[0], |w| report::write_thread_labels(&labels, w))?;
    let (targets, nontargets): (Vec<PostThread>, Vec<PostThread>) = {
        let (a, b): (Vec<_>, Vec<_>) = sorted.iter().zip(&labels).partition(|(_, l)| l.label.is_target());
        (
            a.into_iter().map(|(t, _)| (*t).clone()).collect(),
            b.into_iter().map(|(t, _)| (*t).clone()).collect(),
        )
    };

    let cv_t2n = cross_validate(&targets, &nontargets, params.windowing, params.bootstrap).map_err(at("cascade cv"))?;
    let cv_n2t = cross_validate(&nontargets, &targets, params.windowing, params.bootstrap).map_err(at("cascade cv"))?;
    let rows: [(&str, CascadeCv); 2] = [("target_to_nontarget", cv_t2n), ("nontarget_to_target", cv_n2t)];
    out.write("cascade cv", REPORT_FILES[1], |w| report::write_cascade_cv(&rows, w))?;

    let cmp = compare_cascades(&targets, &nontargets, params.windowing.final_horizon).map_err(at("stats compare"))?;
    out.write("stats compare", REPORT_FILES[2], |w| {
        writeln!(w, "{}", crate::stats::CascadeComparison::CSV_HEADER)?;
        for row in cmp.csv_rows() {
            writeln!(w, "{row}")?;
        }
        Ok(())
    })?;

    let owned: Vec<PostThread> = sorted.iter().map(|t| (*t).clone()).collect();
    let records = extract_ir_dataset(&owned, whitelist, index, params.ir).map_err(at("ir extract"))?;
    out.write("ir extract", REPORT_FILES[3], |w| {
        report::write_ir_csv(&records, params.ir.k, w)
    })?;

    let by_severity = |s: Option<Severity>| -> Vec<IrRecord> {
        records
            .iter()
            .filter(|r| r.url_label.severity() == s)
            .cloned()
            .collect()
    };
    let benign = by_severity(None);
    let light = by_severity(Some(Severity::Light));
    let critical = by_severity(Some(Severity::Critical));
    let mut metrics: Vec<(&str, &str, Metrics)> = Vec::new();
    for kind in [ClassifierKind::Gnb, ClassifierKind::AdaBoost] {
        for (name, test) in [("light", &light), ("critical", &critical)] {
            let m = run_experiment(&benign, test, kind, params.train, params.seed)
                .map_err(|e| at::<String>("learn")(format!("{kind} on {name}: {e}")))?;
            metrics.push((kind.as_str(), name, m));
        }
    }
    out.write("learn", REPORT_FILES[4], |w| report::write_metrics(&metrics, w))?;

    out.write("stages", REPORT_FILES[5], |w| report::write_stage_cdf(&records, w))?;
    out.write("stages", REPORT_FILES[6], |w| report::write_stage_summary(&records, w))?;
    Ok((targets.len(), records.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::influence::LifeStage;
    use crate::synth::{fixture_blacklist, fixture_whitelist, generate, IrRegimes, PlantSpec, SynthConfig};
    use crate::urlclass::{Category, UrlLabel};

    fn corpus(n: usize) -> Vec<PostThread> {
        let cfg = SynthConfig {
            n_threads: n,
            horizon_minutes: 180,
            plants: vec![
                PlantSpec {
                    label: UrlLabel::Benign,
                    stage: LifeStage::RapidGrowth,
                    count: 2,
                },
                PlantSpec {
                    label: UrlLabel::Benign,
                    stage: LifeStage::SlowDecay,
                    count: 1,
                },
                PlantSpec {
                    label: UrlLabel::Blacklisted(Category::Gamble),
                    stage: LifeStage::SlowDecay,
                    count: 1,
                },
                PlantSpec {
                    label: UrlLabel::Blacklisted(Category::Drugs),
                    stage: LifeStage::Dormancy,
                    count: 1,
                },
            ],
            ir_regimes: Some(IrRegimes {
                boost: 5.0,
                suppress: 0.2,
            }),
            seed: 4,
            ..SynthConfig::default()
        };
        generate(&cfg).unwrap().0
    }

    fn quick() -> PipelineParams {
        PipelineParams {
            bootstrap: BootstrapParams {
                resamples: 50,
                ..Default::default()
            },
            ..Default::default()
        }
    }

    #[test]
    fn writes_every_report() {
        let dir = tempfile::tempdir().unwrap();
        let s = run_pipeline(
            &corpus(40),
            &fixture_whitelist(),
            &fixture_blacklist(),
            &quick(),
            dir.path(),
        )
        .unwrap();
        assert_eq!(s.outputs.len(), REPORT_FILES.len());
        for f in REPORT_FILES {
            assert!(dir.path().join(f).is_file(), "{f}");
        }
    }

    #[test]
    fn empty_corpus() {
        let dir = tempfile::tempdir().unwrap();
        let e = run_pipeline(&[], &fixture_whitelist(), &fixture_blacklist(), &quick(), dir.path()).unwrap_err();
        assert!(e.to_string().contains("no threads"));
    }

    #[test]
    fn failure_removes_partial_outputs() {
        let dir = tempfile::tempdir().unwrap();
        // an empty blacklist leaves no target threads, so the comparison fails
        let e = run_pipeline(
            &corpus(10),
            &fixture_whitelist(),
            &BlacklistIndex::default(),
            &quick(),
            dir.path(),
        )
        .unwrap_err();
        assert_eq!(e.stage, "stats compare");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    }
}
