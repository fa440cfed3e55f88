//! CSV tables shared by the command line and the pipeline.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::cascade::CascadeCv;
use crate::influence::{IrLabel, IrRecord, IrSample, LifeStage, Piv};
use crate::learn::Metrics;
use crate::urlclass::{ThreadLabel, UrlLabel};
use crate::util::{fmt_g6, parse_f64};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("row {row}: {message}")]
    Format { row: usize, message: String },
}

/// Writes through a temporary sibling file and renames it into place.
pub fn write_atomic<F>(path: &Path, body: F) -> Result<(), ReportError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), ReportError>,
{
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    let result = (|| {
        let mut out = BufWriter::new(fs::File::create(&tmp)?);
        body(&mut out)?;
        out.flush()?;
        out.into_inner().map_err(|e| e.into_error())?.sync_all()?;
        fs::rename(&tmp, path)?;
        Ok(())
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

pub fn ir_header(k: usize) -> Vec<String> {
    let mut h: Vec<String> = [
        "post_id",
        "comment_id",
        "label_class",
        "label_category",
        "ir",
        "ir_label",
        "stage",
        "position_ratio",
        "elapsed_prev_s",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    h.extend((1..=k).map(|i| format!("p{i}")));
    h
}

pub fn write_ir_csv<W: Write>(records: &[IrRecord], k: usize, out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ir_header(k))?;
    for r in records {
        let s = &r.sample;
        let mut row = vec![
            s.post_id.clone(),
            s.comment_id.clone(),
            r.url_label.class_str().to_string(),
            r.url_label.category().map_or(String::new(), |c| c.as_str().to_string()),
            fmt_g6(s.ir),
            s.label.to_string(),
            s.stage.to_string(),
            fmt_g6(s.position_ratio),
            s.elapsed_since_prev_seconds.map_or(String::new(), |e| e.to_string()),
        ];
        row.extend(r.piv.components.iter().map(u32::to_string));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads an IR dataset table. Every `p*` column after the fixed ones becomes
/// a PIV component.
pub fn read_ir_csv<R: Read>(input: R, delta_t_seconds: u32) -> Result<Vec<IrRecord>, ReportError> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    let fixed = ir_header(0);
    if headers.len() < fixed.len() || headers.iter().zip(&fixed).any(|(a, b)| a != b) {
        return Err(ReportError::Format {
            row: 0,
            message: format!("expected header starting with {}", fixed.join(",")),
        });
    }
    let mut out = Vec::new();
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = idx + 1;
        let bad = |message: String| ReportError::Format { row, message };
        let url_label = UrlLabel::from_parts(&rec[2], &rec[3]).map_err(|e| bad(e.to_string()))?;
        let ir = parse_f64(&rec[4]).ok_or_else(|| bad(format!("bad ir `{}`", &rec[4])))?;
        let label: IrLabel = rec[5].parse().map_err(bad)?;
        let stage: LifeStage = rec[6].parse().map_err(bad)?;
        let position_ratio = parse_f64(&rec[7]).ok_or_else(|| bad(format!("bad position_ratio `{}`", &rec[7])))?;
        let elapsed = match &rec[8] {
            "" => None,
            s => Some(s.parse().map_err(|_| bad(format!("bad elapsed_prev_s `{s}`")))?),
        };
        let components = rec
            .iter()
            .skip(fixed.len())
            .map(|v| v.parse::<u32>().map_err(|_| bad(format!("bad PIV component `{v}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(IrRecord {
            piv: Piv {
                delta_t_seconds,
                components,
            },
            sample: IrSample {
                post_id: rec[0].to_string(),
                comment_id: rec[1].to_string(),
                ir,
                label,
                stage,
                position_ratio,
                elapsed_since_prev_seconds: elapsed,
            },
            url_label,
        });
    }
    Ok(out)
}

pub struct ThreadLabelRow<'a> {
    pub post_id: &'a str,
    pub label: ThreadLabel,
    pub comments: usize,
}

pub fn write_thread_labels<W: Write>(rows: &[ThreadLabelRow<'_>], out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["post_id", "target", "worst", "comments"])?;
    for r in rows {
        w.write_record([
            r.post_id,
            if r.label.is_target() { "1" } else { "0" },
            r.label.worst_str(),
            &r.comments.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_cascade_cv<W: Write>(rows: &[(&str, CascadeCv)], out: W) -> Result<(), ReportError> {
    let opt = |x: Option<f64>| x.map_or(String::new(), fmt_g6);
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "direction",
        "precision_hits",
        "predictable",
        "total",
        "precision",
        "predictable_rate",
    ])?;
    for (name, cv) in rows {
        w.write_record([
            name.to_string(),
            cv.precision_hits.to_string(),
            cv.predictable.to_string(),
            cv.total.to_string(),
            opt(cv.precision()),
            opt(cv.predictable_rate()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_metrics<W: Write>(rows: &[(&str, &str, Metrics)], out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["classifier", "test", "class", "precision", "recall", "f1", "support"])?;
    for (classifier, test, m) in rows {
        for (class, c) in m.rows() {
            w.write_record([
                classifier.to_string(),
                test.to_string(),
                class.to_string(),
                fmt_g6(c.precision),
                fmt_g6(c.recall),
                fmt_g6(c.f1),
                c.support.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Records grouped by label class and, for blacklisted URLs, by category.
pub fn stage_groups(records: &[IrRecord]) -> BTreeMap<String, Vec<&IrRecord>> {
    let mut groups: BTreeMap<String, Vec<&IrRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.url_label.class_str().to_string()).or_default().push(r);
        if let Some(c) = r.url_label.category() {
            groups
                .entry(format!("{}:{}", r.url_label.class_str(), c))
                .or_default()
                .push(r);
        }
    }
    groups
}

/// Grid points 0, 0.05, ..., 1 at which position-ratio CDFs are tabulated.
pub fn cdf_grid() -> Vec<f64> {
    (0..=20).map(|i| f64::from(i) / 20.0).collect()
}

pub fn write_stage_cdf<W: Write>(records: &[IrRecord], out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["group", "position_ratio", "cdf", "n"])?;
    for (group, rs) in stage_groups(records) {
        let n = rs.len();
        for x in cdf_grid() {
            let below = rs.iter().filter(|r| r.sample.position_ratio <= x).count();
            w.write_record([group.clone(), fmt_g6(x), fmt_g6(below as f64 / n as f64), n.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_stage_summary<W: Write>(records: &[IrRecord], out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["group", "stage", "count", "share", "mean_elapsed_prev_s"])?;
    for (group, rs) in stage_groups(records) {
        for stage in LifeStage::ALL {
            let in_stage: Vec<&&IrRecord> = rs.iter().filter(|r| r.sample.stage == stage).collect();
            let elapsed: Vec<i64> = in_stage
                .iter()
                .filter_map(|r| r.sample.elapsed_since_prev_seconds)
                .collect();
            let mean = if elapsed.is_empty() {
                String::new()
            } else {
                fmt_g6(elapsed.iter().sum::<i64>() as f64 / elapsed.len() as f64)
            };
            w.write_record([
                group.clone(),
                stage.to_string(),
                in_stage.len().to_string(),
                fmt_g6(in_stage.len() as f64 / rs.len() as f64),
                mean,
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
