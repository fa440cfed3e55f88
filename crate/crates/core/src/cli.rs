//! Command-line interface. Exit codes: 0 success, 1 usage error, 2 data
//! or I/O error.

use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::cascade::{
    build_distribution_matrix, build_prediction_matrix, cross_validate, BootstrapParams, FinalHorizon,
    PredictionMatrix, Windowing,
};
use crate::influence::{extract_ir_dataset, IrParams};
use crate::ingest::{n_comment_all, parse_thread_file, ActivityKind, PostThread};
use crate::learn::{evaluate, ClassifierKind, FeatureMatrix, Model, TrainParams};
use crate::manifest::{file_digests, unix_now, RunManifest};
use crate::pipeline::{run_pipeline, PipelineParams, MANIFEST_FILE};
use crate::report::{self, ThreadLabelRow};
use crate::stats::{compare_cascades, CascadeComparison};
use crate::synth::{emit, fixture_blacklist, fixture_whitelist, generate, SynthConfig};
use crate::urlclass::{label_thread, BlacklistIndex, Whitelist};

#[derive(Debug, Parser)]
#[command(
    name = "cascadia",
    version,
    about = "Cascade-size prediction and comment influence analysis for discussion threads"
)]
pub struct Cli {
    /// Seed for every random choice (bootstrap, subsampling, synthesis)
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads [default: all cores]
    #[arg(long, global = true, env = "CASCADIA_THREADS")]
    pub threads: Option<usize>,
    /// Directory for output files and run manifests
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Corpus checks
    #[command(subcommand)]
    Ingest(IngestCmd),
    /// Label threads as target or non-target (writes thread_labels.csv)
    Label(LabelArgs),
    /// Cascade-size prediction matrices
    #[command(subcommand)]
    Cascade(CascadeCmd),
    /// Cascade-size statistics
    #[command(subcommand)]
    Stats(StatsCmd),
    /// Influence ratio datasets
    #[command(subcommand)]
    Ir(IrCmd),
    /// Increase/decrease classifiers
    #[command(subcommand)]
    Learn(LearnCmd),
    /// Generate a synthetic corpus with ground truth
    Synth(SynthArgs),
    /// Run every analysis stage on one corpus
    Pipeline(PipelineArgs),
}

#[derive(Debug, Subcommand)]
pub enum IngestCmd {
    /// Parse a corpus and print its size
    Validate {
        /// Line-delimited corpus file
        corpus: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ListArgs {
    /// Blacklist directory: one `<category>/domains` file per category
    #[arg(long)]
    pub blacklist_dir: PathBuf,
    /// Whitelist file, one domain suffix per line [default: built-in list]
    #[arg(long)]
    pub whitelist_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    /// Observation window length in minutes
    #[arg(long, default_value_t = 5)]
    pub window_min: u32,
    /// Observation horizon in minutes
    #[arg(long, default_value_t = 120)]
    pub horizon_min: u32,
    /// Minutes after posting at which the final count is taken, or `all`
    #[arg(long, default_value = "all")]
    pub final_min: FinalHorizon,
}

#[derive(Debug, Clone, Args)]
pub struct BootstrapArgs {
    /// Bootstrap resamples per cell
    #[arg(long, default_value_t = 1000)]
    pub resamples: usize,
    /// Percentile of the resampled minima used as the bound
    #[arg(long, default_value_t = 50.0)]
    pub percentile: f64,
}

#[derive(Debug, Clone, Args)]
pub struct IrArgs {
    /// Window length in seconds for the influence ratio and PIV buckets
    #[arg(long, default_value_t = 60)]
    pub delta_t: u32,
    /// Number of PIV components
    #[arg(long, default_value_t = 60)]
    pub k: usize,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    /// Boosting rounds
    #[arg(long, default_value_t = 50)]
    pub n_estimators: usize,
    /// Multiplier on each stump weight
    #[arg(long, default_value_t = 1.0)]
    pub learning_rate: f64,
    /// Subsample the larger training class to the size of the smaller
    #[arg(long)]
    pub balance: bool,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    /// Line-delimited corpus file
    #[arg(long)]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub lists: ListArgs,
}

#[derive(Debug, Subcommand)]
pub enum CascadeCmd {
    /// Build a prediction matrix (writes prediction_matrix.csv and .meta)
    Build {
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        bootstrap: BootstrapArgs,
    },
    /// Look up the final-count lower bound for one observation
    Predict {
        /// Matrix CSV; its metadata is read from the same path with a .meta extension
        #[arg(long)]
        matrix: PathBuf,
        /// Minutes observed so far (a multiple of the window)
        #[arg(long)]
        observed_min: u32,
        /// Comments counted so far
        #[arg(long)]
        count: u64,
    },
    /// Train on one corpus, test on another (writes cascade_cv.csv)
    Cv {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        bootstrap: BootstrapArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum StatsCmd {
    /// Summary statistics and KS test of final comment counts
    Compare {
        #[arg(long)]
        targets: PathBuf,
        #[arg(long)]
        nontargets: PathBuf,
        /// Minutes after posting at which the final count is taken, or `all`
        #[arg(long, default_value = "all")]
        final_min: FinalHorizon,
        /// Print CSV instead of an aligned table
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum IrCmd {
    /// Influence ratio and PIV for every URL comment (writes ir_dataset.csv)
    Extract {
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        lists: ListArgs,
        #[command(flatten)]
        ir: IrArgs,
    },
    /// Position-ratio CDFs and stage counts (writes stage_cdf.csv, stage_summary.csv)
    Stages {
        /// IR dataset CSV
        #[arg(long)]
        dataset: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum LearnCmd {
    /// Train a classifier on an IR dataset
    Train {
        #[arg(long, value_parser = parse_kind)]
        model: ClassifierKind,
        /// IR dataset CSV used for training
        #[arg(long)]
        train: PathBuf,
        #[command(flatten)]
        params: TrainArgs,
        /// Model file [default: <out-dir>/<model>.model]
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Score a trained model on an IR dataset
    Eval {
        #[arg(long)]
        model_file: PathBuf,
        /// IR dataset CSV used for testing
        #[arg(long)]
        test: PathBuf,
        /// Print CSV instead of an aligned table
        #[arg(long)]
        csv: bool,
    },
}

fn parse_kind(s: &str) -> Result<ClassifierKind, String> {
    s.parse()
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Generator config (`key = value` lines)
    #[arg(long)]
    pub config: PathBuf,
    /// Corpus output file
    #[arg(long)]
    pub out: PathBuf,
    /// Ground-truth CSV output file
    #[arg(long)]
    pub truth: PathBuf,
    /// Also write the blacklist the planted URLs come from
    #[arg(long)]
    pub blacklist_out: Option<PathBuf>,
    /// Also write the whitelist used by the generator
    #[arg(long)]
    pub whitelist_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub lists: ListArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub bootstrap: BootstrapArgs,
    #[command(flatten)]
    pub ir: IrArgs,
    #[command(flatten)]
    pub train: TrainArgs,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
        }
    };
    let command_line: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli, command_line) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn load_corpus(path: &Path) -> Result<Vec<PostThread>> {
    let f = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    parse_thread_file(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))
}

fn load_lists(lists: &ListArgs) -> Result<(Whitelist, BlacklistIndex)> {
    let whitelist = match &lists.whitelist_file {
        Some(p) => Whitelist::load(p)?,
        None => Whitelist::default_list(),
    };
    let index = BlacklistIndex::load_dir(&lists.blacklist_dir)?;
    Ok((whitelist, index))
}

fn list_inputs(lists: &ListArgs) -> Vec<PathBuf> {
    let mut v = vec![lists.blacklist_dir.clone()];
    v.extend(lists.whitelist_file.clone());
    v
}

fn windowing(w: &WindowArgs) -> Result<Windowing> {
    Ok(Windowing::new(w.window_min, w.horizon_min, w.final_min)?)
}

fn bootstrap(b: &BootstrapArgs, seed: u64) -> BootstrapParams {
    BootstrapParams {
        resamples: b.resamples,
        percentile: b.percentile,
        seed,
    }
}

fn ir_params(a: &IrArgs) -> Result<IrParams> {
    if a.delta_t == 0 || a.k == 0 {
        bail!("--delta-t and --k must be positive");
    }
    Ok(IrParams {
        delta_t_seconds: a.delta_t,
        k: a.k,
    })
}

fn train_params(a: &TrainArgs) -> TrainParams {
    TrainParams {
        n_estimators: a.n_estimators,
        learning_rate: a.learning_rate,
        balance: a.balance,
    }
}

fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<(), report::ReportError>) -> Result<()> {
    report::write_atomic(path, body).with_context(|| format!("writing {}", path.display()))
}

struct Run {
    manifest: RunManifest,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
}

impl Run {
    fn new(command_line: Vec<String>, config_text: &str, seed: u64) -> Self {
        let mut manifest = RunManifest::new(command_line, config_text, unix_now());
        manifest.seeds.insert("seed".into(), seed);
        Run {
            manifest,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    fn finish(mut self, path: &Path) -> Result<()> {
        let ins: Vec<&Path> = self.inputs.iter().map(PathBuf::as_path).collect();
        let outs: Vec<&Path> = self.outputs.iter().map(PathBuf::as_path).collect();
        self.manifest.inputs = file_digests(&ins).context("hashing inputs")?;
        self.manifest.outputs = file_digests(&outs).context("hashing outputs")?;
        self.manifest.finished_at = unix_now();
        let json = self.manifest.to_json();
        write_file(path, |w| Ok(w.write_all(json.as_bytes())?))
    }
}

fn execute(cli: Cli, command_line: Vec<String>) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be positive");
        }
        // a pool may already exist when called more than once in-process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let seed = cli.seed.unwrap_or(0);
    let out_dir = cli.out_dir;
    let ensure_out = || fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()));
    let mut stdout = io::stdout().lock();

    match cli.command {
        Command::Ingest(IngestCmd::Validate { corpus }) => {
            let threads = load_corpus(&corpus)?;
            let acts = threads.iter().flat_map(|t| t.activities());
            let (mut c, mut r, mut x) = (0, 0, 0);
            for a in acts {
                match a.kind {
                    ActivityKind::Comment => c += 1,
                    ActivityKind::Reply => r += 1,
                    ActivityKind::Reaction => x += 1,
                }
            }
            writeln!(
                stdout,
                "ok: {} threads, {} comments, {} replies, {} reactions",
                threads.len(),
                c,
                r,
                x
            )?;
        }

        Command::Label(a) => {
            ensure_out()?;
            let threads = load_corpus(&a.corpus)?;
            let (wl, bl) = load_lists(&a.lists)?;
            let rows: Vec<ThreadLabelRow<'_>> = threads
                .iter()
                .map(|t| ThreadLabelRow {
                    post_id: &t.post_id,
                    label: label_thread(t, &wl, &bl),
                    comments: n_comment_all(t),
                })
                .collect();
            let targets = rows.iter().filter(|r| r.label.is_target()).count();
            let out = out_dir.join("thread_labels.csv");
            write_file(&out, |w| report::write_thread_labels(&rows, w))?;
            let mut run = Run::new(command_line, "", seed);
            run.inputs.push(a.corpus);
            run.inputs.extend(list_inputs(&a.lists));
            run.outputs.push(out);
            run.finish(&out_dir.join("label.manifest.json"))?;
            writeln!(stdout, "{} threads, {} targets", rows.len(), targets)?;
        }

        Command::Cascade(CascadeCmd::Build {
            corpus,
            window,
            bootstrap: b,
        }) => {
            ensure_out()?;
            let threads = load_corpus(&corpus)?;
            let d = build_distribution_matrix(&threads, windowing(&window)?);
            let m = build_prediction_matrix(&d, bootstrap(&b, seed))?;
            let csv_path = out_dir.join("prediction_matrix.csv");
            let meta_path = out_dir.join("prediction_matrix.meta");
            write_file(&csv_path, |w| {
                m.write_csv(w).map_err(|e| report::ReportError::Io(io::Error::other(e)))
            })?;
            let meta = m.metadata();
            write_file(&meta_path, |w| Ok(w.write_all(meta.as_bytes())?))?;
            let mut run = Run::new(command_line, &meta, seed);
            run.inputs.push(corpus);
            run.outputs.extend([csv_path, meta_path]);
            run.finish(&out_dir.join("cascade-build.manifest.json"))?;
            writeln!(stdout, "{} cells from {} threads", m.cells().len(), threads.len())?;
        }

        Command::Cascade(CascadeCmd::Predict {
            matrix,
            observed_min,
            count,
        }) => {
            let meta = matrix.with_extension("meta");
            let csv_in = fs::File::open(&matrix).with_context(|| format!("opening {}", matrix.display()))?;
            let meta_in = fs::File::open(&meta).with_context(|| format!("opening {}", meta.display()))?;
            let m = PredictionMatrix::read(csv_in, BufReader::new(meta_in))?;
            match m.predict_final(observed_min, count)? {
                Some(b) => writeln!(stdout, "{b}")?,
                None => writeln!(stdout, "unpredictable")?,
            }
        }

        Command::Cascade(CascadeCmd::Cv {
            train,
            test,
            window,
            bootstrap: b,
        }) => {
            ensure_out()?;
            let tr = load_corpus(&train)?;
            let te = load_corpus(&test)?;
            let params = bootstrap(&b, seed);
            let w = windowing(&window)?;
            let cv = cross_validate(&tr, &te, w, params)?;
            let out = out_dir.join("cascade_cv.csv");
            write_file(&out, |wr| report::write_cascade_cv(&[("train_to_test", cv)], wr))?;
            let pp = PipelineParams {
                windowing: w,
                bootstrap: params,
                seed,
                ..Default::default()
            };
            let mut run = Run::new(command_line, &pp.to_text(), seed);
            run.inputs.extend([train, test]);
            run.outputs.push(out);
            run.finish(&out_dir.join("cascade-cv.manifest.json"))?;
            writeln!(
                stdout,
                "precision {}/{}, predictable {}/{}",
                cv.precision_hits, cv.predictable, cv.predictable, cv.total
            )?;
        }

        Command::Stats(StatsCmd::Compare {
            targets,
            nontargets,
            final_min,
            csv,
        }) => {
            let t = load_corpus(&targets)?;
            let n = load_corpus(&nontargets)?;
            let cmp = compare_cascades(&t, &n, final_min)?;
            if csv {
                writeln!(stdout, "{}", CascadeComparison::CSV_HEADER)?;
                for row in cmp.csv_rows() {
                    writeln!(stdout, "{row}")?;
                }
            } else {
                write!(stdout, "{cmp}")?;
            }
        }

        Command::Ir(IrCmd::Extract { corpus, lists, ir }) => {
            ensure_out()?;
            let threads = load_corpus(&corpus)?;
            let (wl, bl) = load_lists(&lists)?;
            let params = ir_params(&ir)?;
            let records = extract_ir_dataset(&threads, &wl, &bl, params)?;
            let out = out_dir.join("ir_dataset.csv");
            write_file(&out, |w| report::write_ir_csv(&records, params.k, w))?;
            let mut run = Run::new(
                command_line,
                &format!("delta_t_s = {}\nk = {}\n", params.delta_t_seconds, params.k),
                seed,
            );
            run.inputs.push(corpus);
            run.inputs.extend(list_inputs(&lists));
            run.outputs.push(out);
            run.finish(&out_dir.join("ir-extract.manifest.json"))?;
            writeln!(stdout, "{} records", records.len())?;
        }

        Command::Ir(IrCmd::Stages { dataset }) => {
            ensure_out()?;
            let records = read_dataset(&dataset)?;
            let cdf = out_dir.join("stage_cdf.csv");
            let summary = out_dir.join("stage_summary.csv");
            write_file(&cdf, |w| report::write_stage_cdf(&records, w))?;
            write_file(&summary, |w| report::write_stage_summary(&records, w))?;
            let mut run = Run::new(command_line, "", seed);
            run.inputs.push(dataset);
            run.outputs.extend([cdf, summary]);
            run.finish(&out_dir.join("ir-stages.manifest.json"))?;
            writeln!(stdout, "{} records", records.len())?;
        }

        Command::Learn(LearnCmd::Train {
            model,
            train,
            params,
            output,
        }) => {
            ensure_out()?;
            let records = read_dataset(&train)?;
            let data = FeatureMatrix::from_records(&records)?;
            let tp = train_params(&params);
            let m = Model::train(model, &data, tp, seed)?;
            let out = output.unwrap_or_else(|| out_dir.join(format!("{model}.model")));
            write_file(&out, |w| Ok(m.write(w)?))?;
            let config = format!(
                "model = {model}\nn_estimators = {}\nlearning_rate = {}\nbalance = {}\n",
                tp.n_estimators, tp.learning_rate, tp.balance
            );
            let mut run = Run::new(command_line, &config, seed);
            run.inputs.push(train);
            run.outputs.push(out.clone());
            run.finish(&out_dir.join("learn-train.manifest.json"))?;
            writeln!(stdout, "trained {model} on {} records -> {}", data.len(), out.display())?;
        }

        Command::Learn(LearnCmd::Eval { model_file, test, csv }) => {
            let f = fs::File::open(&model_file).with_context(|| format!("opening {}", model_file.display()))?;
            let m = Model::read(BufReader::new(f)).with_context(|| format!("reading {}", model_file.display()))?;
            let records = read_dataset(&test)?;
            let data = FeatureMatrix::from_records(&records)?;
            let pred = m.predict_all(&data)?;
            let metrics = evaluate(&pred, data.labels())?;
            if csv {
                let name = test
                    .file_stem()
                    .map_or("test".into(), |s| s.to_string_lossy().into_owned());
                let mut buf = Vec::new();
                report::write_metrics(&[(m.kind().as_str(), &name, metrics)], &mut buf)?;
                stdout.write_all(&buf)?;
            } else {
                writeln!(stdout, "{}", m.kind())?;
                write!(stdout, "{metrics}")?;
            }
        }

        Command::Synth(a) => {
            ensure_out()?;
            let mut cfg = SynthConfig::load(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            let (threads, truth) = generate(&cfg)?;
            let mut outputs = vec![a.out.clone(), a.truth.clone()];
            let corpus_tmp = {
                let mut p = a.out.as_os_str().to_owned();
                p.push(".tmp");
                PathBuf::from(p)
            };
            emit(&threads, &corpus_tmp).with_context(|| format!("writing {}", a.out.display()))?;
            fs::rename(&corpus_tmp, &a.out)?;
            write_file(&a.truth, |w| {
                truth
                    .write_csv(w)
                    .map_err(|e| report::ReportError::Io(io::Error::other(e)))
            })?;
            if let Some(dir) = &a.blacklist_out {
                fixture_blacklist()
                    .write_dir(dir)
                    .with_context(|| format!("writing {}", dir.display()))?;
                outputs.push(dir.clone());
            }
            if let Some(p) = &a.whitelist_out {
                let text: String = fixture_whitelist().entries().iter().map(|e| format!("{e}\n")).collect();
                write_file(p, |w| Ok(w.write_all(text.as_bytes())?))?;
                outputs.push(p.clone());
            }
            let mut run = Run::new(command_line, &cfg.to_text(), cfg.seed);
            run.inputs.push(a.config);
            run.outputs = outputs;
            run.finish(&out_dir.join("synth.manifest.json"))?;
            let targets = truth.threads.iter().filter(|t| t.is_target()).count();
            writeln!(
                stdout,
                "{} threads ({} targets), {} planted URL comments",
                threads.len(),
                targets,
                truth.url_plant_count()
            )?;
        }

        Command::Pipeline(a) => {
            let threads = load_corpus(&a.corpus)?;
            let (wl, bl) = load_lists(&a.lists)?;
            let params = PipelineParams {
                windowing: windowing(&a.window)?,
                bootstrap: bootstrap(&a.bootstrap, seed),
                ir: ir_params(&a.ir)?,
                train: train_params(&a.train),
                seed,
            };
            let mut run = Run::new(command_line, &params.to_text(), seed);
            let summary = run_pipeline(&threads, &wl, &bl, &params, &out_dir)?;
            run.inputs.push(a.corpus);
            run.inputs.extend(list_inputs(&a.lists));
            run.outputs = summary.outputs.clone();
            run.finish(&out_dir.join(MANIFEST_FILE))?;
            writeln!(
                stdout,
                "{} threads ({} targets), {} IR records; reports in {}",
                summary.threads,
                summary.targets,
                summary.records,
                out_dir.display()
            )?;
        }
    }
    Ok(())
}

fn read_dataset(path: &Path) -> Result<Vec<crate::influence::IrRecord>> {
    let f = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    // bucket width is not stored in the table and is not used downstream
    report::read_ir_csv(BufReader::new(f), IrParams::default().delta_t_seconds)
        .with_context(|| format!("reading {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn parser_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["cascadia", "--no-such-flag"]), 1);
        assert_eq!(run(["cascadia", "ir", "extract"]), 1);
        assert_eq!(run(["cascadia", "--version"]), 0);
    }

    #[test]
    fn data_errors_exit_two() {
        assert_eq!(run(["cascadia", "ingest", "validate", "/nonexistent/corpus.jsonl"]), 2);
    }

    #[test]
    fn ir_extract_help_lists_flags() {
        let err = Cli::try_parse_from(["cascadia", "ir", "extract", "--help"]).unwrap_err();
        assert_eq!(err.kind(), ErrorKind::DisplayHelp);
        let help = err.to_string();
        for flag in [
            "--corpus",
            "--blacklist-dir",
            "--whitelist-file",
            "--delta-t",
            "--k",
            "--seed",
            "--threads",
            "--out-dir",
        ] {
            assert!(help.contains(flag), "{flag} missing from:\n{help}");
        }
    }
}
