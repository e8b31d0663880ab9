//! Command-line entry point. Every command writes its artifacts under
//! `--out` together with a `manifest.json`.

use crate::experiment::{make_folds, run_cv_with_plan, search, ExperimentError, SearchSpace};
use crate::lexicon::{distribution_table, parse_lexicon, Lexicon, LexiconError, Task};
use crate::neural::{derive_seed, ClassifierModel, ModelConfig, NeuralError};
use crate::report::{
    emit, estimate_all, prepare, run_report, Format, ModelChoice, PipelineSettings, ReportError,
};
use crate::{oracle, synth};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(
    name = "plurinfo",
    version,
    about = "Information-theoretic analysis of plural inflection classes"
)]
pub struct Cli {
    /// Worker threads for fold and trial jobs (default: logical cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a lexicon TSV against the schema.
    Validate(DataArgs),
    /// Distribution of exponent origin by lexeme etymology.
    Stats(DataArgs),
    /// Train one classifier on the whole pruned dataset.
    Train(RunArgs),
    /// Cross-validate all model variants for a task.
    Estimate(RunArgs),
    /// Full measure report for a task.
    Report(RunArgs),
    /// Run the brute-force oracle suites.
    OracleCheck(OracleArgs),
    /// Write the seeded synthetic lexicon.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, default_value_t = Task::Allomorph)]
    pub task: Task,
    /// Feed etymology to the classifier (train only).
    #[arg(long)]
    pub with_etymology: bool,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long)]
    pub seed: u64,
    /// Random-search trials; without it a fixed config is used.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Model config as JSON or key=value lines, overriding defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Classes with fewer distinct lexemes are dropped.
    #[arg(long, default_value_t = 20)]
    pub min_count: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 200)]
    pub joints: usize,
    #[arg(long, default_value_t = 50)]
    pub models: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = synth::FIXTURE_ROWS)]
    pub rows: usize,
    #[arg(long, default_value_t = synth::FIXTURE_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Validation { path: String, source: LexiconError },
    #[error("config {path}: {message}")]
    Config { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("oracle check failed")]
    OracleFailed,
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error(transparent)]
    Neural(#[from] NeuralError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } | CliError::OracleFailed => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        pool = pool.num_threads(jobs.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match pool.install(|| execute(&cli.command)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn load_lexicon(path: &Path) -> Result<Lexicon> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    parse_lexicon(std::io::BufReader::new(file)).map_err(|source| CliError::Validation {
        path: path.display().to_string(),
        source,
    })
}

/// Collects artifacts for one run and writes them with a manifest.
struct Artifacts {
    dir: PathBuf,
    written: Vec<String>,
}

impl Artifacts {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        Ok(Artifacts {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(io_err(&path))?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }

    fn finish(mut self, command: &str, details: Value) -> Result<()> {
        let manifest = json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "details": details,
            "artifacts": self.written.clone(),
        });
        self.write_json("manifest.json", &manifest)
    }
}

/// Reads a model config as a JSON object or `key = value` lines. Keys not
/// mentioned keep their default values.
pub fn load_config(path: &Path) -> Result<ModelConfig> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_config(&text).map_err(|message| CliError::Config {
        path: path.display().to_string(),
        message,
    })
}

pub fn parse_config(text: &str) -> std::result::Result<ModelConfig, String> {
    let mut merged = serde_json::to_value(ModelConfig::default()).map_err(|e| e.to_string())?;
    let fields = merged
        .as_object_mut()
        .expect("config serializes as an object");
    let overrides: Vec<(String, Value)> = if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        v.as_object()
            .ok_or("expected a JSON object")?
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    } else {
        let mut out = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let parsed = if key == "hidden_dims" {
                let dims = value
                    .split(',')
                    .map(|d| d.trim().parse::<u64>().map(Value::from))
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| format!("line {}: {e}", n + 1))?;
                Value::Array(dims)
            } else {
                serde_json::from_str(value)
                    .map_err(|_| format!("line {}: bad value `{value}`", n + 1))?
            };
            out.push((key.to_string(), parsed));
        }
        out
    };
    let explicit_gender = overrides.iter().any(|(k, _)| k == "gender_embedding_dim");
    for (key, value) in overrides {
        if !fields.contains_key(&key) {
            return Err(format!("unknown key `{key}`"));
        }
        fields.insert(key, value);
    }
    let mut config: ModelConfig = serde_json::from_value(merged).map_err(|e| e.to_string())?;
    if !explicit_gender {
        if let Some(&h) = config.hidden_dims.first() {
            config.gender_embedding_dim = h;
        }
    }
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

fn settings(args: &RunArgs) -> Result<PipelineSettings> {
    let model = match args.budget {
        Some(budget) => {
            if args.config.is_some() {
                return Err(CliError::Usage(
                    "--budget and --config are exclusive".into(),
                ));
            }
            ModelChoice::Search(SearchSpace {
                budget,
                seed: args.seed,
                ..SearchSpace::default()
            })
        }
        None => ModelChoice::Fixed(match &args.config {
            Some(path) => load_config(path)?,
            None => ModelConfig::default(),
        }),
    };
    Ok(PipelineSettings {
        task: args.task,
        seed: args.seed,
        k: args.k,
        min_count: args.min_count,
        model,
    })
}

fn execute(command: &Command) -> Result<()> {
    match command {
        Command::Validate(args) => validate(args),
        Command::Stats(args) => stats(args),
        Command::Train(args) => train(args),
        Command::Estimate(args) => estimate(args),
        Command::Report(args) => report(args),
        Command::OracleCheck(args) => oracle_check(args),
        Command::Synth(args) => write_synth(args),
    }
}

fn validate(args: &DataArgs) -> Result<()> {
    let lexicon = load_lexicon(&args.dataset)?;
    let summary = json!({
        "valid": true,
        "pairs": lexicon.len(),
        "lexemes": lexicon.lexeme_count(),
        "alphabet_size": lexicon.alphabet().len(),
        "class_sizes": lexicon.class_sizes(),
        "dataset_hash": lexicon.content_hash(),
    });
    println!(
        "valid: {} pairs, {} lexemes, {} classes",
        lexicon.len(),
        lexicon.lexeme_count(),
        lexicon.class_sizes().len()
    );
    let mut out = Artifacts::new(&args.out)?;
    out.write_json("validation.json", &summary)?;
    out.finish(
        "validate",
        json!({ "dataset_hash": lexicon.content_hash() }),
    )
}

fn stats(args: &DataArgs) -> Result<()> {
    let lexicon = load_lexicon(&args.dataset)?;
    let table = distribution_table(&lexicon).map_err(ReportError::from)?;
    let csv = table.to_csv();
    print!("{csv}");
    let mut out = Artifacts::new(&args.out)?;
    out.write("table1.csv", &csv)?;
    out.write_json("table1.json", &table)?;
    out.write_json("class_sizes.json", &lexicon.class_sizes())?;
    out.finish("stats", json!({ "dataset_hash": lexicon.content_hash() }))
}

fn train(args: &RunArgs) -> Result<()> {
    let lexicon = load_lexicon(&args.data.dataset)?;
    let settings = settings(args)?;
    let base_task = if args.task == Task::Etymology {
        Task::Allomorph
    } else {
        args.task
    };
    let prepared = prepare(&lexicon, base_task, args.min_count)?;
    let set = if args.task == Task::Etymology {
        &prepared.etymology
    } else {
        &prepared.classes
    };
    let mut out = Artifacts::new(&args.data.out)?;
    let config = match &settings.model {
        ModelChoice::Fixed(base) => base.with_seed(args.seed),
        ModelChoice::Search(space) => {
            let outcome = search(space, set, args.k, args.with_etymology)?;
            out.write_json("trials.json", &outcome)?;
            outcome.best.with_seed(args.seed)
        }
    };
    let mut model = ClassifierModel::for_training(&config, set, args.with_etymology)?;
    let losses = model.fit(set)?;
    let checkpoint = out.dir.join("model.json");
    model.save(&checkpoint)?;
    out.written.push("model.json".into());
    out.write_json(
        "training_log.json",
        &json!({ "config": config, "epoch_loss_bits": losses }),
    )?;
    println!(
        "trained {} epochs on {} instances; final loss {:.4} bits",
        losses.len(),
        set.len(),
        losses.last().copied().unwrap_or(f64::NAN)
    );
    out.finish(
        "train",
        json!({ "dataset_hash": prepared.dataset_hash, "settings": settings,
                "with_etymology": args.with_etymology }),
    )
}

fn estimate(args: &RunArgs) -> Result<()> {
    let lexicon = load_lexicon(&args.data.dataset)?;
    let settings = settings(args)?;
    let mut out = Artifacts::new(&args.data.out)?;
    if args.task == Task::Etymology {
        let prepared = prepare(&lexicon, Task::Allomorph, args.min_count)?;
        let set = &prepared.etymology;
        let eval = match &settings.model {
            ModelChoice::Fixed(base) => {
                let plan = make_folds(set, args.k, args.seed)?;
                let config = base.with_seed(derive_seed(args.seed, 2));
                run_cv_with_plan(set, &config, &plan, false)?
            }
            ModelChoice::Search(space) => {
                crate::experiment::run_cv_nested(set, space, args.k, false)?.eval
            }
        };
        println!(
            "etymology: CE {:.4} bits, accuracy {:.4}",
            eval.cross_entropy_bits, eval.accuracy
        );
        out.write("confusion_etymology.csv", &eval.confusion_csv())?;
        out.write_json("estimates.json", &json!({ "etymology": eval }))?;
        return out.finish(
            "estimate",
            json!({ "dataset_hash": prepared.dataset_hash, "settings": settings }),
        );
    }
    let prepared = prepare(&lexicon, args.task, args.min_count)?;
    let estimates = estimate_all(&prepared, &settings)?;
    for (name, model) in [
        ("form", &estimates.form),
        ("form_etymology", &estimates.form_etymology),
        ("etymology", &estimates.etymology),
    ] {
        println!(
            "{name}: CE {:.4} bits, accuracy {:.4}",
            model.eval.cross_entropy_bits, model.eval.accuracy
        );
        out.write(
            &format!("confusion_{name}.csv"),
            &model.eval.confusion_csv(),
        )?;
    }
    out.write_json("estimates.json", &estimates)?;
    out.finish(
        "estimate",
        json!({ "dataset_hash": prepared.dataset_hash, "settings": settings }),
    )
}

fn report(args: &RunArgs) -> Result<()> {
    let lexicon = load_lexicon(&args.data.dataset)?;
    let settings = settings(args)?;
    let report = run_report(&lexicon, &settings)?;
    let mut out = Artifacts::new(&args.data.out)?;
    out.write("report.json", &emit(&report, Format::Json)?)?;
    out.write("report.csv", &emit(&report, Format::Csv)?)?;
    let text = emit(&report, Format::Text)?;
    print!("{text}");
    out.write("report.txt", &text)?;
    out.write("confusion.csv", &report.confusion_csv())?;
    out.write("pmi.csv", &report.pmi_csv())?;
    out.finish(
        "report",
        json!({ "dataset_hash": report.provenance.dataset_hash, "settings": settings }),
    )
}

fn oracle_check(args: &OracleArgs) -> Result<()> {
    let suites = [
        oracle::joint_suite(args.joints, args.seed),
        oracle::gradient_suite(args.models, args.seed, 1e-4),
    ];
    let mut ok = true;
    for s in &suites {
        println!(
            "{} {} ({} cases, worst {:.3e}, tolerance {:.0e})",
            if s.passed() { "PASS" } else { "FAIL" },
            s.name,
            s.cases,
            s.worst,
            s.tolerance
        );
        ok &= s.passed();
    }
    if ok {
        Ok(())
    } else {
        Err(CliError::OracleFailed)
    }
}

fn write_synth(args: &SynthArgs) -> Result<()> {
    let lexicon = synth::maltese_like_lexicon(args.rows, args.seed);
    let mut out = Artifacts::new(&args.out)?;
    out.write("lexicon.tsv", &lexicon.to_tsv_string())?;
    out.finish(
        "synth",
        json!({ "rows": args.rows, "seed": args.seed, "dataset_hash": lexicon.content_hash() }),
    )
}
