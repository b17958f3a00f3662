//! `jia`: train, extract, align, detect and evaluate from the command line.
//!
//! Exit codes: 0 success, 1 invalid input or configuration, 2 I/O failure.

mod config;

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{info, warn};

use jia_core::align::align_case;
use jia_core::align::pairs_to_json;
use jia_core::conflict::{detect_all, reports_to_json, reports_to_text};
use jia_core::corpus::{parse_corpus, serialize_corpus, Document};
use jia_core::crf::{model_to_bytes, read_model, CrfModel};
use jia_core::error::{CorpusError, CrfError, EvalError, LexiconError};
use jia_core::eval::{
    cross_validate, evaluate_pipeline, generate_synthetic, EvalConfig, Models, SecondRound, SyntheticConfig,
};
use jia_core::extract::{read_mentions, train_round_one, train_round_two, write_mentions, EventMention, FeatureConfig};
use jia_core::lexicon::Lexicons;

use config::{parse_second_round, RunConfig};

pub const ROUND_ONE_MODEL: &str = "round1.crf";
pub const ROUND_TWO_MODEL: &str = "round2.crf";

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Self {
            code: 2,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        let code = if matches!(e, CorpusError::Io(_)) { 2 } else { 1 };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<LexiconError> for Failure {
    fn from(e: LexiconError) -> Self {
        let code = if matches!(e, LexiconError::Io(_)) { 2 } else { 1 };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<CrfError> for Failure {
    fn from(e: CrfError) -> Self {
        let code = if matches!(e, CrfError::Io(_)) { 2 } else { 1 };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Crf(c) => c.into(),
            e => Self::invalid(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "jia",
    version,
    about = "Event extraction and dispute detection for civil-case statements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat key=value file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Corpus file, one JSON document per line.
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// Directory with triggers.tsv, polarity.txt and aux.txt; missing files use the bundled lexicons.
    #[arg(long, global = true)]
    lexicons: Option<PathBuf>,
    /// Directory holding round1.crf and round2.crf.
    #[arg(long, global = true)]
    model_dir: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Mention file for align and detect; defaults to <out>/mentions.jsonl.
    #[arg(long, global = true)]
    mentions: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    epochs: Option<usize>,
    #[arg(long, global = true)]
    batch: Option<usize>,
    #[arg(long, global = true)]
    lr: Option<f64>,
    #[arg(long, global = true)]
    l2: Option<f64>,
    #[arg(long, global = true)]
    fc_threshold: Option<f64>,
    #[arg(long, global = true)]
    wealth_threshold: Option<f64>,
    /// crf or rules.
    #[arg(long, global = true, value_parser = parse_second_round)]
    second_round: Option<SecondRound>,
    /// Cross-validate with N stratified folds instead of scoring saved models.
    #[arg(long, global = true)]
    folds: Option<usize>,
    /// Number of synthetic cases.
    #[arg(long, global = true)]
    cases: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Train the first-round model on an annotated corpus.
    TrainR1,
    /// Train the second-round model on an annotated corpus.
    TrainR2,
    /// Extract event mentions into <out>/mentions.jsonl.
    Extract,
    /// Align mentions across parties into <out>/pairs.json.
    Align,
    /// Classify aligned pairs into <out>/report.json and <out>/report.txt.
    Detect,
    /// Score saved models, or cross-validate with --folds, into <out>/evaluation.json.
    Evaluate,
    /// Write a synthetic annotated corpus to <out>/corpus.jsonl and <out>/planned.json.
    GenSynthetic,
}

impl Cli {
    fn resolve(&self) -> Result<RunConfig, Failure> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
            cfg.apply_file(&text, &path.display().to_string())?;
        }
        macro_rules! over {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    cfg.$field = v.clone().into();
                }
            )*};
        }
        over!(corpus, lexicons, mentions, second_round, folds);
        over!(
            model_dir,
            out,
            seed,
            epochs,
            batch,
            lr,
            l2,
            fc_threshold,
            wealth_threshold,
            cases
        );
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Writes through a temporary sibling and renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    let name = path.file_name().map(|n| n.to_string_lossy()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let write = || -> io::Result<()> {
        let mut f = File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Failure::io(path, e)
    })?;
    info!("wrote {}", path.display());
    Ok(())
}

fn lexicons(cfg: &RunConfig) -> Result<Lexicons, Failure> {
    match &cfg.lexicons {
        None => Ok(Lexicons::default()),
        Some(dir) if !dir.is_dir() => Err(Failure::io(
            dir,
            io::Error::new(io::ErrorKind::NotFound, "no such directory"),
        )),
        Some(dir) => Ok(Lexicons::load_dir(dir)?),
    }
}

fn corpus(cfg: &RunConfig) -> Result<Vec<Document>, Failure> {
    let path = cfg
        .corpus
        .as_ref()
        .ok_or_else(|| Failure::invalid("--corpus is required"))?;
    let file = File::open(path).map_err(|e| Failure::io(path, e))?;
    let docs = parse_corpus(BufReader::new(file)).map_err(|e| {
        let f = Failure::from(e);
        Failure {
            message: format!("{}: {}", path.display(), f.message),
            ..f
        }
    })?;
    info!("read {} documents from {}", docs.len(), path.display());
    Ok(docs)
}

fn load_model(path: &Path) -> Result<CrfModel, Failure> {
    if !path.exists() {
        return Err(Failure::invalid(format!("missing model {}", path.display())));
    }
    let file = File::open(path).map_err(|e| Failure::io(path, e))?;
    read_model(BufReader::new(file)).map_err(|e| {
        let f = Failure::from(e);
        Failure {
            message: format!("{}: {}", path.display(), f.message),
            ..f
        }
    })
}

fn load_models(cfg: &RunConfig) -> Result<Models, Failure> {
    let round_one = load_model(&cfg.model_dir.join(ROUND_ONE_MODEL))?;
    let r2 = cfg.model_dir.join(ROUND_TWO_MODEL);
    let second = cfg.second_round.unwrap_or(if r2.exists() {
        SecondRound::Crf
    } else {
        SecondRound::Rules
    });
    info!("second round: {second:?}");
    let round_two = match second {
        SecondRound::Crf => Some(load_model(&r2)?),
        SecondRound::Rules => None,
    };
    Ok(Models { round_one, round_two })
}

fn mentions(cfg: &RunConfig) -> Result<Vec<EventMention>, Failure> {
    let path = cfg.mentions.clone().unwrap_or_else(|| cfg.out.join("mentions.jsonl"));
    let file = File::open(&path).map_err(|e| Failure::io(&path, e))?;
    read_mentions(BufReader::new(file)).map_err(|(line, e)| Failure::invalid(format!("{}:{line}: {e}", path.display())))
}

fn json<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s.into_bytes()
}

fn train(cfg: &RunConfig, second: bool) -> Result<(), Failure> {
    let docs = corpus(cfg)?;
    let lex = lexicons(cfg)?;
    let features = FeatureConfig::default();
    let outcome = if second {
        train_round_two(&docs, &lex, &features, &cfg.train())?
    } else {
        train_round_one(&docs, &lex, &features, &cfg.train())?
    };
    if let Some(last) = outcome.epoch_losses.last() {
        info!("final epoch loss {last:.4}");
    }
    let name = if second { ROUND_TWO_MODEL } else { ROUND_ONE_MODEL };
    write_atomic(&cfg.model_dir.join(name), &model_to_bytes(&outcome.model))
}

fn extract(cfg: &RunConfig) -> Result<(), Failure> {
    let docs = corpus(cfg)?;
    let lex = lexicons(cfg)?;
    let models = load_models(cfg)?;
    let extractor = models.extractor(&lex)?;
    let mut all = Vec::new();
    for (doc, ex) in docs.iter().zip(extractor.extract_corpus(&docs)) {
        for f in &ex.failures {
            warn!("{}: {f}", doc.doc_id);
        }
        all.extend(ex.mentions);
    }
    info!("extracted {} mentions", all.len());
    let mut buf = Vec::new();
    write_mentions(&all, &mut buf).expect("writing to memory");
    write_atomic(&cfg.out.join("mentions.jsonl"), &buf)
}

fn align(cfg: &RunConfig) -> Result<(), Failure> {
    let lex = lexicons(cfg)?;
    let mut by_case: BTreeMap<&str, Vec<EventMention>> = BTreeMap::new();
    let all = mentions(cfg)?;
    for m in &all {
        by_case.entry(&m.case_id).or_default().push(m.clone());
    }
    let pairs: Vec<_> = by_case
        .values()
        .flat_map(|ms| align_case(ms, &lex.aux, &cfg.align()))
        .collect();
    info!("aligned {} pairs over {} cases", pairs.len(), by_case.len());
    let mut text = pairs_to_json(&pairs);
    text.push('\n');
    write_atomic(&cfg.out.join("pairs.json"), text.as_bytes())
}

fn detect(cfg: &RunConfig) -> Result<(), Failure> {
    let lex = lexicons(cfg)?;
    let reports = detect_all(&mentions(cfg)?, &lex, &cfg.align());
    let conflicts: usize = reports.iter().map(|r| r.summary.contradictory).sum();
    info!("{} cases, {conflicts} contradictory pairs", reports.len());
    let mut text = reports_to_json(&reports);
    text.push('\n');
    write_atomic(&cfg.out.join("report.json"), text.as_bytes())?;
    write_atomic(&cfg.out.join("report.txt"), reports_to_text(&reports).as_bytes())
}

fn evaluate(cfg: &RunConfig) -> Result<(), Failure> {
    let docs = corpus(cfg)?;
    let lex = lexicons(cfg)?;
    let bytes = match cfg.folds {
        Some(folds) => {
            let eval = EvalConfig {
                train: cfg.train(),
                features: FeatureConfig::default(),
                second_round: cfg.second_round.unwrap_or(SecondRound::Crf),
                align: cfg.align(),
                folds,
                fold_seed: cfg.seed,
            };
            let cv = cross_validate(&docs, &lex, &eval, None)?;
            println!(
                "{folds} folds: F1_ee {:.4}, round-one macro-F1 {:.4}, conflict F1 {:.4}",
                cv.mean_events_f1, cv.mean_round_one_macro_f1, cv.mean_conflict_f1
            );
            json(&cv)
        }
        None => {
            let models = load_models(cfg)?;
            let report = evaluate_pipeline(&docs, &models.extractor(&lex)?, &lex, &cfg.align())?;
            println!(
                "F1_ee {:.4}, round-one macro-F1 {:.4}, conflict F1 {:.4}",
                report.events.f1, report.round_one.macro_avg.f1, report.conflict_f1
            );
            json(&report)
        }
    };
    write_atomic(&cfg.out.join("evaluation.json"), &bytes)
}

fn gen_synthetic(cfg: &RunConfig) -> Result<(), Failure> {
    let corpus = generate_synthetic(&SyntheticConfig {
        n_cases: cfg.cases,
        seed: cfg.seed,
        ..SyntheticConfig::default()
    });
    info!("generated {} documents", corpus.documents.len());
    let mut buf = Vec::new();
    serialize_corpus(&corpus.documents, &mut buf).expect("writing to memory");
    write_atomic(&cfg.out.join("corpus.jsonl"), &buf)?;
    write_atomic(&cfg.out.join("planned.json"), &json(&corpus.planned))
}

fn run(command: Command, cfg: &RunConfig) -> Result<(), Failure> {
    match command {
        Command::TrainR1 => train(cfg, false),
        Command::TrainR2 => train(cfg, true),
        Command::Extract => extract(cfg),
        Command::Align => align(cfg),
        Command::Detect => detect(cfg),
        Command::Evaluate => evaluate(cfg),
        Command::GenSynthetic => gen_synthetic(cfg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("JIA_LOG", "info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = cli.resolve().and_then(|cfg| {
        info!("command {:?}, seed {}, config {cfg:?}", cli.command, cfg.seed);
        run(cli.command, &cfg)
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
