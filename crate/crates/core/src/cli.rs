//! The `lexalign` command line.
//!
//! ```text
//! lexalign parse    <records.tsv> [--out corpus.json]
//! lexalign match    <A> <B> [--level L] [--backend B] [--table P | --store P [--store-b P]] [--out DIR]
//! lexalign eval     <A> <B> --gold G [--level L] [--backend B] [--k K] [--out DIR]
//! lexalign pipeline <A> <B> --gold G... [--backend B...] [--store P [--store-b P]]... --out DIR
//! ```
//!
//! Store files key sentences by unit id, and unit ids are per-corpus
//! aliases, so `--store` holds corpus A's sentences and `--store-b`
//! corpus B's. Without `--store-b` the one store serves both corpora.
//!
//! ```text
//! ```
//!
//! Exit codes: 0 ok, 2 corpus validation, 3 backend, 4 gold labels,
//! 64 usage, 1 output I/O. `LEXALIGN_THREADS` caps ranking workers
//! (0 or unset = one per core).

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::corpus::{load_corpus, Corpus, CorpusError, Level, Unit};
use crate::eval::{
    detect_gold_level, evaluate, load_gold, EvalConfig, EvalError, EvalReport, GoldLabelSet,
};
use crate::report::{eval_records, match_report, render_table};
use crate::similarity::{match_all_with_threads, RankedMatches, SimilarityError};
use crate::vectorize::{
    fit_tfidf, load_embedding_store, load_embedding_table, Backend, VectorizeError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CORPUS: i32 = 2;
pub const EXIT_BACKEND: i32 = 3;
pub const EXIT_GOLD: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "lexalign",
    version,
    about = "Align and evaluate GDPR-like law corpora"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a recital record file into the canonical JSON corpus.
    Parse(ParseArgs),
    /// Rank every unit of corpus A against all units of corpus B.
    Match(RunArgs),
    /// Rank and score against gold labels with HIT@K.
    Eval(RunArgs),
    /// Match and evaluate several backends at every gold-labeled level.
    Pipeline(PipelineArgs),
}

#[derive(Debug, clap::Args)]
struct ParseArgs {
    input: PathBuf,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Law identifier (defaults to the input file stem).
    #[arg(long)]
    law_id: Option<String>,
    #[arg(long, default_value = "en")]
    language: String,
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    corpus_a: PathBuf,
    corpus_b: PathBuf,
    #[arg(long, default_value = "article")]
    level: Level,
    #[arg(long, value_enum, default_value = "tfidf")]
    backend: BackendKind,
    /// Word-vector file for `--backend wordvec`.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Embedding-store file for `--backend store` (corpus A's sentences).
    #[arg(long)]
    store: Option<PathBuf>,
    /// Embedding-store file with corpus B's sentences.
    #[arg(long, requires = "store")]
    store_b: Option<PathBuf>,
    #[arg(long)]
    gold: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Output directory (reports go to stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "en")]
    language: String,
}

#[derive(Debug, clap::Args)]
struct PipelineArgs {
    corpus_a: PathBuf,
    corpus_b: PathBuf,
    /// Backends to run, in table order. `store` runs once per `--store`.
    #[arg(long, value_enum, default_values = ["tfidf"])]
    backend: Vec<BackendKind>,
    #[arg(long)]
    table: Option<PathBuf>,
    /// Corpus A stores, one per encoder.
    #[arg(long)]
    store: Vec<PathBuf>,
    /// Corpus B stores, paired with `--store` by position.
    #[arg(long)]
    store_b: Vec<PathBuf>,
    /// Gold-label files; the level of each is read from its ids.
    #[arg(long, required = true)]
    gold: Vec<PathBuf>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "en")]
    language: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendKind {
    Tfidf,
    Wordvec,
    Store,
}

/// Everything one match or eval run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub corpus_a_path: PathBuf,
    pub corpus_b_path: PathBuf,
    pub level: Level,
    pub backend: BackendKind,
    pub table_path: Option<PathBuf>,
    pub store_path: Option<PathBuf>,
    pub store_b_path: Option<PathBuf>,
    pub gold_path: Option<PathBuf>,
    pub k: usize,
    pub output_dir: Option<PathBuf>,
    pub language: String,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        match self.backend {
            BackendKind::Wordvec if self.table_path.is_none() => {
                return Err(CliError::Usage("--backend wordvec requires --table".into()))
            }
            BackendKind::Store if self.store_path.is_none() => {
                return Err(CliError::Usage("--backend store requires --store".into()))
            }
            _ => {}
        }
        if self.k == 0 {
            return Err(CliError::Usage("--k must be at least 1".into()));
        }
        Ok(())
    }
}

impl From<RunArgs> for RunConfig {
    fn from(a: RunArgs) -> Self {
        Self {
            corpus_a_path: a.corpus_a,
            corpus_b_path: a.corpus_b,
            level: a.level,
            backend: a.backend,
            table_path: a.table,
            store_path: a.store,
            store_b_path: a.store_b,
            gold_path: a.gold,
            k: a.k,
            output_dir: a.out,
            language: a.language,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Corpus(CorpusError),
    Backend(String),
    Gold(String),
    Io(PathBuf, std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Corpus(_) => EXIT_CORPUS,
            CliError::Backend(_) => EXIT_BACKEND,
            CliError::Gold(_) => EXIT_GOLD,
            CliError::Io(..) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Corpus(e) => write!(f, "corpus: {e}"),
            CliError::Backend(m) => write!(f, "backend: {m}"),
            CliError::Gold(m) => write!(f, "gold labels: {m}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Corpus(e)
    }
}

impl From<VectorizeError> for CliError {
    fn from(e: VectorizeError) -> Self {
        CliError::Backend(e.to_string())
    }
}

impl From<SimilarityError> for CliError {
    fn from(e: SimilarityError) -> Self {
        CliError::Backend(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::Gold(e.to_string())
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("lexalign: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Parse(a) => {
            cmd_parse(&a.input, a.out.as_deref(), a.law_id.as_deref(), &a.language)
        }
        Command::Match(a) => cmd_match(&RunConfig::from(a)),
        Command::Eval(a) => cmd_eval(&RunConfig::from(a)).map(|_| ()),
        Command::Pipeline(a) => cmd_pipeline(&a).map(|_| ()),
    }
}

/// Worker cap from `LEXALIGN_THREADS`; 0 means the default pool.
pub fn thread_cap() -> Result<usize, CliError> {
    match std::env::var("LEXALIGN_THREADS") {
        Err(_) => Ok(0),
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "LEXALIGN_THREADS={v:?} is not a non-negative integer"
            ))
        }),
    }
}

pub fn cmd_parse(
    input: &Path,
    out: Option<&Path>,
    law_id: Option<&str>,
    language: &str,
) -> Result<(), CliError> {
    let mut corpus = load_corpus(input, language)?;
    if let Some(id) = law_id {
        corpus = crate::corpus::parse_tabular(id, corpus.language(), &corpus.to_records())?;
    }
    let json = corpus.to_canonical_json();
    match out {
        Some(p) => write_file(p, &json)?,
        None => print!("{json}"),
    }
    eprintln!(
        "parsed {}: {} chapters, {} articles, {} recitals",
        corpus.law_id(),
        corpus.chapters().len(),
        corpus.article_count(),
        corpus.recital_count()
    );
    Ok(())
}

pub fn cmd_match(config: &RunConfig) -> Result<(), CliError> {
    config.validate()?;
    let threads = thread_cap()?;
    let (a, b) = load_pair(config)?;
    let (ua, ub) = (a.units(config.level), b.units(config.level));
    let backend = build_backend(config.backend, config, &a, &b, config.level)?;
    let matches = run_matches(&backend, &ua, &ub, threads)?;
    let report = match_report(backend.name(), config.level, &matches);
    match &config.output_dir {
        Some(dir) => write_file(&dir.join(match_file(backend.name(), config.level)), &report)?,
        None => print!("{report}"),
    }
    Ok(())
}

pub fn cmd_eval(config: &RunConfig) -> Result<EvalReport, CliError> {
    config.validate()?;
    let gold_path = config
        .gold_path
        .as_deref()
        .ok_or_else(|| CliError::Usage("eval requires --gold".into()))?;
    let threads = thread_cap()?;
    let (a, b) = load_pair(config)?;
    let (ua, ub) = (a.units(config.level), b.units(config.level));
    let gold = read_gold(gold_path, Some(config.level), &ua, &ub)?;
    let backend = build_backend(config.backend, config, &a, &b, config.level)?;
    let matches = run_matches(&backend, &ua, &ub, threads)?;
    let report = evaluate(backend.name(), &matches, &gold, &EvalConfig::new(config.k)?)?;
    warn_flags(&report);

    let table = render_table(std::slice::from_ref(&report));
    match &config.output_dir {
        Some(dir) => {
            let stem = format!("eval-{}-{}", backend.name(), config.level);
            write_file(&dir.join(format!("{stem}.tsv")), &eval_records(&report))?;
            write_file(&dir.join(format!("{stem}.md")), &table)?;
            write_file(
                &dir.join(match_file(backend.name(), config.level)),
                &match_report(backend.name(), config.level, &matches),
            )?;
        }
        None => print!("{table}"),
    }
    println!("HIT@{} {:.4}", report.k, report.accuracy);
    Ok(report)
}

fn cmd_pipeline(args: &PipelineArgs) -> Result<Vec<EvalReport>, CliError> {
    if args.k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    if args.backend.contains(&BackendKind::Wordvec) && args.table.is_none() {
        return Err(CliError::Usage("--backend wordvec requires --table".into()));
    }
    if args.backend.contains(&BackendKind::Store) && args.store.is_empty() {
        return Err(CliError::Usage("--backend store requires --store".into()));
    }
    if !args.store_b.is_empty() && args.store_b.len() != args.store.len() {
        return Err(CliError::Usage(
            "give --store-b once per --store or not at all".into(),
        ));
    }
    let threads = thread_cap()?;
    let a = load_corpus(&args.corpus_a, &args.language)?;
    let b = load_corpus(&args.corpus_b, &args.language)?;

    let mut golds = Vec::new();
    for path in &args.gold {
        let input = std::fs::read_to_string(path)
            .map_err(|e| CliError::Gold(format!("{}: {e}", path.display())))?;
        let level = detect_gold_level(&input)
            .ok_or_else(|| CliError::Gold(format!("{}: no labeled sources", path.display())))?;
        if golds.iter().any(|(l, _)| *l == level) {
            return Err(CliError::Usage(format!("two gold files at {level} level")));
        }
        golds.push((level, path.clone()));
    }
    golds.sort_by_key(|(l, _)| *l);

    let mut reports = Vec::new();
    let mut summary = String::new();
    for (level, gold_path) in &golds {
        let (ua, ub) = (a.units(*level), b.units(*level));
        let gold = read_gold(gold_path, Some(*level), &ua, &ub)?;
        let backends = pipeline_backends(args, &a, &b, *level)?;
        for backend in &backends {
            let matches = run_matches(backend, &ua, &ub, threads)?;
            let report = evaluate(backend.name(), &matches, &gold, &EvalConfig::new(args.k)?)?;
            warn_flags(&report);
            write_file(
                &args.out.join(match_file(backend.name(), *level)),
                &match_report(backend.name(), *level, &matches),
            )?;
            write_file(
                &args
                    .out
                    .join(format!("eval-{}-{level}.tsv", backend.name())),
                &eval_records(&report),
            )?;
            summary.push_str(&format!(
                "HIT@{} {} {level} {:.4}\n",
                report.k, report.backend_name, report.accuracy
            ));
            reports.push(report);
        }
    }
    let table = render_table(&reports);
    write_file(&args.out.join("table.md"), &table)?;
    write_file(&args.out.join("summary.txt"), &summary)?;
    print!("{table}{summary}");
    Ok(reports)
}

fn pipeline_backends(
    args: &PipelineArgs,
    a: &Corpus,
    b: &Corpus,
    level: Level,
) -> Result<Vec<Backend>, CliError> {
    let mut out: Vec<Backend> = Vec::new();
    for kind in &args.backend {
        match kind {
            BackendKind::Tfidf => out.push(tfidf_backend(a, b, level)?),
            BackendKind::Wordvec => {
                let path = args.table.as_ref().expect("validated");
                out.push(Backend::WordVec(load_embedding_table(path)?));
            }
            BackendKind::Store => {
                for (i, path) in args.store.iter().enumerate() {
                    out.push(store_backend(
                        path,
                        args.store_b.get(i).map(PathBuf::as_path),
                    )?);
                }
            }
        }
    }
    let mut names: Vec<&str> = out.iter().map(Backend::name).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::Usage(format!(
            "backend name {} is used twice",
            w[0]
        )));
    }
    Ok(out)
}

fn load_pair(config: &RunConfig) -> Result<(Corpus, Corpus), CliError> {
    Ok((
        load_corpus(&config.corpus_a_path, &config.language)?,
        load_corpus(&config.corpus_b_path, &config.language)?,
    ))
}

/// TF-IDF fitted over both corpora's units at `level`.
pub fn tfidf_backend(a: &Corpus, b: &Corpus, level: Level) -> Result<Backend, CliError> {
    let mut units = a.units(level);
    units.extend(b.units(level));
    let model = fit_tfidf(&units)?.with_scope([a.law_id(), b.law_id()]);
    Ok(Backend::TfIdf(model))
}

fn build_backend(
    kind: BackendKind,
    config: &RunConfig,
    a: &Corpus,
    b: &Corpus,
    level: Level,
) -> Result<Backend, CliError> {
    Ok(match kind {
        BackendKind::Tfidf => tfidf_backend(a, b, level)?,
        BackendKind::Wordvec => Backend::WordVec(load_embedding_table(
            config.table_path.as_ref().expect("validated"),
        )?),
        BackendKind::Store => store_backend(
            config.store_path.as_ref().expect("validated"),
            config.store_b_path.as_deref(),
        )?,
    })
}

fn store_backend(source: &Path, target: Option<&Path>) -> Result<Backend, CliError> {
    let source = load_embedding_store(source)?;
    Ok(match target {
        Some(path) => Backend::store_pair(source, load_embedding_store(path)?)?,
        None => Backend::store(source),
    })
}

fn read_gold(
    path: &Path,
    expect: Option<Level>,
    ua: &[Unit],
    ub: &[Unit],
) -> Result<GoldLabelSet, CliError> {
    let input = std::fs::read_to_string(path)
        .map_err(|e| CliError::Gold(format!("{}: {e}", path.display())))?;
    let level = match (detect_gold_level(&input), expect) {
        (Some(found), Some(want)) if found != want => {
            return Err(CliError::Gold(format!(
                "{} labels {found} units but the run is at {want} level",
                path.display()
            )))
        }
        (_, Some(want)) => want,
        (Some(found), None) => found,
        (None, None) => {
            return Err(CliError::Gold(format!(
                "{}: no labeled sources",
                path.display()
            )))
        }
    };
    load_gold(path, level, ua, ub).map_err(|e| CliError::Gold(format!("{}: {e}", path.display())))
}

fn run_matches(
    backend: &Backend,
    ua: &[Unit],
    ub: &[Unit],
    threads: usize,
) -> Result<Vec<RankedMatches>, CliError> {
    let matches = match_all_with_threads(ua, ub, backend, threads)?;
    let no_vector = matches.iter().filter(|m| !m.source_has_vector).count();
    let skipped_targets: std::collections::BTreeSet<&str> = matches
        .iter()
        .filter(|m| m.source_has_vector)
        .flat_map(|m| m.skipped.iter().map(String::as_str))
        .collect();
    if no_vector > 0 || !skipped_targets.is_empty() {
        eprintln!(
            "{}: {no_vector} source unit(s) without a vector, {} target unit(s) skipped",
            backend.name(),
            skipped_targets.len()
        );
    }
    Ok(matches)
}

fn warn_flags(report: &EvalReport) {
    for (source, flag) in report.flagged() {
        eprintln!(
            "{} {}: {source} scored 0 ({})",
            report.backend_name,
            report.level,
            flag.as_str()
        );
    }
}

fn match_file(backend: &str, level: Level) -> String {
    format!("matches-{backend}-{level}.tsv")
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(backend: BackendKind) -> RunConfig {
        RunConfig {
            corpus_a_path: "a".into(),
            corpus_b_path: "b".into(),
            level: Level::Article,
            backend,
            table_path: None,
            store_path: None,
            store_b_path: None,
            gold_path: None,
            k: 1,
            output_dir: None,
            language: "en".into(),
        }
    }

    #[test]
    fn config_validation() {
        assert!(config(BackendKind::Tfidf).validate().is_ok());
        assert_eq!(
            config(BackendKind::Store)
                .validate()
                .unwrap_err()
                .exit_code(),
            EXIT_USAGE
        );
        assert_eq!(
            config(BackendKind::Wordvec)
                .validate()
                .unwrap_err()
                .exit_code(),
            EXIT_USAGE
        );
        let mut c = config(BackendKind::Tfidf);
        c.k = 0;
        assert_eq!(c.validate().unwrap_err().exit_code(), EXIT_USAGE);
    }

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(run(["lexalign", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["lexalign", "match", "a.tsv"]), EXIT_USAGE);
        assert_eq!(
            run(["lexalign", "match", "a", "b", "--level", "chapter"]),
            EXIT_USAGE
        );
        assert_eq!(run(["lexalign", "--version"]), EXIT_OK);
    }
}
