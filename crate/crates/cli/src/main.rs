use std::fmt::Write as _;
use std::io::Write as _;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use katsuyo::analyzer::{analyze_with_related, build_index};
use katsuyo::dataset::{self, compute_stats, ReadMode};
use katsuyo::frequency::{self, HitCache};
use katsuyo::generator::{class_report, inflect};
use katsuyo::pipeline::{self, Inputs, PipelineConfig, PipelineError, ProviderMode};
use katsuyo::{parse_bundle, ConjugationClass, GeneratedEntry, PolitenessType};
use katsuyo_api::AppState;

#[derive(Parser)]
#[command(name = "katsuyo", version, about = "Japanese verb inflection generator and analyzer")]
struct Cli {
    /// TOML file with defaults for the flags below
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    #[arg(long, global = true)]
    rules: Option<PathBuf>,
    #[arg(long, global = true)]
    exclusions: Option<PathBuf>,
    #[arg(long = "hits-cache", global = true)]
    hits_cache: Option<PathBuf>,
    /// Forms with this many hits or fewer are discarded [default: 10]
    #[arg(long, global = true)]
    threshold: Option<u64>,
    /// Output directory [default: out]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    provider: Option<Provider>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Provider {
    Offline,
    Live,
}

#[derive(Subcommand)]
enum Command {
    /// Print the forms of a verb for one feature bundle
    Inflect {
        lemma: String,
        class: ConjugationClass,
        features: String,
        /// Defaults to the lexicon's value, or basic for unknown verbs
        #[arg(long)]
        politeness: Option<PolitenessType>,
    },
    /// List the readings of a surface form
    Analyze {
        form: String,
        /// Kept dataset to search instead of regenerating one
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// Generate the unfiltered dataset and print per-class counts
    Generate,
    /// Generate, look up hit counts and split into kept and discarded
    Filter,
    /// Print statistics for a dataset file
    Stats {
        path: PathBuf,
        /// Accept feature labels outside the supported schema
        #[arg(long)]
        lenient: bool,
    },
    /// Compare two dataset files
    Diff { a: PathBuf, b: PathBuf },
    /// Serve the HTTP API
    Serve {
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    lexicon: Option<PathBuf>,
    rules: Option<PathBuf>,
    exclusions: Option<PathBuf>,
    hits_cache: Option<PathBuf>,
    threshold: Option<u64>,
    out: Option<PathBuf>,
    provider: Option<Provider>,
    port: Option<u16>,
}

enum Failure {
    /// Bad input: unknown labels, malformed data, nothing to produce.
    Invalid(String),
    /// Files or the hit provider.
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Io(_) => 2,
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        if e.is_io() {
            Failure::Io(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

impl From<std::fmt::Error> for Failure {
    fn from(e: std::fmt::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<dataset::DatasetError> for Failure {
    fn from(e: dataset::DatasetError) -> Self {
        PipelineError::from(e).into()
    }
}

const DEFAULT_PORT: u16 = 8080;

struct Settings {
    pipeline: PipelineConfig,
    port: u16,
}

fn settings(cli: &Cli) -> Result<Settings, Failure> {
    let file = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            toml::from_str::<FileConfig>(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))?
        }
        None => FileConfig::default(),
    };
    let defaults = PipelineConfig::default();
    let provider = cli.provider.or(file.provider).unwrap_or(Provider::Offline);
    Ok(Settings {
        pipeline: PipelineConfig {
            lexicon_path: cli.lexicon.clone().or(file.lexicon),
            rules_path: cli.rules.clone().or(file.rules),
            exclusion_path: cli.exclusions.clone().or(file.exclusions),
            hit_cache_path: cli.hits_cache.clone().or(file.hits_cache),
            output_dir: cli.out.clone().or(file.out).unwrap_or(defaults.output_dir),
            threshold: cli.threshold.or(file.threshold).unwrap_or(defaults.threshold),
            provider_mode: match provider {
                Provider::Offline => ProviderMode::Offline,
                Provider::Live => ProviderMode::Live,
            },
        },
        port: file.port.unwrap_or(DEFAULT_PORT),
    })
}

fn cmd_inflect(
    out: &mut String,
    config: &PipelineConfig,
    lemma: &str,
    class: ConjugationClass,
    features: &str,
    politeness: Option<PolitenessType>,
) -> Result<(), Failure> {
    let bundle = parse_bundle(features).map_err(|e| Failure::Invalid(e.to_string()))?;
    let inputs = config.load_inputs()?;
    let politeness = politeness
        .or_else(|| inputs.lexicon.get(lemma).map(|v| v.politeness_type))
        .unwrap_or(PolitenessType::Basic);
    let forms =
        inflect(lemma, class, politeness, bundle, &inputs.rules).map_err(|e| Failure::Invalid(e.to_string()))?;
    if forms.is_empty() {
        return Err(Failure::Invalid(format!(
            "no rule produces {bundle} for {lemma} ({class}, {politeness})"
        )));
    }
    for (form, _) in forms {
        writeln!(out, "{form}")?;
    }
    Ok(())
}

/// Kept entries, either from a dataset file or by filtering in memory.
fn kept_entries(config: &PipelineConfig, dataset: Option<&Path>) -> Result<(Inputs, Vec<GeneratedEntry>), Failure> {
    let cache = config
        .hit_cache_path
        .as_ref()
        .map(HitCache::load)
        .transpose()
        .map_err(PipelineError::from)?;
    if let Some(path) = dataset {
        let inputs = config.load_inputs()?;
        return Ok((inputs, pipeline::load_kept(path, cache.as_ref())?));
    }
    config.validate()?;
    let cache = cache.ok_or_else(|| Failure::Invalid("--hits-cache or --dataset is required".into()))?;
    let inputs = config.load_inputs()?;
    let entries =
        katsuyo::generate_all(&inputs.lexicon, &inputs.rules, &inputs.exclusions).map_err(PipelineError::from)?;
    let outcome = frequency::filter_entries(entries, &cache, config.threshold).map_err(PipelineError::from)?;
    Ok((inputs, outcome.kept))
}

fn cmd_analyze(out: &mut String, config: &PipelineConfig, form: &str, dataset: Option<&Path>) -> Result<(), Failure> {
    let (inputs, kept) = kept_entries(config, dataset)?;
    let index = build_index(&kept).map_err(|e| Failure::Invalid(e.to_string()))?;
    let result = analyze_with_related(&index, form, &inputs.lexicon);
    if !result.is_found() {
        writeln!(out, "{form}: no readings")?;
        return Ok(());
    }
    for (reading, related) in result.readings.iter().zip(&result.related) {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            form, reading.lemma, reading.bundle, reading.confidence
        )?;
        for r in related.iter().filter(|r| r.form != form) {
            writeln!(
                out,
                "  related\t{}\t{}\t{}\t{}",
                r.form, r.lemma, r.bundle, r.confidence
            )?;
        }
    }
    Ok(())
}

fn cmd_generate(out: &mut String, config: &PipelineConfig) -> Result<(), Failure> {
    let (inputs, entries) = pipeline::run_generate(config)?;
    writeln!(out, "politeness\tclass\tverbs\tforms_per_verb\tentries")?;
    for ((pol, class), c) in class_report(&inputs.lexicon, &entries) {
        let per_verb = c.per_verb().map_or_else(|| "mixed".to_string(), |n| n.to_string());
        writeln!(out, "{pol}\t{class}\t{}\t{per_verb}\t{}", c.verbs, c.entries)?;
    }
    writeln!(out, "total\t\t{}\t\t{}", inputs.lexicon.len(), entries.len())?;
    writeln!(
        out,
        "wrote {}",
        config.output_dir.join(pipeline::GENERATED_FILE).display()
    )?;
    Ok(())
}

fn cmd_filter(out: &mut String, config: &PipelineConfig) -> Result<(), Failure> {
    let (_, outcome) = pipeline::run_filter(config)?;
    let manual = outcome
        .discarded
        .iter()
        .filter(|e| e.status == katsuyo::EntryStatus::DiscardedManual)
        .count();
    writeln!(
        out,
        "kept {} entries, discarded {} ({} at or below {} hits, {manual} manual)",
        outcome.kept.len(),
        outcome.discarded.len(),
        outcome.discarded.len() - manual,
        config.threshold
    )?;
    writeln!(
        out,
        "wrote {} and {}",
        config.output_dir.join(pipeline::KEPT_FILE).display(),
        config.output_dir.join(pipeline::DISCARDED_FILE).display()
    )?;
    Ok(())
}

fn cmd_stats(out: &mut String, config: &PipelineConfig, path: &Path, lenient: bool) -> Result<(), Failure> {
    let mode = if lenient { ReadMode::Lenient } else { ReadMode::Strict };
    let records = dataset::read_tsv_with(path, mode)?;
    let lexicon = config.load_inputs().ok().map(|i| i.lexicon);
    writeln!(out, "{}", compute_stats(&records, lexicon.as_ref()))?;
    Ok(())
}

/// Returns whether the files are identical.
fn cmd_diff(out: &mut String, a: &Path, b: &Path) -> Result<bool, Failure> {
    let (ra, rb) = (dataset::read_tsv(a)?, dataset::read_tsv(b)?);
    let report = dataset::diff(&ra, &rb);
    writeln!(out, "{report}")?;
    Ok(report.is_empty())
}

fn cmd_serve(config: &PipelineConfig, port: u16, dataset: Option<&Path>) -> Result<(), Failure> {
    let (inputs, kept) = kept_entries(config, dataset)?;
    let state = AppState::new(&kept, inputs.lexicon, inputs.rules).map_err(|e| Failure::Invalid(e.to_string()))?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    runtime
        .block_on(katsuyo_api::serve(addr, Arc::new(state)))
        .map_err(|e| Failure::Io(format!("{addr}: {e}")))
}

fn run(cli: &Cli, out: &mut String) -> Result<ExitCode, Failure> {
    let s = settings(cli)?;
    let config = &s.pipeline;
    match &cli.command {
        Command::Inflect {
            lemma,
            class,
            features,
            politeness,
        } => cmd_inflect(out, config, lemma, *class, features, *politeness)?,
        Command::Analyze { form, dataset } => cmd_analyze(out, config, form, dataset.as_deref())?,
        Command::Generate => cmd_generate(out, config)?,
        Command::Filter => cmd_filter(out, config)?,
        Command::Stats { path, lenient } => cmd_stats(out, config, path, *lenient)?,
        Command::Diff { a, b } => {
            if !cmd_diff(out, a, b)? {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Serve { port, dataset } => cmd_serve(config, port.unwrap_or(s.port), dataset.as_deref())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(&cli, &mut out);
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(code) => code,
        Err(f) => {
            let (Failure::Invalid(msg) | Failure::Io(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
