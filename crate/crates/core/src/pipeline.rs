//! generate -> filter wiring shared by the CLI and tests.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{self, DatasetError};
use crate::frequency::{self, CacheError, FetchError, FilterError, FilterOutcome, HitCache};
use crate::generator::{self, ExclusionError, ExclusionList, GenerateError, GeneratedEntry};
use crate::lexicon::{self, Lexicon, LexiconError};
use crate::rules::{self, RuleError, RuleInventory};

pub const GENERATED_FILE: &str = "generated.tsv";
pub const KEPT_FILE: &str = "kept.tsv";
pub const DISCARDED_FILE: &str = "discarded.tsv";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProviderMode {
    #[default]
    Offline,
    Live,
}

/// Inputs and outputs of a pipeline run. Missing data paths fall back to
/// the files bundled with the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    pub lexicon_path: Option<PathBuf>,
    pub rules_path: Option<PathBuf>,
    pub exclusion_path: Option<PathBuf>,
    pub hit_cache_path: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub threshold: u64,
    pub provider_mode: ProviderMode,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            lexicon_path: None,
            rules_path: None,
            exclusion_path: None,
            hit_cache_path: None,
            output_dir: PathBuf::from("out"),
            threshold: frequency::DEFAULT_THRESHOLD,
            provider_mode: ProviderMode::Offline,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Rules(#[from] RuleError),
    #[error(transparent)]
    Exclusions(#[from] ExclusionError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error(transparent)]
    Fetch(#[from] FetchError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("cannot create {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl PipelineError {
    /// I/O and provider failures, as opposed to invalid data.
    pub fn is_io(&self) -> bool {
        matches!(
            self,
            PipelineError::Io { .. }
                | PipelineError::Lexicon(LexiconError::Io { .. })
                | PipelineError::Rules(RuleError::Io { .. })
                | PipelineError::Exclusions(ExclusionError::Io { .. })
                | PipelineError::Cache(CacheError::Io { .. })
                | PipelineError::Dataset(DatasetError::IOFailure { .. })
                | PipelineError::Fetch(_)
        )
    }
}

pub struct Inputs {
    pub lexicon: Lexicon,
    pub rules: RuleInventory,
    pub exclusions: ExclusionList,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.provider_mode == ProviderMode::Offline && self.hit_cache_path.is_none() {
            return Err(PipelineError::Config("offline mode requires a hit cache file".into()));
        }
        Ok(())
    }

    pub fn load_inputs(&self) -> Result<Inputs, PipelineError> {
        Ok(Inputs {
            lexicon: match &self.lexicon_path {
                Some(p) => lexicon::load_lexicon(p)?,
                None => Lexicon::shipped(),
            },
            rules: match &self.rules_path {
                Some(p) => rules::load_rules(p)?,
                None => RuleInventory::shipped(),
            },
            exclusions: match &self.exclusion_path {
                Some(p) => ExclusionList::load(p)?,
                None => ExclusionList::shipped(),
            },
        })
    }

    fn out_path(&self, name: &str) -> Result<PathBuf, PipelineError> {
        std::fs::create_dir_all(&self.output_dir).map_err(|source| PipelineError::Io {
            path: self.output_dir.clone(),
            source,
        })?;
        Ok(self.output_dir.join(name))
    }
}

/// Generates the pre-filter dataset and writes it to `generated.tsv`.
pub fn run_generate(config: &PipelineConfig) -> Result<(Inputs, Vec<GeneratedEntry>), PipelineError> {
    let inputs = config.load_inputs()?;
    let entries = generator::generate_all(&inputs.lexicon, &inputs.rules, &inputs.exclusions)?;
    dataset::write_tsv(
        &dataset::records_from_entries(&entries),
        config.out_path(GENERATED_FILE)?,
    )?;
    Ok((inputs, entries))
}

/// Hit counts for every generated form, from the cache file or (in live
/// mode) from the web provider, updating the cache file afterwards.
fn obtain_hits(config: &PipelineConfig, entries: &[GeneratedEntry]) -> Result<HitCache, PipelineError> {
    match config.provider_mode {
        ProviderMode::Offline => {
            let path = config
                .hit_cache_path
                .as_ref()
                .ok_or_else(|| PipelineError::Config("offline mode requires a hit cache file".into()))?;
            Ok(HitCache::load(path)?)
        }
        ProviderMode::Live => fetch_live(config, entries),
    }
}

#[cfg(feature = "live")]
fn fetch_live(config: &PipelineConfig, entries: &[GeneratedEntry]) -> Result<HitCache, PipelineError> {
    use crate::frequency::{fetch_hits, FetchPolicy, SerpApiConfig, SerpApiProvider};

    let existing = match &config.hit_cache_path {
        Some(p) if p.exists() => HitCache::load(p)?,
        _ => HitCache::new(),
    };
    let provider = SerpApiProvider::new(SerpApiConfig::default())
        .map_err(|e| PipelineError::Fetch(FetchError::ProviderUnavailable(e.to_string())))?;
    let forms: Vec<String> = entries.iter().map(|e| e.surface_form.clone()).collect();
    let policy = FetchPolicy {
        ttl: Some(std::time::Duration::from_secs(30 * 24 * 3600)),
        rate_limit_per_minute: Some(60),
        max_retries: 2,
    };
    let result = fetch_hits(&provider, &forms, existing, &policy);
    // keep whatever was fetched before a quota stop so the run can resume
    let cache = match &result {
        Ok(out) => Some(&out.cache),
        Err(FetchError::QuotaExceeded { partial, .. }) => Some(&partial.cache),
        Err(_) => None,
    };
    if let (Some(cache), Some(p)) = (cache, &config.hit_cache_path) {
        cache.save(p)?;
    }
    Ok(result?.cache)
}

#[cfg(not(feature = "live"))]
fn fetch_live(_config: &PipelineConfig, _entries: &[GeneratedEntry]) -> Result<HitCache, PipelineError> {
    Err(PipelineError::Config("built without the live hit provider".into()))
}

/// Generates, filters and writes `kept.tsv` plus the `discarded.tsv` sidecar.
pub fn run_filter(config: &PipelineConfig) -> Result<(Inputs, FilterOutcome), PipelineError> {
    config.validate()?;
    let (inputs, entries) = run_generate(config)?;
    let cache = obtain_hits(config, &entries)?;
    let outcome = frequency::filter_entries(entries, &cache, config.threshold)?;
    dataset::write_tsv(
        &dataset::records_from_entries(&outcome.kept),
        config.out_path(KEPT_FILE)?,
    )?;
    dataset::write_sidecar(&outcome.discarded, config.out_path(DISCARDED_FILE)?)?;
    Ok((inputs, outcome))
}

/// Reads a kept dataset and fills hit counts from a cache if given.
pub fn load_kept(path: &Path, cache: Option<&HitCache>) -> Result<Vec<GeneratedEntry>, PipelineError> {
    let records = dataset::read_tsv(path)?;
    let mut entries = dataset::entries_from_records(&records)?;
    if let Some(cache) = cache {
        for e in &mut entries {
            e.hits = cache.hits(&e.surface_form);
        }
    }
    Ok(entries)
}
