//! Hit-count collection, threshold filtering and confidence scores.

mod cache;
mod provider;

use std::collections::HashSet;
use std::thread;
use std::time::{Duration, Instant};

use chrono::Utc;
use serde::Serialize;
use thiserror::Error;

use crate::generator::{EntryStatus, GeneratedEntry};

pub use cache::{CacheError, HitCache, HitRecord};
pub use provider::{CacheProvider, HitProvider, ProviderError, SyntheticProvider};
#[cfg(feature = "live")]
pub use provider::{SerpApiConfig, SerpApiProvider};

/// Forms with this many hits or fewer are discarded by default.
pub const DEFAULT_THRESHOLD: u64 = 10;

#[derive(Debug, Clone)]
pub struct FetchPolicy {
    /// Cached records from the same provider younger than this are reused.
    pub ttl: Option<Duration>,
    /// Upper bound on provider calls per minute; `None` means unthrottled.
    pub rate_limit_per_minute: Option<u32>,
    /// Extra attempts after a failed query.
    pub max_retries: u32,
}

impl Default for FetchPolicy {
    fn default() -> Self {
        FetchPolicy {
            ttl: None,
            rate_limit_per_minute: None,
            max_retries: 2,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct FetchOutcome {
    pub cache: HitCache,
    /// Forms that could not be fetched, with the last error. These are
    /// absent from the cache, never recorded as zero.
    pub failures: Vec<(String, String)>,
}

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("hit provider unavailable: {0}")]
    ProviderUnavailable(String),
    /// `resume_at` indexes the de-duplicated form list.
    #[error("provider quota exceeded after {resume_at} forms")]
    QuotaExceeded { partial: FetchOutcome, resume_at: usize },
}

/// Fetches hit counts for `forms` (duplicates are queried once), starting
/// from `existing`. Provider calls are made one at a time.
pub fn fetch_hits(
    provider: &dyn HitProvider,
    forms: &[String],
    existing: HitCache,
    policy: &FetchPolicy,
) -> Result<FetchOutcome, FetchError> {
    let mut seen = HashSet::new();
    let unique: Vec<&String> = forms.iter().filter(|f| seen.insert(f.as_str())).collect();
    let mut out = FetchOutcome {
        cache: existing,
        failures: Vec::new(),
    };
    let interval = policy
        .rate_limit_per_minute
        .filter(|&n| n > 0)
        .map(|n| Duration::from_secs_f64(60.0 / n as f64));
    let mut last_call: Option<Instant> = None;
    let now = Utc::now();

    for (i, form) in unique.iter().enumerate() {
        if let (Some(ttl), Some(rec)) = (policy.ttl, out.cache.get_from(form, provider.id())) {
            let age = now.signed_duration_since(rec.fetched_at).to_std().unwrap_or_default();
            if age <= ttl {
                continue;
            }
        }
        let mut last_err = String::new();
        let mut fetched = None;
        for _ in 0..=policy.max_retries {
            if let (Some(iv), Some(t)) = (interval, last_call) {
                let wait = iv.saturating_sub(t.elapsed());
                if !wait.is_zero() {
                    thread::sleep(wait);
                }
            }
            last_call = Some(Instant::now());
            match provider.query(form) {
                Ok(rec) => {
                    fetched = Some(rec);
                    break;
                }
                Err(ProviderError::Failed(msg)) => last_err = msg,
                Err(ProviderError::Unavailable(msg)) => return Err(FetchError::ProviderUnavailable(msg)),
                Err(ProviderError::QuotaExceeded) => {
                    return Err(FetchError::QuotaExceeded {
                        partial: out,
                        resume_at: i,
                    });
                }
            }
        }
        match fetched {
            Some(rec) => out.cache.insert(rec),
            None => {
                log::warn!("no hit count for {form}: {last_err}");
                out.failures.push((form.to_string(), last_err));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FilterError {
    #[error("no hit record for {0:?}")]
    MissingHitRecord(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FilterOutcome {
    pub kept: Vec<GeneratedEntry>,
    /// Low-frequency and manual discards, in input order.
    pub discarded: Vec<GeneratedEntry>,
}

/// Attaches hit counts and decides each entry: `hits <= threshold` is
/// discarded, anything above is kept. Manually excluded entries stay
/// excluded whatever their count.
pub fn filter_entries(
    entries: Vec<GeneratedEntry>,
    cache: &HitCache,
    threshold: u64,
) -> Result<FilterOutcome, FilterError> {
    let mut out = FilterOutcome::default();
    for mut e in entries {
        let hits = cache.hits(&e.surface_form);
        if e.status == EntryStatus::DiscardedManual {
            e.hits = hits.or(e.hits);
            out.discarded.push(e);
            continue;
        }
        let hits = hits.ok_or_else(|| FilterError::MissingHitRecord(e.surface_form.clone()))?;
        e.hits = Some(hits);
        if hits <= threshold {
            e.status = EntryStatus::DiscardedLowFrequency;
            out.discarded.push(e);
        } else {
            e.status = EntryStatus::Kept;
            out.kept.push(e);
        }
    }
    Ok(out)
}

/// Log-scaled score in 0..=100: `round(100 * ln(1+hits) / ln(1+max_hits))`.
pub fn confidence(hits: u64, max_hits: u64) -> u8 {
    if max_hits == 0 || hits == 0 {
        return 0;
    }
    let score = 100.0 * (hits as f64).ln_1p() / (max_hits as f64).ln_1p();
    score.round().clamp(0.0, 100.0) as u8
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankPoint {
    pub rank: usize,
    pub form: String,
    pub hits: u64,
    /// Hits with zero replaced by 0.5 so the point survives a log axis.
    pub plotted_hits: f64,
}

/// Frequency-rank series: hits descending, ties by form.
pub fn rank_plot_data(cache: &HitCache) -> Vec<RankPoint> {
    let mut rows: Vec<(&str, u64)> = cache.forms().filter_map(|f| cache.hits(f).map(|h| (f, h))).collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    rows.into_iter()
        .enumerate()
        .map(|(i, (form, hits))| RankPoint {
            rank: i + 1,
            form: form.to_string(),
            hits,
            plotted_hits: if hits == 0 { 0.5 } else { hits as f64 },
        })
        .collect()
}
