use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HitRecord {
    pub surface_form: String,
    pub hits: u64,
    pub source: String,
    pub fetched_at: DateTime<Utc>,
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    ParseError { line: usize, reason: String },
}

/// Hit counts keyed by surface form, then provider id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HitCache {
    records: BTreeMap<String, BTreeMap<String, HitRecord>>,
}

impl HitCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or replaces the record for `(form, source)`.
    pub fn insert(&mut self, record: HitRecord) {
        self.records
            .entry(record.surface_form.clone())
            .or_default()
            .insert(record.source.clone(), record);
    }

    pub fn get_from(&self, form: &str, source: &str) -> Option<&HitRecord> {
        self.records.get(form)?.get(source)
    }

    /// The record used for filtering: the most recent fetch, with ties going
    /// to the lexicographically first source.
    pub fn get(&self, form: &str) -> Option<&HitRecord> {
        self.records
            .get(form)?
            .values()
            .fold(None, |best: Option<&HitRecord>, r| match best {
                Some(b) if b.fetched_at >= r.fetched_at => Some(b),
                _ => Some(r),
            })
    }

    pub fn hits(&self, form: &str) -> Option<u64> {
        self.get(form).map(|r| r.hits)
    }

    pub fn contains(&self, form: &str) -> bool {
        self.records.contains_key(form)
    }

    /// Number of distinct forms.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn forms(&self) -> impl Iterator<Item = &str> {
        self.records.keys().map(String::as_str)
    }

    /// All records, ordered by form then source.
    pub fn records(&self) -> impl Iterator<Item = &HitRecord> {
        self.records.values().flat_map(|m| m.values())
    }

    pub fn max_hits(&self) -> u64 {
        self.forms().filter_map(|f| self.hits(f)).max().unwrap_or(0)
    }

    pub fn merge(&mut self, other: HitCache) {
        for r in other.records.into_values().flat_map(|m| m.into_values()) {
            self.insert(r);
        }
    }

    pub fn parse(text: &str) -> Result<Self, CacheError> {
        let mut cache = HitCache::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.starts_with('#') || raw.trim().is_empty() {
                continue;
            }
            let perr = |reason: String| CacheError::ParseError { line, reason };
            let f: Vec<&str> = raw.split('\t').collect();
            if f.len() != 4 {
                return Err(perr(format!("expected 4 fields, found {}", f.len())));
            }
            let hits = f[1].parse::<u64>().map_err(|e| perr(format!("hits: {e}")))?;
            let fetched_at = DateTime::parse_from_rfc3339(f[3])
                .map_err(|e| perr(format!("timestamp: {e}")))?
                .with_timezone(&Utc);
            if f[0].is_empty() || f[2].is_empty() {
                return Err(perr("empty form or source".into()));
            }
            cache.insert(HitRecord {
                surface_form: f[0].to_string(),
                hits,
                source: f[2].to_string(),
                fetched_at,
            });
        }
        Ok(cache)
    }

    /// Tab-separated form, hits, source, ISO-8601 timestamp; sorted.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for r in self.records() {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                r.surface_form,
                r.hits,
                r.source,
                r.fetched_at.to_rfc3339_opts(SecondsFormat::Secs, true)
            ));
        }
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CacheError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| CacheError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        HitCache::parse(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), CacheError> {
        let path = path.as_ref();
        std::fs::write(path, self.to_tsv()).map_err(|source| CacheError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}
