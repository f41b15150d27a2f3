//! UniMorph TSV reading/writing, statistics and dataset comparison.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{parse_bundle, FeatureBundle};
use crate::generator::{EntryStatus, GeneratedEntry};
use crate::lexicon::Lexicon;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DatasetRecord {
    pub lemma: String,
    pub surface_form: String,
    pub features: String,
}

impl DatasetRecord {
    pub fn new(lemma: impl Into<String>, surface_form: impl Into<String>, bundle: FeatureBundle) -> Self {
        DatasetRecord {
            lemma: lemma.into(),
            surface_form: surface_form.into(),
            features: bundle.to_string(),
        }
    }

    pub fn bundle(&self) -> Option<FeatureBundle> {
        parse_bundle(&self.features).ok()
    }
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("line {line}: {reason}")]
    ParseError { line: usize, reason: String },
    #[error("I/O failure on {path}: {source}")]
    IOFailure {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// How strictly feature columns are checked on read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReadMode {
    /// Features must form a valid bundle of this label inventory; they are
    /// canonicalized on read. Duplicate records are rejected.
    Strict,
    /// Features are kept verbatim (e.g. other UniMorph editions' labels).
    Lenient,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DatasetError + '_ {
    move |source| DatasetError::IOFailure {
        path: path.to_path_buf(),
        source,
    }
}

pub fn parse_tsv(text: &str, mode: ReadMode) -> Result<Vec<DatasetRecord>, DatasetError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.is_empty() {
            continue;
        }
        let perr = |reason: String| DatasetError::ParseError { line, reason };
        let f: Vec<&str> = raw.split('\t').collect();
        if f.len() != 3 {
            return Err(perr(format!("expected 3 tab-separated fields, found {}", f.len())));
        }
        if f.iter().any(|s| s.trim().is_empty()) {
            return Err(perr("empty field".into()));
        }
        let features = match mode {
            ReadMode::Strict => {
                let b = parse_bundle(f[2]).map_err(|e| perr(e.to_string()))?;
                if !seen.insert((f[0].to_string(), f[1].to_string(), b)) {
                    return Err(perr(format!("duplicate record {}/{}/{b}", f[0], f[1])));
                }
                b.to_string()
            }
            ReadMode::Lenient => f[2].to_string(),
        };
        out.push(DatasetRecord {
            lemma: f[0].to_string(),
            surface_form: f[1].to_string(),
            features,
        });
    }
    Ok(out)
}

pub fn format_tsv(records: &[DatasetRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.lemma);
        out.push('\t');
        out.push_str(&r.surface_form);
        out.push('\t');
        out.push_str(&r.features);
        out.push('\n');
    }
    out
}

pub fn read_tsv(path: impl AsRef<Path>) -> Result<Vec<DatasetRecord>, DatasetError> {
    read_tsv_with(path, ReadMode::Strict)
}

pub fn read_tsv_with(path: impl AsRef<Path>, mode: ReadMode) -> Result<Vec<DatasetRecord>, DatasetError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_tsv(&text, mode)
}

pub fn write_tsv(records: &[DatasetRecord], path: impl AsRef<Path>) -> Result<(), DatasetError> {
    let path = path.as_ref();
    std::fs::write(path, format_tsv(records)).map_err(io_err(path))
}

pub fn records_from_entries<'a>(entries: impl IntoIterator<Item = &'a GeneratedEntry>) -> Vec<DatasetRecord> {
    entries
        .into_iter()
        .map(|e| DatasetRecord::new(&e.lemma, &e.surface_form, e.bundle))
        .collect()
}

/// Treats every record of a strict dataset as a kept entry (no hits).
pub fn entries_from_records(records: &[DatasetRecord]) -> Result<Vec<GeneratedEntry>, DatasetError> {
    records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let bundle = parse_bundle(&r.features).map_err(|e| DatasetError::ParseError {
                line: i + 1,
                reason: e.to_string(),
            })?;
            Ok(GeneratedEntry {
                lemma: r.lemma.clone(),
                surface_form: r.surface_form.clone(),
                bundle,
                rule_id: String::new(),
                hits: None,
                status: EntryStatus::Kept,
            })
        })
        .collect()
}

/// Discarded entries with their hit counts (empty when unknown).
pub fn format_sidecar(entries: &[GeneratedEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        let hits = e.hits.map(|h| h.to_string()).unwrap_or_default();
        out.push_str(&format!("{}\t{}\t{}\t{}\n", e.lemma, e.surface_form, e.bundle, hits));
    }
    out
}

pub fn write_sidecar(entries: &[GeneratedEntry], path: impl AsRef<Path>) -> Result<(), DatasetError> {
    let path = path.as_ref();
    std::fs::write(path, format_sidecar(entries)).map_err(io_err(path))
}

/// Reads a sidecar back as `(record, hits)` pairs.
pub fn parse_sidecar(text: &str) -> Result<Vec<(DatasetRecord, Option<u64>)>, DatasetError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        if raw.is_empty() {
            continue;
        }
        let line = idx + 1;
        let f: Vec<&str> = raw.split('\t').collect();
        if f.len() != 4 {
            return Err(DatasetError::ParseError {
                line,
                reason: format!("expected 4 fields, found {}", f.len()),
            });
        }
        let hits = match f[3] {
            "" => None,
            h => Some(h.parse::<u64>().map_err(|e| DatasetError::ParseError {
                line,
                reason: e.to_string(),
            })?),
        };
        let record = parse_tsv(&f[..3].join("\t"), ReadMode::Strict).map_err(|e| match e {
            DatasetError::ParseError { reason, .. } => DatasetError::ParseError { line, reason },
            other => other,
        })?;
        out.push((record.into_iter().next().expect("one line parsed"), hits));
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DatasetStats {
    pub total_records: usize,
    pub distinct_lemmas: usize,
    pub records_per_lemma: f64,
    /// Records per "<politeness> <class>" cell; only filled when a lexicon
    /// is supplied. Lemmas missing from the lexicon count as "unlisted".
    pub per_class_counts: BTreeMap<String, usize>,
}

pub fn compute_stats(records: &[DatasetRecord], lex: Option<&Lexicon>) -> DatasetStats {
    let lemmas: BTreeSet<&str> = records.iter().map(|r| r.lemma.as_str()).collect();
    let mut per_class_counts = BTreeMap::new();
    if let Some(lex) = lex {
        for r in records {
            let key = lex.get(&r.lemma).map_or_else(
                || "unlisted".to_string(),
                |v| format!("{} {}", v.politeness_type, v.class),
            );
            *per_class_counts.entry(key).or_insert(0) += 1;
        }
    }
    let total = records.len();
    DatasetStats {
        total_records: total,
        distinct_lemmas: lemmas.len(),
        records_per_lemma: if lemmas.is_empty() {
            0.0
        } else {
            total as f64 / lemmas.len() as f64
        },
        per_class_counts,
    }
}

impl fmt::Display for DatasetStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "records\t{}", self.total_records)?;
        writeln!(f, "lemmas\t{}", self.distinct_lemmas)?;
        write!(f, "records_per_lemma\t{:.2}", self.records_per_lemma)?;
        for (k, v) in &self.per_class_counts {
            write!(f, "\n{k}\t{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BundleMismatch {
    pub lemma: String,
    pub form: String,
    pub in_a: Vec<String>,
    pub in_b: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiffReport {
    pub only_in_a: Vec<DatasetRecord>,
    pub only_in_b: Vec<DatasetRecord>,
    pub bundle_mismatches: Vec<BundleMismatch>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.only_in_a.is_empty() && self.only_in_b.is_empty() && self.bundle_mismatches.is_empty()
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "identical");
        }
        for r in &self.only_in_a {
            writeln!(f, "< {}\t{}\t{}", r.lemma, r.surface_form, r.features)?;
        }
        for r in &self.only_in_b {
            writeln!(f, "> {}\t{}\t{}", r.lemma, r.surface_form, r.features)?;
        }
        for m in &self.bundle_mismatches {
            writeln!(
                f,
                "! {}\t{}\t{} | {}",
                m.lemma,
                m.form,
                m.in_a.join(" "),
                m.in_b.join(" ")
            )?;
        }
        write!(
            f,
            "{} only in a, {} only in b, {} bundle mismatches",
            self.only_in_a.len(),
            self.only_in_b.len(),
            self.bundle_mismatches.len()
        )
    }
}

/// Label-order-insensitive key for a feature column. Valid bundles compare
/// by label set; anything else by its sorted token set.
fn feature_key(features: &str) -> String {
    match parse_bundle(features) {
        Ok(b) => b.to_string(),
        Err(_) => {
            let tokens: BTreeSet<&str> = features.split(';').map(str::trim).collect();
            tokens.into_iter().collect::<Vec<_>>().join(";")
        }
    }
}

type Grouped<'a> = BTreeMap<(&'a str, &'a str), BTreeMap<String, &'a DatasetRecord>>;

fn group(records: &[DatasetRecord]) -> Grouped<'_> {
    let mut g: Grouped = BTreeMap::new();
    for r in records {
        g.entry((r.lemma.as_str(), r.surface_form.as_str()))
            .or_default()
            .entry(feature_key(&r.features))
            .or_insert(r);
    }
    g
}

/// Set comparison of two datasets. Pairs of (lemma, form) present on only
/// one side are listed whole; shared pairs whose bundle sets differ are
/// reported as mismatches.
pub fn diff(a: &[DatasetRecord], b: &[DatasetRecord]) -> DiffReport {
    let ga = group(a);
    let gb = group(b);
    let mut report = DiffReport::default();
    for (key, fa) in &ga {
        match gb.get(key) {
            None => report.only_in_a.extend(fa.values().map(|r| (*r).clone())),
            Some(fb) if fa.keys().ne(fb.keys()) => report.bundle_mismatches.push(BundleMismatch {
                lemma: key.0.to_string(),
                form: key.1.to_string(),
                in_a: fa.keys().cloned().collect(),
                in_b: fb.keys().cloned().collect(),
            }),
            Some(_) => {}
        }
    }
    for (key, fb) in &gb {
        if !ga.contains_key(key) {
            report.only_in_b.extend(fb.values().map(|r| (*r).clone()));
        }
    }
    report
}
