//! Surface form -> (lemma, bundle) lookup over a filtered dataset.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::features::FeatureBundle;
use crate::frequency::confidence;
use crate::generator::{EntryStatus, GeneratedEntry};
use crate::lexicon::Lexicon;
use crate::rules::honorific_markers;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalyzerError {
    #[error("duplicate entry {lemma}/{form}/{bundle}")]
    DuplicateEntry {
        lemma: String,
        form: String,
        bundle: FeatureBundle,
    },
    #[error("{0:?} is not in the lexicon")]
    UnknownLemma(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Reading {
    pub lemma: String,
    pub bundle: FeatureBundle,
    pub rule_id: String,
    pub confidence: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelatedForm {
    pub form: String,
    pub lemma: String,
    pub bundle: FeatureBundle,
    pub confidence: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisResult {
    pub form: String,
    pub readings: Vec<Reading>,
    /// Related forms for each reading, parallel to `readings`; empty when
    /// the result was computed without a lexicon.
    pub related: Vec<Vec<RelatedForm>>,
}

impl AnalysisResult {
    pub fn is_found(&self) -> bool {
        !self.readings.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
pub struct AnalysisIndex {
    by_form: BTreeMap<String, Vec<Reading>>,
    by_lemma_bundle: BTreeMap<(String, FeatureBundle), Vec<String>>,
    by_lemma: HashMap<String, Vec<(String, FeatureBundle, u8)>>,
}

/// Indexes the kept entries of a dataset; other statuses are skipped.
/// Confidence is scaled against the largest hit count among kept entries;
/// entries without a count score 0.
pub fn build_index(entries: &[GeneratedEntry]) -> Result<AnalysisIndex, AnalyzerError> {
    let kept: Vec<&GeneratedEntry> = entries.iter().filter(|e| e.status == EntryStatus::Kept).collect();
    let max_hits = kept.iter().filter_map(|e| e.hits).max().unwrap_or(0);
    let mut index = AnalysisIndex::default();
    let mut seen = HashSet::new();
    for e in kept {
        if !seen.insert((&e.lemma, &e.surface_form, e.bundle)) {
            return Err(AnalyzerError::DuplicateEntry {
                lemma: e.lemma.clone(),
                form: e.surface_form.clone(),
                bundle: e.bundle,
            });
        }
        let conf = confidence(e.hits.unwrap_or(0), max_hits);
        index.by_form.entry(e.surface_form.clone()).or_default().push(Reading {
            lemma: e.lemma.clone(),
            bundle: e.bundle,
            rule_id: e.rule_id.clone(),
            confidence: conf,
        });
        index
            .by_lemma_bundle
            .entry((e.lemma.clone(), e.bundle))
            .or_default()
            .push(e.surface_form.clone());
        index
            .by_lemma
            .entry(e.lemma.clone())
            .or_default()
            .push((e.surface_form.clone(), e.bundle, conf));
    }
    for readings in index.by_form.values_mut() {
        readings.sort_by(|a, b| {
            b.confidence
                .cmp(&a.confidence)
                .then_with(|| a.bundle.to_string().cmp(&b.bundle.to_string()))
                .then_with(|| a.lemma.cmp(&b.lemma))
        });
    }
    Ok(index)
}

impl AnalysisIndex {
    /// Number of distinct surface forms.
    pub fn len(&self) -> usize {
        self.by_form.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_form.is_empty()
    }

    pub fn forms_for(&self, lemma: &str, bundle: FeatureBundle) -> &[String] {
        self.by_lemma_bundle
            .get(&(lemma.to_string(), bundle))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

/// All readings of an exact surface string, by confidence then bundle.
pub fn analyze(index: &AnalysisIndex, form: &str) -> AnalysisResult {
    AnalysisResult {
        form: form.to_string(),
        readings: index.by_form.get(form).cloned().unwrap_or_default(),
        related: Vec::new(),
    }
}

/// [`analyze`] plus the related forms of every reading.
pub fn analyze_with_related(index: &AnalysisIndex, form: &str, lex: &Lexicon) -> AnalysisResult {
    let mut result = analyze(index, form);
    result.related = result
        .readings
        .iter()
        .map(|r| related_forms(index, &r.lemma, r.bundle, lex).unwrap_or_default())
        .collect();
    result
}

/// Drops the markers an honorific verb adds to all of its bundles.
fn strip_markers(lex: &Lexicon, lemma: &str, bundle: FeatureBundle) -> FeatureBundle {
    let Some(verb) = lex.get(lemma) else { return bundle };
    let markers = honorific_markers(verb.politeness_type);
    if markers.is_empty() || !markers.iter().all(|&m| bundle.contains(m)) {
        return bundle;
    }
    bundle.without(markers.iter().copied()).unwrap_or(bundle)
}

/// Forms of `lemma` and of its lexical honorific equivalents that express
/// the same bundle, ignoring the FORM;ELEV / FORM;HUMB markers an honorific
/// verb carries. Sorted by confidence (descending), then form.
pub fn related_forms(
    index: &AnalysisIndex,
    lemma: &str,
    bundle: FeatureBundle,
    lex: &Lexicon,
) -> Result<Vec<RelatedForm>, AnalyzerError> {
    let linked = lex
        .linked_lemmas(lemma)
        .map_err(|_| AnalyzerError::UnknownLemma(lemma.to_string()))?;
    let query = strip_markers(lex, lemma, bundle);
    let mut out = Vec::new();
    for candidate in std::iter::once(lemma.to_string()).chain(linked) {
        let Some(forms) = index.by_lemma.get(&candidate) else {
            continue;
        };
        for (form, b, conf) in forms {
            if *b == bundle || strip_markers(lex, &candidate, *b) == query {
                out.push(RelatedForm {
                    form: form.clone(),
                    lemma: candidate.clone(),
                    bundle: *b,
                    confidence: *conf,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        b.confidence
            .cmp(&a.confidence)
            .then_with(|| a.form.cmp(&b.form))
            .then_with(|| a.lemma.cmp(&b.lemma))
    });
    Ok(out)
}
