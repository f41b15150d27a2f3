//! Crosses the seed lexicon with the rule inventory.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{parse_bundle, FeatureBundle, FeatureError};
use crate::lexicon::{Lexicon, PolitenessType, VerbEntry};
use crate::morphology::{compose, ConjugationClass, MorphError};
use crate::rules::{honorific_markers, rules_for, InflectionRule, RuleInventory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EntryStatus {
    Pending,
    Kept,
    DiscardedLowFrequency,
    DiscardedManual,
}

impl EntryStatus {
    pub fn is_discarded(self) -> bool {
        matches!(self, EntryStatus::DiscardedLowFrequency | EntryStatus::DiscardedManual)
    }
}

impl fmt::Display for EntryStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EntryStatus::Pending => "pending",
            EntryStatus::Kept => "kept",
            EntryStatus::DiscardedLowFrequency => "discarded-low-frequency",
            EntryStatus::DiscardedManual => "discarded-manual",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GeneratedEntry {
    /// Citation form the entry is filed under (the honorific verb itself for
    /// lexical honorifics).
    pub lemma: String,
    pub surface_form: String,
    pub bundle: FeatureBundle,
    pub rule_id: String,
    pub hits: Option<u64>,
    pub status: EntryStatus,
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("rule {rule_id} on {lemma}: {source}")]
    Morph {
        rule_id: String,
        lemma: String,
        #[source]
        source: MorphError,
    },
    #[error("rule {rule_id} on {lemma}: {source}")]
    Bundle {
        rule_id: String,
        lemma: String,
        #[source]
        source: FeatureError,
    },
}

/// Bundle produced by `rule` for a verb of the given politeness type.
pub fn entry_bundle(rule: &InflectionRule, politeness: PolitenessType) -> Result<FeatureBundle, FeatureError> {
    rule.bundle.with(honorific_markers(politeness).iter().copied())
}

fn apply_rule(verb: &VerbEntry, rule: &InflectionRule) -> Result<GeneratedEntry, GenerateError> {
    let surface_form = compose(&verb.lemma, verb.class, &rule.template).map_err(|source| GenerateError::Morph {
        rule_id: rule.id.clone(),
        lemma: verb.lemma.clone(),
        source,
    })?;
    let bundle = entry_bundle(rule, verb.politeness_type).map_err(|source| GenerateError::Bundle {
        rule_id: rule.id.clone(),
        lemma: verb.lemma.clone(),
        source,
    })?;
    Ok(GeneratedEntry {
        lemma: verb.lemma.clone(),
        surface_form,
        bundle,
        rule_id: rule.id.clone(),
        hits: None,
        status: EntryStatus::Pending,
    })
}

/// One pending entry per applicable rule, in inventory order.
pub fn generate_verb(verb: &VerbEntry, inv: &RuleInventory) -> Result<Vec<GeneratedEntry>, GenerateError> {
    rules_for(verb, inv).into_iter().map(|r| apply_rule(verb, r)).collect()
}

/// Generates every verb of the lexicon (in parallel) and marks manual
/// exclusions. Output order is lexicon order × rule order.
pub fn generate_all(
    lex: &Lexicon,
    inv: &RuleInventory,
    excl: &ExclusionList,
) -> Result<Vec<GeneratedEntry>, GenerateError> {
    let per_verb: Vec<Vec<GeneratedEntry>> = lex
        .entries()
        .par_iter()
        .map(|v| generate_verb(v, inv))
        .collect::<Result<_, _>>()?;
    let mut out: Vec<GeneratedEntry> = per_verb.into_iter().flatten().collect();
    let mut excluded = 0;
    for e in &mut out {
        if excl.matches(e).is_some() {
            e.status = EntryStatus::DiscardedManual;
            excluded += 1;
        }
    }
    log::info!(
        "generated {} entries from {} verbs ({excluded} manually excluded)",
        out.len(),
        lex.len()
    );
    Ok(out)
}

/// Ad-hoc generation: every form whose bundle equals `bundle` for a verb
/// that need not be in the lexicon. Returns `(form, rule id)` pairs.
pub fn inflect(
    lemma: &str,
    class: ConjugationClass,
    politeness: PolitenessType,
    bundle: FeatureBundle,
    inv: &RuleInventory,
) -> Result<Vec<(String, String)>, MorphError> {
    crate::morphology::compute_stems(lemma, class)?;
    let mut out = Vec::new();
    for rule in inv.rules.iter().filter(|r| r.applies(class, politeness)) {
        if entry_bundle(rule, politeness).ok() != Some(bundle) {
            continue;
        }
        if !rule.template.applies_to(lemma, class) {
            continue;
        }
        out.push((compose(lemma, class, &rule.template)?, rule.id.clone()));
    }
    Ok(out)
}

/// Verb and entry counts per (politeness, class) cell.
pub fn class_report(
    lex: &Lexicon,
    entries: &[GeneratedEntry],
) -> BTreeMap<(PolitenessType, ConjugationClass), ClassCount> {
    let mut report: BTreeMap<_, ClassCount> = BTreeMap::new();
    for v in lex.entries() {
        report.entry((v.politeness_type, v.class)).or_default().verbs += 1;
    }
    for e in entries {
        if let Some(v) = lex.get(&e.lemma) {
            report.entry((v.politeness_type, v.class)).or_default().entries += 1;
        }
    }
    report
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    pub verbs: usize,
    pub entries: usize,
}

impl ClassCount {
    /// Entries per verb, if every verb produced the same number.
    pub fn per_verb(&self) -> Option<usize> {
        (self.verbs > 0 && self.entries.is_multiple_of(self.verbs)).then(|| self.entries / self.verbs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exclusion {
    pub lemma: String,
    pub form: String,
    pub reason: String,
    /// Restricts the match to one reading when the form is syncretic.
    pub bundle: Option<FeatureBundle>,
}

#[derive(Debug, Error)]
pub enum ExclusionError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    ParseError { line: usize, reason: String },
}

const SHIPPED_EXCLUSIONS: &str = include_str!("../data/exclusions.tsv");

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ExclusionList {
    pub entries: Vec<Exclusion>,
}

impl ExclusionList {
    pub fn parse(text: &str) -> Result<Self, ExclusionError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.starts_with('#') || raw.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = raw.split('\t').collect();
            if !(3..=4).contains(&f.len()) || f[0].is_empty() || f[1].is_empty() {
                return Err(ExclusionError::ParseError {
                    line,
                    reason: "expected lemma, form, reason and optional features".into(),
                });
            }
            let bundle = match f.get(3).map(|s| s.trim()).filter(|s| !s.is_empty()) {
                Some(text) => Some(parse_bundle(text).map_err(|e| ExclusionError::ParseError {
                    line,
                    reason: e.to_string(),
                })?),
                None => None,
            };
            entries.push(Exclusion {
                lemma: f[0].to_string(),
                form: f[1].to_string(),
                reason: f[2].to_string(),
                bundle,
            });
        }
        Ok(ExclusionList { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ExclusionError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ExclusionError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        ExclusionList::parse(&text)
    }

    pub fn shipped() -> Self {
        ExclusionList::parse(SHIPPED_EXCLUSIONS).expect("bundled exclusion list is well-formed")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn matches(&self, entry: &GeneratedEntry) -> Option<&Exclusion> {
        self.entries.iter().find(|x| {
            x.lemma == entry.lemma && x.form == entry.surface_form && x.bundle.is_none_or(|b| b == entry.bundle)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::parse_bundle;

    fn has(entries: &[GeneratedEntry], form: &str, bundle: &str) -> bool {
        let b = parse_bundle(bundle).unwrap();
        entries.iter().any(|e| e.surface_form == form && e.bundle == b)
    }

    #[test]
    fn spot_checks() {
        let lex = Lexicon::shipped();
        let inv = RuleInventory::shipped();
        let gen = |l: &str| generate_verb(lex.get(l).unwrap(), &inv).unwrap();
        assert!(has(&gen("食べる"), "食べさす", "V;PRS;IPFV;CAUS"));
        assert!(has(&gen("走る"), "走りたがる", "V;PRS;IPFV;OPT;3"));
        assert!(has(&gen("召し上がる"), "召し上がりなさい", "V;FORM;ELEV;IMP;OBLIG;POL"));
    }

    #[test]
    fn empty_lexicon() {
        let lex = Lexicon::from_entries(vec![]).unwrap();
        let out = generate_all(&lex, &RuleInventory::shipped(), &ExclusionList::shipped()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn exclusions_mark_shinu_honorifics() {
        let out = generate_all(
            &Lexicon::shipped(),
            &RuleInventory::shipped(),
            &ExclusionList::shipped(),
        )
        .unwrap();
        let manual: Vec<_> = out
            .iter()
            .filter(|e| e.status == EntryStatus::DiscardedManual)
            .collect();
        assert_eq!(manual.len(), 16);
        assert!(manual.iter().all(|e| e.lemma == "死ぬ"));
        assert!(manual.iter().any(|e| e.surface_form == "お死にになる"));
        // the passive reading of the homograph survives
        let pass = parse_bundle("V;PRS;IPFV;PASS").unwrap();
        assert!(out
            .iter()
            .any(|e| e.surface_form == "死なれる" && e.bundle == pass && e.status == EntryStatus::Pending));
    }

    #[test]
    fn inflect_ad_hoc() {
        let inv = RuleInventory::shipped();
        let b = parse_bundle("V;IMP;POL").unwrap();
        let out = inflect("食べる", ConjugationClass::RegularII, PolitenessType::Basic, b, &inv).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].0, "食べてください");
    }
}
