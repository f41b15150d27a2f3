//! The inflection rule inventory: feature bundles bound to templates.

use std::collections::{BTreeSet, HashSet};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::features::{parse_bundle, FeatureBundle, FeatureLabel};
use crate::lexicon::{PolitenessType, VerbEntry};
use crate::morphology::{ConjugationClass, StemRole, SuffixTemplate};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InflectionRule {
    pub id: String,
    pub bundle: FeatureBundle,
    pub template: SuffixTemplate,
    pub applies_to_classes: BTreeSet<ConjugationClass>,
    pub applies_to_politeness: BTreeSet<PolitenessType>,
    pub chain_notes: String,
}

impl InflectionRule {
    pub fn applies(&self, class: ConjugationClass, politeness: PolitenessType) -> bool {
        self.applies_to_classes.contains(&class) && self.applies_to_politeness.contains(&politeness)
    }
}

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    ParseError { line: usize, reason: String },
    #[error("rule id {0:?} is used more than once")]
    DuplicateRuleId(String),
    #[error("rule {id}: {reason}")]
    InvalidRule { id: String, reason: String },
    #[error("{class}: expected {expected} applicable rules, found {actual}")]
    CountMismatch {
        class: String,
        expected: usize,
        actual: usize,
    },
}

/// Applicable rules per verb for every populated (politeness, class) cell.
pub const EXPECTED_RULE_COUNTS: [(PolitenessType, ConjugationClass, usize); 9] = [
    (PolitenessType::Basic, ConjugationClass::RegularI, 126),
    (PolitenessType::Basic, ConjugationClass::RegularII, 118),
    (PolitenessType::Basic, ConjugationClass::IrregularKuru, 100),
    (PolitenessType::Basic, ConjugationClass::IrregularSuru, 102),
    (PolitenessType::LexicalRespectful, ConjugationClass::RegularI, 103),
    (PolitenessType::LexicalRespectful, ConjugationClass::RegularII, 94),
    (PolitenessType::LexicalHumble, ConjugationClass::RegularI, 92),
    (PolitenessType::LexicalHumble, ConjugationClass::RegularII, 84),
    (PolitenessType::LexicalHumble, ConjugationClass::IrregularSuru, 84),
];

const SHIPPED: &str = include_str!("../data/rules.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleInventory {
    pub version: String,
    pub rules: Vec<InflectionRule>,
}

/// The labels a lexical honorific verb adds to every bundle it produces.
pub fn honorific_markers(politeness: PolitenessType) -> &'static [FeatureLabel] {
    match politeness {
        PolitenessType::Basic => &[],
        PolitenessType::LexicalRespectful => &[FeatureLabel::Form, FeatureLabel::Elev],
        PolitenessType::LexicalHumble => &[FeatureLabel::Form, FeatureLabel::Humb],
    }
}

fn parse_list<T>(field: &str, parse: impl Fn(&str) -> Option<T>) -> Option<BTreeSet<T>>
where
    T: Ord,
{
    field
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse)
        .collect()
}

fn parse_template(kind: &str, pieces: &str) -> Result<SuffixTemplate, String> {
    let parts: Vec<&str> = pieces.split('|').collect();
    let stem = |name: &str| StemRole::from_name(name).ok_or_else(|| format!("unknown stem {name:?}"));
    match (kind, parts.as_slice()) {
        ("suffix", [s, suffix]) => Ok(SuffixTemplate::suffix(stem(s)?, *suffix)),
        ("periphrasis", [prefix, s, suffix]) => Ok(SuffixTemplate::periphrasis(*prefix, stem(s)?, *suffix)),
        ("lexical", [ending, replacement]) if !ending.is_empty() => {
            Ok(SuffixTemplate::substitution(*ending, *replacement))
        }
        _ => Err(format!("bad template {kind:?} {pieces:?}")),
    }
}

impl RuleInventory {
    /// Parses and validates the rule file format. Counts are not checked;
    /// see [`RuleInventory::check_counts`].
    pub fn parse(text: &str) -> Result<Self, RuleError> {
        let mut version = String::new();
        let mut rules = Vec::new();
        let mut seen = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if let Some(comment) = raw.strip_prefix('#') {
                if let Some(v) = comment.trim_start().strip_prefix("version\t") {
                    version = v.trim().to_string();
                }
                continue;
            }
            if raw.trim().is_empty() {
                continue;
            }
            let perr = |reason: String| RuleError::ParseError { line, reason };
            let f: Vec<&str> = raw.split('\t').collect();
            if !(6..=7).contains(&f.len()) {
                return Err(perr(format!("expected 6 or 7 fields, found {}", f.len())));
            }
            let id = f[0].trim().to_string();
            if id.is_empty() {
                return Err(perr("empty rule id".into()));
            }
            let bundle = parse_bundle(f[1]).map_err(|e| perr(e.to_string()))?;
            let template = parse_template(f[2], f[3]).map_err(perr)?;
            let classes = parse_list(f[4], |s| s.parse::<ConjugationClass>().ok())
                .ok_or_else(|| perr(format!("bad class list {:?}", f[4])))?;
            let politeness = parse_list(f[5], |s| s.parse::<PolitenessType>().ok())
                .ok_or_else(|| perr(format!("bad politeness list {:?}", f[5])))?;
            if !seen.insert(id.clone()) {
                return Err(RuleError::DuplicateRuleId(id));
            }
            let rule = InflectionRule {
                id,
                bundle,
                template,
                applies_to_classes: classes,
                applies_to_politeness: politeness,
                chain_notes: f.get(6).map(|s| s.trim().to_string()).unwrap_or_default(),
            };
            validate(&rule)?;
            rules.push(rule);
        }
        Ok(RuleInventory { version, rules })
    }

    /// The inventory bundled with the crate, counts verified.
    pub fn shipped() -> Self {
        let inv = RuleInventory::parse(SHIPPED).expect("bundled rules are well-formed");
        inv.check_counts().expect("bundled rules have the expected counts");
        inv
    }

    pub fn count_for(&self, politeness: PolitenessType, class: ConjugationClass) -> usize {
        self.rules.iter().filter(|r| r.applies(class, politeness)).count()
    }

    pub fn check_counts(&self) -> Result<(), RuleError> {
        for (p, c, expected) in EXPECTED_RULE_COUNTS {
            let actual = self.count_for(p, c);
            if actual != expected {
                return Err(RuleError::CountMismatch {
                    class: format!("{p} {c}"),
                    expected,
                    actual,
                });
            }
        }
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&InflectionRule> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

fn validate(rule: &InflectionRule) -> Result<(), RuleError> {
    let invalid = |reason: &str| RuleError::InvalidRule {
        id: rule.id.clone(),
        reason: reason.to_string(),
    };
    let b = rule.bundle;
    let bare_honorific =
        (b.contains(FeatureLabel::Elev) || b.contains(FeatureLabel::Humb)) && !b.contains(FeatureLabel::Form);
    if bare_honorific
        && !matches!(
            rule.template,
            SuffixTemplate::SuffixOnStem {
                stem: StemRole::Passive,
                ..
            }
        )
    {
        return Err(invalid("ELEV/HUMB without FORM is reserved for the -(ra)reru suffix"));
    }
    if rule.template.is_contracted_causative_passive()
        && rule.applies_to_classes.iter().any(|&c| c != ConjugationClass::RegularI)
    {
        return Err(invalid("contracted causative-passive applies to Regular I only"));
    }
    for &p in &rule.applies_to_politeness {
        if b.with(honorific_markers(p).iter().copied()).is_err() {
            return Err(invalid(&format!("bundle conflicts with {p} markers")));
        }
    }
    Ok(())
}

/// Reads a rule file and enforces the per-class applicability counts.
pub fn load_rules(path: impl AsRef<Path>) -> Result<RuleInventory, RuleError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| RuleError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let inv = RuleInventory::parse(&text)?;
    inv.check_counts()?;
    Ok(inv)
}

/// Rules applicable to a verb, in inventory order.
pub fn rules_for<'a>(verb: &VerbEntry, inv: &'a RuleInventory) -> Vec<&'a InflectionRule> {
    inv.rules
        .iter()
        .filter(|r| r.applies(verb.class, verb.politeness_type))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "# version\ttest\n";

    #[test]
    fn shipped_counts() {
        let inv = RuleInventory::shipped();
        assert_eq!(inv.version, "2024.1");
        assert_eq!(inv.count_for(PolitenessType::Basic, ConjugationClass::RegularI), 126);
        assert_eq!(
            inv.count_for(PolitenessType::LexicalHumble, ConjugationClass::IrregularSuru),
            84
        );
    }

    #[test]
    fn duplicate_id() {
        let text = format!(
            "{HEAD}a\tV;PRS;IPFV\tsuffix\tlemma|\tRegularI\tBasic\n\
             a\tV;PST;PFV\tsuffix\tta|\tRegularI\tBasic\n"
        );
        assert!(matches!(RuleInventory::parse(&text), Err(RuleError::DuplicateRuleId(id)) if id == "a"));
    }

    #[test]
    fn contracted_causative_passive_restricted() {
        let text =
            format!("{HEAD}x\tV;PRS;IPFV;CAUS;PASS\tsuffix\tcausative_contracted|される\tRegularI,RegularII\tBasic\n");
        assert!(matches!(
            RuleInventory::parse(&text),
            Err(RuleError::InvalidRule { .. })
        ));
    }

    #[test]
    fn bare_elev_only_on_passive_stem() {
        let text = format!("{HEAD}x\tV;ELEV;PRS;IPFV\tsuffix\tmasu|ます\tRegularI\tBasic\n");
        assert!(matches!(
            RuleInventory::parse(&text),
            Err(RuleError::InvalidRule { .. })
        ));
    }

    #[test]
    fn count_mismatch_reported() {
        let text = format!("{HEAD}a\tV;PRS;IPFV\tsuffix\tlemma|\tRegularI\tBasic\n");
        let inv = RuleInventory::parse(&text).unwrap();
        assert!(matches!(
            inv.check_counts(),
            Err(RuleError::CountMismatch {
                expected: 126,
                actual: 1,
                ..
            })
        ));
    }

    #[test]
    fn parse_error_line() {
        let text = format!("{HEAD}a\tV;BOGUS\tsuffix\tlemma|\tRegularI\tBasic\n");
        assert!(matches!(
            RuleInventory::parse(&text),
            Err(RuleError::ParseError { line: 2, .. })
        ));
        let text = format!("{HEAD}a\tV\tsuffix\tnowhere|x\tRegularI\tBasic\n");
        assert!(matches!(
            RuleInventory::parse(&text),
            Err(RuleError::ParseError { line: 2, .. })
        ));
    }

    #[test]
    fn empty_politeness_match() {
        let text = format!("{HEAD}a\tV;PRS;IPFV\tsuffix\tlemma|\tRegularI\tBasic\n");
        let inv = RuleInventory::parse(&text).unwrap();
        let verb = VerbEntry {
            lemma: "召し上がる".into(),
            romanization: "meshiagaru".into(),
            gloss: "eat".into(),
            class: ConjugationClass::RegularI,
            politeness_type: PolitenessType::LexicalRespectful,
            basic_sources: vec!["食べる".into()],
        };
        assert!(rules_for(&verb, &inv).is_empty());
    }
}
