//! Seed verb inventory and the basic <-> lexical honorific correspondence.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::morphology::{compute_stems, ConjugationClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PolitenessType {
    Basic,
    LexicalRespectful,
    LexicalHumble,
}

impl PolitenessType {
    pub const ALL: [PolitenessType; 3] = [
        PolitenessType::Basic,
        PolitenessType::LexicalRespectful,
        PolitenessType::LexicalHumble,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolitenessType::Basic => "Basic",
            PolitenessType::LexicalRespectful => "LexicalRespectful",
            PolitenessType::LexicalHumble => "LexicalHumble",
        }
    }

    pub fn is_honorific(self) -> bool {
        self != PolitenessType::Basic
    }
}

impl fmt::Display for PolitenessType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolitenessType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolitenessType::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown politeness type {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerbEntry {
    pub lemma: String,
    pub romanization: String,
    pub gloss: String,
    pub class: ConjugationClass,
    pub politeness_type: PolitenessType,
    /// Basic verbs this honorific stands in for; empty for basic verbs.
    pub basic_sources: Vec<String>,
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    ParseError { line: usize, reason: String },
    #[error("expected {expected} {group} verbs, found {actual}")]
    CountMismatch {
        group: String,
        expected: usize,
        actual: usize,
    },
    #[error("honorific {0:?} has no basic source in the lexicon")]
    DanglingHonorificLink(String),
    #[error("{0:?} is not in the lexicon")]
    UnknownLemma(String),
}

/// Verb population of the shipped seed list, by politeness type and class.
pub const EXPECTED_POPULATION: [(PolitenessType, ConjugationClass, usize); 9] = [
    (PolitenessType::Basic, ConjugationClass::RegularI, 76),
    (PolitenessType::Basic, ConjugationClass::RegularII, 29),
    (PolitenessType::Basic, ConjugationClass::IrregularKuru, 1),
    (PolitenessType::Basic, ConjugationClass::IrregularSuru, 1),
    (PolitenessType::LexicalRespectful, ConjugationClass::RegularI, 18),
    (PolitenessType::LexicalRespectful, ConjugationClass::RegularII, 1),
    (PolitenessType::LexicalHumble, ConjugationClass::RegularI, 15),
    (PolitenessType::LexicalHumble, ConjugationClass::RegularII, 2),
    (PolitenessType::LexicalHumble, ConjugationClass::IrregularSuru, 4),
];

const SHIPPED: &str = include_str!("../data/lexicon.tsv");
const HEADER: &str = "lemma\tromanization\tgloss\tclass\tpoliteness\tbasic_sources";

/// Respectful and humble lemmas linked to a basic verb.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct HonorificEquivalents {
    pub respectful: BTreeSet<String>,
    pub humble: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    entries: Vec<VerbEntry>,
    by_lemma: HashMap<String, usize>,
    respectful_of: BTreeMap<String, BTreeSet<String>>,
    humble_of: BTreeMap<String, BTreeSet<String>>,
}

impl Lexicon {
    /// Builds a lexicon from entries, checking structure and honorific links
    /// but not the population counts.
    pub fn from_entries(entries: Vec<VerbEntry>) -> Result<Self, LexiconError> {
        let mut by_lemma = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            if by_lemma.insert(e.lemma.clone(), i).is_some() {
                return Err(LexiconError::ParseError {
                    line: i + 2,
                    reason: format!("duplicate lemma {:?}", e.lemma),
                });
            }
        }
        let mut respectful_of: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut humble_of: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for e in &entries {
            if !e.politeness_type.is_honorific() {
                continue;
            }
            if e.basic_sources.is_empty() {
                return Err(LexiconError::DanglingHonorificLink(e.lemma.clone()));
            }
            for src in &e.basic_sources {
                let basic = by_lemma
                    .get(src)
                    .map(|&i| &entries[i])
                    .filter(|b| b.politeness_type == PolitenessType::Basic);
                if basic.is_none() {
                    return Err(LexiconError::DanglingHonorificLink(e.lemma.clone()));
                }
                let map = match e.politeness_type {
                    PolitenessType::LexicalRespectful => &mut respectful_of,
                    _ => &mut humble_of,
                };
                map.entry(src.clone()).or_default().insert(e.lemma.clone());
            }
        }
        Ok(Lexicon {
            entries,
            by_lemma,
            respectful_of,
            humble_of,
        })
    }

    /// Parses the tab-separated lexicon format (one header line).
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim_end() == HEADER => {}
            _ => {
                return Err(LexiconError::ParseError {
                    line: 1,
                    reason: "missing or unexpected header".into(),
                })
            }
        }
        let mut entries = Vec::new();
        for (idx, raw) in lines {
            let line = idx + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let perr = |reason: String| LexiconError::ParseError { line, reason };
            let fields: Vec<&str> = raw.split('\t').collect();
            if fields.len() != 6 {
                return Err(perr(format!("expected 6 fields, found {}", fields.len())));
            }
            let class: ConjugationClass = fields[3].parse().map_err(|e| perr(format!("{e}")))?;
            let politeness_type: PolitenessType = fields[4].parse().map_err(perr)?;
            let lemma = fields[0].trim().to_string();
            if lemma.is_empty() {
                return Err(perr("empty lemma".into()));
            }
            compute_stems(&lemma, class).map_err(|e| perr(e.to_string()))?;
            let basic_sources: Vec<String> = fields[5]
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect();
            if politeness_type == PolitenessType::Basic && !basic_sources.is_empty() {
                return Err(perr("basic verbs cannot carry honorific links".into()));
            }
            entries.push(VerbEntry {
                lemma,
                romanization: fields[1].trim().to_string(),
                gloss: fields[2].trim().to_string(),
                class,
                politeness_type,
                basic_sources,
            });
        }
        Lexicon::from_entries(entries)
    }

    /// The lexicon bundled with the crate, with population counts verified.
    pub fn shipped() -> Self {
        let lex = Lexicon::parse(SHIPPED).expect("bundled lexicon is well-formed");
        lex.check_population()
            .expect("bundled lexicon has the expected population");
        lex
    }

    /// Verifies the per-class, per-politeness verb counts.
    pub fn check_population(&self) -> Result<(), LexiconError> {
        for p in PolitenessType::ALL {
            for c in ConjugationClass::ALL {
                let expected = EXPECTED_POPULATION
                    .iter()
                    .find(|(ep, ec, _)| *ep == p && *ec == c)
                    .map_or(0, |t| t.2);
                let actual = self.count(p, c);
                if actual != expected {
                    return Err(LexiconError::CountMismatch {
                        group: format!("{p} {c}"),
                        expected,
                        actual,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn count(&self, politeness: PolitenessType, class: ConjugationClass) -> usize {
        self.entries
            .iter()
            .filter(|e| e.politeness_type == politeness && e.class == class)
            .count()
    }

    pub fn entries(&self) -> &[VerbEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, lemma: &str) -> Option<&VerbEntry> {
        self.by_lemma.get(lemma).map(|&i| &self.entries[i])
    }

    /// Respectful and humble verbs that can replace a basic verb. For an
    /// honorific lemma both sets are empty; use [`Lexicon::basic_sources`].
    pub fn honorific_equivalents(&self, lemma: &str) -> Result<HonorificEquivalents, LexiconError> {
        if !self.by_lemma.contains_key(lemma) {
            return Err(LexiconError::UnknownLemma(lemma.to_string()));
        }
        Ok(HonorificEquivalents {
            respectful: self.respectful_of.get(lemma).cloned().unwrap_or_default(),
            humble: self.humble_of.get(lemma).cloned().unwrap_or_default(),
        })
    }

    /// Basic verbs an honorific lemma stands in for (inverse lookup).
    pub fn basic_sources(&self, lemma: &str) -> Result<BTreeSet<String>, LexiconError> {
        self.get(lemma)
            .map(|e| e.basic_sources.iter().cloned().collect())
            .ok_or_else(|| LexiconError::UnknownLemma(lemma.to_string()))
    }

    /// Every lemma linked to `lemma` in either direction.
    pub fn linked_lemmas(&self, lemma: &str) -> Result<BTreeSet<String>, LexiconError> {
        let eq = self.honorific_equivalents(lemma)?;
        let mut out = self.basic_sources(lemma)?;
        out.extend(eq.respectful);
        out.extend(eq.humble);
        Ok(out)
    }

    /// Serializes back to the file format; `parse(to_tsv())` is equal to `self`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(HEADER);
        out.push('\n');
        for e in &self.entries {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                e.lemma,
                e.romanization,
                e.gloss,
                e.class,
                e.politeness_type,
                e.basic_sources.join(",")
            ));
        }
        out
    }
}

/// Reads a lexicon file and enforces the seed population counts.
pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon, LexiconError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let lex = Lexicon::parse(&text)?;
    lex.check_population()?;
    Ok(lex)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_population() {
        let lex = Lexicon::shipped();
        assert_eq!(lex.len(), 147);
        let basic: usize = ConjugationClass::ALL
            .iter()
            .map(|&c| lex.count(PolitenessType::Basic, c))
            .sum();
        assert_eq!(basic, 107);
    }

    #[test]
    fn iku_humble_set() {
        let lex = Lexicon::shipped();
        let eq = lex.honorific_equivalents("行く").unwrap();
        for h in ["まいる", "伺う", "上がる"] {
            assert!(eq.humble.contains(h), "{h}");
        }
        assert!(eq.respectful.contains("いらっしゃる"));
    }

    #[test]
    fn ukagau_sources() {
        let lex = Lexicon::shipped();
        let src = lex.basic_sources("伺う").unwrap();
        let want: BTreeSet<String> = ["来る", "行く", "聞く"].iter().map(|s| s.to_string()).collect();
        assert_eq!(src, want);
    }

    #[test]
    fn kaku_has_no_lexical_honorific() {
        let lex = Lexicon::shipped();
        let eq = lex.honorific_equivalents("書く").unwrap();
        assert!(eq.respectful.is_empty());
        assert!(eq.humble.is_empty());
    }

    #[test]
    fn unknown_lemma() {
        let lex = Lexicon::shipped();
        assert!(matches!(
            lex.honorific_equivalents("踊る"),
            Err(LexiconError::UnknownLemma(_))
        ));
    }

    #[test]
    fn dangling_link() {
        let text =
            format!("{HEADER}\n行く\tiku\tgo\tRegularI\tBasic\t\n伺う\tukagau\tvisit\tRegularI\tLexicalHumble\t来る\n");
        assert!(matches!(Lexicon::parse(&text), Err(LexiconError::DanglingHonorificLink(l)) if l == "伺う"));
        let text = format!("{HEADER}\n伺う\tukagau\tvisit\tRegularI\tLexicalHumble\t\n");
        assert!(matches!(
            Lexicon::parse(&text),
            Err(LexiconError::DanglingHonorificLink(_))
        ));
    }

    #[test]
    fn missing_basic_verb_is_count_mismatch() {
        let mut lines: Vec<&str> = SHIPPED.lines().collect();
        // drop one basic verb that no honorific points at
        let pos = lines.iter().position(|l| l.starts_with("書く\t")).unwrap();
        lines.remove(pos);
        let lex = Lexicon::parse(&lines.join("\n")).unwrap();
        assert!(matches!(
            lex.check_population(),
            Err(LexiconError::CountMismatch {
                expected: 76,
                actual: 75,
                ..
            })
        ));
    }

    #[test]
    fn parse_errors_carry_line() {
        let text = format!("{HEADER}\n書く\tkaku\twrite\tRegularI\n");
        assert!(matches!(
            Lexicon::parse(&text),
            Err(LexiconError::ParseError { line: 2, .. })
        ));
        let text = format!("{HEADER}\n書け\tkake\twrite\tRegularI\tBasic\t\n");
        assert!(matches!(
            Lexicon::parse(&text),
            Err(LexiconError::ParseError { line: 2, .. })
        ));
    }

    #[test]
    fn tsv_round_trip() {
        let lex = Lexicon::shipped();
        assert_eq!(Lexicon::parse(&lex.to_tsv()).unwrap(), lex);
    }
}
