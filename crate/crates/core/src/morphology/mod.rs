//! Conjugation core: stems, euphonic changes and template composition.
//!
//! Everything here works on the written form of a verb (kanji and kana as
//! printed), appending kana material to the stems. No reading lookup or
//! kana normalization takes place.

mod kana;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use kana::Row;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConjugationClass {
    /// Consonant-stem (godan) verbs.
    RegularI,
    /// Vowel-stem (ichidan) verbs.
    RegularII,
    /// 来る.
    IrregularKuru,
    /// する and verbs ending in する.
    IrregularSuru,
}

impl ConjugationClass {
    pub const ALL: [ConjugationClass; 4] = [
        ConjugationClass::RegularI,
        ConjugationClass::RegularII,
        ConjugationClass::IrregularKuru,
        ConjugationClass::IrregularSuru,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConjugationClass::RegularI => "RegularI",
            ConjugationClass::RegularII => "RegularII",
            ConjugationClass::IrregularKuru => "IrregularKuru",
            ConjugationClass::IrregularSuru => "IrregularSuru",
        }
    }
}

impl fmt::Display for ConjugationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown conjugation class {0:?}")]
pub struct UnknownClass(pub String);

impl FromStr for ConjugationClass {
    type Err = UnknownClass;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "regulari" | "i" | "godan" => Ok(ConjugationClass::RegularI),
            "regularii" | "ii" | "ichidan" => Ok(ConjugationClass::RegularII),
            "irregularkuru" | "kuru" => Ok(ConjugationClass::IrregularKuru),
            "irregularsuru" | "suru" => Ok(ConjugationClass::IrregularSuru),
            _ => Err(UnknownClass(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphError {
    #[error("{lemma:?} is not a valid {class} dictionary form: {reason}")]
    MalformedLemma {
        lemma: String,
        class: ConjugationClass,
        reason: &'static str,
    },
    #[error("template {template} does not apply to {lemma:?} ({class})")]
    TemplateNotApplicable {
        lemma: String,
        class: ConjugationClass,
        template: String,
    },
}

/// Names one field of a [`StemSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StemRole {
    Lemma,
    Negative,
    Masu,
    Te,
    Ta,
    Imperative,
    Volitional,
    Potential,
    Passive,
    Causative,
    CausativeContracted,
}

impl StemRole {
    pub const ALL: [StemRole; 11] = [
        StemRole::Lemma,
        StemRole::Negative,
        StemRole::Masu,
        StemRole::Te,
        StemRole::Ta,
        StemRole::Imperative,
        StemRole::Volitional,
        StemRole::Potential,
        StemRole::Passive,
        StemRole::Causative,
        StemRole::CausativeContracted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StemRole::Lemma => "lemma",
            StemRole::Negative => "negative",
            StemRole::Masu => "masu",
            StemRole::Te => "te",
            StemRole::Ta => "ta",
            StemRole::Imperative => "imperative",
            StemRole::Volitional => "volitional",
            StemRole::Potential => "potential",
            StemRole::Passive => "passive",
            StemRole::Causative => "causative",
            StemRole::CausativeContracted => "causative_contracted",
        }
    }

    pub fn from_name(name: &str) -> Option<StemRole> {
        StemRole::ALL.into_iter().find(|r| r.name() == name)
    }
}

impl fmt::Display for StemRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// All stems a template can attach to.
///
/// `imperative` and `volitional` are complete forms (書け, 書こう); the
/// other stems expect further material (書か-ない, 書かせ-る).
/// `causative_contracted` is the base of the contracted causative, which
/// conjugates like a す-verb (書か-す, 見さ-す, 書か-される).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StemSet {
    pub lemma: String,
    pub negative: String,
    pub masu: String,
    pub te: String,
    pub ta: String,
    pub imperative: String,
    pub volitional: String,
    pub potential: String,
    pub passive: String,
    pub causative: String,
    pub causative_contracted: String,
}

impl StemSet {
    pub fn get(&self, role: StemRole) -> &str {
        match role {
            StemRole::Lemma => &self.lemma,
            StemRole::Negative => &self.negative,
            StemRole::Masu => &self.masu,
            StemRole::Te => &self.te,
            StemRole::Ta => &self.ta,
            StemRole::Imperative => &self.imperative,
            StemRole::Volitional => &self.volitional,
            StemRole::Potential => &self.potential,
            StemRole::Passive => &self.passive,
            StemRole::Causative => &self.causative,
            StemRole::CausativeContracted => &self.causative_contracted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SuffixTemplate {
    /// Stem followed by kana material.
    SuffixOnStem { stem: StemRole, suffix: String },
    /// Fixed material on both sides of a stem (お-書き-になる).
    Periphrasis {
        prefix: String,
        stem: StemRole,
        suffix: String,
    },
    /// Replaces the lemma's `ending` with `replacement` (する -> せよ).
    LexicalSubstitution { ending: String, replacement: String },
}

impl SuffixTemplate {
    pub fn suffix(stem: StemRole, suffix: impl Into<String>) -> Self {
        SuffixTemplate::SuffixOnStem {
            stem,
            suffix: suffix.into(),
        }
    }

    pub fn periphrasis(prefix: impl Into<String>, stem: StemRole, suffix: impl Into<String>) -> Self {
        SuffixTemplate::Periphrasis {
            prefix: prefix.into(),
            stem,
            suffix: suffix.into(),
        }
    }

    pub fn substitution(ending: impl Into<String>, replacement: impl Into<String>) -> Self {
        SuffixTemplate::LexicalSubstitution {
            ending: ending.into(),
            replacement: replacement.into(),
        }
    }

    /// The contracted causative-passive (書か-される). Regular II and
    /// irregular verbs do not form it (*見さされる, *来さされる, *さされる).
    pub fn is_contracted_causative_passive(&self) -> bool {
        matches!(self, SuffixTemplate::SuffixOnStem { stem: StemRole::CausativeContracted, suffix } if suffix.starts_with("され"))
    }

    /// Whether the template can be applied to `lemma` of `class` at all.
    pub fn applies_to(&self, lemma: &str, class: ConjugationClass) -> bool {
        match self {
            SuffixTemplate::SuffixOnStem { .. } => {
                !self.is_contracted_causative_passive() || class == ConjugationClass::RegularI
            }
            // お-stem periphrases need a native stem; 来る and する take
            // suppletive honorifics instead.
            SuffixTemplate::Periphrasis { .. } => {
                matches!(class, ConjugationClass::RegularI | ConjugationClass::RegularII)
            }
            SuffixTemplate::LexicalSubstitution { ending, .. } => lemma.ends_with(ending.as_str()),
        }
    }
}

impl fmt::Display for SuffixTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuffixTemplate::SuffixOnStem { stem, suffix } => write!(f, "{stem}+{suffix}"),
            SuffixTemplate::Periphrasis { prefix, stem, suffix } => {
                write!(f, "{prefix}+{stem}+{suffix}")
            }
            SuffixTemplate::LexicalSubstitution { ending, replacement } => {
                write!(f, "{ending}->{replacement}")
            }
        }
    }
}

// Respectful verbs whose masu stem and imperative end in い (いらっしゃいます).
const ARU_HONORIFICS: [&str; 5] = ["いらっしゃる", "おっしゃる", "なさる", "くださる", "ござる"];

fn malformed(lemma: &str, class: ConjugationClass, reason: &'static str) -> MorphError {
    MorphError::MalformedLemma {
        lemma: lemma.to_string(),
        class,
        reason,
    }
}

/// Splits a Regular I lemma into the part before the final kana and the kana.
fn split_regular_i(lemma: &str) -> Result<(&str, char), MorphError> {
    let last = lemma
        .chars()
        .last()
        .ok_or_else(|| malformed(lemma, ConjugationClass::RegularI, "empty lemma"))?;
    if !kana::is_verb_final(last) {
        return Err(malformed(
            lemma,
            ConjugationClass::RegularI,
            "must end in an u-row kana",
        ));
    }
    let head = &lemma[..lemma.len() - last.len_utf8()];
    if head.is_empty() {
        return Err(malformed(
            lemma,
            ConjugationClass::RegularI,
            "no stem before the final kana",
        ));
    }
    Ok((head, last))
}

fn is_iku(lemma: &str) -> bool {
    lemma.ends_with("行く") || lemma == "いく"
}

/// te- and ta-forms of a Regular I verb.
pub fn apply_euphony(lemma: &str) -> Result<(String, String), MorphError> {
    let (head, last) = split_regular_i(lemma)?;
    let (te, ta) = match last {
        'う' | 'つ' | 'る' => ("って", "った"),
        'む' | 'ぶ' | 'ぬ' => ("んで", "んだ"),
        'く' if is_iku(lemma) => ("って", "った"),
        'く' => ("いて", "いた"),
        'ぐ' => ("いで", "いだ"),
        'す' => ("して", "した"),
        _ => unreachable!("is_verb_final admitted {last}"),
    };
    Ok((format!("{head}{te}"), format!("{head}{ta}")))
}

pub fn compute_stems(lemma: &str, class: ConjugationClass) -> Result<StemSet, MorphError> {
    match class {
        ConjugationClass::RegularI => regular_i_stems(lemma),
        ConjugationClass::RegularII => {
            let head = lemma
                .strip_suffix('る')
                .filter(|h| !h.is_empty())
                .ok_or_else(|| malformed(lemma, class, "must end in る"))?;
            Ok(StemSet {
                lemma: lemma.to_string(),
                negative: head.to_string(),
                masu: head.to_string(),
                te: format!("{head}て"),
                ta: format!("{head}た"),
                imperative: format!("{head}ろ"),
                volitional: format!("{head}よう"),
                potential: format!("{head}られ"),
                passive: format!("{head}られ"),
                causative: format!("{head}させ"),
                causative_contracted: format!("{head}さ"),
            })
        }
        ConjugationClass::IrregularKuru => {
            // Written with the kanji, the stem vowel change is invisible.
            let (ko, ki) = match lemma {
                "来る" => ("来", "来"),
                "くる" => ("こ", "き"),
                _ => return Err(malformed(lemma, class, "only 来る conjugates as kuru")),
            };
            Ok(StemSet {
                lemma: lemma.to_string(),
                negative: ko.to_string(),
                masu: ki.to_string(),
                te: format!("{ki}て"),
                ta: format!("{ki}た"),
                imperative: format!("{ko}い"),
                volitional: format!("{ko}よう"),
                potential: format!("{ko}られ"),
                passive: format!("{ko}られ"),
                causative: format!("{ko}させ"),
                causative_contracted: format!("{ko}さ"),
            })
        }
        ConjugationClass::IrregularSuru => {
            let head = lemma
                .strip_suffix("する")
                .ok_or_else(|| malformed(lemma, class, "must end in する"))?;
            Ok(StemSet {
                lemma: lemma.to_string(),
                negative: format!("{head}し"),
                masu: format!("{head}し"),
                te: format!("{head}して"),
                ta: format!("{head}した"),
                imperative: format!("{head}しろ"),
                volitional: format!("{head}しよう"),
                // suppletive potential: する -> できる
                potential: format!("{head}でき"),
                passive: format!("{head}され"),
                causative: format!("{head}させ"),
                causative_contracted: format!("{head}さ"),
            })
        }
    }
}

fn regular_i_stems(lemma: &str) -> Result<StemSet, MorphError> {
    let (head, last) = split_regular_i(lemma)?;
    let row = |r| kana::shift(last, r).expect("verb-final kana has every row");
    let a = format!("{head}{}", row(Row::A));
    let e = format!("{head}{}", row(Row::E));
    let (te, ta) = apply_euphony(lemma)?;
    let (masu, imperative) = if ARU_HONORIFICS.iter().any(|v| lemma.ends_with(v)) {
        (format!("{head}い"), format!("{head}い"))
    } else {
        (format!("{head}{}", row(Row::I)), e.clone())
    };
    Ok(StemSet {
        lemma: lemma.to_string(),
        negative: a.clone(),
        masu,
        te,
        ta,
        imperative,
        volitional: format!("{head}{}う", row(Row::O)),
        potential: e,
        passive: format!("{a}れ"),
        causative: format!("{a}せ"),
        causative_contracted: a,
    })
}

/// Applies a template to a verb.
pub fn compose(lemma: &str, class: ConjugationClass, template: &SuffixTemplate) -> Result<String, MorphError> {
    let stems = compute_stems(lemma, class)?;
    if !template.applies_to(lemma, class) {
        return Err(MorphError::TemplateNotApplicable {
            lemma: lemma.to_string(),
            class,
            template: template.to_string(),
        });
    }
    Ok(match template {
        SuffixTemplate::SuffixOnStem { stem, suffix } => {
            // ある negates suppletively: ない, not *あらない.
            if lemma == "ある" && *stem == StemRole::Negative && suffix.starts_with('な') {
                suffix.clone()
            } else {
                format!("{}{suffix}", stems.get(*stem))
            }
        }
        SuffixTemplate::Periphrasis { prefix, stem, suffix } => {
            format!("{prefix}{}{suffix}", stems.get(*stem))
        }
        SuffixTemplate::LexicalSubstitution { ending, replacement } => {
            let head = &lemma[..lemma.len() - ending.len()];
            format!("{head}{replacement}")
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ConjugationClass::*;

    fn form(lemma: &str, class: ConjugationClass, stem: StemRole, suffix: &str) -> String {
        compose(lemma, class, &SuffixTemplate::suffix(stem, suffix)).unwrap()
    }

    #[test]
    fn causative_and_contraction() {
        assert_eq!(form("書く", RegularI, StemRole::Causative, "る"), "書かせる");
        assert_eq!(form("書く", RegularI, StemRole::CausativeContracted, "す"), "書かす");
        assert_eq!(form("見る", RegularII, StemRole::Causative, "る"), "見させる");
        assert_eq!(form("見る", RegularII, StemRole::CausativeContracted, "す"), "見さす");
        assert_eq!(form("来る", IrregularKuru, StemRole::Causative, "る"), "来させる");
        assert_eq!(
            form("来る", IrregularKuru, StemRole::CausativeContracted, "す"),
            "来さす"
        );
        assert_eq!(form("する", IrregularSuru, StemRole::Causative, "る"), "させる");
        assert_eq!(form("する", IrregularSuru, StemRole::CausativeContracted, "す"), "さす");
    }

    #[test]
    fn regular_ii_stems() {
        let s = compute_stems("食べる", RegularII).unwrap();
        assert_eq!(s.masu, "食べ");
        assert_eq!(s.ta, "食べた");
        assert_eq!(s.te, "食べて");
    }

    #[test]
    fn euphony_examples() {
        assert_eq!(apply_euphony("走る").unwrap(), ("走って".into(), "走った".into()));
        assert_eq!(apply_euphony("会う").unwrap(), ("会って".into(), "会った".into()));
        assert_eq!(apply_euphony("行く").unwrap(), ("行って".into(), "行った".into()));
        assert_eq!(apply_euphony("書く").unwrap(), ("書いて".into(), "書いた".into()));
        assert_eq!(apply_euphony("泳ぐ").unwrap(), ("泳いで".into(), "泳いだ".into()));
        assert_eq!(apply_euphony("話す").unwrap(), ("話して".into(), "話した".into()));
        assert_eq!(apply_euphony("死ぬ").unwrap(), ("死んで".into(), "死んだ".into()));
        assert!(apply_euphony("食べ").is_err());
        assert!(apply_euphony("う").is_err());
    }

    #[test]
    fn negative_stem_uses_wa_for_u() {
        assert_eq!(form("会う", RegularI, StemRole::Passive, "る"), "会われる");
        assert_eq!(form("会う", RegularI, StemRole::Negative, "ない"), "会わない");
    }

    #[test]
    fn periphrasis() {
        let t = SuffixTemplate::periphrasis("お", StemRole::Masu, "になる");
        assert_eq!(compose("会う", RegularI, &t).unwrap(), "お会いになる");
        assert!(matches!(
            compose("来る", IrregularKuru, &t),
            Err(MorphError::TemplateNotApplicable { .. })
        ));
    }

    #[test]
    fn aru_negation_is_suppletive() {
        assert_eq!(form("ある", RegularI, StemRole::Negative, "ない"), "ない");
        assert_eq!(form("ある", RegularI, StemRole::Negative, "なかった"), "なかった");
        // other stems of ある are regular
        assert_eq!(form("ある", RegularI, StemRole::Masu, "ます"), "あります");
    }

    #[test]
    fn identity_template() {
        assert_eq!(form("食べる", RegularII, StemRole::Lemma, ""), "食べる");
    }

    #[test]
    fn honorific_aru_verbs() {
        let s = compute_stems("いらっしゃる", RegularI).unwrap();
        assert_eq!(s.masu, "いらっしゃい");
        assert_eq!(s.imperative, "いらっしゃい");
        assert_eq!(s.te, "いらっしゃって");
        let s = compute_stems("召し上がる", RegularI).unwrap();
        assert_eq!(s.masu, "召し上がり");
        assert_eq!(s.imperative, "召し上がれ");
    }

    #[test]
    fn contracted_causative_passive_only_for_regular_i() {
        let t = SuffixTemplate::suffix(StemRole::CausativeContracted, "される");
        assert_eq!(compose("書く", RegularI, &t).unwrap(), "書かされる");
        for (lemma, class) in [("見る", RegularII), ("来る", IrregularKuru), ("する", IrregularSuru)] {
            assert!(matches!(
                compose(lemma, class, &t),
                Err(MorphError::TemplateNotApplicable { .. })
            ));
        }
    }

    #[test]
    fn substitution() {
        let t = SuffixTemplate::substitution("する", "せよ");
        assert_eq!(compose("する", IrregularSuru, &t).unwrap(), "せよ");
        assert_eq!(compose("拝見する", IrregularSuru, &t).unwrap(), "拝見せよ");
        assert!(compose("来る", IrregularKuru, &t).is_err());
    }

    #[test]
    fn irregular_tables() {
        let k = compute_stems("くる", IrregularKuru).unwrap();
        assert_eq!(
            (k.negative.as_str(), k.masu.as_str(), k.imperative.as_str()),
            ("こ", "き", "こい")
        );
        let s = compute_stems("拝見する", IrregularSuru).unwrap();
        assert_eq!(s.potential, "拝見でき");
        assert_eq!(s.te, "拝見して");
    }

    #[test]
    fn malformed_lemmas() {
        assert!(matches!(
            compute_stems("食べ", RegularII),
            Err(MorphError::MalformedLemma { .. })
        ));
        assert!(compute_stems("る", RegularII).is_err());
        assert!(compute_stems("行け", RegularI).is_err());
        assert!(compute_stems("行く", IrregularKuru).is_err());
        assert!(compute_stems("来る", IrregularSuru).is_err());
        assert!(compute_stems("", RegularI).is_err());
    }

    #[test]
    fn class_parsing() {
        assert_eq!("RegularII".parse::<ConjugationClass>().unwrap(), RegularII);
        assert_eq!("godan".parse::<ConjugationClass>().unwrap(), RegularI);
        assert!("Regular3".parse::<ConjugationClass>().is_err());
    }
}
