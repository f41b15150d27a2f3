//! UniMorph labels used for Japanese verbs and the feature bundles built from them.
//!
//! A [`FeatureBundle`] is a set of [`FeatureLabel`]s. Its serialized form is a
//! semicolon-joined string in a fixed canonical order, so two bundles are
//! equal exactly when their canonical strings are equal.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dimension {
    Pos,
    Tense,
    Aspect,
    Mood,
    Politeness,
    Polarity,
    Voice,
    Person,
    Register,
}

/// The label inventory. Variant order is the canonical serialization order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum FeatureLabel {
    V,
    Form,
    Elev,
    Humb,
    Prs,
    Pst,
    Ipfv,
    Pfv,
    Prosp,
    Caus,
    Pass,
    Imp,
    Oblig,
    Inten,
    Opt,
    Pot,
    Perm,
    Pol,
    Foreg,
    Neg,
    Col,
    First,
    Third,
}

impl FeatureLabel {
    pub const ALL: [FeatureLabel; 23] = [
        FeatureLabel::V,
        FeatureLabel::Form,
        FeatureLabel::Elev,
        FeatureLabel::Humb,
        FeatureLabel::Prs,
        FeatureLabel::Pst,
        FeatureLabel::Ipfv,
        FeatureLabel::Pfv,
        FeatureLabel::Prosp,
        FeatureLabel::Caus,
        FeatureLabel::Pass,
        FeatureLabel::Imp,
        FeatureLabel::Oblig,
        FeatureLabel::Inten,
        FeatureLabel::Opt,
        FeatureLabel::Pot,
        FeatureLabel::Perm,
        FeatureLabel::Pol,
        FeatureLabel::Foreg,
        FeatureLabel::Neg,
        FeatureLabel::Col,
        FeatureLabel::First,
        FeatureLabel::Third,
    ];

    pub fn code(self) -> &'static str {
        use FeatureLabel::*;
        match self {
            V => "V",
            Form => "FORM",
            Elev => "ELEV",
            Humb => "HUMB",
            Prs => "PRS",
            Pst => "PST",
            Ipfv => "IPFV",
            Pfv => "PFV",
            Prosp => "PROSP",
            Caus => "CAUS",
            Pass => "PASS",
            Imp => "IMP",
            Oblig => "OBLIG",
            Inten => "INTEN",
            Opt => "OPT",
            Pot => "POT",
            Perm => "PERM",
            Pol => "POL",
            Foreg => "FOREG",
            Neg => "NEG",
            Col => "COL",
            First => "1",
            Third => "3",
        }
    }

    pub fn dimension(self) -> Dimension {
        use FeatureLabel::*;
        match self {
            V => Dimension::Pos,
            Prs | Pst => Dimension::Tense,
            Ipfv | Pfv | Prosp => Dimension::Aspect,
            Imp | Oblig | Inten | Opt | Pot | Perm => Dimension::Mood,
            Pol | Form | Elev | Humb => Dimension::Politeness,
            Foreg | Col => Dimension::Register,
            Neg => Dimension::Polarity,
            Caus | Pass => Dimension::Voice,
            First | Third => Dimension::Person,
        }
    }

    /// Case-insensitive lookup by code.
    pub fn from_code(code: &str) -> Option<FeatureLabel> {
        FeatureLabel::ALL
            .iter()
            .copied()
            .find(|l| l.code().eq_ignore_ascii_case(code))
    }

    fn bit(self) -> u32 {
        1 << (self as u8)
    }
}

impl fmt::Display for FeatureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureError {
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("invalid feature bundle: {0}")]
    InvariantViolation(String),
}

/// A validated set of labels. Stored as a bitset, so copies are free and
/// equality is set equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureBundle(u32);

impl FeatureBundle {
    /// Builds a bundle from labels and checks every bundle invariant.
    pub fn new<I: IntoIterator<Item = FeatureLabel>>(labels: I) -> Result<Self, FeatureError> {
        let bits = labels.into_iter().fold(0, |acc, l| acc | l.bit());
        let bundle = FeatureBundle(bits);
        bundle.validate()?;
        Ok(bundle)
    }

    pub fn contains(self, label: FeatureLabel) -> bool {
        self.0 & label.bit() != 0
    }

    pub fn labels(self) -> impl Iterator<Item = FeatureLabel> {
        FeatureLabel::ALL.into_iter().filter(move |l| self.contains(*l))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Union with `extra`, re-validated.
    pub fn with<I: IntoIterator<Item = FeatureLabel>>(self, extra: I) -> Result<Self, FeatureError> {
        FeatureBundle::new(self.labels().chain(extra))
    }

    /// Removes labels. The result is re-validated, so removing `V` is an error.
    pub fn without<I: IntoIterator<Item = FeatureLabel>>(self, drop: I) -> Result<Self, FeatureError> {
        let mask = drop.into_iter().fold(0, |acc, l| acc | l.bit());
        let bundle = FeatureBundle(self.0 & !mask);
        bundle.validate()?;
        Ok(bundle)
    }

    fn count(self, set: &[FeatureLabel]) -> usize {
        set.iter().filter(|l| self.contains(**l)).count()
    }

    fn validate(self) -> Result<(), FeatureError> {
        use FeatureLabel::*;
        let fail = |msg: &str| Err(FeatureError::InvariantViolation(msg.to_string()));
        if !self.contains(V) {
            return fail("bundle must contain the POS label V");
        }
        if self.count(&[Prs, Pst]) > 1 {
            return fail("at most one tense label");
        }
        if self.count(&[Ipfv, Pfv]) > 1 {
            return fail("IPFV and PFV are mutually exclusive");
        }
        if self.contains(Prosp) && (self.contains(Pst) || self.contains(Pfv)) {
            return fail("PROSP cannot combine with PST or PFV");
        }
        if self.contains(Elev) && self.contains(Humb) {
            return fail("ELEV and HUMB are mutually exclusive");
        }
        let persons = self.count(&[First, Third]);
        if persons > 1 {
            return fail("at most one person label");
        }
        if persons == 1 && !self.contains(Opt) {
            return fail("person labels only occur with OPT");
        }
        Ok(())
    }
}

/// Parses a semicolon-joined label string.
pub fn parse_bundle(text: &str) -> Result<FeatureBundle, FeatureError> {
    if text.trim().is_empty() {
        return Err(FeatureError::InvariantViolation("empty feature string".into()));
    }
    let mut labels = Vec::new();
    for token in text.split(';') {
        let token = token.trim();
        let label = FeatureLabel::from_code(token).ok_or_else(|| FeatureError::UnknownLabel(token.to_string()))?;
        if labels.contains(&label) {
            return Err(FeatureError::InvariantViolation(format!("duplicate label {label}")));
        }
        labels.push(label);
    }
    FeatureBundle::new(labels)
}

/// Canonical serialization.
pub fn format_bundle(bundle: FeatureBundle) -> String {
    let mut out = String::new();
    for (i, label) in bundle.labels().enumerate() {
        if i > 0 {
            out.push(';');
        }
        out.push_str(label.code());
    }
    out
}

pub fn bundle_equals(a: FeatureBundle, b: FeatureBundle) -> bool {
    a == b
}

impl fmt::Display for FeatureBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_bundle(*self))
    }
}

impl fmt::Debug for FeatureBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FeatureBundle({self})")
    }
}

impl FromStr for FeatureBundle {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_bundle(s)
    }
}

impl Serialize for FeatureBundle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_bundle(*self))
    }
}

impl<'de> Deserialize<'de> for FeatureBundle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_bundle(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use FeatureLabel::*;

    #[test]
    fn parses_past_perfective() {
        let b = parse_bundle("V;PST;PFV").unwrap();
        assert_eq!(b, FeatureBundle::new([V, Pst, Pfv]).unwrap());
    }

    #[test]
    fn round_trips_canonical_string() {
        assert_eq!(format_bundle(parse_bundle("V;PRS;IPFV").unwrap()), "V;PRS;IPFV");
    }

    #[test]
    fn elev_and_humb_conflict() {
        assert!(matches!(
            parse_bundle("V;ELEV;HUMB"),
            Err(FeatureError::InvariantViolation(_))
        ));
    }

    #[test]
    fn canonical_order() {
        let b = FeatureBundle::new([V, Elev, Form, Ipfv, Prs]).unwrap();
        assert_eq!(format_bundle(b), "V;FORM;ELEV;PRS;IPFV");
        assert_eq!(format_bundle(FeatureBundle::new([V]).unwrap()), "V");
        let b = FeatureBundle::new([V, Neg, Foreg, Pol, Prs, Ipfv]).unwrap();
        assert_eq!(format_bundle(b), "V;PRS;IPFV;POL;FOREG;NEG");
    }

    #[test]
    fn lowercase_input_is_accepted() {
        let b = parse_bundle("v;form;elev;prs;ipfv").unwrap();
        assert_eq!(b.to_string(), "V;FORM;ELEV;PRS;IPFV");
    }

    #[test]
    fn set_equality_ignores_source_order() {
        let p = |s| parse_bundle(s).unwrap();
        assert!(bundle_equals(p("V;PST;PFV"), p("V;PFV;PST")));
        assert!(!bundle_equals(p("V;PRS;IPFV"), p("V;PST;PFV")));
        assert!(bundle_equals(p("V;IMP;OBLIG;COL"), p("V;COL;IMP;OBLIG")));
    }

    #[test]
    fn error_cases() {
        assert_eq!(parse_bundle("V;BOGUS"), Err(FeatureError::UnknownLabel("BOGUS".into())));
        assert!(matches!(parse_bundle("V;;PST"), Err(FeatureError::UnknownLabel(t)) if t.is_empty()));
        assert!(parse_bundle("").is_err());
        assert!(parse_bundle("PST;PFV").is_err());
        assert!(parse_bundle("V;PRS;PST").is_err());
        assert!(parse_bundle("V;IPFV;PFV").is_err());
        assert!(parse_bundle("V;PST;PROSP").is_err());
        assert!(parse_bundle("V;PFV;PROSP").is_err());
        assert!(parse_bundle("V;PRS;1").is_err());
        assert!(parse_bundle("V;OPT;1;3").is_err());
        assert!(parse_bundle("V;PST;PST").is_err());
        // excluded labels are not part of the inventory
        for foreign in ["INT", "LKLY", "COND"] {
            assert!(matches!(
                parse_bundle(&format!("V;{foreign}")),
                Err(FeatureError::UnknownLabel(_))
            ));
        }
    }

    #[test]
    fn person_labels_with_optative() {
        assert_eq!(
            parse_bundle("V;PRS;IPFV;OPT;1").unwrap().to_string(),
            "V;PRS;IPFV;OPT;1"
        );
        assert_eq!(parse_bundle("3;OPT;V").unwrap().to_string(), "V;OPT;3");
    }

    #[test]
    fn every_label_has_one_dimension_and_unique_code() {
        let mut codes: Vec<_> = FeatureLabel::ALL.iter().map(|l| l.code()).collect();
        codes.sort();
        codes.dedup();
        assert_eq!(codes.len(), FeatureLabel::ALL.len());
        for l in FeatureLabel::ALL {
            assert_eq!(FeatureLabel::from_code(l.code()), Some(l));
            let _ = l.dimension();
        }
    }

    fn any_bundle() -> impl Strategy<Value = FeatureBundle> {
        proptest::collection::vec(proptest::sample::select(FeatureLabel::ALL.to_vec()), 0..8).prop_filter_map(
            "invalid bundle",
            |mut ls| {
                ls.push(V);
                FeatureBundle::new(ls).ok()
            },
        )
    }

    proptest! {
        #[test]
        fn parse_format_identity(b in any_bundle()) {
            let text = format_bundle(b);
            prop_assert_eq!(parse_bundle(&text).unwrap(), b);
            prop_assert_eq!(format_bundle(parse_bundle(&text).unwrap()), text);
        }

        #[test]
        fn equality_matches_canonical_text(a in any_bundle(), b in any_bundle()) {
            prop_assert_eq!(bundle_equals(a, b), format_bundle(a) == format_bundle(b));
        }

        #[test]
        fn shuffled_text_parses_to_same_bundle(b in any_bundle(), seed in any::<u64>()) {
            let mut labels: Vec<_> = b.labels().map(|l| l.code()).collect();
            let n = labels.len();
            for i in 0..n {
                let j = (seed as usize).wrapping_mul(i + 7) % n;
                labels.swap(i, j);
            }
            prop_assert_eq!(parse_bundle(&labels.join(";")).unwrap(), b);
        }
    }
}
