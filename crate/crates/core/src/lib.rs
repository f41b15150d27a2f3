//! Japanese verb inflection toolkit.
//!
//! Generates inflected forms from a seed lexicon and a data-driven rule
//! inventory, labels them with UniMorph feature bundles, filters them by
//! web frequency and analyzes surface forms back into readings.
//!
//! ```
//! use katsuyo::morphology::{compose, ConjugationClass, StemRole, SuffixTemplate};
//!
//! let t = SuffixTemplate::periphrasis("お", StemRole::Masu, "になる");
//! assert_eq!(compose("会う", ConjugationClass::RegularI, &t).unwrap(), "お会いになる");
//! ```

pub mod analyzer;
pub mod dataset;
pub mod features;
pub mod frequency;
pub mod generator;
pub mod lexicon;
pub mod morphology;
pub mod pipeline;
pub mod rules;

pub use features::{bundle_equals, format_bundle, parse_bundle, FeatureBundle, FeatureLabel};
pub use generator::{generate_all, generate_verb, EntryStatus, ExclusionList, GeneratedEntry};
pub use lexicon::{load_lexicon, Lexicon, PolitenessType, VerbEntry};
pub use morphology::{compose, compute_stems, ConjugationClass};
pub use rules::{load_rules, rules_for, InflectionRule, RuleInventory};
