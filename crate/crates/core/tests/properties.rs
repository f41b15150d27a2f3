use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use chrono::DateTime;
use proptest::prelude::*;

use katsuyo::dataset::{diff, format_tsv, parse_tsv, records_from_entries, DatasetRecord, ReadMode};
use katsuyo::features::FeatureLabel;
use katsuyo::frequency::{confidence, filter_entries, HitCache, HitRecord};
use katsuyo::{compose, generate_all, EntryStatus, ExclusionList, GeneratedEntry, Lexicon, RuleInventory};

fn generated() -> &'static [GeneratedEntry] {
    static ALL: OnceLock<Vec<GeneratedEntry>> = OnceLock::new();
    ALL.get_or_init(|| {
        generate_all(
            &Lexicon::shipped(),
            &RuleInventory::shipped(),
            &ExclusionList::shipped(),
        )
        .unwrap()
    })
}

fn cache_from(hits: &HashMap<String, u64>) -> HitCache {
    let mut cache = HitCache::new();
    for (form, &h) in hits {
        cache.insert(HitRecord {
            surface_form: form.clone(),
            hits: h,
            source: "test".into(),
            fetched_at: DateTime::from_timestamp(0, 0).unwrap(),
        });
    }
    cache
}

#[test]
fn confidence_is_monotone_exhaustively() {
    for max in 0..=400u64 {
        let mut prev = 0;
        for h in 0..=max {
            let c = confidence(h, max);
            assert!(c >= prev, "confidence({h}, {max}) dropped");
            assert!(c <= 100);
            prev = c;
        }
        if max > 0 {
            assert_eq!(confidence(max, max), 100);
        }
        assert_eq!(confidence(0, max), 0);
    }
}

#[test]
fn no_entry_is_both_respectful_and_humble() {
    for e in generated() {
        assert!(
            !(e.bundle.contains(FeatureLabel::Elev) && e.bundle.contains(FeatureLabel::Humb)),
            "{e:?}"
        );
    }
}

#[test]
fn generated_triples_are_unique_and_rederivable() {
    let lex = Lexicon::shipped();
    let inv = RuleInventory::shipped();
    let mut seen = HashSet::new();
    for e in generated() {
        assert!(seen.insert((&e.lemma, &e.surface_form, e.bundle)), "duplicate {e:?}");
        let verb = lex.get(&e.lemma).unwrap();
        let rule = inv.get(&e.rule_id).unwrap();
        assert!(rule.applies(verb.class, verb.politeness_type));
        assert_eq!(
            compose(&verb.lemma, verb.class, &rule.template).unwrap(),
            e.surface_form
        );
    }
}

proptest! {
    #[test]
    fn confidence_ordering(a in 0u64..10_000_000_000, b in 0u64..10_000_000_000, extra in 0u64..1_000_000) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let max = hi + extra;
        prop_assert!(confidence(lo, max) <= confidence(hi, max));
    }

    #[test]
    fn filter_conserves_and_is_idempotent(
        seed in proptest::collection::vec(0u64..40, 1..64),
        start in 0usize..16_000,
        threshold in 0u64..30,
    ) {
        let entries: Vec<GeneratedEntry> = generated()[start..start + 1000].to_vec();
        let mut hits = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            hits.entry(e.surface_form.clone()).or_insert(seed[i % seed.len()]);
        }
        let cache = cache_from(&hits);
        let n = entries.len();
        let once = filter_entries(entries, &cache, threshold).unwrap();
        prop_assert_eq!(once.kept.len() + once.discarded.len(), n);
        for e in &once.kept {
            prop_assert!(hits[&e.surface_form] > threshold);
        }
        for e in &once.discarded {
            prop_assert!(e.status == EntryStatus::DiscardedManual || hits[&e.surface_form] <= threshold);
        }
        let twice = filter_entries(once.kept.clone(), &cache, threshold).unwrap();
        prop_assert_eq!(&twice.kept, &once.kept);
        prop_assert!(twice.discarded.is_empty());
    }

    #[test]
    fn dataset_write_read_identity(
        picks in proptest::collection::btree_set(0usize..17_032, 0..200),
        lemma in "[ぁ-ゖ一-龠]{1,6}",
    ) {
        let mut records: Vec<DatasetRecord> =
            records_from_entries(picks.iter().map(|&i| &generated()[i]));
        if let Some(first) = records.first_mut() {
            first.lemma = lemma;
        }
        let back = parse_tsv(&format_tsv(&records), ReadMode::Strict).unwrap();
        prop_assert_eq!(back, records);
    }

    #[test]
    fn diff_against_self_is_empty(picks in proptest::collection::vec(0usize..17_032, 0..100)) {
        let records = records_from_entries(picks.iter().map(|&i| &generated()[i]));
        prop_assert!(diff(&records, &records).is_empty());
    }
}
