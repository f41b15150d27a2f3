//! Writes the offline hit-count fixture used by tests and the CLI.
//!
//! Every generated form gets a deterministic synthetic count. Two forms are
//! pinned to either side of the default threshold so the boundary is always
//! exercised:
//!
//!     cargo run -p katsuyo --example synthesize_hits -- crates/core/data/hits.tsv

use katsuyo::frequency::{fetch_hits, FetchPolicy, HitCache, HitProvider, HitRecord, SyntheticProvider};
use katsuyo::{generate_all, ExclusionList, Lexicon, RuleInventory};

const PINNED: [(&str, u64); 2] = [("書かさなかった", 10), ("書かさない", 11)];

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "hits.tsv".into());
    let entries = generate_all(
        &Lexicon::shipped(),
        &RuleInventory::shipped(),
        &ExclusionList::shipped(),
    )
    .expect("shipped data generates");
    let forms: Vec<String> = entries.iter().map(|e| e.surface_form.clone()).collect();
    let provider = SyntheticProvider::new();
    let mut cache = fetch_hits(&provider, &forms, HitCache::new(), &FetchPolicy::default())
        .expect("synthetic provider never fails")
        .cache;
    for (form, hits) in PINNED {
        let base = provider.query(form).expect("synthetic");
        cache.insert(HitRecord { hits, ..base });
    }
    cache.save(&out).expect("write fixture");
    println!("wrote {} forms to {out}", cache.len());
}
