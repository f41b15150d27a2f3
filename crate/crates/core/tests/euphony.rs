//! te/ta euphony checked against the romanized lemmas in the lexicon, which
//! gives an oracle independent of the kana tables used by the engine.

use katsuyo::morphology::apply_euphony;
use katsuyo::{ConjugationClass, Lexicon};

/// Expected te-form ending from the final romanized mora.
fn expected_te(romanization: &str, lemma: &str) -> &'static str {
    let word = romanization.rsplit(' ').next().unwrap();
    if lemma == "行く" {
        return "って";
    }
    for (ending, te) in [
        ("tsu", "って"),
        ("ru", "って"),
        ("mu", "んで"),
        ("bu", "んで"),
        ("nu", "んで"),
        ("ku", "いて"),
        ("gu", "いで"),
        ("su", "して"),
    ] {
        if word.ends_with(ending) {
            return te;
        }
    }
    // a bare vowel before -u: au, ou, uu, iu
    assert!(word.ends_with('u'), "unexpected romanization {romanization}");
    "って"
}

#[test]
fn every_regular_i_lemma_matches_romanized_oracle() {
    let lex = Lexicon::shipped();
    let mut checked = 0;
    for verb in lex.entries().iter().filter(|v| v.class == ConjugationClass::RegularI) {
        let te_end = expected_te(&verb.romanization, &verb.lemma);
        let ta_end: String = te_end.replace('て', "た").replace('で', "だ");
        let head: String = {
            let mut chars: Vec<char> = verb.lemma.chars().collect();
            chars.pop();
            chars.into_iter().collect()
        };
        let (te, ta) = apply_euphony(&verb.lemma).unwrap();
        assert_eq!(te, format!("{head}{te_end}"), "{}", verb.lemma);
        assert_eq!(ta, format!("{head}{ta_end}"), "{}", verb.lemma);
        checked += 1;
    }
    assert_eq!(checked, 76 + 18 + 15);
}

#[test]
fn compound_iku_keeps_the_exception() {
    assert_eq!(apply_euphony("出て行く").unwrap().0, "出て行って");
    assert_eq!(apply_euphony("いく").unwrap().1, "いった");
    // 引く / 弾く end in -iku when romanized but are ordinary
    assert_eq!(apply_euphony("引く").unwrap().0, "引いて");
}

#[test]
fn non_verb_final_is_rejected() {
    for bad in ["", "食べ", "abc", "書か"] {
        assert!(apply_euphony(bad).is_err(), "{bad}");
    }
}
