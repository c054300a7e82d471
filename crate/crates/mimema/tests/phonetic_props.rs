//! Variant-set properties over the bundled word list.

use mimema::lexicon::FrequencyWordList;
use mimema::phonetic::{phonetize, replay, RuleCatalogue, DEFAULT_VARIANT_CAP};
use proptest::prelude::*;

#[test]
fn word_list_traces_replay() {
    let cat = RuleCatalogue::builtin();
    let words = FrequencyWordList::bundled();
    let mut checked = 0usize;
    for entry in words.entries() {
        let v = phonetize(&entry.word, &cat, DEFAULT_VARIANT_CAP);
        for (variant, trace) in v.variants() {
            assert_eq!(
                &replay(&entry.word, trace, &cat).unwrap(),
                variant,
                "{} -> {variant}",
                entry.word
            );
            checked += 1;
        }
    }
    assert!(checked >= 1000, "only {checked} variants checked");
}

#[test]
fn word_list_variants_differ_from_source_and_stay_short() {
    let cat = RuleCatalogue::builtin();
    for entry in FrequencyWordList::bundled().entries() {
        let n = entry.word.chars().count();
        let v = phonetize(&entry.word, &cat, DEFAULT_VARIANT_CAP);
        for form in v.forms() {
            assert_ne!(form, entry.word);
            assert!(
                form.chars().count() <= n + 1,
                "{} grew to {form}",
                entry.word
            );
        }
    }
}

proptest! {
    #[test]
    fn random_tokens_replay(word in "[a-zéèêàç]{1,12}") {
        let cat = RuleCatalogue::builtin();
        let v = phonetize(&word, &cat, 128);
        for (variant, trace) in v.variants() {
            prop_assert_eq!(&replay(&word, trace, &cat).unwrap(), variant);
        }
    }

    #[test]
    fn phonetize_is_deterministic(word in "[a-zéè]{1,10}") {
        let cat = RuleCatalogue::builtin();
        let a = phonetize(&word, &cat, 64);
        let b = phonetize(&word, &cat, 64);
        prop_assert_eq!(a, b);
    }
}
