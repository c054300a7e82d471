//! Skeleton cascade properties over the bundled word list and random words.

mod common;

use mimema::lexicon::FrequencyWordList;
use mimema::skeleton::{build_skeleton_acceptor, skeletonize, SkeletonAcceptorParams};
use mimema::text::{classify, strip_diacritics, CharClass, Syllabifier};
use proptest::prelude::*;

fn is_subsequence(needle: &str, haystack: &str) -> bool {
    let hay: Vec<char> = haystack.chars().collect();
    let mut it = hay.iter();
    needle.chars().all(|c| it.any(|&h| h == c))
}

fn first_last_consonant(word: &str) -> Option<(char, char)> {
    let classified = classify(word);
    let consonants: Vec<char> = classified
        .iter()
        .filter(|c| c.klass == CharClass::Consonant)
        .map(|c| c.base)
        .collect();
    Some((*consonants.first()?, *consonants.last()?))
}

#[test]
fn word_list_skeletons_are_subsequences() {
    let syl = Syllabifier::french();
    for entry in FrequencyWordList::bundled().entries() {
        let d = skeletonize(&entry.word, &syl).unwrap();
        let stripped = strip_diacritics(&entry.word);
        assert!(
            is_subsequence(d.skeleton(), &stripped),
            "{}: {} not a subsequence of {}",
            entry.word,
            d.skeleton(),
            stripped
        );
        // Each stage is a subsequence of the previous one.
        assert!(is_subsequence(&d.after_rule2, &d.after_rule1));
        assert!(is_subsequence(&d.after_rule3, &d.after_rule2));
        assert!(is_subsequence(&d.after_rule4, &d.after_rule3));
    }
}

#[test]
fn word_list_skeletons_keep_frame_consonants() {
    let syl = Syllabifier::french();
    for entry in FrequencyWordList::bundled().entries() {
        let d = skeletonize(&entry.word, &syl).unwrap();
        if d.no_consonant {
            assert_eq!(d.skeleton(), strip_diacritics(&entry.word));
            continue;
        }
        let (first, last) = first_last_consonant(&entry.word).unwrap();
        let skel: Vec<char> = d.skeleton().chars().collect();
        assert!(skel.contains(&first), "{}: lost {first}", entry.word);
        assert!(skel.contains(&last), "{}: lost {last}", entry.word);
    }
}

#[test]
fn word_list_skeletons_are_idempotent() {
    let syl = Syllabifier::french();
    for entry in FrequencyWordList::bundled().entries().iter().step_by(3) {
        let first = skeletonize(&entry.word, &syl)
            .unwrap()
            .skeleton()
            .to_string();
        let again = skeletonize(&first, &syl).unwrap().skeleton().to_string();
        assert_eq!(again, first, "{}", entry.word);
    }
}

#[test]
fn relaxed_acceptor_covers_strict_skeleton_and_word() {
    let syl = Syllabifier::french();
    let params = SkeletonAcceptorParams::<f64>::default();
    for entry in FrequencyWordList::bundled().entries().iter().step_by(5) {
        let d = skeletonize(&entry.word, &syl).unwrap();
        let acceptor = build_skeleton_acceptor(&entry.word, &syl, &params).unwrap();
        let strict = acceptor.score(d.skeleton());
        let whole = acceptor.score(&d.after_rule1);
        assert!(strict.is_some(), "{}: strict form rejected", entry.word);
        assert!(whole.is_some(), "{}: word itself rejected", entry.word);
        assert!(
            strict.unwrap() >= whole.unwrap(),
            "{}: skeleton scored below the word",
            entry.word
        );
    }
}

#[test]
fn skeleton_acceptors_serialize_through_the_automata_format() {
    let syl = Syllabifier::french();
    let params = SkeletonAcceptorParams::<f64>::default();
    for word in ["bonjour", "toujours", "indépendance", "eau"] {
        let acceptor = build_skeleton_acceptor(word, &syl, &params).unwrap();
        let text = acceptor.serialize();
        let back = mimema::automata::WeightedAcceptor::<f64>::deserialize(&text).unwrap();
        assert_eq!(back, acceptor, "{word}");
        assert_eq!(back.serialize(), text, "{word}");
    }
}

proptest! {
    // Random letter tokens, with accents mixed in.
    #[test]
    fn random_words_stay_subsequences(word in "[a-zéèêàçouin]{1,14}") {
        let syl = Syllabifier::french();
        let d = skeletonize(&word, &syl).unwrap();
        prop_assert!(is_subsequence(d.skeleton(), &strip_diacritics(&word)));
    }

    #[test]
    fn random_words_accept_their_skeleton(word in "[a-z]{2,10}") {
        let syl = Syllabifier::french();
        let d = skeletonize(&word, &syl).unwrap();
        let acceptor = build_skeleton_acceptor(&word, &syl, &SkeletonAcceptorParams::<f64>::default()).unwrap();
        prop_assert!(acceptor.accepts(d.skeleton()), "{} / {}", word, d.skeleton());
        prop_assert!(acceptor.accepts(&strip_diacritics(&word)));
    }

    // The acceptor's scores agree with exhaustive enumeration on short words
    // (small enough for the path count to stay manageable).
    #[test]
    fn acceptor_scores_match_enumeration(word in "[a-z]{2,5}") {
        let syl = Syllabifier::french();
        let acceptor = build_skeleton_acceptor(&word, &syl, &SkeletonAcceptorParams::<f64>::default()).unwrap();
        let d = skeletonize(&word, &syl).unwrap();
        for form in [d.skeleton(), &d.after_rule2, &word] {
            let expected = common::brute_force_score(&acceptor, form);
            let got = acceptor.score(form);
            match (expected, got) {
                (None, None) => {}
                (Some(e), Some(g)) => prop_assert!((e - g).abs() < 1e-9),
                other => prop_assert!(false, "{form}: {other:?}"),
            }
        }
    }
}
