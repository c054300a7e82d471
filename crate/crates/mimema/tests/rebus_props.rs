//! Rebus ordering properties, checked by scoring and by enumeration.

mod common;

use mimema::rebus::{build_rebus_model, score_rebus, RebusModel, RebusParams};
use proptest::prelude::*;

fn model() -> RebusModel<f64> {
    build_rebus_model(RebusParams::default()).unwrap()
}

fn score(m: &RebusModel<f64>, form: &str) -> Option<f64> {
    score_rebus(m, form).unwrap()
}

fn has_digit_bigram(chars: &[char]) -> bool {
    chars
        .windows(2)
        .any(|w| w[0].is_ascii_digit() && w[1].is_ascii_digit())
}

fn permutations(chars: &[char]) -> Vec<Vec<char>> {
    if chars.len() <= 1 {
        return vec![chars.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..chars.len() {
        let mut rest = chars.to_vec();
        let c = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, c);
            out.push(tail);
        }
    }
    out.sort();
    out.dedup();
    out
}

#[test]
fn digit_separated_arrangements_beat_adjacent_ones() {
    let m = model();
    for multiset in [
        vec!['2', 'm', '1'],
        vec!['1', 'a', '2'],
        vec!['9', 'x', '0', 'k'],
    ] {
        let perms = permutations(&multiset);
        let score_of = |chars: &Vec<char>| {
            let s: String = chars.iter().collect();
            score(&m, &s).expect("letter/digit mixes are accepted")
        };
        let best_separated = perms
            .iter()
            .filter(|p| !has_digit_bigram(p))
            .map(score_of)
            .fold(f64::NEG_INFINITY, f64::max);
        for p in perms.iter().filter(|p| has_digit_bigram(p)) {
            let s = score_of(p);
            assert!(
                s < best_separated,
                "{:?} scored {s}, separated best {best_separated}",
                p.iter().collect::<String>()
            );
        }
    }
}

#[test]
fn viterbi_matches_enumeration_on_the_compiled_acceptor() {
    let m = model();
    for form in ["2m1", "21m", "a+", "c", "9", "kfé", "ab12", "+a+", "m2m2m"] {
        let expected = common::brute_force_score(m.acceptor(), form);
        let got = m.acceptor().score(form);
        match (expected, got) {
            (None, None) => {}
            (Some(e), Some(g)) => assert!((e - g).abs() < 1e-9, "{form}"),
            other => panic!("{form}: {other:?}"),
        }
    }
}

proptest! {
    // Random small forms with at most two digits and at least one letter:
    // some digit-separated permutation strictly beats any digit-adjacent one.
    #[test]
    fn random_forms_respect_the_digit_penalty(
        letters in proptest::collection::vec(proptest::sample::select(vec!['a', 'm', 'k']), 1..=3),
        digits in proptest::collection::vec(proptest::sample::select(vec!['1', '2', '9']), 2..=2),
    ) {
        let m = model();
        let mut multiset = letters;
        multiset.extend(digits);
        let perms = permutations(&multiset);
        let with_bigram: Vec<_> = perms.iter().filter(|p| has_digit_bigram(p)).collect();
        prop_assume!(!with_bigram.is_empty());
        let best_separated = perms
            .iter()
            .filter(|p| !has_digit_bigram(p))
            .map(|p| {
                let s: String = p.iter().collect();
                score(&m, &s).unwrap()
            })
            .fold(f64::NEG_INFINITY, f64::max);
        for p in with_bigram {
            let s: String = p.iter().collect();
            prop_assert!(score(&m, &s).unwrap() < best_separated, "{s}");
        }
    }

    #[test]
    fn letter_scores_decay(word in "[a-z]{1,8}") {
        let m = model();
        let full = score(&m, &word).unwrap();
        let shorter: String = word.chars().take(word.chars().count() - 1).collect();
        if !shorter.is_empty() {
            prop_assert!(score(&m, &shorter).unwrap() >= full);
        }
    }
}
