//! The 1,000-word lexicon build is pinned to a checked-in snapshot so that
//! any change to the generators or the serialization shows up as a diff.
//!
//! Regenerate deliberately with:
//!     MIMEMA_REGEN_GOLDEN=1 cargo test -p mimema --test golden_lexicon

use mimema::lexicon::{build_lexicon, BuildOptions, FrequencyWordList};
use mimema::phonetic::RuleCatalogue;
use mimema::text::Syllabifier;

const GOLDEN_PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/lexicon_1000.tsv");

#[test]
fn thousand_word_build_matches_golden_file() {
    let words = FrequencyWordList::bundled().truncated(1000);
    let lexicon = build_lexicon(
        &words,
        &BuildOptions::default(),
        &Syllabifier::french(),
        &RuleCatalogue::builtin(),
    )
    .unwrap();
    let text = lexicon.serialize();

    if std::env::var_os("MIMEMA_REGEN_GOLDEN").is_some() {
        std::fs::write(GOLDEN_PATH, &text).unwrap();
        return;
    }

    let golden = std::fs::read_to_string(GOLDEN_PATH)
        .expect("golden file present; regenerate with MIMEMA_REGEN_GOLDEN=1");
    assert_eq!(
        text, golden,
        "lexicon build diverged from the golden snapshot"
    );
}
