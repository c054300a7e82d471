//! Consonant-skeleton abbreviation.
//!
//! The strict cascade keeps a word's consonant frame and deletes everything
//! else in four ordered rules:
//!
//! 1. protect the first consonant, the last consonant, and any vowels before
//!    the first or after the last consonant;
//! 2. delete the remaining vowels;
//! 3. delete `l`, `r`, `h` in weak position — the second element of a
//!    syllable onset;
//! 4. delete `n`, `m` in weak position — a syllable coda immediately before
//!    a consonant.
//!
//! Weak positions are read off the original word's syllabification, each rule
//! applies exhaustively before the next, and the result is diacritic-free.
//! `salut` gives `slt`, `devant` gives `dvt`, `indépendance` gives `indpdce`.
//!
//! Attested abbreviations are often laxer than the strict cascade (`bjour`
//! for *bonjour* keeps a whole tail, `tjs` for *toujours* drops a kept `r`),
//! so [`build_skeleton_acceptor`] compiles a per-word weighted acceptor whose
//! language adds those variants around the strict skeleton.

use std::collections::BTreeSet;

use crate::automata::{AcceptorBuilder, Label, WeightedAcceptor};
use crate::error::{Error, Result};
use crate::num::Real;
use crate::text::{strip_diacritics, CharClass, Syllabifier};

/// Stage-by-stage record of one skeleton derivation.
///
/// Each stage's string is a subsequence of the previous one; `after_rule1`
/// is the diacritic-stripped input itself since rule 1 only marks the
/// protected frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonDerivation {
    pub input: String,
    pub after_rule1: String,
    pub after_rule2: String,
    pub after_rule3: String,
    pub after_rule4: String,
    /// Indices into the stripped input that survive all four rules.
    pub kept_positions: BTreeSet<usize>,
    /// Set when the input has no consonant; the word is returned unchanged.
    pub no_consonant: bool,
}

impl SkeletonDerivation {
    /// The final abbreviated form.
    pub fn skeleton(&self) -> &str {
        &self.after_rule4
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CharFate {
    /// Rule-1 frame: never deleted.
    Anchor,
    /// Deleted by rule 2, 3 or 4.
    Deleted,
    /// Kept, but not part of the protected frame.
    KeptInterior,
}

struct Analysis {
    stripped: Vec<char>,
    fates: Vec<CharFate>,
    del2: BTreeSet<usize>,
    del3: BTreeSet<usize>,
    del4: BTreeSet<usize>,
    no_consonant: bool,
}

fn analyze(word: &str, syllabifier: &Syllabifier) -> Result<Analysis> {
    if word.is_empty() {
        return Err(Error::EmptyToken);
    }
    let lowered = word.to_lowercase();
    let stripped_str = strip_diacritics(&lowered);
    let syl = syllabifier.syllabify(&stripped_str)?;
    let chars = syl.chars().to_vec();
    let stripped: Vec<char> = stripped_str.chars().collect();
    let n = stripped.len();

    let consonants: Vec<usize> = (0..n)
        .filter(|&i| chars[i].klass == CharClass::Consonant)
        .collect();
    if consonants.is_empty() {
        return Ok(Analysis {
            fates: vec![CharFate::Anchor; n],
            stripped,
            del2: BTreeSet::new(),
            del3: BTreeSet::new(),
            del4: BTreeSet::new(),
            no_consonant: true,
        });
    }
    let first = *consonants.first().unwrap();
    let last = *consonants.last().unwrap();

    // Rule-1 frame: the two outermost consonants plus everything outside
    // them (vowels before the first consonant and after the last).
    let mut fates = vec![CharFate::KeptInterior; n];
    for (i, fate) in fates.iter_mut().enumerate() {
        if i <= first || i >= last {
            *fate = CharFate::Anchor;
        }
    }

    let mut del2 = BTreeSet::new();
    let mut del3 = BTreeSet::new();
    let mut del4 = BTreeSet::new();

    for i in 0..n {
        if fates[i] != CharFate::KeptInterior {
            continue;
        }
        if chars[i].klass == CharClass::Vowel {
            del2.insert(i);
            fates[i] = CharFate::Deleted;
        }
    }

    // Weak l/r/h: second element of a two-consonant syllable onset, directly
    // before the nucleus (pl, tr, vr, th, ...). The nucleus-adjacency
    // requirement keeps the rule from re-firing on degenerate consonant runs
    // when a skeleton is fed back in.
    for i in 0..n {
        if fates[i] != CharFate::KeptInterior || !matches!(stripped[i], 'l' | 'r' | 'h') {
            continue;
        }
        let s = syl.syllable_of(i);
        let range = &syl.syllables()[s];
        if i == range.start + 1 && syl.nucleus_start(s) == Some(i + 1) {
            del3.insert(i);
            fates[i] = CharFate::Deleted;
        }
    }

    // Weak n/m: closing a syllable right after its vowel, before a
    // consonant. Post-vocalic adjacency implies coda position under onset
    // maximization (no French onset starts with a nasal plus consonant).
    for i in 0..n {
        if fates[i] != CharFate::KeptInterior || !matches!(stripped[i], 'n' | 'm') {
            continue;
        }
        let after_vowel = i > 0 && chars[i - 1].klass == CharClass::Vowel;
        let before_consonant = i + 1 < n && chars[i + 1].klass == CharClass::Consonant;
        if after_vowel && before_consonant {
            del4.insert(i);
            fates[i] = CharFate::Deleted;
        }
    }

    Ok(Analysis {
        stripped,
        fates,
        del2,
        del3,
        del4,
        no_consonant: false,
    })
}

fn subsequence(chars: &[char], removed: &[&BTreeSet<usize>]) -> String {
    chars
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed.iter().any(|set| set.contains(i)))
        .map(|(_, c)| *c)
        .collect()
}

/// Run the four-rule cascade on one lowercase letter token.
pub fn skeletonize(word: &str, syllabifier: &Syllabifier) -> Result<SkeletonDerivation> {
    let a = analyze(word, syllabifier)?;
    let input = word.to_lowercase();
    let after_rule1: String = a.stripped.iter().collect();
    let after_rule2 = subsequence(&a.stripped, &[&a.del2]);
    let after_rule3 = subsequence(&a.stripped, &[&a.del2, &a.del3]);
    let after_rule4 = subsequence(&a.stripped, &[&a.del2, &a.del3, &a.del4]);
    let kept_positions = (0..a.stripped.len())
        .filter(|i| !a.del2.contains(i) && !a.del3.contains(i) && !a.del4.contains(i))
        .collect();
    Ok(SkeletonDerivation {
        input,
        after_rule1,
        after_rule2,
        after_rule3,
        after_rule4,
        kept_positions,
        no_consonant: a.no_consonant,
    })
}

/// Weights of the relaxed skeleton acceptor.
///
/// The acceptor of a word is the union of a dedicated path for the strict
/// skeleton (probability `strict_share`) and a subsequence lattice carrying
/// the rest of the mass. In the lattice every rule-deleted character is
/// skipped or retained (`retention` is the retain probability), kept
/// non-frame characters may be dropped with probability `kept_drop`, and on
/// every consumed character a `tail` fraction of the mass commits to keeping
/// the whole remainder of the word verbatim, so an unabbreviated tail costs
/// one factor regardless of its length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkeletonAcceptorParams<W> {
    pub retention: W,
    pub kept_drop: W,
    pub tail: W,
    pub strict_share: W,
}

impl<W: Real> Default for SkeletonAcceptorParams<W> {
    fn default() -> Self {
        SkeletonAcceptorParams {
            retention: W::from_f64_lossy(0.5),
            kept_drop: W::from_f64_lossy(0.25),
            tail: W::from_f64_lossy(0.5),
            strict_share: W::from_f64_lossy(0.5),
        }
    }
}

impl<W: Real> SkeletonAcceptorParams<W> {
    fn validate(&self) -> Result<()> {
        let unit = |v: W| v >= W::zero() && v <= W::one();
        if !unit(self.retention) || !unit(self.kept_drop) || !unit(self.tail) {
            return Err(Error::InvalidParameters(
                "retention, kept_drop and tail must lie in [0, 1]".into(),
            ));
        }
        if self.strict_share <= W::zero() || self.strict_share >= W::one() {
            return Err(Error::InvalidParameters(
                "strict_share must lie in (0, 1)".into(),
            ));
        }
        Ok(())
    }
}

/// Compile the relaxed acceptor for one word.
///
/// Its language contains the strict skeleton, every intermediate stage
/// output, every variant that retains a subset of the rule-deleted
/// characters, partially unabbreviated tails, and forms dropping kept
/// non-frame consonants (the attested `tjs` for *toujours*).
pub fn build_skeleton_acceptor<W: Real>(
    word: &str,
    syllabifier: &Syllabifier,
    params: &SkeletonAcceptorParams<W>,
) -> Result<WeightedAcceptor<W>> {
    params.validate()?;
    let analysis = analyze(word, syllabifier)?;
    let chars = &analysis.stripped;
    let n = chars.len();

    if analysis.no_consonant {
        // Nothing is deletable: accept exactly the word, with full mass.
        let mut b = AcceptorBuilder::new(n + 1, 0);
        for (i, &c) in chars.iter().enumerate() {
            b.add_transition(i, Label::Char(c), i + 1, W::zero());
        }
        b.add_final(n);
        return b.build();
    }

    let skip_prob = |i: usize| -> W {
        match analysis.fates[i] {
            CharFate::Anchor => W::zero(),
            CharFate::Deleted => W::one() - params.retention,
            CharFate::KeptInterior => params.kept_drop,
        }
    };
    let skeleton: Vec<char> = (0..n)
        .filter(|&i| analysis.fates[i] != CharFate::Deleted)
        .map(|i| chars[i])
        .collect();
    let k = skeleton.len();

    // State layout: 0 = start, 1..=k strict chain, then the lattice states
    // L_1..L_n and the tail states T_1..T_n.
    let strict_state = |i: usize| i; // strict chain state after i skeleton chars, i >= 1
    let lattice = |i: usize| k + i; // lattice state after i original chars, i >= 1
    let tail = |i: usize| k + n + i; // tail state after i original chars, i >= 1

    let mut b = AcceptorBuilder::new(1 + k + 2 * n, 0);

    // Strict branch: consumes exactly the skeleton characters.
    b.add_transition(
        0,
        Label::Char(skeleton[0]),
        strict_state(1),
        params.strict_share.ln(),
    );
    for (i, &c) in skeleton.iter().enumerate().skip(1) {
        b.add_transition(
            strict_state(i),
            Label::Char(c),
            strict_state(i + 1),
            W::zero(),
        );
    }
    b.add_final(strict_state(k));

    // Subsequence lattice with tail commitment. From "consumed i characters"
    // the next consumed character is c[j] for any j >= i whose predecessors
    // are all skippable; mass telescopes to exactly 1 per state because the
    // final character is an anchor.
    let lattice_mass = W::one() - params.strict_share;
    for i in 0..n {
        let from = if i == 0 { 0 } else { lattice(i) };
        let entry_scale = if i == 0 { lattice_mass } else { W::one() };
        let mut skipped = W::one();
        for (j, &cj) in chars.iter().enumerate().skip(i) {
            let consume = entry_scale * skipped * (W::one() - skip_prob(j));
            let core = consume * (W::one() - params.tail);
            let commit = consume * params.tail;
            if core > W::zero() {
                b.add_transition(from, Label::Char(cj), lattice(j + 1), core.ln());
            }
            if commit > W::zero() {
                b.add_transition(from, Label::Char(cj), tail(j + 1), commit.ln());
            }
            if skip_prob(j) == W::zero() {
                break;
            }
            skipped = skipped * skip_prob(j);
        }
    }
    b.add_final(lattice(n));

    // Once committed, the tail consumes the rest of the word verbatim.
    for (i, &c) in chars.iter().enumerate().skip(1) {
        b.add_transition(tail(i), Label::Char(c), tail(i + 1), W::zero());
    }
    b.add_final(tail(n));

    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn skel(word: &str) -> SkeletonDerivation {
        skeletonize(word, &Syllabifier::french()).unwrap()
    }

    fn acceptor(word: &str) -> WeightedAcceptor<f64> {
        build_skeleton_acceptor(
            word,
            &Syllabifier::french(),
            &SkeletonAcceptorParams::default(),
        )
        .unwrap()
    }

    #[test]
    fn paper_forms() {
        assert_eq!(skel("salut").skeleton(), "slt");
        assert_eq!(skel("devant").skeleton(), "dvt");
        assert_eq!(skel("indépendance").skeleton(), "indpdce");
        assert_eq!(skel("toujours").skeleton(), "tjrs");
        assert_eq!(skel("bonjour").skeleton(), "bjr");
    }

    #[test]
    fn stage_progression() {
        let d = skel("indépendance");
        assert_eq!(d.after_rule1, "independance");
        assert_eq!(d.after_rule2, "indpndnce");
        assert_eq!(d.after_rule3, "indpndnce");
        assert_eq!(d.after_rule4, "indpdce");
    }

    #[test]
    fn outer_vowels_are_protected() {
        assert_eq!(skel("été").skeleton(), "ete");
        assert_eq!(skel("ami").skeleton(), "ami");
    }

    #[test]
    fn no_consonant_flag() {
        let d = skel("eau");
        assert!(d.no_consonant);
        assert_eq!(d.skeleton(), "eau");
    }

    #[test]
    fn empty_is_error() {
        assert!(matches!(
            skeletonize("", &Syllabifier::french()),
            Err(Error::EmptyToken)
        ));
    }

    #[test]
    fn weak_l_in_onset_deleted() {
        // sim·ple·ment: l is the second element of the onset "pl".
        assert_eq!(skel("simplement").skeleton(), "spmt");
    }

    #[test]
    fn onset_initial_l_kept() {
        // sa·lut: l heads its syllable, so rule 3 does not fire.
        assert_eq!(skel("salut").skeleton(), "slt");
        // par·ler: l heads the second syllable even though r precedes it.
        assert_eq!(skel("parler").skeleton(), "prlr");
    }

    #[test]
    fn skeleton_is_idempotent() {
        for word in [
            "salut",
            "devant",
            "indépendance",
            "toujours",
            "bonjour",
            "été",
        ] {
            let first = skel(word).skeleton().to_string();
            assert_eq!(skel(&first).skeleton(), first, "{word}");
        }
    }

    #[test]
    fn acceptor_accepts_strict_and_attested_forms() {
        let a = acceptor("bonjour");
        assert!(a.accepts("bjr"));
        assert!(a.accepts("bjour"));
        assert!(a.accepts("bonjour"));
        let a = acceptor("toujours");
        assert!(a.accepts("tjrs"));
        assert!(a.accepts("tjs"));
        assert!(a.accepts("toujours"));
    }

    #[test]
    fn acceptor_accepts_intermediate_stages() {
        let d = skel("indépendance");
        let a = acceptor("indépendance");
        for stage in [
            &d.after_rule1,
            &d.after_rule2,
            &d.after_rule3,
            &d.after_rule4,
        ] {
            assert!(a.accepts(stage), "{stage}");
        }
    }

    #[test]
    fn acceptor_rejects_non_subsequences() {
        let a = acceptor("salut");
        assert!(!a.accepts("xyz"));
        assert!(!a.accepts("tls"));
        assert!(!a.accepts("salute"));
    }

    #[test]
    fn skeleton_never_scores_below_word() {
        for word in ["salut", "bonjour", "toujours", "indépendance", "devant"] {
            let a = acceptor(word);
            let d = skel(word);
            let s_skel = a.score(d.skeleton()).unwrap();
            let s_word = a.score(&d.after_rule1).unwrap();
            assert!(s_skel >= s_word, "{word}: {s_skel} < {s_word}");
        }
    }

    #[test]
    fn no_consonant_acceptor_accepts_exactly_the_word() {
        let a = acceptor("eau");
        assert!(a.accepts("eau"));
        assert!(!a.accepts("eu"));
    }
}
