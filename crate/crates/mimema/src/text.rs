//! French text primitives: character classification, diacritic stripping and
//! syllabification.
//!
//! Everything downstream (skeleton rules, phonetic rules, rebus scoring)
//! works on lowercase tokens and leans on the classifications defined here.

use std::collections::HashSet;
use std::ops::Range;

use crate::error::{Error, Result};

/// Broad character class used by the rule modules and acceptor labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharClass {
    Vowel,
    Consonant,
    Digit,
    Symbol,
    Separator,
}

/// One classified character: the original codepoint, its class, and its
/// diacritic-stripped base form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrenchChar {
    pub codepoint: char,
    pub klass: CharClass,
    pub base: char,
}

/// Diacritic-stripped form of a single character. Length-preserving: `ç`
/// becomes `c`, `î` becomes `i`, unaccented characters pass through.
pub fn base_char(c: char) -> char {
    match c {
        'à' | 'â' | 'ä' => 'a',
        'é' | 'è' | 'ê' | 'ë' => 'e',
        'î' | 'ï' => 'i',
        'ô' | 'ö' => 'o',
        'ù' | 'û' | 'ü' => 'u',
        'ÿ' => 'y',
        'ç' => 'c',
        'À' | 'Â' | 'Ä' => 'A',
        'É' | 'È' | 'Ê' | 'Ë' => 'E',
        'Î' | 'Ï' => 'I',
        'Ô' | 'Ö' => 'O',
        'Ù' | 'Û' | 'Ü' => 'U',
        'Ÿ' => 'Y',
        'Ç' => 'C',
        _ => c,
    }
}

fn is_vowel_base(c: char) -> bool {
    matches!(
        c.to_lowercase().next().unwrap_or(c),
        'a' | 'e' | 'i' | 'o' | 'u' | 'y'
    )
}

/// Classify one character. Total: unknown letters default to consonant,
/// whitespace maps to separator, anything else to symbol.
pub fn classify_char(c: char) -> FrenchChar {
    let base = base_char(c);
    let klass = if c.is_whitespace() {
        CharClass::Separator
    } else if c.is_ascii_digit() {
        CharClass::Digit
    } else if c.is_alphabetic() {
        if is_vowel_base(base) {
            CharClass::Vowel
        } else {
            CharClass::Consonant
        }
    } else {
        CharClass::Symbol
    };
    FrenchChar {
        codepoint: c,
        klass,
        base,
    }
}

/// Classify every character of a token.
pub fn classify(word: &str) -> Vec<FrenchChar> {
    word.chars().map(classify_char).collect()
}

/// Strip diacritics from a whole string; the character count is preserved.
pub fn strip_diacritics(word: &str) -> String {
    word.chars().map(base_char).collect()
}

/// A word segmented into syllables. Ranges index characters (not bytes) of
/// `surface`, are contiguous, and concatenate back to the full word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyllabifiedWord {
    surface: String,
    chars: Vec<FrenchChar>,
    syllables: Vec<Range<usize>>,
}

impl SyllabifiedWord {
    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn chars(&self) -> &[FrenchChar] {
        &self.chars
    }

    pub fn syllables(&self) -> &[Range<usize>] {
        &self.syllables
    }

    /// Index of the syllable containing character position `pos`.
    pub fn syllable_of(&self, pos: usize) -> usize {
        self.syllables
            .iter()
            .position(|r| r.contains(&pos))
            .expect("position within surface")
    }

    /// Character position of the syllable's first vowel, if any.
    pub fn nucleus_start(&self, syllable: usize) -> Option<usize> {
        let r = &self.syllables[syllable];
        (r.start..r.end).find(|&i| self.chars[i].klass == CharClass::Vowel)
    }

    /// Materialize each syllable as its own string.
    pub fn syllable_strings(&self) -> Vec<String> {
        let chars: Vec<char> = self.surface.chars().collect();
        self.syllables
            .iter()
            .map(|r| chars[r.clone()].iter().collect())
            .collect()
    }
}

/// Set of consonant sequences accepted as syllable onsets.
#[derive(Debug, Clone)]
pub struct OnsetSet {
    onsets: HashSet<String>,
    max_len: usize,
}

impl OnsetSet {
    /// The built-in French onset inventory.
    pub fn french() -> Self {
        Self::parse(include_str!("../data/onsets.txt")).expect("bundled onset list is well formed")
    }

    /// Parse an onset list: one cluster per line, `#` starts a comment.
    pub fn parse(contents: &str) -> Result<Self> {
        let mut onsets = HashSet::new();
        for (idx, line) in contents.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.chars().any(|c| !c.is_alphabetic()) {
                return Err(Error::parse(idx + 1, format!("invalid onset {line:?}")));
            }
            onsets.insert(line.to_lowercase());
        }
        if onsets.is_empty() {
            return Err(Error::parse(0, "onset list is empty"));
        }
        let max_len = onsets.iter().map(|o| o.chars().count()).max().unwrap_or(1);
        Ok(OnsetSet { onsets, max_len })
    }

    fn contains(&self, cluster: &[char]) -> bool {
        if cluster.len() > self.max_len {
            return false;
        }
        let s: String = cluster.iter().collect();
        self.onsets.contains(&s)
    }
}

/// Onset-maximization syllabifier.
///
/// Interior consonant clusters are split so that the longest suffix forming
/// a legal onset starts the next syllable; leading consonants attach to the
/// first syllable and trailing consonants to the last.
#[derive(Debug, Clone)]
pub struct Syllabifier {
    onsets: OnsetSet,
}

impl Syllabifier {
    pub fn new(onsets: OnsetSet) -> Self {
        Syllabifier { onsets }
    }

    /// Syllabifier with the built-in French onset inventory.
    pub fn french() -> Self {
        Syllabifier::new(OnsetSet::french())
    }

    pub fn syllabify(&self, word: &str) -> Result<SyllabifiedWord> {
        if word.is_empty() {
            return Err(Error::EmptyToken);
        }
        let chars = classify(word);
        let n = chars.len();

        // Nuclei are maximal runs of vowel-class characters.
        let mut nuclei: Vec<Range<usize>> = Vec::new();
        let mut i = 0;
        while i < n {
            if chars[i].klass == CharClass::Vowel {
                let start = i;
                while i < n && chars[i].klass == CharClass::Vowel {
                    i += 1;
                }
                nuclei.push(start..i);
            } else {
                i += 1;
            }
        }

        if nuclei.is_empty() {
            return Ok(SyllabifiedWord {
                surface: word.to_string(),
                chars,
                syllables: std::iter::once(0..n).collect(),
            });
        }

        let mut boundaries = vec![0];
        for w in nuclei.windows(2) {
            let cluster_start = w[0].end;
            let cluster_end = w[1].start;
            let cluster: Vec<char> = chars[cluster_start..cluster_end]
                .iter()
                .map(|fc| fc.base.to_lowercase().next().unwrap_or(fc.base))
                .collect();
            let mut onset_len = 1.min(cluster.len());
            for len in (1..=cluster.len()).rev() {
                if self.onsets.contains(&cluster[cluster.len() - len..]) {
                    onset_len = len;
                    break;
                }
            }
            boundaries.push(cluster_end - onset_len);
        }
        boundaries.push(n);

        let syllables = boundaries.windows(2).map(|w| w[0]..w[1]).collect();
        Ok(SyllabifiedWord {
            surface: word.to_string(),
            chars,
            syllables,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syllables(word: &str) -> Vec<String> {
        Syllabifier::french()
            .syllabify(word)
            .unwrap()
            .syllable_strings()
    }

    #[test]
    fn classify_basic() {
        let got = classify("été");
        assert_eq!(got[0].klass, CharClass::Vowel);
        assert_eq!(got[0].base, 'e');
        assert_eq!(got[1].klass, CharClass::Consonant);
        assert_eq!(got[2].klass, CharClass::Vowel);
    }

    #[test]
    fn classify_rebus_tokens() {
        let classes: Vec<CharClass> = classify("2m1").iter().map(|c| c.klass).collect();
        assert_eq!(
            classes,
            vec![CharClass::Digit, CharClass::Consonant, CharClass::Digit]
        );
        let classes: Vec<CharClass> = classify("a+").iter().map(|c| c.klass).collect();
        assert_eq!(classes, vec![CharClass::Vowel, CharClass::Symbol]);
    }

    #[test]
    fn classify_separator_and_unknown() {
        assert_eq!(classify_char(' ').klass, CharClass::Separator);
        assert_eq!(classify_char('ß').klass, CharClass::Consonant);
    }

    #[test]
    fn strip_examples() {
        assert_eq!(strip_diacritics("ça"), "ca");
        assert_eq!(strip_diacritics("abc"), "abc");
        assert_eq!(strip_diacritics("nété"), "nete");
    }

    #[test]
    fn base_is_idempotent() {
        for c in ('a'..='z').chain("àâäéèêëîïôöùûüÿç".chars()) {
            assert_eq!(base_char(base_char(c)), base_char(c));
        }
    }

    #[test]
    fn strip_preserves_class() {
        for c in "àâäéèêëîïôöùûüÿçabcdefghijklmnopqrstuvwxyz0123456789 +".chars() {
            assert_eq!(classify_char(c).klass, classify_char(base_char(c)).klass);
        }
    }

    #[test]
    fn syllabify_examples() {
        assert_eq!(
            syllables("indépendance"),
            vec!["in", "dé", "pen", "dan", "ce"]
        );
        assert_eq!(syllables("devant"), vec!["de", "vant"]);
        assert_eq!(syllables("a"), vec!["a"]);
        assert_eq!(syllables("salut"), vec!["sa", "lut"]);
        assert_eq!(syllables("toujours"), vec!["tou", "jours"]);
        assert_eq!(syllables("bonjour"), vec!["bon", "jour"]);
        assert_eq!(syllables("apprendre"), vec!["ap", "pren", "dre"]);
    }

    #[test]
    fn syllabify_no_vowel_is_single_syllable() {
        assert_eq!(syllables("slt"), vec!["slt"]);
    }

    #[test]
    fn syllabify_empty_is_error() {
        assert!(matches!(
            Syllabifier::french().syllabify(""),
            Err(Error::EmptyToken)
        ));
    }

    #[test]
    fn syllables_cover_surface() {
        let syl = Syllabifier::french();
        for word in ["indépendance", "beaucoup", "aéroport", "eau", "strict"] {
            let s = syl.syllabify(word).unwrap();
            let rebuilt: String = s.syllable_strings().concat();
            assert_eq!(rebuilt, word);
            // Every syllable has a vowel unless the whole word has none.
            if word
                .chars()
                .any(|c| classify_char(c).klass == CharClass::Vowel)
            {
                for (i, _) in s.syllables().iter().enumerate() {
                    assert!(s.nucleus_start(i).is_some(), "{word} syllable {i}");
                }
            }
        }
    }
}
