//! Abbreviation lexicons built from frequency word lists.
//!
//! A lexicon maps abbreviated surface forms back to the standard words that
//! generate them, with the generator's name and the word's corpus frequency
//! attached. The skeleton generator contributes the strict consonant
//! skeleton of each word; the phonetic generator contributes the (capped)
//! variant set. Forms identical to their source word are dropped.
//!
//! Serialization is a sorted TSV with a `#mimema-lexicon v1` header, so
//! rebuilding from the same inputs gives byte-identical files.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phonetic::{phonetize, RuleCatalogue};
use crate::skeleton::skeletonize;
use crate::text::Syllabifier;

/// File header of the lexicon TSV format.
pub const LEXICON_HEADER: &str = "#mimema-lexicon v1";

/// One word-list entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordEntry {
    pub word: String,
    pub frequency: u64,
    pub pos: Option<String>,
}

/// An ordered frequency word list; words are unique after lowercasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyWordList {
    entries: Vec<WordEntry>,
}

impl FrequencyWordList {
    /// The word list bundled with the crate (a general-French frequency
    /// sample of about 1,600 words).
    pub fn bundled() -> Self {
        Self::parse(include_str!("../data/french_frequency.tsv"))
            .expect("bundled word list is well formed")
    }

    /// Parse `word<TAB>frequency[<TAB>pos]` lines. Words are lowercased;
    /// duplicates and zero frequencies are rejected with their line number.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut seen = BTreeSet::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() < 2 || cols.len() > 3 {
                return Err(Error::parse(
                    lineno,
                    "expected word<TAB>frequency[<TAB>pos]",
                ));
            }
            let word = cols[0].trim().to_lowercase();
            if word.is_empty() {
                return Err(Error::parse(lineno, "empty word"));
            }
            let frequency: u64 = cols[1]
                .trim()
                .parse()
                .map_err(|_| Error::parse(lineno, format!("invalid frequency {:?}", cols[1])))?;
            if frequency == 0 {
                return Err(Error::parse(lineno, "frequency must be at least 1"));
            }
            if !seen.insert(word.clone()) {
                return Err(Error::parse(lineno, format!("duplicate word {word:?}")));
            }
            entries.push(WordEntry {
                word,
                frequency,
                pos: cols.get(2).map(|p| p.trim().to_string()),
            });
        }
        if entries.is_empty() {
            return Err(Error::parse(0, "empty word list"));
        }
        Ok(FrequencyWordList { entries })
    }

    pub fn entries(&self) -> &[WordEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Keep only the first `n` entries.
    pub fn truncated(&self, n: usize) -> Self {
        FrequencyWordList {
            entries: self.entries.iter().take(n).cloned().collect(),
        }
    }
}

/// Which generator produced a lexicon entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Skeleton,
    Phonetic,
}

impl Generator {
    pub const ALL: [Generator; 2] = [Generator::Skeleton, Generator::Phonetic];

    pub fn name(&self) -> &'static str {
        match self {
            Generator::Skeleton => "skeleton",
            Generator::Phonetic => "phonetic",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skeleton" => Ok(Generator::Skeleton),
            "phonetic" => Ok(Generator::Phonetic),
            _ => Err(Error::InvalidParameters(format!("unknown generator {s:?}"))),
        }
    }
}

/// One (word, generator, frequency) witness for an abbreviated form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LexiconEntry {
    pub word: String,
    pub generator: Generator,
    pub frequency: u64,
}

/// Map from abbreviated form to its witnesses.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, BTreeSet<LexiconEntry>>,
}

/// Options controlling [`build_lexicon`].
#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub generators: Vec<Generator>,
    pub variant_cap: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            generators: Generator::ALL.to_vec(),
            variant_cap: crate::phonetic::DEFAULT_VARIANT_CAP,
        }
    }
}

/// Run the selected generators over every word of the list and merge the
/// results. The output is independent of word order and parallel scheduling.
pub fn build_lexicon(
    words: &FrequencyWordList,
    options: &BuildOptions,
    syllabifier: &Syllabifier,
    catalogue: &RuleCatalogue,
) -> Result<Lexicon> {
    let per_word: Vec<Vec<(String, LexiconEntry)>> = words
        .entries()
        .par_iter()
        .map(|entry| {
            let mut out = Vec::new();
            for generator in &options.generators {
                match generator {
                    Generator::Skeleton => {
                        if let Ok(derivation) = skeletonize(&entry.word, syllabifier) {
                            let form = derivation.skeleton().to_string();
                            if !form.is_empty() && form != entry.word {
                                out.push((
                                    form,
                                    LexiconEntry {
                                        word: entry.word.clone(),
                                        generator: Generator::Skeleton,
                                        frequency: entry.frequency,
                                    },
                                ));
                            }
                        }
                    }
                    Generator::Phonetic => {
                        let variants = phonetize(&entry.word, catalogue, options.variant_cap);
                        for form in variants.forms() {
                            if !form.is_empty() {
                                out.push((
                                    form.to_string(),
                                    LexiconEntry {
                                        word: entry.word.clone(),
                                        generator: Generator::Phonetic,
                                        frequency: entry.frequency,
                                    },
                                ));
                            }
                        }
                    }
                }
            }
            out
        })
        .collect();

    let mut entries: BTreeMap<String, BTreeSet<LexiconEntry>> = BTreeMap::new();
    for batch in per_word {
        for (form, entry) in batch {
            entries.entry(form).or_default().insert(entry);
        }
    }
    Ok(Lexicon { entries })
}

impl Lexicon {
    pub fn entries(&self) -> &BTreeMap<String, BTreeSet<LexiconEntry>> {
        &self.entries
    }

    /// Number of distinct abbreviated forms.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains_form(&self, form: &str) -> bool {
        self.entries.contains_key(form)
    }

    pub fn get(&self, form: &str) -> Option<&BTreeSet<LexiconEntry>> {
        self.entries.get(form)
    }

    /// Candidate expansions of a form, highest frequency first, ties broken
    /// lexicographically by word. Unknown forms give an empty list.
    pub fn lookup(&self, form: &str) -> Vec<(String, u64)> {
        let Some(set) = self.entries.get(form) else {
            return Vec::new();
        };
        let mut by_word: BTreeMap<&str, u64> = BTreeMap::new();
        for entry in set {
            let f = by_word.entry(&entry.word).or_insert(0);
            *f = (*f).max(entry.frequency);
        }
        let mut out: Vec<(String, u64)> = by_word
            .into_iter()
            .map(|(w, f)| (w.to_string(), f))
            .collect();
        out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        out
    }

    /// Sorted TSV: header line, then `form<TAB>word<TAB>generator<TAB>frequency`.
    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity(self.entries.len() * 24);
        out.push_str(LEXICON_HEADER);
        out.push('\n');
        for (form, set) in &self.entries {
            for entry in set {
                out.push_str(form);
                out.push('\t');
                out.push_str(&entry.word);
                out.push('\t');
                out.push_str(entry.generator.name());
                out.push('\t');
                out.push_str(&entry.frequency.to_string());
                out.push('\n');
            }
        }
        out
    }

    pub fn deserialize(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header == LEXICON_HEADER => {}
            Some((_, header)) => {
                return Err(Error::parse(1, format!("unexpected header {header:?}")))
            }
            None => return Err(Error::parse(1, "missing header")),
        }
        let mut entries: BTreeMap<String, BTreeSet<LexiconEntry>> = BTreeMap::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(Error::parse(lineno, "expected 4 tab-separated fields"));
            }
            if cols[0].is_empty() || cols[1].is_empty() {
                return Err(Error::parse(lineno, "empty form or word"));
            }
            let generator: Generator = cols[2]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("unknown generator {:?}", cols[2])))?;
            let frequency: u64 = cols[3]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("invalid frequency {:?}", cols[3])))?;
            if frequency == 0 {
                return Err(Error::parse(lineno, "frequency must be at least 1"));
            }
            entries
                .entry(cols[0].to_string())
                .or_default()
                .insert(LexiconEntry {
                    word: cols[1].to_string(),
                    generator,
                    frequency,
                });
        }
        Ok(Lexicon { entries })
    }
}
