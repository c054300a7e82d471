//! Synthetic noisy-channel recognizer and evaluation harness.
//!
//! Ground-truth tokens are corrupted by a seeded confusion model
//! (substitutions, oversegmentations such as `b` → `lo`, deletions,
//! insertions), turned into scored candidate lists, and decoded with a
//! log-linear combination of channel score and optional language resources:
//! an abbreviation lexicon, per-word skeleton acceptors, the rebus model and
//! a word-frequency table. [`evaluate`] runs a categorized corpus through
//! the channel under several resource bundles and tabulates the character
//! recognition rate per category and bundle.
//!
//! Randomness is fully determined by `(seed, item index)`: every corpus item
//! corrupts on its own stream, so parallel and serial runs agree
//! bit-for-bit.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::automata::WeightedAcceptor;
use crate::error::{Error, Result};
use crate::lexicon::{build_lexicon, BuildOptions, FrequencyWordList, Lexicon};
use crate::metric::corpus_tr;
use crate::phonetic::{phonetize, RuleCatalogue};
use crate::rebus::{build_rebus_model, score_rebus, RebusModel, RebusParams};
use crate::skeleton::{build_skeleton_acceptor, skeletonize, SkeletonAcceptorParams};
use crate::text::{strip_diacritics, Syllabifier};
use crate::Weight;

/// Corpus category, mirroring the three modeled phenomena plus a catch-all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Skeleton,
    Rebus,
    Phonetic,
    Divers,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::Skeleton,
        Category::Rebus,
        Category::Phonetic,
        Category::Divers,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Category::Skeleton => "skeleton",
            Category::Rebus => "rebus",
            Category::Phonetic => "phonetic",
            Category::Divers => "divers",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skeleton" => Ok(Category::Skeleton),
            "rebus" => Ok(Category::Rebus),
            "phonetic" => Ok(Category::Phonetic),
            "divers" => Ok(Category::Divers),
            _ => Err(Error::InvalidParameters(format!("unknown category {s:?}"))),
        }
    }
}

/// Attested rebus forms used by the synthetic corpus generator; there is no
/// rebus generator, the device is too open-ended for one.
pub const ATTESTED_REBUS: [&str; 12] = [
    "2m1", "a+", "kfé", "9", "c", "g", "b1", "2ri1", "mr6", "koi29", "a12c4", "gt",
];

/// Per-character corruption model.
///
/// For each input character the channel first decides deletion, then draws
/// from the character's substitution row (whose leftover mass is the keep
/// probability; outputs may be two characters long to model
/// oversegmentation), and finally inserts a character with probability
/// `insertion`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionModel {
    substitutions: BTreeMap<char, Vec<(String, Weight)>>,
    deletion: Weight,
    insertion: Weight,
    insert_dist: Vec<(char, Weight)>,
    seed: u64,
    alternatives: usize,
    // Derived: substitution output -> possible source characters.
    inverse: BTreeMap<String, Vec<char>>,
}

impl ConfusionModel {
    pub fn new(
        substitutions: BTreeMap<char, Vec<(String, Weight)>>,
        deletion: Weight,
        insertion: Weight,
        insert_dist: Vec<(char, Weight)>,
        seed: u64,
        alternatives: usize,
    ) -> Result<Self> {
        let mut model = ConfusionModel {
            substitutions,
            deletion,
            insertion,
            insert_dist,
            seed,
            alternatives,
            inverse: BTreeMap::new(),
        };
        model.validate()?;
        for (&c, row) in &model.substitutions {
            for (out, p) in row {
                if *p > 0.0 {
                    model.inverse.entry(out.clone()).or_default().push(c);
                }
            }
        }
        for sources in model.inverse.values_mut() {
            sources.sort_unstable();
            sources.dedup();
        }
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidConfusionModel(msg));
        let unit = |v: Weight| (0.0..=1.0).contains(&v);
        if !unit(self.deletion) || !unit(self.insertion) {
            return invalid("deletion and insertion must lie in [0, 1]".into());
        }
        for (c, row) in &self.substitutions {
            let mut sum = 0.0;
            for (out, p) in row {
                if out.is_empty() {
                    return invalid(format!("empty substitution output for {c:?}"));
                }
                if !unit(*p) {
                    return invalid(format!("substitution probability for {c:?} outside [0, 1]"));
                }
                sum += p;
            }
            // The row plus its implicit keep probability must form a
            // distribution.
            if sum > 1.0 + 1e-9 {
                return invalid(format!("substitution row for {c:?} sums to {sum}"));
            }
        }
        if self.insertion > 0.0 {
            let sum: Weight = self.insert_dist.iter().map(|(_, p)| *p).sum();
            if self.insert_dist.iter().any(|(_, p)| !unit(*p)) || (sum - 1.0).abs() > 1e-9 {
                return invalid("insertion distribution must sum to 1".into());
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Channel with no noise at all: the identity recognizer.
    pub fn zero_noise(seed: u64) -> Self {
        ConfusionModel::new(BTreeMap::new(), 0.0, 0.0, Vec::new(), seed, 3)
            .expect("zero-noise model is valid")
    }

    /// Hand-tuned default table over lowercase French letters, digits and
    /// `+`, aimed at a baseline recognition rate in the low nineties.
    pub fn default_french(seed: u64) -> Self {
        let rows: &[(char, &[(&str, f64)])] = &[
            ('a', &[("o", 0.048), ("u", 0.024)]),
            ('b', &[("lo", 0.040), ("h", 0.024), ("l", 0.016)]),
            ('c', &[("e", 0.040), ("o", 0.024)]),
            ('d', &[("cl", 0.032), ("a", 0.024)]),
            ('e', &[("c", 0.040), ("o", 0.024)]),
            ('f', &[("t", 0.048)]),
            ('g', &[("9", 0.032), ("q", 0.024)]),
            ('h', &[("li", 0.032), ("n", 0.024)]),
            ('i', &[("l", 0.048), ("j", 0.016)]),
            ('j', &[("i", 0.040), ("y", 0.016)]),
            ('k', &[("lc", 0.024), ("x", 0.016)]),
            ('l', &[("i", 0.048), ("t", 0.016)]),
            ('m', &[("nn", 0.040), ("n", 0.032)]),
            ('n', &[("m", 0.032), ("u", 0.024)]),
            ('o', &[("a", 0.040), ("0", 0.016)]),
            ('p', &[("b", 0.024), ("n", 0.016)]),
            ('q', &[("g", 0.032), ("9", 0.016)]),
            ('r', &[("v", 0.040), ("n", 0.016)]),
            ('s', &[("z", 0.040), ("r", 0.016)]),
            ('t', &[("l", 0.040), ("f", 0.024)]),
            ('u', &[("v", 0.040), ("n", 0.024)]),
            ('v', &[("u", 0.040), ("r", 0.016)]),
            ('w', &[("vv", 0.048)]),
            ('x', &[("k", 0.032)]),
            ('y', &[("g", 0.024), ("v", 0.016)]),
            ('z', &[("s", 0.040), ("2", 0.016)]),
            ('é', &[("e", 0.048), ("è", 0.024)]),
            ('è', &[("e", 0.048), ("é", 0.024)]),
            ('ê', &[("e", 0.064)]),
            ('à', &[("a", 0.064)]),
            ('ç', &[("c", 0.064)]),
            ('0', &[("o", 0.040)]),
            ('1', &[("l", 0.048), ("i", 0.016)]),
            ('2', &[("z", 0.056)]),
            ('6', &[("b", 0.032)]),
            ('7', &[("t", 0.032)]),
            ('9', &[("g", 0.040), ("q", 0.016)]),
            ('+', &[("t", 0.032)]),
        ];
        let substitutions = rows
            .iter()
            .map(|(c, row)| {
                (
                    *c,
                    row.iter().map(|(out, p)| (out.to_string(), *p)).collect(),
                )
            })
            .collect();
        let insert_dist = vec![
            ('i', 0.25),
            ('u', 0.25),
            ('e', 0.20),
            ('l', 0.15),
            ('n', 0.15),
        ];
        ConfusionModel::new(substitutions, 0.015, 0.012, insert_dist, seed, 3)
            .expect("default confusion model is valid")
    }

    /// Parse the structured config: `key = value` pairs, then an `[insert]`
    /// section (`char<TAB>probability`) and a `[substitutions]` section
    /// (`char<TAB>output<TAB>probability`).
    pub fn from_config_str(text: &str) -> Result<Self> {
        #[derive(PartialEq)]
        enum Section {
            Top,
            Insert,
            Substitutions,
        }
        let mut section = Section::Top;
        let mut substitutions: BTreeMap<char, Vec<(String, Weight)>> = BTreeMap::new();
        let mut insert_dist = Vec::new();
        let mut deletion = 0.0;
        let mut insertion = 0.0;
        let mut seed = 0u64;
        let mut alternatives = 3usize;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line {
                "[insert]" => {
                    section = Section::Insert;
                    continue;
                }
                "[substitutions]" => {
                    section = Section::Substitutions;
                    continue;
                }
                _ if line.starts_with('[') => {
                    return Err(Error::parse(lineno, format!("unknown section {line:?}")));
                }
                _ => {}
            }
            match section {
                Section::Top => {
                    let (key, value) = line
                        .split_once('=')
                        .ok_or_else(|| Error::parse(lineno, "expected key = value"))?;
                    let value = value.trim();
                    match key.trim() {
                        "deletion" => {
                            deletion = value
                                .parse()
                                .map_err(|_| Error::parse(lineno, "invalid deletion"))?
                        }
                        "insertion" => {
                            insertion = value
                                .parse()
                                .map_err(|_| Error::parse(lineno, "invalid insertion"))?
                        }
                        "seed" => {
                            seed = value
                                .parse()
                                .map_err(|_| Error::parse(lineno, "invalid seed"))?
                        }
                        "alternatives" => {
                            alternatives = value
                                .parse()
                                .map_err(|_| Error::parse(lineno, "invalid alternatives"))?
                        }
                        key => return Err(Error::parse(lineno, format!("unknown key {key:?}"))),
                    }
                }
                Section::Insert => {
                    let cols: Vec<&str> = line.split('\t').collect();
                    if cols.len() != 2 || cols[0].chars().count() != 1 {
                        return Err(Error::parse(lineno, "expected char<TAB>probability"));
                    }
                    let p: Weight = cols[1]
                        .parse()
                        .map_err(|_| Error::parse(lineno, "invalid probability"))?;
                    insert_dist.push((cols[0].chars().next().unwrap(), p));
                }
                Section::Substitutions => {
                    let cols: Vec<&str> = line.split('\t').collect();
                    if cols.len() != 3 || cols[0].chars().count() != 1 {
                        return Err(Error::parse(
                            lineno,
                            "expected char<TAB>output<TAB>probability",
                        ));
                    }
                    let p: Weight = cols[2]
                        .parse()
                        .map_err(|_| Error::parse(lineno, "invalid probability"))?;
                    substitutions
                        .entry(cols[0].chars().next().unwrap())
                        .or_default()
                        .push((cols[1].to_string(), p));
                }
            }
        }
        ConfusionModel::new(
            substitutions,
            deletion,
            insertion,
            insert_dist,
            seed,
            alternatives,
        )
    }

    fn keep_prob(&self, c: char) -> Weight {
        1.0 - self
            .substitutions
            .get(&c)
            .map(|row| row.iter().map(|(_, p)| *p).sum::<Weight>())
            .unwrap_or(0.0)
    }

    /// Sample one corrupted surface form.
    fn corrupt_form(&self, token: &str, rng: &mut ChaCha8Rng) -> String {
        let mut out = String::new();
        for c in token.chars() {
            if self.deletion > 0.0 && rng.gen::<Weight>() < self.deletion {
                // dropped
            } else {
                let draw: Weight = rng.gen();
                let mut cum = 0.0;
                let mut emitted = false;
                if let Some(row) = self.substitutions.get(&c) {
                    for (output, p) in row {
                        cum += p;
                        if draw < cum {
                            out.push_str(output);
                            emitted = true;
                            break;
                        }
                    }
                }
                if !emitted {
                    out.push(c);
                }
            }
            if self.insertion > 0.0 && rng.gen::<Weight>() < self.insertion {
                let draw: Weight = rng.gen();
                let mut cum = 0.0;
                for (ins, p) in &self.insert_dist {
                    cum += p;
                    if draw < cum {
                        out.push(*ins);
                        break;
                    }
                }
            }
        }
        out
    }

    /// Log-probability of `candidate` producing `observed` under the best
    /// alignment of channel events; `-inf` when unreachable.
    pub fn channel_score(&self, candidate: &str, observed: &str) -> Weight {
        let cand: Vec<char> = candidate.chars().collect();
        let obs: Vec<char> = observed.chars().collect();
        let (n, m) = (cand.len(), obs.len());
        let neg = Weight::NEG_INFINITY;
        let mut dp = vec![vec![neg; m + 1]; n + 1];
        dp[0][0] = 0.0;
        let ln_del = if self.deletion > 0.0 {
            self.deletion.ln()
        } else {
            neg
        };
        let survive = (1.0 - self.deletion).max(0.0);
        for i in 0..=n {
            for j in 0..=m {
                let here = dp[i][j];
                if here == neg {
                    continue;
                }
                if i < n {
                    if ln_del > neg {
                        let v = here + ln_del;
                        if v > dp[i + 1][j] {
                            dp[i + 1][j] = v;
                        }
                    }
                    let keep = self.keep_prob(cand[i]);
                    if j < m && obs[j] == cand[i] && keep > 0.0 && survive > 0.0 {
                        let v = here + (survive * keep).ln();
                        if v > dp[i + 1][j + 1] {
                            dp[i + 1][j + 1] = v;
                        }
                    }
                    if let Some(row) = self.substitutions.get(&cand[i]) {
                        for (output, p) in row {
                            if *p <= 0.0 || survive <= 0.0 {
                                continue;
                            }
                            let out_chars: Vec<char> = output.chars().collect();
                            if j + out_chars.len() <= m
                                && obs[j..j + out_chars.len()] == out_chars[..]
                            {
                                let v = here + (survive * p).ln();
                                let cell = &mut dp[i + 1][j + out_chars.len()];
                                if v > *cell {
                                    *cell = v;
                                }
                            }
                        }
                    }
                }
                if j < m && self.insertion > 0.0 {
                    if let Some((_, p)) = self.insert_dist.iter().find(|(c, _)| *c == obs[j]) {
                        if *p > 0.0 {
                            let v = here + (self.insertion * p).ln();
                            if v > dp[i][j + 1] {
                                dp[i][j + 1] = v;
                            }
                        }
                    }
                }
            }
        }
        dp[n][m]
    }

    /// Alternative readings of the observed form: single inverse
    /// substitutions (including merging oversegmented pairs) and removal of
    /// plausibly inserted characters.
    fn alternative_readings(&self, observed: &[char]) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for j in 0..observed.len() {
            for len in 1..=2usize {
                if j + len > observed.len() {
                    break;
                }
                let segment: String = observed[j..j + len].iter().collect();
                if let Some(sources) = self.inverse.get(&segment) {
                    for &source in sources {
                        if len == 1 && source == observed[j] {
                            continue;
                        }
                        let mut alt: Vec<char> = observed[..j].to_vec();
                        alt.push(source);
                        alt.extend_from_slice(&observed[j + len..]);
                        out.insert(alt.into_iter().collect());
                    }
                }
            }
            if self.insertion > 0.0
                && observed.len() > 1
                && self
                    .insert_dist
                    .iter()
                    .any(|(c, p)| *c == observed[j] && *p > 0.0)
            {
                let mut alt: Vec<char> = observed[..j].to_vec();
                alt.extend_from_slice(&observed[j + 1..]);
                out.insert(alt.into_iter().collect());
            }
        }
        out
    }

    /// Corrupt `token` on the given stream and assemble the candidate list:
    /// the corrupted surface form, the truth, and up to `alternatives` other
    /// readings, all with channel scores, best first.
    pub fn corrupt_stream(&self, token: &str, stream: u64) -> Result<CandidateList> {
        if token.is_empty() {
            return Err(Error::EmptyToken);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        let observed = self.corrupt_form(token, &mut rng);

        let mut scored: BTreeMap<String, Weight> = BTreeMap::new();
        scored.insert(observed.clone(), self.channel_score(&observed, &observed));
        scored.insert(token.to_string(), self.channel_score(token, &observed));
        let observed_chars: Vec<char> = observed.chars().collect();
        let mut alts: Vec<(String, Weight)> = self
            .alternative_readings(&observed_chars)
            .into_iter()
            .filter(|alt| !alt.is_empty() && alt != token && *alt != observed)
            .map(|alt| {
                let s = self.channel_score(&alt, &observed);
                (alt, s)
            })
            .filter(|(_, s)| s.is_finite())
            .collect();
        alts.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        for (alt, s) in alts.into_iter().take(self.alternatives) {
            scored.entry(alt).or_insert(s);
        }

        let items: Vec<(String, Weight)> = scored.into_iter().collect();
        Ok(CandidateList::with_observed(items, observed))
    }
}

/// Scored candidate readings of one corrupted token, channel-best first.
/// The ground-truth form is always present; the observed surface form wins
/// score ties, matching a recognizer that reads the ink literally.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateList {
    items: Vec<(String, Weight)>,
    observed: String,
}

impl CandidateList {
    /// Assemble a list from raw scored forms; the best-scoring form is
    /// taken as the observed one.
    pub fn new(mut items: Vec<(String, Weight)>) -> Self {
        items.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        let observed = items.first().map(|(f, _)| f.clone()).unwrap_or_default();
        CandidateList { items, observed }
    }

    fn with_observed(mut items: Vec<(String, Weight)>, observed: String) -> Self {
        items.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap()
                .then_with(|| (b.0 == observed).cmp(&(a.0 == observed)))
                .then_with(|| a.0.cmp(&b.0))
        });
        CandidateList { items, observed }
    }

    pub fn items(&self) -> &[(String, Weight)] {
        &self.items
    }

    /// The corrupted surface form the channel produced.
    pub fn observed(&self) -> &str {
        &self.observed
    }

    /// The channel's own top candidate.
    pub fn top(&self) -> &str {
        &self.items[0].0
    }
}

/// Corrupt a single token on stream 0.
pub fn corrupt(token: &str, model: &ConfusionModel) -> Result<CandidateList> {
    model.corrupt_stream(token, 0)
}

// --- Resources and decoding -------------------------------------------------

/// Lexicon-membership rescorer: members get `bonus` plus their relative
/// log-frequency, the rest get `miss`.
#[derive(Debug, Clone)]
pub struct LexiconResource {
    forms: BTreeMap<String, u64>,
    log_total: Weight,
    pub weight: Weight,
    pub bonus: Weight,
    pub miss: Weight,
}

impl LexiconResource {
    pub fn from_lexicon(lexicon: &Lexicon) -> Self {
        let forms: BTreeMap<String, u64> = lexicon
            .entries()
            .iter()
            .map(|(form, set)| {
                let best = set.iter().map(|e| e.frequency).max().unwrap_or(1);
                (form.clone(), best)
            })
            .collect();
        Self::from_form_frequencies(forms)
    }

    /// Flat lexicon over raw forms, frequency 1 each.
    pub fn from_forms<I: IntoIterator<Item = String>>(forms: I) -> Self {
        Self::from_form_frequencies(forms.into_iter().map(|f| (f, 1)).collect())
    }

    /// Lexicon over forms with explicit frequencies.
    pub fn from_form_frequencies(forms: BTreeMap<String, u64>) -> Self {
        let total: u64 = forms.values().sum::<u64>().max(1);
        LexiconResource {
            forms,
            log_total: (total as Weight).ln(),
            weight: 1.0,
            bonus: 2.0,
            miss: -15.0,
        }
    }

    fn score(&self, form: &str) -> Weight {
        match self.forms.get(form) {
            Some(&f) => self.bonus + (f as Weight).ln() - self.log_total,
            None => self.miss,
        }
    }
}

/// One word's stripped characters alongside its compiled acceptor.
type CompiledSkeleton = (Vec<char>, WeightedAcceptor<Weight>);

/// Relaxed skeleton acceptors for a whole word list, bucketed by the first
/// and last character so only plausible words are scored.
#[derive(Debug, Clone)]
pub struct SkeletonResource {
    buckets: BTreeMap<(char, char), Vec<CompiledSkeleton>>,
    pub weight: Weight,
    pub reject: Weight,
}

fn is_subsequence(needle: &[char], haystack: &[char]) -> bool {
    let mut it = haystack.iter();
    needle.iter().all(|c| it.any(|h| h == c))
}

impl SkeletonResource {
    pub fn build(
        words: &FrequencyWordList,
        syllabifier: &Syllabifier,
        params: &SkeletonAcceptorParams<Weight>,
    ) -> Result<Self> {
        let compiled: Vec<Option<CompiledSkeleton>> = words
            .entries()
            .par_iter()
            .map(|entry| {
                let stripped: Vec<char> = strip_diacritics(&entry.word).chars().collect();
                if stripped.is_empty() {
                    return Ok(None);
                }
                let acceptor = build_skeleton_acceptor(&entry.word, syllabifier, params)?;
                Ok(Some((stripped, acceptor)))
            })
            .collect::<Result<_>>()?;
        let mut buckets: BTreeMap<(char, char), Vec<CompiledSkeleton>> = BTreeMap::new();
        for item in compiled.into_iter().flatten() {
            let key = (item.0[0], *item.0.last().unwrap());
            buckets.entry(key).or_default().push(item);
        }
        Ok(SkeletonResource {
            buckets,
            weight: 1.0,
            reject: -15.0,
        })
    }

    fn score(&self, form: &str) -> Weight {
        let chars: Vec<char> = form.chars().collect();
        let (Some(&first), Some(&last)) = (chars.first(), chars.last()) else {
            return self.reject;
        };
        let mut best = Weight::NEG_INFINITY;
        if let Some(bucket) = self.buckets.get(&(first, last)) {
            for (word_chars, acceptor) in bucket {
                if !is_subsequence(&chars, word_chars) {
                    continue;
                }
                if let Some(s) = acceptor.score(form) {
                    if s > best {
                        best = s;
                    }
                }
            }
        }
        if best.is_finite() {
            best
        } else {
            self.reject
        }
    }
}

/// Rebus-model rescorer.
#[derive(Debug, Clone)]
pub struct RebusResource {
    pub model: RebusModel<Weight>,
    pub weight: Weight,
    pub reject: Weight,
}

impl RebusResource {
    fn score(&self, form: &str) -> Weight {
        match score_rebus(&self.model, form) {
            Ok(Some(s)) => s,
            _ => self.reject,
        }
    }
}

/// Unigram word-frequency rescorer.
#[derive(Debug, Clone)]
pub struct WordFreqResource {
    log_probs: BTreeMap<String, Weight>,
    pub weight: Weight,
    pub miss: Weight,
}

impl WordFreqResource {
    pub fn from_word_list(words: &FrequencyWordList) -> Self {
        let total: u64 = words.entries().iter().map(|e| e.frequency).sum();
        let total = (total.max(1)) as Weight;
        let log_probs = words
            .entries()
            .iter()
            .map(|e| (e.word.clone(), (e.frequency as Weight / total).ln()))
            .collect();
        WordFreqResource {
            log_probs,
            weight: 1.0,
            miss: -15.0,
        }
    }

    fn score(&self, form: &str) -> Weight {
        *self.log_probs.get(form).unwrap_or(&self.miss)
    }
}

/// A log-linear combination of optional resources; the empty bundle decodes
/// to the channel's top candidate.
#[derive(Debug, Clone, Default)]
pub struct ResourceBundle {
    pub lexicon: Option<LexiconResource>,
    pub skeletons: Option<SkeletonResource>,
    pub rebus: Option<RebusResource>,
    pub word_freq: Option<WordFreqResource>,
}

impl ResourceBundle {
    pub fn empty() -> Self {
        ResourceBundle::default()
    }

    /// The full developed-resource stack built from a word list: skeleton
    /// and phonetic lexicon, relaxed skeleton acceptors, the default rebus
    /// model and the word-frequency table.
    pub fn developed(
        words: &FrequencyWordList,
        syllabifier: &Syllabifier,
        catalogue: &RuleCatalogue,
    ) -> Result<Self> {
        let lexicon = build_lexicon(words, &BuildOptions::default(), syllabifier, catalogue)?;
        Ok(ResourceBundle {
            lexicon: Some(LexiconResource::from_lexicon(&lexicon)),
            skeletons: Some(SkeletonResource::build(
                words,
                syllabifier,
                &SkeletonAcceptorParams::default(),
            )?),
            rebus: Some(RebusResource {
                model: build_rebus_model(RebusParams::default())?,
                weight: 1.0,
                reject: -15.0,
            }),
            word_freq: Some(WordFreqResource::from_word_list(words)),
        })
    }

    /// The upper-bound bundle: a flat lexicon holding exactly the forms to
    /// recognize. The miss penalty is large enough that any member beats any
    /// non-member regardless of channel gap, so whenever the channel's top
    /// candidate is correct this bundle is correct too.
    pub fn optimal<'a, I: IntoIterator<Item = &'a str>>(forms: I) -> Self {
        let mut lexicon = LexiconResource::from_forms(forms.into_iter().map(|f| f.to_string()));
        lexicon.miss = -1000.0;
        ResourceBundle {
            lexicon: Some(lexicon),
            ..ResourceBundle::default()
        }
    }

    fn rescore(&self, form: &str) -> Weight {
        let mut total = 0.0;
        if let Some(r) = &self.lexicon {
            total += r.weight * r.score(form);
        }
        if let Some(r) = &self.skeletons {
            total += r.weight * r.score(form);
        }
        if let Some(r) = &self.rebus {
            total += r.weight * r.score(form);
        }
        if let Some(r) = &self.word_freq {
            total += r.weight * r.score(form);
        }
        total
    }
}

/// Pick the candidate maximizing channel score plus weighted resource
/// scores. Ties keep the channel-preferred candidate.
pub fn decode(candidates: &CandidateList, bundle: &ResourceBundle) -> String {
    let mut best: Option<(&str, Weight)> = None;
    for (form, channel) in candidates.items() {
        let total = *channel + bundle.rescore(form);
        match best {
            Some((_, b)) if total <= b => {}
            _ => best = Some((form, total)),
        }
    }
    best.map(|(f, _)| f.to_string()).unwrap_or_default()
}

// --- Corpus generation and evaluation ---------------------------------------

/// Controls for the synthetic corpus generator.
#[derive(Debug, Clone, Copy)]
pub struct CorpusSpec {
    pub per_category: usize,
    pub seed: u64,
}

/// Draw a categorized token corpus: strict skeletons, phonetic variants,
/// attested rebus forms and plain words, sampled from the word list by
/// frequency.
pub fn generate_corpus(
    words: &FrequencyWordList,
    spec: &CorpusSpec,
    syllabifier: &Syllabifier,
    catalogue: &RuleCatalogue,
) -> Result<Vec<(Category, String)>> {
    if words.is_empty() || spec.per_category == 0 {
        return Err(Error::EmptyCorpus);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let weights: Vec<u64> = words.entries().iter().map(|e| e.frequency).collect();
    let index = WeightedIndex::new(&weights)
        .map_err(|e| Error::InvalidParameters(format!("bad frequency weights: {e}")))?;
    let mut corpus = Vec::with_capacity(spec.per_category * Category::ALL.len());

    for category in Category::ALL {
        let mut produced = 0;
        let mut attempts = 0;
        while produced < spec.per_category {
            attempts += 1;
            if attempts > spec.per_category * 200 {
                return Err(Error::InvalidParameters(format!(
                    "could not sample enough {category} tokens"
                )));
            }
            let label = match category {
                Category::Rebus => {
                    let i = rng.gen_range(0..ATTESTED_REBUS.len());
                    Some(ATTESTED_REBUS[i].to_string())
                }
                Category::Divers => {
                    let word = &words.entries()[index.sample(&mut rng)].word;
                    Some(word.clone())
                }
                Category::Skeleton => {
                    let word = &words.entries()[index.sample(&mut rng)].word;
                    match skeletonize(word, syllabifier) {
                        Ok(d)
                            if !d.no_consonant
                                && d.skeleton() != word
                                && d.skeleton().len() >= 2 =>
                        {
                            Some(d.skeleton().to_string())
                        }
                        _ => None,
                    }
                }
                Category::Phonetic => {
                    let word = &words.entries()[index.sample(&mut rng)].word;
                    let variants = phonetize(word, catalogue, 64);
                    if variants.is_empty() {
                        None
                    } else {
                        let forms: Vec<&str> = variants.forms().collect();
                        Some(forms[rng.gen_range(0..forms.len())].to_string())
                    }
                }
            };
            if let Some(label) = label {
                corpus.push((category, label));
                produced += 1;
            }
        }
    }
    Ok(corpus)
}

/// Parse a corpus TSV: `category<TAB>label` per line.
pub fn parse_corpus(text: &str) -> Result<Vec<(Category, String)>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (category, label) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(lineno, "expected category<TAB>label"))?;
        let category: Category = category
            .parse()
            .map_err(|_| Error::parse(lineno, format!("unknown category {category:?}")))?;
        if label.is_empty() {
            return Err(Error::parse(lineno, "empty label"));
        }
        out.push((category, label.to_string()));
    }
    if out.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(out)
}

/// Render a corpus as its TSV form.
pub fn corpus_to_tsv(corpus: &[(Category, String)]) -> String {
    let mut out = String::new();
    for (category, label) in corpus {
        out.push_str(category.name());
        out.push('\t');
        out.push_str(label);
        out.push('\n');
    }
    out
}

/// Recognition rates per category and bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalTable {
    bundle_names: Vec<String>,
    /// One row per category present in the corpus, plus an `all` aggregate.
    rows: Vec<(String, Vec<Weight>)>,
    token_counts: Vec<(String, usize)>,
}

impl EvalTable {
    pub fn bundle_names(&self) -> &[String] {
        &self.bundle_names
    }

    pub fn rows(&self) -> &[(String, Vec<Weight>)] {
        &self.rows
    }

    /// Rate for a category/bundle pair, if present.
    pub fn rate(&self, category: &str, bundle: &str) -> Option<Weight> {
        let col = self.bundle_names.iter().position(|b| b == bundle)?;
        let row = self.rows.iter().find(|(c, _)| c == category)?;
        row.1.get(col).copied()
    }

    /// TSV rendering with one decimal place, mirroring the usual
    /// categories-by-resources layout.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("category");
        for b in &self.bundle_names {
            out.push('\t');
            out.push_str(b);
        }
        out.push('\n');
        for (category, rates) in &self.rows {
            out.push_str(category);
            for r in rates {
                out.push_str(&format!("\t{r:.1}"));
            }
            out.push('\n');
        }
        out
    }

    /// Short human-readable summary.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for (category, count) in &self.token_counts {
            out.push_str(&format!("{category}: {count} tokens\n"));
        }
        for (category, rates) in &self.rows {
            let cells: Vec<String> = self
                .bundle_names
                .iter()
                .zip(rates)
                .map(|(b, r)| format!("{b} {r:.1}%"))
                .collect();
            out.push_str(&format!("{category}: {}\n", cells.join(", ")));
        }
        out
    }
}

/// Corrupt every label, decode under each bundle, and tabulate the
/// character recognition rate per category and bundle.
pub fn evaluate(
    corpus: &[(Category, String)],
    model: &ConfusionModel,
    bundles: &[(String, ResourceBundle)],
) -> Result<EvalTable> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if bundles.is_empty() {
        return Err(Error::InvalidParameters("no bundles to evaluate".into()));
    }
    let decoded: Vec<(Category, String, Vec<String>)> = corpus
        .par_iter()
        .enumerate()
        .map(|(index, (category, label))| {
            let candidates = model.corrupt_stream(label, index as u64)?;
            let per_bundle = bundles
                .iter()
                .map(|(_, bundle)| decode(&candidates, bundle))
                .collect();
            Ok((*category, label.clone(), per_bundle))
        })
        .collect::<Result<_>>()?;

    let mut categories: Vec<Category> = Vec::new();
    for category in Category::ALL {
        if decoded.iter().any(|(c, _, _)| *c == category) {
            categories.push(category);
        }
    }

    let mut rows = Vec::new();
    let mut token_counts = Vec::new();
    for category in &categories {
        let mut rates = Vec::new();
        for (col, _) in bundles.iter().enumerate() {
            let pairs: Vec<(String, String)> = decoded
                .iter()
                .filter(|(c, _, _)| c == category)
                .map(|(_, label, per_bundle)| (label.clone(), per_bundle[col].clone()))
                .collect();
            rates.push(corpus_tr::<Weight>(&pairs)?);
        }
        token_counts.push((
            category.name().to_string(),
            decoded.iter().filter(|(c, _, _)| c == category).count(),
        ));
        rows.push((category.name().to_string(), rates));
    }
    let mut all_rates = Vec::new();
    for (col, _) in bundles.iter().enumerate() {
        let pairs: Vec<(String, String)> = decoded
            .iter()
            .map(|(_, label, per_bundle)| (label.clone(), per_bundle[col].clone()))
            .collect();
        all_rates.push(corpus_tr::<Weight>(&pairs)?);
    }
    rows.push(("all".to_string(), all_rates));

    Ok(EvalTable {
        bundle_names: bundles.iter().map(|(n, _)| n.clone()).collect(),
        rows,
        token_counts,
    })
}

/// The standard three-bundle comparison: no resources, the developed
/// resources built from `words`, and the optimal lexicon holding exactly
/// the corpus forms.
pub fn standard_bundles(
    words: &FrequencyWordList,
    corpus: &[(Category, String)],
    syllabifier: &Syllabifier,
    catalogue: &RuleCatalogue,
) -> Result<Vec<(String, ResourceBundle)>> {
    Ok(vec![
        ("baseline".to_string(), ResourceBundle::empty()),
        (
            "developed".to_string(),
            ResourceBundle::developed(words, syllabifier, catalogue)?,
        ),
        (
            "optimal".to_string(),
            ResourceBundle::optimal(corpus.iter().map(|(_, label)| label.as_str())),
        ),
    ])
}
