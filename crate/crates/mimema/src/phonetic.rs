//! Phonetic respelling of French words.
//!
//! A catalogue of rewrite rules maps standard spellings to the phonetic
//! shorthand found in text messages: *trop* → `tro`, *beaucoup* → `bocou`,
//! *quoi* → `koi`. Rules are grouped in four ordered stages — final mute `e`,
//! final mute consonants, mid-word transformations, exceptions — and every
//! rule is optional: the writer may or may not apply it. The generator
//! therefore branches on each match (and on each replacement alternative)
//! and collects all distinct outcomes, so *cause* yields `kause`, `cose`,
//! `kose`, `koz`, `coz` among others.

use std::collections::BTreeMap;
use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::text::{classify_char, CharClass};

/// Default bound on the number of variants explored per word.
pub const DEFAULT_VARIANT_CAP: usize = 256;

/// Rule stage; stages run in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    FinalMuteE,
    FinalMuteConsonant,
    MidWord,
    Exceptions,
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::FinalMuteE => "final-mute-e",
            Stage::FinalMuteConsonant => "final-mute-consonant",
            Stage::MidWord => "mid-word",
            Stage::Exceptions => "exceptions",
        }
    }

    fn from_name(name: &str, line: usize) -> Result<Stage> {
        match name {
            "final-mute-e" => Ok(Stage::FinalMuteE),
            "final-mute-consonant" => Ok(Stage::FinalMuteConsonant),
            "mid-word" => Ok(Stage::MidWord),
            "exceptions" => Ok(Stage::Exceptions),
            _ => Err(Error::parse(line, format!("unknown stage {name:?}"))),
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One element of a context pattern; each element matches a single character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pat {
    Lit(char),
    OneOf(Vec<char>),
    NoneOf(Vec<char>),
    Vowel,
}

impl Pat {
    fn matches(&self, c: char) -> bool {
        match self {
            Pat::Lit(x) => *x == c,
            Pat::OneOf(set) => set.contains(&c),
            Pat::NoneOf(set) => !set.contains(&c) && c.is_alphabetic(),
            Pat::Vowel => classify_char(c).klass == CharClass::Vowel,
        }
    }
}

/// A matching template over consecutive characters, optionally anchored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RulePattern {
    pub elems: Vec<Pat>,
    pub anchor_start: bool,
    pub anchor_end: bool,
}

impl RulePattern {
    fn matches_at(&self, chars: &[char], pos: usize) -> bool {
        if self.anchor_start && pos != 0 {
            return false;
        }
        if pos + self.elems.len() > chars.len() {
            return false;
        }
        if self.anchor_end && pos + self.elems.len() != chars.len() {
            return false;
        }
        self.elems
            .iter()
            .zip(&chars[pos..])
            .all(|(p, &c)| p.matches(c))
    }
}

/// Replacement template element: a literal or a back-reference to the
/// character matched by pattern element `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rep {
    Lit(char),
    Group(usize),
}

/// Rule body: either an ordinary rewrite or the whole-word diacritic strip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleKind {
    Rewrite {
        /// Alternative contexts, tried in order at each position.
        patterns: Vec<RulePattern>,
        /// Output alternatives; each application branches once per entry.
        replacements: Vec<Vec<Rep>>,
    },
    StripDiacritics,
}

/// A single rewrite rule of the catalogue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhoneticRule {
    pub id: String,
    pub stage: Stage,
    pub kind: RuleKind,
    /// Whether the writer may skip the rule. Every built-in rule is
    /// optional; a mandatory rule applies on every match without branching.
    pub optional: bool,
}

/// One recorded rule application: which rule, at which character position,
/// choosing which replacement alternative. A variant's trace replays to the
/// variant exactly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Application {
    pub rule: String,
    pub pos: usize,
    pub alt: usize,
}

/// All phonetic variants of one source word, with their traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantSet {
    source: String,
    variants: BTreeMap<String, Vec<Application>>,
}

impl VariantSet {
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Variants and traces, keyed by the variant string. The source itself
    /// is never a member.
    pub fn variants(&self) -> &BTreeMap<String, Vec<Application>> {
        &self.variants
    }

    pub fn contains(&self, form: &str) -> bool {
        self.variants.contains_key(form)
    }

    pub fn is_empty(&self) -> bool {
        self.variants.is_empty()
    }

    pub fn len(&self) -> usize {
        self.variants.len()
    }

    pub fn forms(&self) -> impl Iterator<Item = &str> {
        self.variants.keys().map(|s| s.as_str())
    }
}

/// The ordered rule catalogue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleCatalogue {
    rules: Vec<PhoneticRule>,
}

fn lit(s: &str) -> Vec<Pat> {
    s.chars().map(Pat::Lit).collect()
}

fn rep(s: &str) -> Vec<Rep> {
    s.chars().map(Rep::Lit).collect()
}

fn pattern(elems: Vec<Pat>, anchor_start: bool, anchor_end: bool) -> RulePattern {
    RulePattern {
        elems,
        anchor_start,
        anchor_end,
    }
}

impl RuleCatalogue {
    /// The built-in catalogue.
    pub fn builtin() -> Self {
        fn rule(
            id: &str,
            stage: Stage,
            patterns: Vec<RulePattern>,
            replacements: Vec<Vec<Rep>>,
        ) -> PhoneticRule {
            PhoneticRule {
                id: id.to_string(),
                stage,
                kind: RuleKind::Rewrite {
                    patterns,
                    replacements,
                },
                optional: true,
            }
        }
        // Final mute e, then final mute consonants.
        let mut rules = vec![
            rule(
                "mute-e-after-vowel",
                Stage::FinalMuteE,
                vec![pattern(vec![Pat::Vowel, Pat::Lit('e')], false, true)],
                vec![vec![Rep::Group(0)]],
            ),
            rule(
                "mute-e-after-r",
                Stage::FinalMuteE,
                vec![pattern(
                    vec![
                        Pat::OneOf(vec!['a', 'i', 'o', 'u']),
                        Pat::Lit('r'),
                        Pat::Lit('e'),
                    ],
                    false,
                    true,
                )],
                vec![vec![Rep::Group(0), Rep::Group(1)]],
            ),
            rule(
                "mute-e-after-kmbvl",
                Stage::FinalMuteE,
                vec![pattern(
                    vec![Pat::OneOf(vec!['k', 'm', 'b', 'v', 'l']), Pat::Lit('e')],
                    false,
                    true,
                )],
                vec![vec![Rep::Group(0)]],
            ),
            rule(
                "final-se-to-z",
                Stage::FinalMuteE,
                vec![pattern(
                    vec![Pat::Vowel, Pat::Lit('s'), Pat::Lit('e')],
                    false,
                    true,
                )],
                vec![vec![Rep::Group(0), Rep::Lit('z')]],
            ),
            rule(
                "final-tsdp",
                Stage::FinalMuteConsonant,
                vec![pattern(
                    vec![Pat::OneOf(vec!['t', 's', 'd', 'p'])],
                    false,
                    true,
                )],
                vec![vec![]],
            ),
        ];

        // Mid-word transformations.
        for c in ['l', 'm', 'n', 'p', 'r', 'f'] {
            rules.push(PhoneticRule {
                id: format!("double-{c}{c}"),
                stage: Stage::MidWord,
                kind: RuleKind::Rewrite {
                    patterns: vec![pattern(vec![Pat::Lit(c), Pat::Lit(c)], false, false)],
                    replacements: vec![vec![Rep::Lit(c)]],
                },
                optional: true,
            });
        }
        rules.push(rule(
            "h-after-other",
            Stage::MidWord,
            vec![pattern(
                vec![Pat::NoneOf(vec!['p', 'c', 's']), Pat::Lit('h')],
                false,
                false,
            )],
            vec![vec![Rep::Group(0)]],
        ));
        rules.push(rule(
            "qu-to-k",
            Stage::MidWord,
            vec![pattern(lit("qu"), false, false)],
            vec![vec![Rep::Lit('k')]],
        ));
        rules.push(rule(
            "c-to-k",
            Stage::MidWord,
            vec![pattern(
                vec![Pat::Lit('c'), Pat::NoneOf(vec!['h', 'e', 'i'])],
                false,
                false,
            )],
            vec![vec![Rep::Lit('k'), Rep::Group(1)]],
        ));
        rules.push(rule(
            "au-to-o",
            Stage::MidWord,
            vec![
                pattern(lit("eaux"), false, false),
                pattern(lit("eau"), false, false),
                pattern(lit("aux"), false, false),
                pattern(lit("au"), false, false),
            ],
            vec![rep("o")],
        ));
        rules.push(rule(
            "oi-to-oa",
            Stage::MidWord,
            vec![pattern(lit("oi"), false, false)],
            vec![rep("oa")],
        ));
        rules.push(rule(
            "intervocalic-s",
            Stage::MidWord,
            vec![pattern(
                vec![Pat::Vowel, Pat::Lit('s'), Pat::Vowel],
                false,
                false,
            )],
            vec![vec![Rep::Group(0), Rep::Lit('z'), Rep::Group(2)]],
        ));
        rules.push(rule(
            "ai-to-e",
            Stage::MidWord,
            vec![
                pattern(lit("ais"), false, true),
                pattern(lit("ait"), false, true),
                pattern(lit("ai"), false, false),
                pattern(lit("é"), false, false),
                pattern(lit("è"), false, false),
            ],
            vec![rep("é"), rep("è")],
        ));
        rules.push(PhoneticRule {
            id: "strip-diacritics".to_string(),
            stage: Stage::MidWord,
            kind: RuleKind::StripDiacritics,
            optional: true,
        });

        // Exceptions.
        rules.push(rule(
            "des-tes-ses",
            Stage::Exceptions,
            vec![pattern(
                vec![
                    Pat::OneOf(vec!['d', 's', 't']),
                    Pat::Lit('e'),
                    Pat::Lit('s'),
                ],
                true,
                true,
            )],
            vec![
                vec![Rep::Group(0), Rep::Lit('é')],
                vec![Rep::Group(0), Rep::Lit('è')],
            ],
        ));
        rules.push(rule(
            "est-to-e",
            Stage::Exceptions,
            vec![pattern(lit("est"), false, true)],
            vec![rep("é"), rep("è")],
        ));

        RuleCatalogue { rules }
    }

    pub fn rules(&self) -> &[PhoneticRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn find(&self, id: &str) -> Option<&PhoneticRule> {
        self.rules.iter().find(|r| r.id == id)
    }
}

struct Derivation {
    chars: Vec<char>,
    trace: Vec<Application>,
}

fn expand(replacement: &[Rep], chars: &[char], pos: usize) -> Vec<char> {
    replacement
        .iter()
        .map(|r| match r {
            Rep::Lit(c) => *c,
            Rep::Group(i) => chars[pos + i],
        })
        .collect()
}

fn apply_rewrite(
    chars: &[char],
    pos: usize,
    pattern: &RulePattern,
    replacement: &[Rep],
) -> Vec<char> {
    let mut out = chars[..pos].to_vec();
    out.extend(expand(replacement, chars, pos));
    out.extend_from_slice(&chars[pos + pattern.elems.len()..]);
    out
}

/// One left-to-right pass of a rule over one form, branching at each match.
/// The unmodified form is always among the results. `budget` bounds the
/// number of live branches; beyond it only the skip branch is followed.
fn apply_rule(rule: &PhoneticRule, start: &Derivation, budget: usize) -> Vec<Derivation> {
    match &rule.kind {
        RuleKind::StripDiacritics => {
            let stripped: Vec<char> = start
                .chars
                .iter()
                .map(|&c| crate::text::base_char(c))
                .collect();
            let mut out = Vec::new();
            if rule.optional || stripped == start.chars {
                out.push(Derivation {
                    chars: start.chars.clone(),
                    trace: start.trace.clone(),
                });
            }
            if stripped != start.chars {
                let mut trace = start.trace.clone();
                trace.push(Application {
                    rule: rule.id.clone(),
                    pos: 0,
                    alt: 0,
                });
                out.push(Derivation {
                    chars: stripped,
                    trace,
                });
            }
            out
        }
        RuleKind::Rewrite {
            patterns,
            replacements,
        } => {
            let mut done = Vec::new();
            let mut queue: VecDeque<(Vec<char>, usize, Vec<Application>)> = VecDeque::new();
            queue.push_back((start.chars.clone(), 0, start.trace.clone()));
            while let Some((chars, from, trace)) = queue.pop_front() {
                let mut matched = None;
                for pos in from..chars.len() {
                    if let Some(p) = patterns.iter().find(|p| p.matches_at(&chars, pos)) {
                        matched = Some((pos, p));
                        break;
                    }
                }
                let Some((pos, p)) = matched else {
                    done.push(Derivation { chars, trace });
                    continue;
                };
                // Skip branch first: it keeps the shortest traces alive when
                // the budget cuts exploration. Mandatory rules never skip;
                // over budget they follow their first alternative only.
                let over_budget = done.len() + queue.len() >= budget;
                if rule.optional {
                    queue.push_back((chars.clone(), pos + 1, trace.clone()));
                    if over_budget {
                        continue;
                    }
                }
                for (alt, replacement) in replacements.iter().enumerate() {
                    let rewritten = apply_rewrite(&chars, pos, p, replacement);
                    let mut t = trace.clone();
                    t.push(Application {
                        rule: rule.id.clone(),
                        pos,
                        alt,
                    });
                    queue.push_back((rewritten, pos + replacement.len(), t));
                    if over_budget {
                        break;
                    }
                }
            }
            done
        }
    }
}

/// Generate the phonetic variant set of a lowercase word.
///
/// Stages run in order and rules in catalogue order, one pass per rule; each
/// applicable rule branches into applied and not-applied derivations, plus
/// one branch per output alternative. Results are deduplicated (keeping the
/// shortest trace) and bounded by `cap`, preferring variants produced by
/// fewer rule applications.
pub fn phonetize(word: &str, catalogue: &RuleCatalogue, cap: usize) -> VariantSet {
    let cap = cap.max(1);
    let source: Vec<char> = word.chars().collect();
    let mut forms = vec![Derivation {
        chars: source.clone(),
        trace: Vec::new(),
    }];
    let budget = cap.saturating_mul(8).max(1024);

    for rule in &catalogue.rules {
        let mut merged: BTreeMap<Vec<char>, Vec<Application>> = BTreeMap::new();
        for form in &forms {
            for out in apply_rule(rule, form, budget) {
                match merged.get_mut(&out.chars) {
                    Some(existing) => {
                        if (out.trace.len(), &out.trace) < (existing.len(), existing) {
                            *existing = out.trace;
                        }
                    }
                    None => {
                        merged.insert(out.chars, out.trace);
                    }
                }
            }
        }
        let mut next: Vec<Derivation> = merged
            .into_iter()
            .map(|(chars, trace)| Derivation { chars, trace })
            .collect();
        next.sort_by(|a, b| (a.trace.len(), &a.chars).cmp(&(b.trace.len(), &b.chars)));
        next.truncate(cap);
        forms = next;
    }

    let mut variants = BTreeMap::new();
    for form in forms {
        if form.chars != source {
            variants.insert(form.chars.into_iter().collect(), form.trace);
        }
    }
    VariantSet {
        source: word.to_string(),
        variants,
    }
}

/// Re-apply a recorded trace to the source word.
///
/// Fails if any step no longer matches, which would indicate the trace and
/// catalogue are out of sync.
pub fn replay(source: &str, trace: &[Application], catalogue: &RuleCatalogue) -> Result<String> {
    let mut chars: Vec<char> = source.chars().collect();
    for app in trace {
        let rule = catalogue.find(&app.rule).ok_or_else(|| {
            Error::InvalidParameters(format!("trace references unknown rule {:?}", app.rule))
        })?;
        match &rule.kind {
            RuleKind::StripDiacritics => {
                chars = chars.iter().map(|&c| crate::text::base_char(c)).collect();
            }
            RuleKind::Rewrite {
                patterns,
                replacements,
            } => {
                let p = patterns
                    .iter()
                    .find(|p| p.matches_at(&chars, app.pos))
                    .ok_or_else(|| {
                        Error::InvalidParameters(format!(
                            "rule {:?} does not match at position {}",
                            app.rule, app.pos
                        ))
                    })?;
                let replacement = replacements.get(app.alt).ok_or_else(|| {
                    Error::InvalidParameters(format!(
                        "rule {:?} has no alternative {}",
                        app.rule, app.alt
                    ))
                })?;
                chars = apply_rewrite(&chars, app.pos, p, replacement);
            }
        }
    }
    Ok(chars.into_iter().collect())
}

// --- TSV dump / load -------------------------------------------------------

fn escape_into(out: &mut String, c: char) {
    if matches!(c, '[' | ']' | '^' | '$' | '{' | '}' | '|' | ',' | '\\') {
        out.push('\\');
    }
    out.push(c);
}

fn pattern_to_text(p: &RulePattern) -> String {
    let mut out = String::new();
    if p.anchor_start {
        out.push('^');
    }
    for elem in &p.elems {
        match elem {
            Pat::Lit(c) => escape_into(&mut out, *c),
            Pat::OneOf(set) => {
                out.push('[');
                for &c in set {
                    escape_into(&mut out, c);
                }
                out.push(']');
            }
            Pat::NoneOf(set) => {
                out.push_str("[^");
                for &c in set {
                    escape_into(&mut out, c);
                }
                out.push(']');
            }
            Pat::Vowel => out.push_str("[:vowel:]"),
        }
    }
    if p.anchor_end {
        out.push('$');
    }
    out
}

fn replacement_to_text(r: &[Rep]) -> String {
    let mut out = String::new();
    for elem in r {
        match elem {
            Rep::Lit(c) => escape_into(&mut out, *c),
            Rep::Group(i) => {
                out.push('{');
                out.push_str(&i.to_string());
                out.push('}');
            }
        }
    }
    out
}

fn parse_pattern(text: &str, line: usize) -> Result<RulePattern> {
    let mut chars: Vec<char> = text.chars().collect();
    let mut anchor_start = false;
    let mut anchor_end = false;
    if chars.first() == Some(&'^') {
        anchor_start = true;
        chars.remove(0);
    }
    if chars.last() == Some(&'$') && !ends_with_escape(&chars) {
        anchor_end = true;
        chars.pop();
    }
    let mut elems = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        match chars[i] {
            '\\' => {
                i += 1;
                let c = *chars
                    .get(i)
                    .ok_or_else(|| Error::parse(line, "dangling escape"))?;
                elems.push(Pat::Lit(c));
                i += 1;
            }
            '[' => {
                let close = chars[i..]
                    .iter()
                    .position(|&c| c == ']')
                    .ok_or_else(|| Error::parse(line, "unterminated class"))?
                    + i;
                let inner: String = chars[i + 1..close].iter().collect();
                if inner == ":vowel:" {
                    elems.push(Pat::Vowel);
                } else if let Some(rest) = inner.strip_prefix('^') {
                    elems.push(Pat::NoneOf(unescape(rest, line)?));
                } else {
                    elems.push(Pat::OneOf(unescape(&inner, line)?));
                }
                i = close + 1;
            }
            c => {
                elems.push(Pat::Lit(c));
                i += 1;
            }
        }
    }
    Ok(RulePattern {
        elems,
        anchor_start,
        anchor_end,
    })
}

fn ends_with_escape(chars: &[char]) -> bool {
    let mut backslashes = 0;
    for &c in chars[..chars.len().saturating_sub(1)].iter().rev() {
        if c == '\\' {
            backslashes += 1;
        } else {
            break;
        }
    }
    backslashes % 2 == 1
}

fn unescape(text: &str, line: usize) -> Result<Vec<char>> {
    let mut out = Vec::new();
    let mut iter = text.chars();
    while let Some(c) = iter.next() {
        if c == '\\' {
            out.push(
                iter.next()
                    .ok_or_else(|| Error::parse(line, "dangling escape"))?,
            );
        } else {
            out.push(c);
        }
    }
    Ok(out)
}

fn parse_replacement(text: &str, line: usize) -> Result<Vec<Rep>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        match chars[i] {
            '\\' => {
                i += 1;
                let c = *chars
                    .get(i)
                    .ok_or_else(|| Error::parse(line, "dangling escape"))?;
                out.push(Rep::Lit(c));
                i += 1;
            }
            '{' => {
                let close = chars[i..]
                    .iter()
                    .position(|&c| c == '}')
                    .ok_or_else(|| Error::parse(line, "unterminated group reference"))?
                    + i;
                let idx: String = chars[i + 1..close].iter().collect();
                let idx: usize = idx
                    .parse()
                    .map_err(|_| Error::parse(line, "invalid group reference"))?;
                out.push(Rep::Group(idx));
                i = close + 1;
            }
            c => {
                out.push(Rep::Lit(c));
                i += 1;
            }
        }
    }
    Ok(out)
}

fn split_unescaped(text: &str, sep: char) -> Vec<String> {
    let mut parts = vec![String::new()];
    let mut escaped = false;
    for c in text.chars() {
        if escaped {
            parts.last_mut().unwrap().push(c);
            escaped = false;
            continue;
        }
        if c == '\\' {
            parts.last_mut().unwrap().push(c);
            escaped = true;
        } else if c == sep {
            parts.push(String::new());
        } else {
            parts.last_mut().unwrap().push(c);
        }
    }
    parts
}

impl RuleCatalogue {
    /// Dump as TSV: `id<TAB>stage<TAB>patterns<TAB>replacements`, with
    /// alternative patterns joined by `|` and replacements by `,`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for rule in &self.rules {
            let (patterns, replacements) = match &rule.kind {
                RuleKind::StripDiacritics => ("[:diacritic:]".to_string(), "[:base:]".to_string()),
                RuleKind::Rewrite {
                    patterns,
                    replacements,
                } => (
                    patterns
                        .iter()
                        .map(pattern_to_text)
                        .collect::<Vec<_>>()
                        .join("|"),
                    replacements
                        .iter()
                        .map(|r| replacement_to_text(r))
                        .collect::<Vec<_>>()
                        .join(","),
                ),
            };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                rule.id, rule.stage, patterns, replacements
            ));
        }
        out
    }

    /// Load a catalogue from the TSV form produced by [`Self::to_tsv`].
    /// Rules are stably reordered by stage; order within a stage is kept.
    /// The format carries no optionality column, so loaded rules are all
    /// optional (as every built-in rule is).
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut rules = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(Error::parse(lineno, "expected 4 tab-separated fields"));
            }
            let stage = Stage::from_name(cols[1], lineno)?;
            let kind = if cols[2] == "[:diacritic:]" {
                RuleKind::StripDiacritics
            } else {
                let patterns = split_unescaped(cols[2], '|')
                    .iter()
                    .map(|p| parse_pattern(p, lineno))
                    .collect::<Result<Vec<_>>>()?;
                let replacements = split_unescaped(cols[3], ',')
                    .iter()
                    .map(|r| parse_replacement(r, lineno))
                    .collect::<Result<Vec<_>>>()?;
                if patterns.iter().any(|p| p.elems.is_empty()) {
                    return Err(Error::parse(lineno, "empty pattern"));
                }
                RuleKind::Rewrite {
                    patterns,
                    replacements,
                }
            };
            rules.push(PhoneticRule {
                id: cols[0].to_string(),
                stage,
                kind,
                optional: true,
            });
        }
        if rules.is_empty() {
            return Err(Error::parse(0, "empty rule catalogue"));
        }
        rules.sort_by_key(|r| r.stage);
        Ok(RuleCatalogue { rules })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn variants(word: &str) -> VariantSet {
        phonetize(word, &RuleCatalogue::builtin(), DEFAULT_VARIANT_CAP)
    }

    #[test]
    fn cause_superset() {
        let v = variants("cause");
        for form in ["kause", "cose", "kose", "koz", "coz"] {
            assert!(
                v.contains(form),
                "missing {form}: {:?}",
                v.variants().keys()
            );
        }
    }

    #[test]
    fn golden_single_forms() {
        assert!(variants("trop").contains("tro"));
        assert!(variants("beaucoup").contains("bocou"));
        assert!(variants("quoi").contains("koi"));
        assert!(variants("comment").contains("comen"));
    }

    #[test]
    fn no_rule_fires() {
        assert!(variants("xyz").is_empty());
    }

    #[test]
    fn source_is_never_a_variant() {
        for word in ["cause", "trop", "quoi", "est", "des"] {
            assert!(!variants(word).contains(word));
        }
    }

    #[test]
    fn catalogue_contents() {
        let cat = RuleCatalogue::builtin();
        assert!(cat.len() >= 15, "only {} rules", cat.len());
        assert!(cat.find("qu-to-k").is_some());
        assert!(cat.find("final-tsdp").is_some());
        // Stages appear in order.
        let stages: Vec<Stage> = cat.rules().iter().map(|r| r.stage).collect();
        let mut sorted = stages.clone();
        sorted.sort();
        assert_eq!(stages, sorted);
    }

    #[test]
    fn exceptions_stage() {
        let v = variants("des");
        assert!(v.contains("dé"));
        assert!(v.contains("dè"));
        let v = variants("est");
        assert!(v.contains("é"));
        assert!(v.contains("è"));
    }

    #[test]
    fn traces_replay_to_their_variant() {
        let cat = RuleCatalogue::builtin();
        for word in ["cause", "beaucoup", "quoi", "française", "été", "mais"] {
            let v = phonetize(word, &cat, DEFAULT_VARIANT_CAP);
            assert!(!v.is_empty(), "{word} produced no variants");
            for (variant, trace) in v.variants() {
                let replayed = replay(word, trace, &cat).unwrap();
                assert_eq!(&replayed, variant, "{word} -> {variant}");
            }
        }
    }

    #[test]
    fn variants_never_grow_much() {
        for word in ["cause", "beaucoup", "indépendance", "française", "aimais"] {
            let n = word.chars().count();
            for v in variants(word).forms() {
                assert!(v.chars().count() <= n + 1, "{word} -> {v}");
            }
        }
    }

    #[test]
    fn deterministic() {
        let a = variants("beaucoup");
        let b = variants("beaucoup");
        assert_eq!(a, b);
    }

    #[test]
    fn cap_prefers_fewer_applications() {
        let cat = RuleCatalogue::builtin();
        let capped = phonetize("française", &cat, 4);
        let full = phonetize("française", &cat, DEFAULT_VARIANT_CAP);
        assert!(capped.len() <= 4);
        assert!(full.len() > capped.len());
        // Every capped variant also exists in the uncapped set.
        for form in capped.forms() {
            assert!(full.contains(form), "{form}");
        }
    }

    #[test]
    fn mandatory_rules_always_apply() {
        let mut cat = RuleCatalogue::builtin();
        // Make qu -> k mandatory: the unrewritten branch disappears.
        let optional = phonetize("quoi", &cat, DEFAULT_VARIANT_CAP);
        assert!(optional.contains("quoa"));
        for rule in &mut cat.rules {
            if rule.id == "qu-to-k" {
                rule.optional = false;
            }
        }
        let forced = phonetize("quoi", &cat, DEFAULT_VARIANT_CAP);
        assert!(forced.contains("koi"));
        assert!(!forced.contains("quoa"));
        assert!(forced.forms().all(|f| !f.contains("qu")));
    }

    #[test]
    fn tsv_round_trip() {
        let cat = RuleCatalogue::builtin();
        let tsv = cat.to_tsv();
        let back = RuleCatalogue::from_tsv(&tsv).unwrap();
        assert_eq!(back, cat);
        assert_eq!(back.to_tsv(), tsv);
    }

    #[test]
    fn tsv_errors_carry_line_numbers() {
        match RuleCatalogue::from_tsv("id\tbad-stage\tx\ty\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
