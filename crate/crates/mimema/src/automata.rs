//! Weighted finite-state acceptors.
//!
//! An acceptor is a set of states with labeled, log-weighted transitions.
//! Labels match one character at a time, either literally or through a
//! character class; there are no epsilon transitions, so builders compile
//! optional material into explicit arcs. Scoring is max-path (Viterbi):
//! the score of a form is the best accepting path's total log-probability.
//!
//! Acceptors are validated at construction: transition endpoints must be
//! declared states, weights must be log-probabilities (≤ 0), and for each
//! state the exponentiated outgoing weights may sum to at most 1 (the
//! leftover mass is the implicit termination probability).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::num::Real;
use crate::text::{classify_char, CharClass};

/// State identifier; states are numbered `0..num_states`.
pub type StateId = usize;

/// Transition label: a literal character or a character class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Char(char),
    Vowel,
    Consonant,
    Digit,
    Symbol,
    AnyLetter,
}

impl Label {
    pub fn matches(&self, c: char) -> bool {
        match self {
            Label::Char(x) => *x == c,
            Label::Vowel => classify_char(c).klass == CharClass::Vowel,
            Label::Consonant => classify_char(c).klass == CharClass::Consonant,
            Label::Digit => classify_char(c).klass == CharClass::Digit,
            Label::Symbol => classify_char(c).klass == CharClass::Symbol,
            Label::AnyLetter => c.is_alphabetic(),
        }
    }

    fn encode(&self, out: &mut String) {
        match self {
            Label::Char(c) => match c {
                '<' => out.push_str("\\<"),
                '\\' => out.push_str("\\\\"),
                '\t' => out.push_str("\\t"),
                '\n' => out.push_str("\\n"),
                _ => out.push(*c),
            },
            Label::Vowel => out.push_str("<vowel>"),
            Label::Consonant => out.push_str("<consonant>"),
            Label::Digit => out.push_str("<digit>"),
            Label::Symbol => out.push_str("<symbol>"),
            Label::AnyLetter => out.push_str("<any-letter>"),
        }
    }

    fn decode(text: &str, line: usize) -> Result<Label> {
        match text {
            "<vowel>" => Ok(Label::Vowel),
            "<consonant>" => Ok(Label::Consonant),
            "<digit>" => Ok(Label::Digit),
            "<symbol>" => Ok(Label::Symbol),
            "<any-letter>" => Ok(Label::AnyLetter),
            "\\<" => Ok(Label::Char('<')),
            "\\\\" => Ok(Label::Char('\\')),
            "\\t" => Ok(Label::Char('\t')),
            "\\n" => Ok(Label::Char('\n')),
            _ => {
                let mut chars = text.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => Ok(Label::Char(c)),
                    _ => Err(Error::parse(line, format!("invalid label {text:?}"))),
                }
            }
        }
    }
}

/// One transition: `from --label/weight--> to`, with `weight` a
/// log-probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition<W> {
    pub from: StateId,
    pub label: Label,
    pub to: StateId,
    pub weight: W,
}

/// Immutable weighted acceptor. Construct through [`AcceptorBuilder`] or
/// [`WeightedAcceptor::deserialize`]; both validate the invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedAcceptor<W> {
    num_states: usize,
    start: StateId,
    finals: BTreeSet<StateId>,
    transitions: Vec<Transition<W>>,
    // Transition indices grouped by source state, for scoring.
    outgoing: Vec<Vec<usize>>,
}

/// Incremental acceptor constructor.
#[derive(Debug, Clone)]
pub struct AcceptorBuilder<W> {
    num_states: usize,
    start: StateId,
    finals: BTreeSet<StateId>,
    transitions: Vec<Transition<W>>,
}

impl<W: Real> AcceptorBuilder<W> {
    /// Builder over `num_states` states with `start` as the initial state.
    pub fn new(num_states: usize, start: StateId) -> Self {
        AcceptorBuilder {
            num_states,
            start,
            finals: BTreeSet::new(),
            transitions: Vec::new(),
        }
    }

    /// Allocate one more state and return its id.
    pub fn add_state(&mut self) -> StateId {
        self.num_states += 1;
        self.num_states - 1
    }

    pub fn add_final(&mut self, state: StateId) -> &mut Self {
        self.finals.insert(state);
        self
    }

    pub fn add_transition(
        &mut self,
        from: StateId,
        label: Label,
        to: StateId,
        weight: W,
    ) -> &mut Self {
        self.transitions.push(Transition {
            from,
            label,
            to,
            weight,
        });
        self
    }

    /// Validate and freeze.
    pub fn build(self) -> Result<WeightedAcceptor<W>> {
        WeightedAcceptor::assemble(self.num_states, self.start, self.finals, self.transitions)
    }
}

impl<W: Real> WeightedAcceptor<W> {
    fn assemble(
        num_states: usize,
        start: StateId,
        finals: BTreeSet<StateId>,
        transitions: Vec<Transition<W>>,
    ) -> Result<Self> {
        let acceptor = WeightedAcceptor {
            outgoing: {
                let mut out = vec![Vec::new(); num_states];
                for (i, t) in transitions.iter().enumerate() {
                    if t.from < num_states {
                        out[t.from].push(i);
                    }
                }
                out
            },
            num_states,
            start,
            finals,
            transitions,
        };
        acceptor.validate()?;
        Ok(acceptor)
    }

    /// Check the structural and stochastic invariants.
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidAcceptor(msg));
        if self.num_states == 0 {
            return invalid("no states".into());
        }
        if self.start >= self.num_states {
            return invalid(format!("start state {} undeclared", self.start));
        }
        if let Some(f) = self.finals.iter().find(|f| **f >= self.num_states) {
            return invalid(format!("final state {f} undeclared"));
        }
        for t in &self.transitions {
            if t.from >= self.num_states || t.to >= self.num_states {
                return invalid(format!("transition {}->{} off the state set", t.from, t.to));
            }
            if !t.weight.is_finite() || t.weight > W::from_f64_lossy(1e-12) {
                return invalid(format!("weight {} is not a log-probability", t.weight));
            }
        }
        let tol = W::from_f64_lossy(1.0 + 1e-9);
        for state in 0..self.num_states {
            let sum = self.outgoing[state]
                .iter()
                .fold(W::zero(), |acc, &i| acc + self.transitions[i].weight.exp());
            if sum > tol {
                return invalid(format!("state {state} outgoing mass {sum} exceeds 1"));
            }
        }
        Ok(())
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn transitions(&self) -> &[Transition<W>] {
        &self.transitions
    }

    /// Best accepting path's log-probability, or `None` if the form is
    /// rejected.
    pub fn score(&self, form: &str) -> Option<W> {
        let mut current: Vec<Option<W>> = vec![None; self.num_states];
        current[self.start] = Some(W::zero());
        for c in form.chars() {
            let mut next: Vec<Option<W>> = vec![None; self.num_states];
            let mut any = false;
            for (state, score) in current.iter().enumerate() {
                let Some(score) = score else { continue };
                for &i in &self.outgoing[state] {
                    let t = &self.transitions[i];
                    if t.label.matches(c) {
                        let candidate = *score + t.weight;
                        if next[t.to].is_none_or(|best| candidate > best) {
                            next[t.to] = Some(candidate);
                            any = true;
                        }
                    }
                }
            }
            if !any {
                return None;
            }
            current = next;
        }
        self.finals
            .iter()
            .filter_map(|f| current[*f])
            .fold(None, |best: Option<W>, s| {
                Some(best.map_or(s, |b| if s > b { s } else { b }))
            })
    }

    /// Whether the form is in the acceptor's language.
    pub fn accepts(&self, form: &str) -> bool {
        self.score(form).is_some()
    }

    /// Line-oriented text form: a header, then one transition per line as
    /// `from<TAB>label<TAB>to<TAB>logweight`. Round-trips bit-exactly.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let finals: Vec<String> = self.finals.iter().map(|f| f.to_string()).collect();
        if finals.is_empty() {
            let _ = writeln!(
                out,
                "STATES {} START {} FINALS",
                self.num_states, self.start
            );
        } else {
            let _ = writeln!(
                out,
                "STATES {} START {} FINALS {}",
                self.num_states,
                self.start,
                finals.join(",")
            );
        }
        for t in &self.transitions {
            let mut label = String::new();
            t.label.encode(&mut label);
            let _ = writeln!(out, "{}\t{}\t{}\t{}", t.from, label, t.to, t.weight);
        }
        out
    }

    pub fn deserialize(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let fields: Vec<&str> = header.split(' ').collect();
        let header_err = || Error::parse(1, format!("malformed header {header:?}"));
        if fields.len() < 5
            || fields[0] != "STATES"
            || fields[2] != "START"
            || fields[4] != "FINALS"
        {
            return Err(header_err());
        }
        let num_states: usize = fields[1].parse().map_err(|_| header_err())?;
        let start: StateId = fields[3].parse().map_err(|_| header_err())?;
        let mut finals = BTreeSet::new();
        if let Some(list) = fields.get(5) {
            for f in list.split(',') {
                finals.insert(f.parse::<StateId>().map_err(|_| header_err())?);
            }
        }
        let mut transitions = Vec::new();
        for (idx, line) in lines {
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(Error::parse(lineno, "expected 4 tab-separated fields"));
            }
            let from: StateId = cols[0]
                .parse()
                .map_err(|_| Error::parse(lineno, "bad source state"))?;
            let label = Label::decode(cols[1], lineno)?;
            let to: StateId = cols[2]
                .parse()
                .map_err(|_| Error::parse(lineno, "bad target state"))?;
            let weight: W = cols[3]
                .parse()
                .map_err(|_| Error::parse(lineno, "bad weight"))?;
            transitions.push(Transition {
                from,
                label,
                to,
                weight,
            });
        }
        Self::assemble(num_states, start, finals, transitions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn any_letter_loop() -> WeightedAcceptor<f64> {
        let mut b = AcceptorBuilder::new(1, 0);
        b.add_final(0);
        b.add_transition(0, Label::AnyLetter, 0, 0.0);
        b.build().unwrap()
    }

    #[test]
    fn loop_acceptor_scores_zero() {
        let a = any_letter_loop();
        assert_eq!(a.score("abc"), Some(0.0));
        assert!(a.accepts("slt"));
    }

    #[test]
    fn empty_language_rejects() {
        // No final state is reachable, so every form is rejected.
        let mut b = AcceptorBuilder::<f64>::new(1, 0);
        b.add_transition(0, Label::AnyLetter, 0, -0.5);
        let a = b.build().unwrap();
        assert_eq!(a.score("a"), None);
        assert!(!a.accepts("slt"));
    }

    #[test]
    fn two_path_viterbi_takes_the_max() {
        let mut b = AcceptorBuilder::new(4, 0);
        b.add_final(3);
        b.add_transition(0, Label::Char('a'), 1, 0.5_f64.ln());
        b.add_transition(0, Label::Char('a'), 2, 0.25_f64.ln());
        b.add_transition(1, Label::Char('b'), 3, 0.0);
        b.add_transition(2, Label::Char('b'), 3, 0.0);
        let a = b.build().unwrap();
        let got = a.score("ab").unwrap();
        assert!((got - 0.5_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn digit_only_acceptor_rejects_mixed() {
        let mut b = AcceptorBuilder::new(1, 0);
        b.add_final(0);
        b.add_transition(0, Label::Digit, 0, 0.9_f64.ln());
        let a = b.build().unwrap();
        assert!(a.accepts("21"));
        assert!(!a.accepts("2m1"));
    }

    #[test]
    fn stochastic_invariant_is_enforced() {
        let mut b = AcceptorBuilder::new(1, 0);
        b.add_final(0);
        b.add_transition(0, Label::Vowel, 0, 0.8_f64.ln());
        b.add_transition(0, Label::Consonant, 0, 0.8_f64.ln());
        assert!(matches!(b.build(), Err(Error::InvalidAcceptor(_))));
    }

    #[test]
    fn positive_weight_rejected() {
        let mut b = AcceptorBuilder::new(1, 0);
        b.add_final(0);
        b.add_transition(0, Label::Vowel, 0, 0.1);
        assert!(matches!(b.build(), Err(Error::InvalidAcceptor(_))));
    }

    #[test]
    fn dangling_state_rejected() {
        let mut b = AcceptorBuilder::<f64>::new(1, 0);
        b.add_final(0);
        b.add_transition(0, Label::Vowel, 3, -0.5);
        assert!(matches!(b.build(), Err(Error::InvalidAcceptor(_))));
    }

    #[test]
    fn empty_form_accepted_iff_start_is_final() {
        let a = any_letter_loop();
        assert_eq!(a.score(""), Some(0.0));
        let mut b = AcceptorBuilder::<f64>::new(2, 0);
        b.add_final(1);
        b.add_transition(0, Label::AnyLetter, 1, -0.2);
        let a = b.build().unwrap();
        assert_eq!(a.score(""), None);
    }

    #[test]
    fn serialization_round_trips() {
        let mut b = AcceptorBuilder::new(3, 0);
        b.add_final(2);
        b.add_final(1);
        b.add_transition(0, Label::Char('é'), 1, 0.5_f64.ln());
        b.add_transition(0, Label::Vowel, 2, 0.25_f64.ln());
        b.add_transition(1, Label::Char('<'), 2, -1.0);
        b.add_transition(1, Label::Char('\\'), 2, -2.0);
        let a = b.build().unwrap();
        let text = a.serialize();
        let back = WeightedAcceptor::<f64>::deserialize(&text).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.serialize(), text);
    }

    #[test]
    fn serialization_with_no_finals() {
        let mut b = AcceptorBuilder::<f64>::new(1, 0);
        b.add_transition(0, Label::Digit, 0, -0.5);
        let a = b.build().unwrap();
        let text = a.serialize();
        assert!(text.starts_with("STATES 1 START 0 FINALS\n"));
        let back = WeightedAcceptor::<f64>::deserialize(&text).unwrap();
        assert_eq!(back.serialize(), text);
    }

    #[test]
    fn deserialize_reports_line_numbers() {
        let text = "STATES 2 START 0 FINALS 1\n0\t<vowel>\t1\tnot-a-number\n";
        match WeightedAcceptor::<f64>::deserialize(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
