//! Rebus-form plausibility scoring.
//!
//! Rebus shorthand reads each symbol by its name — `2m1` for *demain*, `a+`
//! for *à plus*, `9` for *neuf*. The creativity of the device rules out a
//! dedicated lexicon, so this module scores candidate tokens instead, with a
//! small stochastic acceptor built from three observations: letters, digits
//! and symbols mix freely; single-symbol forms are very common; runs of two
//! or more digits are rare.
//!
//! The model is parametric and all controlling probabilities can be loaded
//! from a key-value config file; the acceptance properties are ordinal
//! (ordering of scores), not tied to the default numbers.

use crate::automata::{AcceptorBuilder, Label, WeightedAcceptor};
use crate::error::{Error, Result};
use crate::num::Real;

/// Coarse symbol class used by the rebus acceptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolClass {
    Letter,
    Digit,
    Symbol,
}

impl SymbolClass {
    pub const ALL: [SymbolClass; 3] =
        [SymbolClass::Letter, SymbolClass::Digit, SymbolClass::Symbol];

    fn index(self) -> usize {
        match self {
            SymbolClass::Letter => 0,
            SymbolClass::Digit => 1,
            SymbolClass::Symbol => 2,
        }
    }

    fn label(self) -> Label {
        match self {
            SymbolClass::Letter => Label::AnyLetter,
            SymbolClass::Digit => Label::Digit,
            SymbolClass::Symbol => Label::Symbol,
        }
    }

    fn name(self) -> &'static str {
        match self {
            SymbolClass::Letter => "letter",
            SymbolClass::Digit => "digit",
            SymbolClass::Symbol => "symbol",
        }
    }
}

/// Rebus model parameters, all plain probabilities in `[0, 1]`.
///
/// `start` is the entry mass per class; for letters and digits a
/// `singleton_bonus` share of that mass goes to a terminal state, which is
/// what makes one-character forms score high. `transition[a][b]` is the
/// probability of class `b` following class `a`; the remainder of each row
/// is the termination probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RebusParams<W> {
    pub singleton_bonus: W,
    pub start: [W; 3],
    pub transition: [[W; 3]; 3],
}

impl<W: Real> Default for RebusParams<W> {
    fn default() -> Self {
        let t = W::from_f64_lossy(0.3);
        let mut transition = [[t; 3]; 3];
        transition[SymbolClass::Digit.index()][SymbolClass::Digit.index()] =
            W::from_f64_lossy(0.02);
        RebusParams {
            singleton_bonus: W::from_f64_lossy(0.9),
            start: [
                W::from_f64_lossy(0.3),
                W::from_f64_lossy(0.15),
                W::from_f64_lossy(0.1),
            ],
            transition,
        }
    }
}

impl<W: Real> RebusParams<W> {
    fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidParameters(msg));
        let unit = |v: W| v >= W::zero() && v <= W::one();
        if !unit(self.singleton_bonus) {
            return invalid("singleton_bonus outside [0, 1]".into());
        }
        let tol = W::from_f64_lossy(1.0 + 1e-9);
        let start_sum = self.start.iter().fold(W::zero(), |a, &b| a + b);
        if self.start.iter().any(|v| !unit(*v)) || start_sum > tol {
            return invalid("start masses must lie in [0, 1] and sum to at most 1".into());
        }
        for from in SymbolClass::ALL {
            let row = &self.transition[from.index()];
            let sum = row.iter().fold(W::zero(), |a, &b| a + b);
            if row.iter().any(|v| !unit(*v)) || sum > tol {
                return invalid(format!(
                    "transition row {} must lie in [0, 1] and sum to at most 1",
                    from.name()
                ));
            }
        }
        let dd = self.transition[1][1];
        for from in SymbolClass::ALL {
            for to in SymbolClass::ALL {
                if (from, to) != (SymbolClass::Digit, SymbolClass::Digit)
                    && self.transition[from.index()][to.index()] <= dd
                {
                    return invalid(format!(
                        "digit-digit weight must stay below the {}-{} weight",
                        from.name(),
                        to.name()
                    ));
                }
            }
        }
        if self.start[0] <= W::zero() || self.start[1] <= W::zero() {
            return invalid("letter and digit entry masses must be positive".into());
        }
        Ok(())
    }

    /// Parse `key = value` lines. Unknown keys are rejected; missing keys
    /// keep their defaults. Keys: `singleton_bonus`, `start.<class>`,
    /// `trans.<class>.<class>` with classes `letter`, `digit`, `symbol`.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut params = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(lineno, "expected key = value"))?;
            let key = key.trim();
            let value: W = value
                .trim()
                .parse()
                .map_err(|_| Error::parse(lineno, format!("invalid number for {key}")))?;
            let class = |name: &str| -> Result<SymbolClass> {
                match name {
                    "letter" => Ok(SymbolClass::Letter),
                    "digit" => Ok(SymbolClass::Digit),
                    "symbol" => Ok(SymbolClass::Symbol),
                    _ => Err(Error::parse(lineno, format!("unknown class {name:?}"))),
                }
            };
            match key.split('.').collect::<Vec<_>>().as_slice() {
                ["singleton_bonus"] => params.singleton_bonus = value,
                ["start", c] => params.start[class(c)?.index()] = value,
                ["trans", a, b] => params.transition[class(a)?.index()][class(b)?.index()] = value,
                _ => return Err(Error::parse(lineno, format!("unknown key {key:?}"))),
            }
        }
        params.validate()?;
        Ok(params)
    }
}

/// A compiled rebus model: the parameters plus their acceptor.
#[derive(Debug, Clone, PartialEq)]
pub struct RebusModel<W> {
    params: RebusParams<W>,
    acceptor: WeightedAcceptor<W>,
}

/// Compile the parameters into an acceptor.
///
/// States: start, a terminal singleton state, and one state per class of the
/// last consumed character; all but the start are accepting.
pub fn build_rebus_model<W: Real>(params: RebusParams<W>) -> Result<RebusModel<W>> {
    params.validate()?;
    const START: usize = 0;
    const SINGLETON: usize = 1;
    let class_state = |c: SymbolClass| 2 + c.index();

    let mut b = AcceptorBuilder::new(5, START);
    b.add_final(SINGLETON);
    for c in SymbolClass::ALL {
        b.add_final(class_state(c));
    }
    for c in [SymbolClass::Letter, SymbolClass::Digit] {
        let mass = params.start[c.index()];
        let bonus = mass * params.singleton_bonus;
        let rest = mass - bonus;
        if bonus > W::zero() {
            b.add_transition(START, c.label(), SINGLETON, bonus.ln());
        }
        if rest > W::zero() {
            b.add_transition(START, c.label(), class_state(c), rest.ln());
        }
    }
    let sym = params.start[SymbolClass::Symbol.index()];
    if sym > W::zero() {
        b.add_transition(
            START,
            SymbolClass::Symbol.label(),
            class_state(SymbolClass::Symbol),
            sym.ln(),
        );
    }
    for from in SymbolClass::ALL {
        for to in SymbolClass::ALL {
            let p = params.transition[from.index()][to.index()];
            if p > W::zero() {
                b.add_transition(class_state(from), to.label(), class_state(to), p.ln());
            }
        }
    }
    Ok(RebusModel {
        params,
        acceptor: b.build()?,
    })
}

impl<W: Real> RebusModel<W> {
    pub fn params(&self) -> &RebusParams<W> {
        &self.params
    }

    pub fn acceptor(&self) -> &WeightedAcceptor<W> {
        &self.acceptor
    }
}

/// Viterbi score of a form under the model, `None` when rejected.
/// Empty forms are an error.
pub fn score_rebus<W: Real>(model: &RebusModel<W>, form: &str) -> Result<Option<W>> {
    if form.is_empty() {
        return Err(Error::EmptyToken);
    }
    Ok(model.acceptor.score(form))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> RebusModel<f64> {
        build_rebus_model(RebusParams::default()).unwrap()
    }

    fn score(m: &RebusModel<f64>, form: &str) -> f64 {
        score_rebus(m, form).unwrap().unwrap_or(f64::NEG_INFINITY)
    }

    #[test]
    fn accepts_attested_forms() {
        let m = model();
        for form in ["2m1", "a+", "c", "9", "kfé", "mr6"] {
            assert!(score_rebus(&m, form).unwrap().is_some(), "{form}");
        }
    }

    #[test]
    fn singleton_beats_repeated_letter() {
        let m = model();
        assert!(score(&m, "c") >= score(&m, "cc"));
        assert!(score(&m, "9") >= score(&m, "99"));
    }

    #[test]
    fn adjacent_digits_are_penalized() {
        let m = model();
        assert!(score(&m, "2m1") > score(&m, "21m"));
        assert!(score(&m, "2m1") > score(&m, "m21"));
        assert!((score(&m, "2m1") - score(&m, "1m2")).abs() < 1e-12);
    }

    #[test]
    fn pure_letter_score_decays_with_length() {
        let m = model();
        let mut prev = score(&m, "a");
        for form in ["ab", "abc", "abcd"] {
            let s = score(&m, form);
            assert!(s <= prev, "{form}");
            prev = s;
        }
    }

    #[test]
    fn empty_form_is_an_error() {
        assert!(matches!(score_rebus(&model(), ""), Err(Error::EmptyToken)));
    }

    #[test]
    fn whitespace_rejected() {
        assert_eq!(score_rebus(&model(), "a b").unwrap(), None);
    }

    #[test]
    fn serialized_acceptor_is_deterministic() {
        let a = model().acceptor().serialize();
        let b = model().acceptor().serialize();
        assert_eq!(a, b);
    }

    #[test]
    fn config_round_trip_and_validation() {
        let params: RebusParams<f64> =
            RebusParams::from_config_str("singleton_bonus = 0.8\ntrans.digit.digit = 0.01\n")
                .unwrap();
        assert_eq!(params.singleton_bonus, 0.8);
        assert_eq!(params.transition[1][1], 0.01);

        // A digit-digit weight above the others violates the model.
        assert!(matches!(
            RebusParams::<f64>::from_config_str("trans.digit.digit = 0.5"),
            Err(Error::InvalidParameters(_))
        ));
        // Over-full start mass is rejected.
        assert!(matches!(
            RebusParams::<f64>::from_config_str("start.letter = 0.9\nstart.digit = 0.9"),
            Err(Error::InvalidParameters(_))
        ));
    }
}
