//! Character recognition rate.
//!
//! The edit cost `D` between a reference label and a recognizer hypothesis
//! counts deletions and substitutions at 1 and insertions at 0, so that an
//! oversegmented character (one substitution plus one insertion) is only
//! penalized once. The per-pair rate is `TR = 100 (#label - D) / #label`,
//! which lies in `[0, 100]`: `D = 0` when everything is recognized and
//! `D = #label` when nothing is.
//!
//! With free insertions the minimum cost reduces to the number of label
//! characters without a partner in a longest common subsequence, which is
//! what the oracle tests check.
//!
//! Whitespace is stripped from both strings before alignment; `#label`
//! counts non-whitespace characters.

use crate::error::{Error, Result};
use crate::num::Real;

/// Comparison options. Strict (case- and diacritic-sensitive) by default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MetricOptions {
    pub fold_case: bool,
    pub fold_diacritics: bool,
}

/// One alignment operation, with positions into the stripped label and
/// hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EditOp {
    Match { label_pos: usize, hyp_pos: usize },
    Substitute { label_pos: usize, hyp_pos: usize },
    Delete { label_pos: usize },
    Insert { hyp_pos: usize },
}

/// Outcome of aligning one label/hypothesis pair.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentReport<W> {
    /// Number of non-separator label characters (`#label`).
    pub label_length: usize,
    /// Minimum edit cost `D`.
    pub edit_cost: usize,
    /// `100 (#label - D) / #label`.
    pub tr: W,
    /// One minimum-cost edit script; replaying it turns the stripped label
    /// into the stripped hypothesis.
    pub edit_script: Vec<EditOp>,
}

fn prepare(s: &str, options: &MetricOptions) -> Vec<char> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .flat_map(|c| {
            let c = if options.fold_diacritics {
                crate::text::base_char(c)
            } else {
                c
            };
            if options.fold_case {
                c.to_lowercase().collect::<Vec<_>>()
            } else {
                vec![c]
            }
        })
        .collect()
}

/// Align `label` against `hypothesis` and report `D` and `TR`.
pub fn edit_cost<W: Real>(label: &str, hypothesis: &str) -> Result<AlignmentReport<W>> {
    edit_cost_with_options(label, hypothesis, &MetricOptions::default())
}

pub fn edit_cost_with_options<W: Real>(
    label: &str,
    hypothesis: &str,
    options: &MetricOptions,
) -> Result<AlignmentReport<W>> {
    let l = prepare(label, options);
    let h = prepare(hypothesis, options);
    if l.is_empty() {
        return Err(Error::EmptyLabel);
    }
    let (n, m) = (l.len(), h.len());

    // dp[i][j]: minimum cost aligning l[..i] with h[..j];
    // deletion = 1, substitution = 1, insertion = 0.
    let mut dp = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in dp.iter_mut().enumerate() {
        row[0] = i;
    }
    for i in 1..=n {
        for j in 1..=m {
            let diag = dp[i - 1][j - 1] + usize::from(l[i - 1] != h[j - 1]);
            let del = dp[i - 1][j] + 1;
            let ins = dp[i][j - 1];
            dp[i][j] = diag.min(del).min(ins);
        }
    }
    let d = dp[n][m];

    let mut script = Vec::new();
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 && dp[i][j] == dp[i - 1][j - 1] + usize::from(l[i - 1] != h[j - 1]) {
            if l[i - 1] == h[j - 1] {
                script.push(EditOp::Match {
                    label_pos: i - 1,
                    hyp_pos: j - 1,
                });
            } else {
                script.push(EditOp::Substitute {
                    label_pos: i - 1,
                    hyp_pos: j - 1,
                });
            }
            i -= 1;
            j -= 1;
        } else if j > 0 && dp[i][j] == dp[i][j - 1] {
            script.push(EditOp::Insert { hyp_pos: j - 1 });
            j -= 1;
        } else {
            script.push(EditOp::Delete { label_pos: i - 1 });
            i -= 1;
        }
    }
    script.reverse();

    let hundred = W::from_f64_lossy(100.0);
    let tr =
        hundred * W::from_usize(n - d).expect("usize fits") / W::from_usize(n).expect("usize fits");
    Ok(AlignmentReport {
        label_length: n,
        edit_cost: d,
        tr,
        edit_script: script,
    })
}

/// Character-weighted corpus rate: `100 (Σ#label - ΣD) / Σ#label`.
pub fn corpus_tr<W: Real>(pairs: &[(String, String)]) -> Result<W> {
    corpus_tr_with_options(pairs, &MetricOptions::default())
}

pub fn corpus_tr_with_options<W: Real>(
    pairs: &[(String, String)],
    options: &MetricOptions,
) -> Result<W> {
    if pairs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut total_len = 0usize;
    let mut total_cost = 0usize;
    for (label, hyp) in pairs {
        let report: AlignmentReport<W> = edit_cost_with_options(label, hyp, options)?;
        total_len += report.label_length;
        total_cost += report.edit_cost;
    }
    let hundred = W::from_f64_lossy(100.0);
    Ok(
        hundred * W::from_usize(total_len - total_cost).expect("usize fits")
            / W::from_usize(total_len).expect("usize fits"),
    )
}

/// Message-averaged alternative: the unweighted mean of per-pair rates.
pub fn corpus_tr_message_averaged<W: Real>(
    pairs: &[(String, String)],
    options: &MetricOptions,
) -> Result<W> {
    if pairs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut sum = W::zero();
    for (label, hyp) in pairs {
        sum = sum + edit_cost_with_options::<W>(label, hyp, options)?.tr;
    }
    Ok(sum / W::from_usize(pairs.len()).expect("usize fits"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(label: &str, hyp: &str) -> AlignmentReport<f64> {
        edit_cost(label, hyp).unwrap()
    }

    #[test]
    fn oversegmentation_example() {
        let r = report("bjr A 2min", "l o j r A z mu i n");
        assert_eq!(r.label_length, 8);
        assert_eq!(r.edit_cost, 2);
        assert_eq!(r.tr, 75.0);
    }

    #[test]
    fn identical_strings() {
        let r = report("salut", "salut");
        assert_eq!(r.edit_cost, 0);
        assert_eq!(r.tr, 100.0);
    }

    #[test]
    fn empty_hypothesis_is_all_deletions() {
        let r = report("abc", "");
        assert_eq!(r.edit_cost, 3);
        assert_eq!(r.tr, 0.0);
    }

    #[test]
    fn empty_label_is_an_error() {
        assert!(matches!(
            edit_cost::<f64>("  ", "abc"),
            Err(Error::EmptyLabel)
        ));
    }

    #[test]
    fn pure_insertions_are_free() {
        let base = report("slt", "slt");
        let padded = report("slt", "s x l y t z");
        assert_eq!(base.edit_cost, padded.edit_cost);
        assert_eq!(padded.tr, 100.0);
    }

    #[test]
    fn script_replays_label_to_hypothesis() {
        for (label, hyp) in [
            ("bjr A 2min", "l o j r A z mu i n"),
            ("salut", "slt"),
            ("abc", ""),
            ("a", "bbbb"),
        ] {
            let r = report(label, hyp);
            let l: Vec<char> = label.chars().filter(|c| !c.is_whitespace()).collect();
            let h: Vec<char> = hyp.chars().filter(|c| !c.is_whitespace()).collect();
            let mut rebuilt = Vec::new();
            for op in &r.edit_script {
                match *op {
                    EditOp::Match { label_pos, .. } => rebuilt.push(l[label_pos]),
                    EditOp::Substitute { hyp_pos, .. } | EditOp::Insert { hyp_pos } => {
                        rebuilt.push(h[hyp_pos])
                    }
                    EditOp::Delete { .. } => {}
                }
            }
            assert_eq!(rebuilt, h, "{label} / {hyp}");
        }
    }

    #[test]
    fn folding_options() {
        // Strictly, only the t matches: two substitutions.
        let strict = report("Été", "ete");
        assert_eq!(strict.edit_cost, 2);
        let folded = edit_cost_with_options::<f64>(
            "Été",
            "ete",
            &MetricOptions {
                fold_case: true,
                fold_diacritics: true,
            },
        )
        .unwrap();
        assert_eq!(folded.edit_cost, 0);
    }

    #[test]
    fn corpus_rates() {
        let pairs = vec![
            ("abcd".to_string(), "abcd".to_string()),
            ("wxyz".to_string(), "qqqq".to_string()),
        ];
        let tr: f64 = corpus_tr(&pairs).unwrap();
        assert_eq!(tr, 50.0);
        let avg: f64 = corpus_tr_message_averaged(&pairs, &MetricOptions::default()).unwrap();
        assert_eq!(avg, 50.0);
        assert!(matches!(corpus_tr::<f64>(&[]), Err(Error::EmptyCorpus)));
    }
}
