//! Shared test oracles, independent of the implementation paths they check.

#![allow(dead_code)]

use mimema::automata::WeightedAcceptor;

/// Length of a longest common subsequence, by the textbook quadratic DP.
pub fn lcs_len(a: &[char], b: &[char]) -> usize {
    let mut table = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            table[i + 1][j + 1] = if ca == cb {
                table[i][j] + 1
            } else {
                table[i][j + 1].max(table[i + 1][j])
            };
        }
    }
    table[a.len()][b.len()]
}

/// Maximum accepting-path weight by exhaustive path enumeration.
pub fn brute_force_score(acceptor: &WeightedAcceptor<f64>, form: &str) -> Option<f64> {
    let chars: Vec<char> = form.chars().collect();
    let mut best: Option<f64> = None;
    let mut stack: Vec<(usize, usize, f64)> = vec![(acceptor.start(), 0, 0.0)];
    while let Some((state, pos, weight)) = stack.pop() {
        if pos == chars.len() {
            if acceptor.finals().contains(&state) && best.is_none_or(|b| weight > b) {
                best = Some(weight);
            }
            continue;
        }
        for t in acceptor.transitions() {
            if t.from == state && t.label.matches(chars[pos]) {
                stack.push((t.to, pos + 1, weight + t.weight));
            }
        }
    }
    best
}
