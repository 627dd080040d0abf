//! First-occurrence counts `E_n(S)`: the number of length-`n` strings in
//! which `S` occurs only at the very end.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::automaton::{AutomatonError, Feed, PrefixAutomaton};
use crate::pattern::Pattern;
use crate::sequences::{SeqFamily, SequenceCache};
use crate::Nat;

/// Largest `c^n` that [`count_brute`] will enumerate.
pub const BRUTE_LIMIT: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountingError {
    #[error("brute force over {alphabet}^{n} strings exceeds the 2^24 limit")]
    TooLarge { alphabet: u32, n: usize },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// `counts[n] = E_n(S)` for `n = 0..=N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountVector {
    pub pattern: Pattern,
    pub counts: Vec<Nat>,
}

impl CountVector {
    pub fn get(&self, n: i64) -> Nat {
        if n < 0 {
            return BigUint::zero();
        }
        self.counts.get(n as usize).cloned().unwrap_or_default()
    }
}

/// Counting DP from an arbitrary start distribution. `weights[q]` is the
/// number of strings currently in non-accept state `q`; returns the inflow
/// into the accept state for each of the next `steps` steps.
fn absorb_counts(automaton: &PrefixAutomaton, mut weights: Vec<Nat>, steps: usize) -> Vec<Nat> {
    let s = automaton.accept_state();
    let mut inflow = Vec::with_capacity(steps);
    let mut next = vec![BigUint::zero(); s];
    for _ in 0..steps {
        let mut hit = BigUint::zero();
        for (q, w) in weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for &to in automaton.row(q) {
                if to == s {
                    hit += w;
                } else {
                    next[to] += w;
                }
            }
        }
        inflow.push(hit);
        std::mem::swap(&mut weights, &mut next);
        next.iter_mut().for_each(|x| x.set_zero());
    }
    inflow
}

pub fn count_first_occurrence(p: &Pattern, upto: usize) -> CountVector {
    let automaton = PrefixAutomaton::build(p);
    let mut start = vec![BigUint::zero(); automaton.accept_state()];
    start[0] = BigUint::one();
    let mut counts = vec![BigUint::zero()];
    counts.extend(absorb_counts(&automaton, start, upto));
    CountVector {
        pattern: p.clone(),
        counts,
    }
}

/// Enumerate all `c^n` strings and count those whose only occurrence of `p`
/// ends at position `n`. Uses direct window comparison, not the automaton.
pub fn count_brute(p: &Pattern, n: usize) -> Result<Nat, CountingError> {
    let c = p.alphabet_size();
    let total = (c as u64)
        .checked_pow(n as u32)
        .filter(|&t| t <= BRUTE_LIMIT)
        .ok_or(CountingError::TooLarge { alphabet: c, n })?;
    let pat = p.symbols();
    let s = pat.len();
    if n < s {
        return Ok(BigUint::zero());
    }
    let mut word = vec![0u32; n];
    let mut count = 0u64;
    for mut code in 0..total {
        for slot in word.iter_mut().rev() {
            *slot = (code % c as u64) as u32;
            code /= c as u64;
        }
        let first_end = (s..=n).find(|&end| word[end - s..end] == *pat);
        if first_end == Some(n) {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

/// Number of length-`n` strings that begin with `given` and in which `p`
/// occurs only at the end.
pub fn conditional_count(p: &Pattern, given: &[u32], n: usize) -> Result<Nat, CountingError> {
    let automaton = PrefixAutomaton::build(p);
    if given.len() > n {
        return Ok(BigUint::zero());
    }
    match automaton.feed(given)? {
        Feed::Accepted(at) => Ok(if at == n {
            BigUint::one()
        } else {
            BigUint::zero()
        }),
        Feed::Alive(_) if given.len() == n => Ok(BigUint::zero()),
        Feed::Alive(state) => {
            let mut start = vec![BigUint::zero(); automaton.accept_state()];
            start[state] = BigUint::one();
            let steps = n - given.len();
            Ok(absorb_counts(&automaton, start, steps)
                .pop()
                .unwrap_or_default())
        }
    }
}

/// Counting statement that a pattern class is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Proposition {
    /// `E_n(H^k) = F^k_{n-1}` and `E_n(H^k T^l) = Fbar^{k+l-1}_{n-2}`.
    TwoRuns,
    /// `H^k T^l H^m`.
    ThreeRuns,
    /// `H^k T^l H^m T^d`.
    FourRuns,
    /// `E_n(S) = G^s_n` for alternating `S`.
    Alternating,
}

/// Sequence family and index shift predicted for a coin pattern starting
/// with heads, when one of the counting statements covers it.
pub fn predicted_family(p: &Pattern) -> Option<(Proposition, SeqFamily, i64)> {
    if !p.is_coin() {
        return None;
    }
    let runs = p.runs().lengths();
    let out = match *runs.as_slice() {
        [k] => (Proposition::TwoRuns, SeqFamily::FibOrder { k }, 1),
        [k, l] => (Proposition::TwoRuns, SeqFamily::FibBar { k: k + l - 1 }, 2),
        [k, l, m] if m <= k => (
            Proposition::ThreeRuns,
            SeqFamily::FibTwoParam { k: k + l - 1, m },
            2,
        ),
        [k, l, m] => (
            Proposition::ThreeRuns,
            SeqFamily::FibTwoParam { k: l + m - 1, m: k },
            2,
        ),
        [k, l, m, d] if m < k || d > l => (
            Proposition::FourRuns,
            SeqFamily::FibBar {
                k: k + l + m + d - 1,
            },
            2,
        ),
        [k, l, m, d] => (
            Proposition::FourRuns,
            SeqFamily::FibTilde {
                k: l + m - 1,
                m: k + d - 1,
            },
            3,
        ),
        _ if p.is_alternating() => (Proposition::Alternating, SeqFamily::AltG { s: p.len() }, 0),
        _ => return None,
    };
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropositionMismatch {
    pub proposition: Proposition,
    pub pattern: String,
    pub family: String,
    pub n: usize,
    pub dp: String,
    pub sequence: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropositionReport {
    pub max_params: usize,
    pub upto: usize,
    pub patterns: usize,
    pub comparisons: usize,
    pub mismatches: Vec<PropositionMismatch>,
}

impl PropositionReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Patterns exercised by [`verify_propositions`]: every run-length tuple of
/// one to four runs with entries in `1..=max_params`, and alternating
/// patterns up to length `4 * max_params`. All start with heads.
pub fn proposition_patterns(max_params: usize) -> Vec<Pattern> {
    let mut out = Vec::new();
    let mut tuple = Vec::new();
    fn rec(depth: usize, max: usize, tuple: &mut Vec<usize>, out: &mut Vec<Pattern>) {
        if depth == 0 {
            out.push(Pattern::coin_runs(0, tuple).expect("positive run lengths"));
            return;
        }
        for v in 1..=max {
            tuple.push(v);
            rec(depth - 1, max, tuple, out);
            tuple.pop();
        }
    }
    for runs in 1..=4 {
        rec(runs, max_params, &mut tuple, &mut out);
    }
    for s in 5..=4 * max_params {
        out.push(Pattern::alternating(s).expect("positive length"));
    }
    out
}

/// Compare counting-DP values against the predicted sequence for every
/// pattern from [`proposition_patterns`] and every `n <= upto`.
pub fn verify_propositions(max_params: usize, upto: usize) -> PropositionReport {
    let patterns = proposition_patterns(max_params);
    let per_pattern: Vec<(usize, Vec<PropositionMismatch>)> = patterns
        .par_iter()
        .map(|p| {
            let mut found = Vec::new();
            let mut comparisons = 0;
            let mut checks = vec![predicted_family(p).expect("covered pattern class")];
            // alternating patterns with at most four runs are also checked
            // against the alternating family
            if p.is_alternating() && p.len() <= 4 {
                checks.push((Proposition::Alternating, SeqFamily::AltG { s: p.len() }, 0));
            }
            let counts = count_first_occurrence(p, upto);
            for (prop, family, shift) in checks {
                let mut cache = SequenceCache::new(family).expect("valid family");
                for n in 0..=upto {
                    comparisons += 1;
                    let expected = cache.get(n as i64 - shift);
                    if counts.counts[n] != expected {
                        found.push(PropositionMismatch {
                            proposition: prop,
                            pattern: p.render(),
                            family: family.to_string(),
                            n,
                            dp: counts.counts[n].to_string(),
                            sequence: expected.to_string(),
                        });
                    }
                }
            }
            (comparisons, found)
        })
        .collect();
    let comparisons = per_pattern.iter().map(|(c, _)| c).sum();
    PropositionReport {
        max_params,
        upto,
        patterns: patterns.len(),
        comparisons,
        mismatches: per_pattern.into_iter().flat_map(|(_, m)| m).collect(),
    }
}
