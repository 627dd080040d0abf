//! Exact expected waiting times.
//!
//! Two independent routes: the first-step linear system of the absorbing
//! chain on the prefix automaton, solved over the rationals, and the
//! autocorrelation sum `sum_{k in overlaps} c^k`. Conditional expectations
//! `E(S | R)` start the chain wherever the given stream leaves it.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::automaton::{AutomatonError, Feed, PrefixAutomaton};
use crate::linalg;
use crate::pattern::{render_symbols, Pattern};
use crate::{Nat, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("{given} is not a prefix of {pattern}")]
    NotAPrefix { pattern: String, given: String },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// Overlap lengths `k` in `1..=s` where the length-`k` prefix equals the
/// length-`k` suffix. Always contains `s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CorrelationSet {
    pub overlaps: BTreeSet<usize>,
}

impl CorrelationSet {
    pub fn contains(&self, k: usize) -> bool {
        self.overlaps.contains(&k)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.overlaps.iter().copied()
    }
}

pub fn correlation_set(p: &Pattern) -> CorrelationSet {
    let sym = p.symbols();
    let s = sym.len();
    CorrelationSet {
        overlaps: (1..=s).filter(|&k| sym[..k] == sym[s - k..]).collect(),
    }
}

/// `sum_{k in overlaps} c^k`.
pub fn expected_wait_conway(p: &Pattern) -> Nat {
    let c = BigUint::from(p.alphabet_size());
    correlation_set(p)
        .iter()
        .fold(BigUint::zero(), |acc, k| acc + c.pow(k as u32))
}

/// Expected remaining number of draws until absorption from every automaton
/// state. Entry `s` (the accept state) is zero.
pub fn absorption_times(automaton: &PrefixAutomaton) -> Vec<Rat> {
    let s = automaton.pattern_len();
    let c = automaton.alphabet_size() as i64;
    let accept = automaton.accept_state();
    // c * E_q - sum_{a : next(q, a) != accept} E_next = c
    let mut a = vec![vec![Rat::zero(); s]; s];
    for (q, row) in a.iter_mut().enumerate() {
        row[q] += Rat::from_integer(c.into());
        for &next in automaton.row(q) {
            if next != accept {
                row[next] -= Rat::one();
            }
        }
    }
    let b = vec![Rat::from_integer(c.into()); s];
    let mut times =
        linalg::solve(a, b).expect("absorbing chain on a prefix automaton is nonsingular");
    times.push(Rat::zero());
    times
}

/// `E(S)` by solving the first-step equations exactly.
pub fn expected_wait_markov(p: &Pattern) -> Rat {
    let automaton = PrefixAutomaton::build(p);
    absorption_times(&automaton).swap_remove(0)
}

/// Expected total number of draws (the given ones included) until the first
/// occurrence of `p`, conditioned on the stream beginning with `given`.
///
/// `given` may be any stream, not only a prefix of `p`. If the pattern
/// already occurs inside `given`, the answer is the position where it first
/// ends.
pub fn conditional_wait(p: &Pattern, given: &[u32]) -> Result<Rat, ExactError> {
    let automaton = PrefixAutomaton::build(p);
    conditional_wait_with(&automaton, &absorption_times(&automaton), given)
}

/// [`conditional_wait`] reusing precomputed absorption times.
pub fn conditional_wait_with(
    automaton: &PrefixAutomaton,
    times: &[Rat],
    given: &[u32],
) -> Result<Rat, ExactError> {
    match automaton.feed(given)? {
        Feed::Accepted(at) => Ok(Rat::from_integer(at.into())),
        Feed::Alive(state) => Ok(Rat::from_integer(given.len().into()) + &times[state]),
    }
}

/// [`conditional_wait`] restricted to prefixes of the pattern, the form in
/// which `E(S) = E(R) + E(S|R) - r` holds.
pub fn conditional_wait_prefix(p: &Pattern, prefix: &[u32]) -> Result<Rat, ExactError> {
    if !p.starts_with(prefix) {
        return Err(ExactError::NotAPrefix {
            pattern: p.render(),
            given: render_symbols(prefix, p.alphabet_size()),
        });
    }
    conditional_wait(p, prefix)
}
