//! Closed-form waiting times for the pattern classes that have one.
//!
//! Coin patterns with at most four maximal runs, alternating coin patterns,
//! and a single face repeated `k` times on a `c`-sided die. All values are
//! big integers.
//!
//! Note: the single-run value is `2^{k+1} - 2`. A derivation that ends in
//! `2^{k+2} - 2` for the same quantity is off by one in the exponent; the
//! Markov solve confirms `2^{k+1} - 2` (e.g. 6 for `HH`).

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::pattern::{Pattern, COIN};
use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("run length must be at least 1")]
    ZeroRun,
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(u32),
}

/// Which formula [`dispatch_rule`] applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    SingleRun,
    TwoRuns,
    ThreeRuns,
    FourRuns,
    Alternating,
    DieRun,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::SingleRun => "single-run",
            Rule::TwoRuns => "two-runs",
            Rule::ThreeRuns => "three-runs",
            Rule::FourRuns => "four-runs",
            Rule::Alternating => "alternating",
            Rule::DieRun => "die-run",
        }
    }
}

fn pow2(e: usize) -> Nat {
    BigUint::one() << e
}

fn check(params: &[usize]) -> Result<(), ClosedFormError> {
    if params.contains(&0) {
        Err(ClosedFormError::ZeroRun)
    } else {
        Ok(())
    }
}

/// `E(H^k) = 2^{k+1} - 2`.
pub fn wait_single_run(k: usize) -> Result<Nat, ClosedFormError> {
    check(&[k])?;
    Ok(pow2(k + 1) - 2u32)
}

/// `E(H^k T^l) = 2^{k+l}`.
pub fn wait_two_runs(k: usize, l: usize) -> Result<Nat, ClosedFormError> {
    check(&[k, l])?;
    Ok(pow2(k + l))
}

/// `E(H^k T^l H^m) = 2^{k+l+m} + 2^{min(k,m)+1} - 2`.
pub fn wait_three_runs(k: usize, l: usize, m: usize) -> Result<Nat, ClosedFormError> {
    check(&[k, l, m])?;
    Ok(pow2(k + l + m) + pow2(k.min(m) + 1) - 2u32)
}

/// `E(H^k T^l H^m T^d)`: `2^{k+l+m+d}`, plus `2^{k+d}` when `m >= k` and `d <= l`.
pub fn wait_four_runs(k: usize, l: usize, m: usize, d: usize) -> Result<Nat, ClosedFormError> {
    check(&[k, l, m, d])?;
    let base = pow2(k + l + m + d);
    if m < k || d > l {
        Ok(base)
    } else {
        Ok(base + pow2(k + d))
    }
}

/// Alternating pattern of length `s`: `(2^{s+2} - 4) / 3` for even `s`,
/// `(2^{s+2} - 2) / 3` for odd `s`.
pub fn wait_alternating(s: usize) -> Result<Nat, ClosedFormError> {
    check(&[s])?;
    let top = pow2(s + 2);
    let numer = if s.is_multiple_of(2) {
        top - 4u32
    } else {
        top - 2u32
    };
    Ok(numer / 3u32)
}

/// Run of `k` copies of one face on a fair `c`-sided die: `(c^{k+1} - c) / (c - 1)`.
pub fn wait_die_run(c: u32, k: usize) -> Result<Nat, ClosedFormError> {
    if c < 2 {
        return Err(ClosedFormError::AlphabetTooSmall(c));
    }
    check(&[k])?;
    let cb = BigUint::from(c);
    Ok((cb.pow(k as u32 + 1) - &cb) / (c - 1))
}

/// Closed form for `p` when one applies.
pub fn dispatch(p: &Pattern) -> Option<Nat> {
    dispatch_rule(p).map(|(_, v)| v)
}

/// Like [`dispatch`], also naming the formula used. Run-count formulas take
/// precedence over the alternating formula.
pub fn dispatch_rule(p: &Pattern) -> Option<(Rule, Nat)> {
    if p.alphabet_size() != COIN {
        if p.is_constant() {
            return Some((Rule::DieRun, wait_die_run(p.alphabet_size(), p.len()).ok()?));
        }
        return None;
    }
    // heads/tails symmetry: runs do not depend on which symbol starts
    let runs = p.runs().lengths();
    let value = match *runs.as_slice() {
        [k] => (Rule::SingleRun, wait_single_run(k).ok()?),
        [k, l] => (Rule::TwoRuns, wait_two_runs(k, l).ok()?),
        [k, l, m] => (Rule::ThreeRuns, wait_three_runs(k, l, m).ok()?),
        [k, l, m, d] => (Rule::FourRuns, wait_four_runs(k, l, m, d).ok()?),
        _ if p.is_alternating() => (Rule::Alternating, wait_alternating(p.len()).ok()?),
        _ => return None,
    };
    Some(value)
}
