//! Seeded Monte Carlo estimate of `E(S)`.
//!
//! Generator: ChaCha8 (`rand_chacha::ChaCha8Rng`). Trial `i` uses the
//! generator seeded with `seed_from_u64(seed)` and switched to stream `i`,
//! so every trial has its own substream and the report does not depend on
//! trial order or thread count. Symbols are drawn with `gen_range(0..c)`.
//! Sums are accumulated in exact integers and merged associatively.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::automaton::PrefixAutomaton;
use crate::pattern::Pattern;

/// Per-trial limit on the number of draws.
pub const FLIP_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("number of trials must be at least 1")]
    ZeroTrials,
    #[error("trial {trial} did not finish within {cap} draws")]
    FlipCapExceeded { trial: u64, cap: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub pattern: String,
    pub trials: u64,
    pub seed: u64,
    /// Total draws over all trials, as a decimal string in JSON.
    #[serde(serialize_with = "crate::as_string")]
    pub total: u128,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(trials)`; 0 for a single trial.
    pub std_error: f64,
    pub min: u64,
    pub max: u64,
}

#[derive(Debug, Clone, Copy)]
struct Acc {
    sum: u128,
    sum_sq: u128,
    min: u64,
    max: u64,
}

impl Acc {
    const EMPTY: Acc = Acc {
        sum: 0,
        sum_sq: 0,
        min: u64::MAX,
        max: 0,
    };

    fn one(x: u64) -> Acc {
        Acc {
            sum: x as u128,
            sum_sq: (x as u128) * (x as u128),
            min: x,
            max: x,
        }
    }

    fn merge(self, o: Acc) -> Acc {
        Acc {
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
            min: self.min.min(o.min),
            max: self.max.max(o.max),
        }
    }
}

/// One game on the given substream; number of draws until the pattern ends.
pub fn play(automaton: &PrefixAutomaton, seed: u64, trial: u64, cap: u64) -> Result<u64, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let c = automaton.alphabet_size();
    let accept = automaton.accept_state();
    let mut state = 0;
    for draws in 1..=cap {
        state = automaton.next(state, rng.gen_range(0..c));
        if state == accept {
            return Ok(draws);
        }
    }
    Err(SimError::FlipCapExceeded { trial, cap })
}

pub fn simulate_wait(p: &Pattern, trials: u64, seed: u64) -> Result<SimReport, SimError> {
    simulate_wait_capped(p, trials, seed, FLIP_CAP)
}

/// [`simulate_wait`] with an explicit per-trial draw limit.
pub fn simulate_wait_capped(
    p: &Pattern,
    trials: u64,
    seed: u64,
    cap: u64,
) -> Result<SimReport, SimError> {
    if trials == 0 {
        return Err(SimError::ZeroTrials);
    }
    let automaton = PrefixAutomaton::build(p);
    let acc = (0..trials)
        .into_par_iter()
        .map(|t| play(&automaton, seed, t, cap).map(Acc::one))
        .try_reduce(|| Acc::EMPTY, |a, b| Ok(a.merge(b)));
    let acc = match acc {
        Ok(acc) => acc,
        // report the lowest failing trial regardless of scheduling
        Err(_) => {
            let trial = (0..trials)
                .find(|&t| play(&automaton, seed, t, cap).is_err())
                .expect("a failing trial exists");
            return Err(SimError::FlipCapExceeded { trial, cap });
        }
    };
    let n = trials as f64;
    let std_error = if trials > 1 {
        // n * sum_sq - sum^2 is exact when it fits, which covers the cap
        let spread = (trials as u128)
            .checked_mul(acc.sum_sq)
            .and_then(|a| acc.sum.checked_mul(acc.sum).map(|b| a - b));
        let var = match spread {
            Some(d) => d as f64 / (n * (n - 1.0)),
            None => {
                let mean = acc.sum as f64 / n;
                (acc.sum_sq as f64 - n * mean * mean) / (n - 1.0)
            }
        };
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(SimReport {
        pattern: p.render(),
        trials,
        seed,
        total: acc.sum,
        mean: acc.sum as f64 / n,
        std_error,
        min: acc.min,
        max: acc.max,
    })
}
