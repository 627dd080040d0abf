//! Waiting times for patterns in sequences of fair coin flips (or die rolls).
//!
//! The expected number of draws until a pattern first appears is computed
//! exactly by an absorbing Markov chain and by the autocorrelation sum, and
//! in closed form for the pattern classes that have one. Alongside these:
//! first-occurrence counts, the generalized Fibonacci sequences those counts
//! follow, the summation identities they imply, a seeded simulator and an
//! exhaustive conjecture scanner.

pub mod automaton;
pub mod closed_form;
pub mod conjectures;
pub mod counting;
pub mod exact;
pub mod identities;
mod linalg;
pub mod pattern;
pub mod sequences;
pub mod simulate;

/// Exact rational.
pub type Rat = num_rational::BigRational;
/// Exact non-negative integer.
pub type Nat = num_bigint::BigUint;

pub use automaton::PrefixAutomaton;
pub use pattern::Pattern;
pub use sequences::SeqFamily;

/// Error from building a thread pool for [`with_threads`].
pub type PoolError = rayon::ThreadPoolBuildError;

/// Run `f` on a dedicated pool of `threads` workers, or on the global pool
/// when `threads` is `None`. Results never depend on the thread count.
pub fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, PoolError> {
    match threads {
        None => Ok(f()),
        Some(n) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(f)),
    }
}

/// Serialize any `Display` value as a JSON string.
pub(crate) fn as_string<T: std::fmt::Display, S: serde::Serializer>(
    value: &T,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}
