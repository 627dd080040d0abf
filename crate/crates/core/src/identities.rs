//! Truncated sums `sum_{n<=N} n a_n / c^n` and certified bounds on what
//! the truncation leaves out.
//!
//! For a pattern, `a_n = E_n(S)` and the full sum is `E(S)`. For the
//! corollary identities, `a_n` comes from a sequence family and the full sum
//! is a closed-form power of two expression.
//!
//! The tail bounds are rigorous. For a pattern with stopping time `T`,
//! the tail equals `N P(T > N) + sum_{n >= N} P(T > n)`, and with
//! `rho = max_q P_q(T > B) <= 1/2` the survival function decays at least
//! like `rho^{floor(t / B)}`, which gives `P(T > N) (N + B / (1 - rho))`.
//! For a family, the companion matrix `A` of the generating-function
//! denominator is raised to powers of two until `||(A/2)^B||_inf <= 1/2`;
//! the same geometric argument then bounds every later coefficient.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

use crate::automaton::PrefixAutomaton;
use crate::counting::count_first_occurrence;
use crate::pattern::Pattern;
use crate::sequences::{SeqFamily, SequenceCache, SequenceError};
use crate::{Nat, Rat};

/// Largest doubling exponent tried when searching for a contracting power.
const MAX_DOUBLINGS: u32 = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("invalid corollary parameters: {0}")]
    InvalidParameters(String),
    #[error("cannot parse corollary {0:?} (expected id1, id1-bar, id2, id3 or alt)")]
    Parse(String),
    #[error("series for {0} does not converge at x = 1/2")]
    Divergent(String),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

fn rat(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

/// `sum_{n=0}^{N} n E_n(S) / c^n`.
pub fn partial_expectation(p: &Pattern, upto: usize) -> Rat {
    let counts = count_first_occurrence(p, upto).counts;
    weighted_sum(
        counts.iter().cloned().map(BigInt::from),
        p.alphabet_size(),
        upto,
    )
}

/// `sum_{n=0}^{N} n a_n / c^n` with the terms supplied in order, accumulated
/// as one integer over `c^N`.
fn weighted_sum(terms: impl Iterator<Item = BigInt>, c: u32, upto: usize) -> Rat {
    let mut numer = BigInt::zero();
    for (n, a) in terms.take(upto + 1).enumerate() {
        numer = numer * c + a * n;
    }
    Rat::new(numer, BigInt::from(c).pow(upto as u32))
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

fn inf_norm(a: &[Vec<BigInt>]) -> BigInt {
    a.iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<BigInt>())
        .max()
        .unwrap_or_default()
}

/// Square `m` until `||m^B||_inf / scale^B <= 1/2`. Returns `B`, that ratio,
/// and the product of `max(1, ratio)` over the smaller powers of two.
fn contracting_power(
    m: Vec<Vec<BigInt>>,
    scale: u32,
    what: &dyn fmt::Display,
) -> Result<(usize, Rat, Rat), IdentityError> {
    let half = Rat::new(1.into(), 2.into());
    let mut power = m;
    let mut block = 1usize;
    let mut growth = Rat::one();
    for _ in 0..=MAX_DOUBLINGS {
        let ratio = Rat::new(inf_norm(&power), BigInt::from(scale).pow(block as u32));
        if ratio <= half {
            return Ok((block, ratio, growth));
        }
        if ratio > Rat::one() {
            growth *= &ratio;
        }
        power = mat_mul(&power, &power);
        block *= 2;
    }
    Err(IdentityError::Divergent(what.to_string()))
}

/// Upper bound on `sum_{n > N} n E_n(S) / c^n`.
pub fn pattern_tail_bound(p: &Pattern, upto: usize) -> Result<Rat, IdentityError> {
    let automaton = PrefixAutomaton::build(p);
    let s = automaton.accept_state();
    let c = p.alphabet_size();
    let mut transfer = vec![vec![BigInt::zero(); s]; s];
    for (q, row) in transfer.iter_mut().enumerate() {
        for &to in automaton.row(q) {
            if to != s {
                row[to] += 1;
            }
        }
    }
    // survival P(T > N): strings of length N that have not hit the pattern
    let mut alive = vec![BigUint::zero(); s];
    alive[0] = BigUint::one();
    for _ in 0..upto {
        let mut next = vec![BigUint::zero(); s];
        for (q, w) in alive.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for &to in automaton.row(q) {
                if to != s {
                    next[to] += w;
                }
            }
        }
        alive = next;
    }
    let survivors: BigUint = alive.iter().sum();
    let survival = Rat::new(survivors.into(), BigInt::from(c).pow(upto as u32));
    let (block, rho, _) = contracting_power(transfer, c, p)?;
    Ok(survival * (rat(upto) + rat(block) / (Rat::one() - rho)))
}

/// Upper bound on `sum_{n > N} n a_n / 2^n` where `a_n` is the coefficient
/// of `x^n` in the family's generating function.
pub fn family_tail_bound(family: SeqFamily, upto: usize) -> Result<Rat, IdentityError> {
    family.validate()?;
    let gf = family.generating_function();
    let rec = gf.recurrence_coefficients();
    let d = rec.len();
    let start = upto.max(gf.numerator_degree());
    let coeffs = gf.coefficients(start + 1);
    let mut exact = Rat::zero();
    for (n, a) in coeffs.iter().enumerate().skip(upto + 1) {
        exact += Rat::new(a * n, BigInt::one() << n);
    }
    if d == 0 {
        // polynomial: nothing beyond the numerator degree
        return Ok(exact);
    }
    let window_norm = (0..d)
        .filter_map(|j| start.checked_sub(j))
        .map(|n| coeffs[n].abs())
        .max()
        .unwrap_or_default();
    let y = Rat::new(window_norm, BigInt::one() << start);
    let mut companion = vec![vec![BigInt::zero(); d]; d];
    companion[0].clone_from(&rec);
    for i in 1..d {
        companion[i][i - 1] = BigInt::one();
    }
    let (block, rho, growth) = contracting_power(companion, 2, &family)?;
    let b = rat(block);
    let one_minus = Rat::one() - &rho;
    let per_block = (&b * rat(start) + &b * (&b - Rat::one()) / rat(2)) / &one_minus;
    let drift = &b * &b * &rho / (&one_minus * &one_minus);
    Ok(exact + y * growth * (per_block + drift))
}

/// Summation identity being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "id", rename_all = "kebab-case")]
pub enum Corollary {
    /// `sum n F^k_{n-1} / 2^n = 2^{k+1} - 2`.
    Id1 { k: usize },
    /// `sum n Fbar^k_{n-2} / 2^n = 2^{k+1}`.
    Id1Bar { k: usize },
    /// `sum n F^{k,m}_{n-2} / 2^n = 2^{k+m+1} + 2^{m+1} - 2`.
    Id2 { k: usize, m: usize },
    /// `sum n Ftilde^{k,m}_{n-3} / 2^n = 2^{k+m+2} + 2^{m+1}`.
    Id3 { k: usize, m: usize },
    /// `sum n G^s_n / 2^n`: `(2^{s+2} - 4)/3` for even `s`, `(2^{s+2} - 2)/3` for odd `s`.
    Alt { s: usize },
}

impl Corollary {
    pub fn validate(&self) -> Result<(), IdentityError> {
        let ok = match *self {
            Corollary::Id1 { k } | Corollary::Id1Bar { k } => k >= 1,
            Corollary::Id2 { k, m } | Corollary::Id3 { k, m } => k >= 1 && m >= 1,
            Corollary::Alt { s } => s >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(IdentityError::InvalidParameters(self.to_string()))
        }
    }

    /// The family whose values are summed, and the index shift: the summand
    /// at `n` uses the family value at `n - shift`.
    pub fn series(&self) -> (SeqFamily, i64) {
        match *self {
            Corollary::Id1 { k } => (SeqFamily::FibOrder { k }, 1),
            Corollary::Id1Bar { k } => (SeqFamily::FibBar { k }, 2),
            Corollary::Id2 { k, m } => (SeqFamily::FibTwoParam { k, m }, 2),
            Corollary::Id3 { k, m } => (SeqFamily::FibTilde { k, m }, 3),
            Corollary::Alt { s } => (SeqFamily::AltG { s }, 0),
        }
    }

    pub fn target(&self) -> Nat {
        let p = |e: usize| BigUint::one() << e;
        match *self {
            Corollary::Id1 { k } => p(k + 1) - 2u32,
            Corollary::Id1Bar { k } => p(k + 1),
            Corollary::Id2 { k, m } => p(k + m + 1) + p(m + 1) - 2u32,
            Corollary::Id3 { k, m } => p(k + m + 2) + p(m + 1),
            Corollary::Alt { s } if s % 2 == 0 => (p(s + 2) - 4u32) / 3u32,
            Corollary::Alt { s } => (p(s + 2) - 2u32) / 3u32,
        }
    }
}

impl fmt::Display for Corollary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Corollary::Id1 { k } => write!(f, "id1:{k}"),
            Corollary::Id1Bar { k } => write!(f, "id1-bar:{k}"),
            Corollary::Id2 { k, m } => write!(f, "id2:{k},{m}"),
            Corollary::Id3 { k, m } => write!(f, "id3:{k},{m}"),
            Corollary::Alt { s } => write!(f, "alt:{s}"),
        }
    }
}

impl FromStr for Corollary {
    type Err = IdentityError;

    /// `id1:K`, `id1-bar:K`, `id2:K,M`, `id3:K,M`, `alt:S`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || IdentityError::Parse(text.to_string());
        let (name, params) = text.trim().split_once(':').ok_or_else(err)?;
        let params: Vec<usize> = params
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| err())?;
        let c = match (name.trim().to_ascii_lowercase().as_str(), params.as_slice()) {
            ("id1", &[k]) => Corollary::Id1 { k },
            ("id1-bar", &[k]) => Corollary::Id1Bar { k },
            ("id2", &[k, m]) => Corollary::Id2 { k, m },
            ("id3", &[k, m]) => Corollary::Id3 { k, m },
            ("alt", &[s]) => Corollary::Alt { s },
            _ => return Err(err()),
        };
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorollaryReport {
    pub corollary: Corollary,
    pub upto: usize,
    pub partial: Rat,
    pub target: Nat,
    /// `target - partial`.
    pub gap: Rat,
    pub tail_bound: Rat,
}

impl CorollaryReport {
    /// `|gap| < tolerance` and `|gap| < tail_bound`.
    pub fn within(&self, tolerance: &Rat) -> bool {
        let gap = self.gap.abs();
        &gap < tolerance && gap < self.tail_bound
    }
}

/// Partial sum through `N` from the sequence values (not the counting DP),
/// with the closed-form target and a certified tail bound.
pub fn verify_corollary(which: Corollary, upto: usize) -> Result<CorollaryReport, IdentityError> {
    which.validate()?;
    let (family, shift) = which.series();
    let mut cache = SequenceCache::new(family)?;
    let terms = (0..=upto).map(|n| BigInt::from(cache.get(n as i64 - shift)));
    let partial = weighted_sum(terms, 2, upto);
    let target = which.target();
    let gap = rat(target.clone()) - &partial;
    Ok(CorollaryReport {
        corollary: which,
        upto,
        partial,
        target,
        gap,
        tail_bound: family_tail_bound(family, upto)?,
    })
}

/// Default truncation point for a pattern of length `s`.
pub fn default_truncation(s: usize) -> usize {
    200.max(50 * s)
}

/// `2 - (N + 2) / 2^N`, the truncated `sum i / 2^i`.
pub fn geometric_partial(upto: usize) -> Rat {
    let two_n = BigInt::one() << upto;
    rat(2) - Rat::new(BigInt::from(upto + 2), two_n)
}

/// Smallest `N` (by doubling from `start`) whose pattern tail bound is below
/// `tolerance`.
pub fn truncation_for(p: &Pattern, tolerance: &Rat, start: usize) -> Result<usize, IdentityError> {
    let mut n = start.max(1);
    loop {
        if &pattern_tail_bound(p, n)? < tolerance {
            return Ok(n);
        }
        n = n
            .checked_mul(2)
            .ok_or_else(|| IdentityError::Divergent(p.to_string()))?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    fn frac(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn pow10_inv(e: u32) -> Rat {
        Rat::new(1.into(), BigInt::from(10).pow(e))
    }

    #[test]
    fn partial_expectation_examples() {
        assert_eq!(partial_expectation(&p("HH"), 3), frac(7, 8));
        for n in [1usize, 5, 17, 64] {
            assert_eq!(partial_expectation(&p("H"), n), geometric_partial(n));
        }
        let gap = rat(4) - partial_expectation(&p("HT"), 200);
        assert!(gap > Rat::zero() && gap < pow10_inv(50));
    }

    #[test]
    fn single_symbol_tail_is_exact() {
        assert_eq!(pattern_tail_bound(&p("H"), 10).unwrap(), frac(12, 1024));
        for n in [3usize, 20, 40] {
            let tail = rat(2) - partial_expectation(&p("H"), n);
            assert_eq!(pattern_tail_bound(&p("H"), n).unwrap(), tail);
        }
    }

    #[test]
    fn tail_bound_magnitudes() {
        assert!(pattern_tail_bound(&p("HT"), 50).unwrap() < pow10_inv(10));
        // HH decays like (golden ratio / 2)^N, so N = 100 leaves ~1e-7
        let hh = pattern_tail_bound(&p("HH"), 100).unwrap();
        let true_tail = rat(6) - partial_expectation(&p("HH"), 100);
        assert!(true_tail <= hh);
        assert!(hh < pow10_inv(5));
        assert!(true_tail > pow10_inv(8));
    }

    #[test]
    fn corollary_targets_and_parsing() {
        assert_eq!(Corollary::Id2 { k: 2, m: 1 }.target(), BigUint::from(18u32));
        assert_eq!(Corollary::Id3 { k: 1, m: 1 }.target(), BigUint::from(20u32));
        assert_eq!(Corollary::Alt { s: 4 }.target(), BigUint::from(20u32));
        assert_eq!(Corollary::Alt { s: 5 }.target(), BigUint::from(42u32));
        for text in ["id1:3", "id1-bar:2", "id2:2,1", "id3:1,4", "alt:7"] {
            assert_eq!(text.parse::<Corollary>().unwrap().to_string(), text);
        }
        assert!(matches!(
            "id2:0,1".parse::<Corollary>(),
            Err(IdentityError::InvalidParameters(_))
        ));
        assert!(matches!(
            "id4:1".parse::<Corollary>(),
            Err(IdentityError::Parse(_))
        ));
    }

    #[test]
    fn id1_k1_is_geometric() {
        for n in [4usize, 10, 33] {
            let report = verify_corollary(Corollary::Id1 { k: 1 }, n).unwrap();
            assert_eq!(report.partial, geometric_partial(n));
            assert_eq!(report.target, BigUint::from(2u32));
            assert!(report.gap.abs() <= report.tail_bound);
        }
    }

    #[test]
    fn id1_k2_at_300() {
        let report = verify_corollary(Corollary::Id1 { k: 2 }, 300).unwrap();
        assert_eq!(report.target, BigUint::from(6u32));
        // (phi / 2)^300 is about 1e-27.6; the gap is roughly 1e-24
        assert!(report.gap > Rat::zero());
        assert!(report.gap < pow10_inv(22));
        assert!(report.gap > pow10_inv(30));
        assert!(report.gap < report.tail_bound);
    }

    #[test]
    fn id3_k1_m1() {
        let report = verify_corollary(Corollary::Id3 { k: 1, m: 1 }, 400).unwrap();
        assert_eq!(report.target, BigUint::from(20u32));
        // the tail decays like (1 - 1/20)^N, so N = 400 leaves about 2e-8
        assert!(report.within(&pow10_inv(7)));
        assert!(!report.within(&pow10_inv(9)));
    }

    #[test]
    fn family_bound_dominates_true_tail() {
        for (c, n) in [
            (Corollary::Id1 { k: 3 }, 60usize),
            (Corollary::Id1Bar { k: 2 }, 40),
            (Corollary::Id2 { k: 2, m: 2 }, 80),
            (Corollary::Alt { s: 5 }, 90),
        ] {
            let near = verify_corollary(c, n).unwrap();
            let far = verify_corollary(c, 4000).unwrap();
            // the far partial sum is a lower bound for the limit
            let lower_tail = &far.partial - &near.partial;
            assert!(lower_tail <= near.tail_bound, "{c}");
        }
    }
}
