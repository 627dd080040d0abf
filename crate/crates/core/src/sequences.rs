//! Generalized Fibonacci families and their generating functions.
//!
//! | family | definition (value 0 below the base index, 1 at it) | OEIS |
//! |---|---|---|
//! | `FibOrder(k)`  | `F_n = F_{n-1} + ... + F_{n-k}`, base `k-1` | A000045 (k=2), A000073 (k=3), A000078 (k=4) |
//! | `FibBar(k)`    | `F_n = F_{n-1} + ... + F_{n-k} + 1`, base `k-1` | A000071 (k=2), A008937 (k=3), A107066 (k=4) |
//! | `FibTwoParam(k,m)` | `2F_{n-1} - F_{n-k-1} + sum_{i=1..m} F_{n-k-i-1}`, base `k+m-1` | A005314 (1,1), A059633 (2,1) |
//! | `FibTilde(k,m)` | `2F_{n-1} - F_{n-k-1} + 2F_{n-k-2} - F_{n-k-m-2}`, base `k+m-1` | A006053 (0,1), A158943 (0,2), A112575 (1,1) |
//! | `AltG(s)` | alternating-pattern counts, base `s` | |
//!
//! Some older notation writes `F_{n,k}` for `F_n^k`; it is the same object.
//!
//! Values are evaluated from the defining recurrence. The generating
//! functions are separate rational functions whose power series are expanded
//! independently, so the two can be compared.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParameters {
        family: String,
        reason: &'static str,
    },
    #[error("the alternative recurrences are only defined for fib-bar, not {0}")]
    NotFibBar(String),
    #[error("cannot parse sequence family {0:?} (expected fib:K, fib-bar:K, fib-two:K,M, fib-tilde:K,M or alt-g:S)")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SeqFamily {
    /// Fibonacci numbers of order `k`.
    FibOrder { k: usize },
    /// Partial sums of the order-`k` Fibonacci numbers.
    FibBar { k: usize },
    /// Three-run counting family.
    FibTwoParam { k: usize, m: usize },
    /// Four-run counting family.
    FibTilde { k: usize, m: usize },
    /// Counts for the alternating pattern of length `s`.
    AltG { s: usize },
}

/// `a_n = constant + sum coeff * a_{n - lag}` for `n` above the base index.
#[derive(Debug, Clone)]
struct Recurrence {
    terms: Vec<(usize, i64)>,
    constant: i64,
}

impl SeqFamily {
    pub fn validate(&self) -> Result<(), SequenceError> {
        let bad = |reason| {
            Err(SequenceError::InvalidParameters {
                family: self.to_string(),
                reason,
            })
        };
        match *self {
            SeqFamily::FibOrder { k: 0 } | SeqFamily::FibBar { k: 0 } => bad("k must be >= 1"),
            SeqFamily::AltG { s: 0 } => bad("s must be >= 1"),
            _ => Ok(()),
        }
    }

    /// Index holding the single unit seed. Can be -1 for `k = m = 0`.
    pub fn base_index(&self) -> i64 {
        match *self {
            SeqFamily::FibOrder { k } | SeqFamily::FibBar { k } => k as i64 - 1,
            SeqFamily::FibTwoParam { k, m } | SeqFamily::FibTilde { k, m } => (k + m) as i64 - 1,
            SeqFamily::AltG { s } => s as i64,
        }
    }

    fn recurrence(&self) -> Recurrence {
        let mut terms = Vec::new();
        let mut constant = 0;
        match *self {
            SeqFamily::FibOrder { k } => terms.extend((1..=k).map(|j| (j, 1))),
            SeqFamily::FibBar { k } => {
                terms.extend((1..=k).map(|j| (j, 1)));
                constant = 1;
            }
            SeqFamily::FibTwoParam { k, m } => {
                terms.push((1, 2));
                terms.push((k + 1, -1));
                terms.extend((1..=m).map(|i| (k + i + 1, 1)));
            }
            SeqFamily::FibTilde { k, m } => {
                terms.extend([(1, 2), (k + 1, -1), (k + 2, 2), (k + m + 2, -1)]);
            }
            SeqFamily::AltG { s } => {
                // s = 2k: k pairs; s = 2k - 1: k - 1 pairs plus a_{n-2k+1}
                for i in 1..=s / 2 {
                    terms.push((2 * i - 1, 2));
                    terms.push((2 * i, -1));
                }
                if s % 2 == 1 {
                    terms.push((s, 1));
                }
            }
        }
        Recurrence { terms, constant }
    }

    /// Rational generating function whose coefficient of `x^n` is the value at
    /// `n - gf_shift()`.
    pub fn generating_function(&self) -> RationalSeries {
        let mut num = Poly::default();
        let mut den = Poly::default();
        den.add(0, 1);
        match *self {
            SeqFamily::FibOrder { k } => {
                // x^k / (1 - x - ... - x^k)
                num.add(k, 1);
                for j in 1..=k {
                    den.add(j, -1);
                }
            }
            SeqFamily::FibBar { k } => {
                // x^{k+1} / (1 - 2x + x^{k+1})
                num.add(k + 1, 1);
                den.add(1, -2);
                den.add(k + 1, 1);
            }
            SeqFamily::FibTwoParam { k, m } => {
                // x^{k+m+1} / (1 - 2x + x^{k+1} - sum_{i=1..m} x^{k+i+1})
                num.add(k + m + 1, 1);
                den.add(1, -2);
                den.add(k + 1, 1);
                for i in 1..=m {
                    den.add(k + i + 1, -1);
                }
            }
            SeqFamily::FibTilde { k, m } => {
                // x^{k+m+2} / (1 - 2x + x^{k+1} - 2x^{k+2} + x^{k+m+2})
                num.add(k + m + 2, 1);
                den.add(1, -2);
                den.add(k + 1, 1);
                den.add(k + 2, -2);
                den.add(k + m + 2, 1);
            }
            SeqFamily::AltG { s } => {
                // s = 2k:     x^{2k}(1+x)   / (1 - sum_{i=1..2k} x^i + x^{2k+1})
                // s = 2k - 1: x^{2k-1}(1+x) / (1 - sum_{i=1..2k-2} x^i - x^{2k})
                num.add(s, 1);
                num.add(s + 1, 1);
                if s % 2 == 0 {
                    for i in 1..=s {
                        den.add(i, -1);
                    }
                    den.add(s + 1, 1);
                } else {
                    for i in 1..s {
                        den.add(i, -1);
                    }
                    den.add(s + 1, -1);
                }
            }
        }
        RationalSeries {
            numerator: num.0,
            denominator: den.0,
        }
    }

    /// Offset between generating-function index and sequence index.
    pub fn gf_shift(&self) -> i64 {
        match self {
            SeqFamily::FibOrder { .. } => 1,
            SeqFamily::FibBar { .. } | SeqFamily::FibTwoParam { .. } => 2,
            SeqFamily::FibTilde { .. } => 3,
            SeqFamily::AltG { .. } => 0,
        }
    }
}

impl fmt::Display for SeqFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SeqFamily::FibOrder { k } => write!(f, "fib:{k}"),
            SeqFamily::FibBar { k } => write!(f, "fib-bar:{k}"),
            SeqFamily::FibTwoParam { k, m } => write!(f, "fib-two:{k},{m}"),
            SeqFamily::FibTilde { k, m } => write!(f, "fib-tilde:{k},{m}"),
            SeqFamily::AltG { s } => write!(f, "alt-g:{s}"),
        }
    }
}

impl FromStr for SeqFamily {
    type Err = SequenceError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || SequenceError::Parse(text.to_string());
        let (name, params) = text.trim().split_once(':').ok_or_else(err)?;
        let params: Vec<usize> = params
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| err())?;
        let family = match (name.trim().to_ascii_lowercase().as_str(), params.as_slice()) {
            ("fib" | "fib-order", &[k]) => SeqFamily::FibOrder { k },
            ("fib-bar", &[k]) => SeqFamily::FibBar { k },
            ("fib-two", &[k, m]) => SeqFamily::FibTwoParam { k, m },
            ("fib-tilde", &[k, m]) => SeqFamily::FibTilde { k, m },
            ("alt-g" | "alt", &[s]) => SeqFamily::AltG { s },
            _ => return Err(err()),
        };
        family.validate()?;
        Ok(family)
    }
}

#[derive(Debug, Default)]
struct Poly(Vec<BigInt>);

impl Poly {
    fn add(&mut self, degree: usize, coeff: i64) {
        if self.0.len() <= degree {
            self.0.resize(degree + 1, BigInt::zero());
        }
        self.0[degree] += coeff;
    }
}

/// `numerator / denominator` with integer coefficients, lowest degree first,
/// and `denominator[0] == 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    pub numerator: Vec<BigInt>,
    pub denominator: Vec<BigInt>,
}

impl RationalSeries {
    /// First `upto` power-series coefficients by long division.
    pub fn coefficients(&self, upto: usize) -> Vec<BigInt> {
        assert!(self.denominator.first().is_some_and(|d| d.is_one()));
        let mut out: Vec<BigInt> = Vec::with_capacity(upto);
        for n in 0..upto {
            let mut a = self.numerator.get(n).cloned().unwrap_or_default();
            for (j, d) in self.denominator.iter().enumerate().skip(1).take(n) {
                if !d.is_zero() {
                    a -= d * &out[n - j];
                }
            }
            out.push(a);
        }
        out
    }

    /// Coefficients `c_j` with `a_n = sum_j c_j a_{n-j}` for all `n` past the
    /// numerator degree.
    pub fn recurrence_coefficients(&self) -> Vec<BigInt> {
        self.denominator.iter().skip(1).map(|d| -d).collect()
    }

    pub fn numerator_degree(&self) -> usize {
        self.numerator
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }
}

/// Iteratively filled values of one family.
#[derive(Debug, Clone)]
pub struct SequenceCache {
    family: SeqFamily,
    base: i64,
    rec: Recurrence,
    values: Vec<BigInt>,
}

impl SequenceCache {
    pub fn new(family: SeqFamily) -> Result<Self, SequenceError> {
        family.validate()?;
        Ok(SequenceCache {
            family,
            base: family.base_index(),
            rec: family.recurrence(),
            values: vec![BigInt::one()],
        })
    }

    pub fn family(&self) -> SeqFamily {
        self.family
    }

    fn signed(&self, n: i64) -> BigInt {
        if n < self.base {
            BigInt::zero()
        } else {
            self.values[(n - self.base) as usize].clone()
        }
    }

    pub fn get(&mut self, n: i64) -> Nat {
        if n < self.base {
            return BigUint::zero();
        }
        let idx = (n - self.base) as usize;
        while self.values.len() <= idx {
            let at = self.base + self.values.len() as i64;
            let mut v = BigInt::from(self.rec.constant);
            for &(lag, coeff) in &self.rec.terms {
                let prev = self.signed(at - lag as i64);
                if !prev.is_zero() {
                    v += prev * coeff;
                }
            }
            self.values.push(v);
        }
        let v = &self.values[idx];
        assert!(
            !v.is_negative(),
            "{} produced a negative value at n={n}",
            self.family
        );
        v.magnitude().clone()
    }
}

pub fn eval(family: SeqFamily, n: i64) -> Result<Nat, SequenceError> {
    Ok(SequenceCache::new(family)?.get(n))
}

/// Values at `from..=to`.
pub fn eval_range(family: SeqFamily, from: i64, to: i64) -> Result<Vec<Nat>, SequenceError> {
    let mut cache = SequenceCache::new(family)?;
    Ok((from..=to).map(|n| cache.get(n)).collect())
}

/// The two alternative characterizations of `FibBar(k)` at `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibBarRoutes {
    /// `a_n = 2 a_{n-1} - a_{n-k-1}` above the base.
    pub doubling: Nat,
    /// `F_0^k + F_1^k + ... + F_n^k`.
    pub partial_sum: Nat,
}

pub fn eval_alt_recurrence(family: SeqFamily, n: i64) -> Result<FibBarRoutes, SequenceError> {
    let SeqFamily::FibBar { k } = family else {
        return Err(SequenceError::NotFibBar(family.to_string()));
    };
    family.validate()?;
    let base = k as i64 - 1;
    let doubling = if n < base {
        BigUint::zero()
    } else {
        let len = (n - base) as usize + 1;
        let mut vals: Vec<BigInt> = Vec::with_capacity(len);
        vals.push(BigInt::one());
        for i in 1..len {
            let back = i as i64 - k as i64 - 1;
            let mut v = &vals[i - 1] * 2u32;
            if back >= 0 {
                v -= &vals[back as usize];
            }
            vals.push(v);
        }
        vals[len - 1].magnitude().clone()
    };
    let mut fib = SequenceCache::new(SeqFamily::FibOrder { k })?;
    let partial_sum = (0..=n).map(|i| fib.get(i)).sum();
    Ok(FibBarRoutes {
        doubling,
        partial_sum,
    })
}

/// First `upto` coefficients of the family's generating function.
pub fn gf_coefficients(family: SeqFamily, upto: usize) -> Result<Vec<Nat>, SequenceError> {
    family.validate()?;
    Ok(family
        .generating_function()
        .coefficients(upto)
        .into_iter()
        .map(|c| {
            assert!(!c.is_negative(), "{family}: negative series coefficient");
            c.magnitude().clone()
        })
        .collect())
}
