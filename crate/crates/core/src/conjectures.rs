//! Exhaustive checks of two observations about fair-coin patterns:
//!
//! * power form: for a non-constant pattern of length `s`, `E(S) - 2^s` is
//!   a sum of distinct powers `2^e` with `1 <= e <= s - 1` (possibly none);
//! * reversal: `E(S)` equals `E` of the reversed pattern.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{expected_wait_conway, expected_wait_markov};
use crate::pattern::{enumerate, Pattern, COIN};
use crate::Nat;

/// How the power-form statement is read; copied into every report.
pub const INTERPRETATION: &str = "power form: E(S) - 2^s is a sum of distinct powers 2^e with 1 <= e <= s-1 (empty sum allowed); constant runs excluded";

/// Report format version.
pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConjectureError {
    #[error("pattern {0} is not over a coin alphabet")]
    NotACoin(String),
    #[error("pattern {0} is a constant run, which the power form excludes")]
    ConstantRun(String),
    #[error("scan length must be at least 1")]
    ZeroLength,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerForm {
    pub holds: bool,
    /// `E(S) - 2^s`.
    #[serde(serialize_with = "crate::as_string")]
    pub excess: BigInt,
    /// Set bits of the excess, ascending. Empty when the excess is negative.
    pub exponents: Vec<u64>,
}

fn coin(p: &Pattern) -> Result<(), ConjectureError> {
    if p.alphabet_size() != COIN {
        return Err(ConjectureError::NotACoin(p.render()));
    }
    Ok(())
}

fn power_form_of(p: &Pattern, wait: &Nat) -> PowerForm {
    let s = p.len() as u64;
    let excess = BigInt::from(wait.clone()) - (BigInt::one() << s);
    let exponents: Vec<u64> = match excess.to_biguint() {
        Some(d) => (0..d.bits()).filter(|&e| d.bit(e)).collect(),
        None => Vec::new(),
    };
    let holds = !excess.is_negative() && exponents.iter().all(|&e| e >= 1 && e < s);
    PowerForm {
        holds,
        excess,
        exponents,
    }
}

pub fn power_form_check(p: &Pattern) -> Result<PowerForm, ConjectureError> {
    coin(p)?;
    if p.is_constant() {
        return Err(ConjectureError::ConstantRun(p.render()));
    }
    Ok(power_form_of(p, &expected_wait_conway(p)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReversalVerdict {
    pub holds: bool,
    #[serde(serialize_with = "crate::as_string")]
    pub wait: Nat,
    pub reversed: String,
    #[serde(serialize_with = "crate::as_string")]
    pub reversed_wait: Nat,
}

/// Exact comparison of both Markov solves.
pub fn reversal_check(p: &Pattern) -> Result<ReversalVerdict, ConjectureError> {
    coin(p)?;
    let rev = p.reverse();
    let a = expected_wait_markov(p);
    let b = expected_wait_markov(&rev);
    let nat = |r: num_rational::BigRational| {
        assert!(r.is_integer(), "waiting time is not an integer");
        r.to_integer()
            .to_biguint()
            .expect("waiting time is positive")
    };
    let holds = a == b;
    Ok(ReversalVerdict {
        holds,
        wait: nat(a),
        reversed: rev.render(),
        reversed_wait: nat(b),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    Excluded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub pattern: String,
    pub s: usize,
    #[serde(serialize_with = "crate::as_string")]
    pub wait: Nat,
    /// Exponents of `E - 2^s`; absent for constant runs.
    pub exponents: Option<Vec<u64>>,
    pub power_form: Verdict,
    pub reversed: String,
    #[serde(serialize_with = "crate::as_string")]
    pub reversed_wait: Nat,
    pub reversal: Verdict,
    /// Whether this record was also solved by the Markov chain.
    pub markov_checked: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub pattern: String,
    pub check: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub patterns_scanned: u64,
    pub power_form_checked: u64,
    pub power_form_violations: u64,
    pub reversal_violations: u64,
    pub markov_spot_checks: u64,
    pub markov_mismatches: u64,
    /// Number of non-constant patterns by size of their exponent set.
    pub exponent_set_sizes: BTreeMap<usize, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub schema: u32,
    pub interpretation: String,
    pub max_len: usize,
    pub summary: ScanSummary,
    pub violations: Vec<Violation>,
    pub records: Vec<ScanRecord>,
}

impl ScanReport {
    pub fn violation_count(&self) -> u64 {
        self.summary.power_form_violations + self.summary.reversal_violations
    }
}

/// Every `spot`-th pattern of each length (index 0 included) is re-solved
/// by the Markov chain.
pub const SPOT_EVERY: usize = 100;

fn scan_one(p: Pattern, index: usize) -> (ScanRecord, bool) {
    let wait = expected_wait_conway(&p);
    let rev = p.reverse();
    let reversed_wait = expected_wait_conway(&rev);
    let markov_checked = index.is_multiple_of(SPOT_EVERY);
    let mut markov_ok = true;
    if markov_checked {
        let m = expected_wait_markov(&p);
        markov_ok = m.is_integer() && m.to_integer() == BigInt::from(wait.clone());
    }
    let (exponents, power_form) = if p.is_constant() {
        (None, Verdict::Excluded)
    } else {
        let pf = power_form_of(&p, &wait);
        let v = if pf.holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        };
        (Some(pf.exponents), v)
    };
    let reversal = if wait == reversed_wait {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    let record = ScanRecord {
        pattern: p.render(),
        s: p.len(),
        wait,
        exponents,
        power_form,
        reversed: rev.render(),
        reversed_wait,
        reversal,
        markov_checked,
    };
    (record, markov_ok)
}

/// Check every coin pattern of length `1..=max_len`. Records are in length
/// then lexicographic order whatever the thread count.
pub fn scan(max_len: usize) -> Result<ScanReport, ConjectureError> {
    if max_len == 0 {
        return Err(ConjectureError::ZeroLength);
    }
    let mut records = Vec::new();
    let mut mismatches = 0u64;
    let mut spot = 0u64;
    let mut violations = Vec::new();
    for len in 1..=max_len {
        let patterns: Vec<Pattern> = enumerate(len, COIN).expect("length >= 1").collect();
        let results: Vec<(ScanRecord, bool)> = patterns
            .into_par_iter()
            .enumerate()
            .map(|(i, p)| scan_one(p, i))
            .collect();
        for (record, ok) in results {
            spot += record.markov_checked as u64;
            if !ok {
                mismatches += 1;
                violations.push(Violation {
                    pattern: record.pattern.clone(),
                    check: "markov".into(),
                });
            }
            records.push(record);
        }
    }
    let mut summary = ScanSummary {
        patterns_scanned: records.len() as u64,
        power_form_checked: 0,
        power_form_violations: 0,
        reversal_violations: 0,
        markov_spot_checks: spot,
        markov_mismatches: mismatches,
        exponent_set_sizes: BTreeMap::new(),
    };
    for r in &records {
        if let Some(e) = &r.exponents {
            summary.power_form_checked += 1;
            *summary.exponent_set_sizes.entry(e.len()).or_default() += 1;
        }
        if r.power_form == Verdict::Fails {
            summary.power_form_violations += 1;
            violations.push(Violation {
                pattern: r.pattern.clone(),
                check: "power-form".into(),
            });
        }
        if r.reversal == Verdict::Fails {
            summary.reversal_violations += 1;
            violations.push(Violation {
                pattern: r.pattern.clone(),
                check: "reversal".into(),
            });
        }
    }
    Ok(ScanReport {
        schema: SCHEMA,
        interpretation: INTERPRETATION.into(),
        max_len,
        summary,
        violations,
        records,
    })
}
