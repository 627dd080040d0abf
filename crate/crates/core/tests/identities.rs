use coinflip::exact::expected_wait_markov;
use coinflip::identities::{
    default_truncation, partial_expectation, pattern_tail_bound, verify_corollary, Corollary,
};
use coinflip::pattern::{enumerate, COIN};
use coinflip::Rat;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

fn tol() -> Rat {
    Rat::new(1.into(), BigInt::from(10).pow(9))
}

fn grid() -> Vec<Corollary> {
    let mut out = Vec::new();
    for k in 1..=8 {
        out.push(Corollary::Id1 { k });
        out.push(Corollary::Id1Bar { k });
    }
    for k in 1..=5 {
        for m in 1..=5 {
            out.push(Corollary::Id2 { k, m });
            out.push(Corollary::Id3 { k, m });
        }
    }
    for s in 1..=12 {
        out.push(Corollary::Alt { s });
    }
    out
}

#[test]
fn pattern_partial_sums_within_bound() {
    for len in 1..=10 {
        for p in enumerate(len, COIN).unwrap() {
            let e = expected_wait_markov(&p);
            let n = default_truncation(len);
            let gap = &e - partial_expectation(&p, n);
            assert!(gap > Rat::zero(), "{p}");
            assert!(gap <= pattern_tail_bound(&p, n).unwrap(), "{p}");
            let later = &e - partial_expectation(&p, 2 * n);
            assert!(later < gap, "{p}");
        }
    }
}

#[test]
fn corollary_gaps_are_certified_at_400() {
    for c in grid() {
        let r = verify_corollary(c, 400).unwrap();
        assert!(r.gap > Rat::zero(), "{c}");
        assert!(r.gap < r.tail_bound, "{c}");
        let later = verify_corollary(c, 800).unwrap();
        assert!(later.gap < r.gap, "{c}");
    }
}

/// The 1e-9 tolerance at a truncation point where the certified bound
/// itself is below 1e-9 (found by doubling from 400).
#[test]
fn corollaries_reach_tolerance_at_adequate_truncation() {
    let cases = grid().into_iter().filter(|c| match *c {
        Corollary::Id2 { k, m } | Corollary::Id3 { k, m } => k <= 3 && m <= 3,
        Corollary::Alt { s } => s <= 8,
        _ => true,
    });
    for c in cases {
        let mut n = 400;
        let report = loop {
            let r = verify_corollary(c, n).unwrap();
            if r.tail_bound < tol() {
                break r;
            }
            n *= 2;
            assert!(n <= 102_400, "{c}: bound still above 1e-9");
        };
        assert!(report.gap.abs() < tol(), "{c} at N={n}");
    }
}
