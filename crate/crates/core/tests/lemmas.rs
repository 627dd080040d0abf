//! Prefix-conditioning identities for waiting times and first-occurrence
//! counts, checked exhaustively on short coin patterns.

use coinflip::counting::{conditional_count, count_first_occurrence};
use coinflip::exact::{conditional_wait, conditional_wait_prefix, expected_wait_markov};
use coinflip::pattern::{enumerate, Pattern, COIN};
use coinflip::{Nat, Rat};
use num_bigint::BigInt;

const H: u32 = 0;
const T: u32 = 1;

fn int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

fn pow2(e: usize) -> Rat {
    Rat::from_integer(BigInt::from(1) << e)
}

fn heads_first(max_len: usize) -> impl Iterator<Item = Pattern> {
    (1..=max_len).flat_map(|len| {
        enumerate(len, COIN)
            .unwrap()
            .filter(|p| p.symbols()[0] == H)
    })
}

fn stream(parts: &[(u32, usize)]) -> Vec<u32> {
    parts
        .iter()
        .flat_map(|&(s, n)| std::iter::repeat_n(s, n))
        .collect()
}

#[test]
fn prefix_decomposition_of_wait() {
    for len in 1..=10 {
        for s in enumerate(len, COIN).unwrap() {
            let e = expected_wait_markov(&s);
            for r in 0..=len {
                let prefix = &s.symbols()[..r];
                let e_r = if r == 0 {
                    int(0)
                } else {
                    expected_wait_markov(&s.prefix(r).unwrap())
                };
                let cond = conditional_wait_prefix(&s, prefix).unwrap();
                assert_eq!(e, e_r + cond - int(r as i64), "{s} given {r}");
            }
        }
    }
}

#[test]
fn conditioning_on_leading_heads() {
    for s in heads_first(8) {
        let k = s.runs().runs[0].len;
        let e = expected_wait_markov(&s);
        for i in 0..k {
            let ht = conditional_wait(&s, &stream(&[(H, i), (T, 1)])).unwrap();
            assert_eq!(ht, &e + int(i as i64 + 1), "{s} H^{i}T");
            let h = conditional_wait(&s, &stream(&[(H, i)])).unwrap();
            assert_eq!(h, &e + int(i as i64 + 2) - pow2(i + 1), "{s} H^{i}");
        }
        // with i >= k the statement needs a tail after the leading run
        if s.is_constant() {
            continue;
        }
        for i in k..=k + 6 {
            let ht = conditional_wait(&s, &stream(&[(H, i), (T, 1)])).unwrap();
            assert_eq!(ht, &e + int(i as i64 + 1) - pow2(k + 1), "{s} H^{i}T");
            let h = conditional_wait(&s, &stream(&[(H, i)])).unwrap();
            assert_eq!(h, &e + int(i as i64 + 2) - pow2(k + 1), "{s} H^{i}");
        }
    }
}

#[test]
fn constant_run_ends_inside_long_head_streams() {
    // S = H^k: once the stream holds k heads the game is over
    for k in 1..=6 {
        let s = Pattern::constant(H, k, COIN).unwrap();
        for i in k..=k + 3 {
            assert_eq!(
                conditional_wait(&s, &stream(&[(H, i)])).unwrap(),
                int(k as i64)
            );
        }
    }
}

const N_MAX: usize = 40;

fn e_at(counts: &[Nat], n: i64) -> BigInt {
    if n < 0 {
        BigInt::from(0)
    } else {
        BigInt::from(counts[n as usize].clone())
    }
}

fn cond(s: &Pattern, given: &[u32], n: usize) -> BigInt {
    BigInt::from(conditional_count(s, given, n).unwrap())
}

#[test]
fn counts_given_leading_heads() {
    for s in heads_first(8) {
        let k = s.runs().runs[0].len;
        let e = count_first_occurrence(&s, N_MAX).counts;
        for i in 1..=k {
            for n in 0..=N_MAX {
                let n_ = n as i64;
                let rhs = e_at(&e, n_) - (1..=i as i64).map(|j| e_at(&e, n_ - j)).sum::<BigInt>();
                assert_eq!(cond(&s, &stream(&[(H, i)]), n), rhs, "{s} H^{i} n={n}");
            }
        }
    }
}

#[test]
fn counts_given_leading_run_then_tail() {
    let mut with_tail = 0;
    let mut with_return = 0;
    for s in heads_first(8) {
        let runs = s.runs().lengths();
        if runs.len() < 2 {
            continue;
        }
        with_tail += 1;
        let (k, l) = (runs[0] as i64, runs[1] as i64);
        let e = count_first_occurrence(&s, N_MAX).counts;
        for n in 0..=N_MAX {
            let m = n as i64;
            let two = BigInt::from(2);
            let rhs = e_at(&e, m) - &two * e_at(&e, m - 1) + e_at(&e, m - k - 1);
            let given = stream(&[(H, k as usize), (T, 1)]);
            assert_eq!(cond(&s, &given, n), rhs, "{s} n={n}");
            if runs.len() >= 3 {
                let rhs = e_at(&e, m) - &two * e_at(&e, m - 1) + e_at(&e, m - k - l)
                    - e_at(&e, m - k - l - 1);
                let given = stream(&[(H, k as usize), (T, l as usize), (H, 1)]);
                assert_eq!(cond(&s, &given, n), rhs, "{s} n={n}");
            }
        }
        if runs.len() >= 3 {
            with_return += 1;
        }
    }
    assert_eq!(with_tail, 247);
    assert_eq!(with_return, 219);
}
