//! Human-readable approximations of exact values.

use coinflip::Rat;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

const DIGITS: u32 = 12;

/// `r` rounded to 12 significant digits, positional for moderate exponents
/// and scientific otherwise. Trailing zeros are dropped.
pub fn approx(r: &Rat) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let num = r.numer().abs();
    let den = r.denom().clone();
    let ten = BigInt::from(10);
    // floor(log10 |r|), first as an estimate from bit lengths
    let mut e =
        ((num.bits() as f64 - den.bits() as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let lo = ten.pow(DIGITS - 1);
    let hi = ten.pow(DIGITS);
    let scaled = |e: i64| -> BigInt {
        let shift = DIGITS as i64 - 1 - e;
        let (n, d) = if shift >= 0 {
            (&num * ten.pow(shift as u32), den.clone())
        } else {
            (num.clone(), &den * ten.pow((-shift) as u32))
        };
        (n * 2 + &d) / (d * 2)
    };
    let mut m = scaled(e);
    loop {
        if m >= hi {
            e += 1;
        } else if m < lo {
            e -= 1;
        } else {
            break;
        }
        m = scaled(e);
    }
    let digits = m.to_string();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "1" } else { digits };
    if (-5..DIGITS as i64).contains(&e) {
        let point = e + 1;
        let body = if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), digits)
        } else if point as usize >= digits.len() {
            format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
        } else {
            format!(
                "{}.{}",
                &digits[..point as usize],
                &digits[point as usize..]
            )
        };
        format!("{sign}{body}")
    } else {
        let (head, tail) = digits.split_at(1);
        let mantissa = if tail.is_empty() {
            head.to_string()
        } else {
            format!("{head}.{tail}")
        };
        format!("{sign}{mantissa}e{e}")
    }
}

/// Exact rational as `p/q` (or `p` for integers).
pub fn exact(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
