//! Runs the checked-in fuzz seeds through the same assertions as the fuzz
//! targets, so the parsers stay covered on a stable toolchain.

use std::fs;
use std::path::Path;

use coinflip::exact::{expected_wait_conway, expected_wait_markov};
use coinflip::identities::Corollary;
use coinflip::pattern::parse;
use coinflip::sequences::SeqFamily;
use coinflip::Rat;

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fuzz/corpus")
        .join(target);
    let mut out: Vec<Vec<u8>> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| fs::read(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn pattern_seeds() {
    let mut parsed = 0;
    for data in seeds("parse_pattern") {
        let Some((&c, rest)) = data.split_first() else {
            continue;
        };
        let Ok(text) = std::str::from_utf8(rest) else {
            continue;
        };
        let c = u32::from(c % 12);
        if let Ok(p) = parse(text, c) {
            parsed += 1;
            assert_eq!(parse(&p.render(), c).unwrap(), p);
            let conway = Rat::from_integer(expected_wait_conway(&p).into());
            assert_eq!(expected_wait_markov(&p), conway);
        }
    }
    assert!(parsed >= 4);
}

#[test]
fn family_seeds() {
    for data in seeds("parse_family") {
        let text = String::from_utf8(data).unwrap();
        if let Ok(f) = text.parse::<SeqFamily>() {
            assert_eq!(f.to_string().parse::<SeqFamily>().unwrap(), f);
        }
    }
}

#[test]
fn corollary_seeds() {
    for data in seeds("parse_corollary") {
        let text = String::from_utf8(data).unwrap();
        if let Ok(c) = text.parse::<Corollary>() {
            assert_eq!(c.to_string().parse::<Corollary>().unwrap(), c);
        }
    }
}
