#![no_main]

use coinflip::exact::{expected_wait_conway, expected_wait_markov};
use coinflip::pattern::parse;
use coinflip::Rat;
use libfuzzer_sys::fuzz_target;

// first byte picks the alphabet, the rest is pattern text
fuzz_target!(|data: &[u8]| {
    let Some((&c, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let c = u32::from(c % 12);
    if let Ok(p) = parse(text, c) {
        assert_eq!(parse(&p.render(), c).unwrap(), p);
        if p.len() <= 12 {
            let conway = Rat::from_integer(expected_wait_conway(&p).into());
            assert_eq!(expected_wait_markov(&p), conway);
        }
    }
});
