#![no_main]

use coinflip::sequences::{eval, gf_coefficients, SeqFamily};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = text.parse::<SeqFamily>() {
        assert_eq!(f.to_string().parse::<SeqFamily>().unwrap(), f);
        let small = match f {
            SeqFamily::FibOrder { k } | SeqFamily::FibBar { k } => k <= 64,
            SeqFamily::FibTwoParam { k, m } | SeqFamily::FibTilde { k, m } => k + m <= 64,
            SeqFamily::AltG { s } => s <= 64,
        };
        if small {
            let coeffs = gf_coefficients(f, 80).unwrap();
            for (n, c) in coeffs.iter().enumerate() {
                assert_eq!(c, &eval(f, n as i64 - f.gf_shift()).unwrap());
            }
        }
    }
});
