#![no_main]

use coinflip::identities::Corollary;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = text.parse::<Corollary>() {
        assert_eq!(c.to_string().parse::<Corollary>().unwrap(), c);
        assert!(c.validate().is_ok());
    }
});
