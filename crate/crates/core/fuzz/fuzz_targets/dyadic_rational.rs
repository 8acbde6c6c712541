#![no_main]

use hyptile::numeric::DyadicRational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if text.len() > 512 {
        return;
    }
    if let Ok(x) = text.parse::<DyadicRational>() {
        let back: DyadicRational = x.to_string().parse().expect("display parses");
        assert_eq!(back, x);
    }
});
