#![no_main]

use hyptile::subshift::{language, SubshiftSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = SubshiftSpec::from_json(text) else { return };
    let again = SubshiftSpec::from_json(&spec.to_json()).expect("serialized spec parses");
    assert_eq!(again, spec);
    // keep the language small enough to enumerate
    if spec.alphabet().len() <= 4 {
        let _ = language(&spec, 3);
    }
});
