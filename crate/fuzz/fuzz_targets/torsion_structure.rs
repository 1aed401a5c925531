#![no_main]

use libfuzzer_sys::fuzz_target;
use qtorsion::divpoly::TorsionStructure;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Some(t) = TorsionStructure::parse(text) {
        assert_eq!(TorsionStructure::parse(&t.to_string()), Some(t));
    }
});
