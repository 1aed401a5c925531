#![no_main]

use libfuzzer_sys::fuzz_target;
use qtorsion::corpus::parse_curve_arg;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(e) = parse_curve_arg(text) {
        let printed = e.coeffs().map(ToString::to_string).join(",");
        assert_eq!(parse_curve_arg(&printed).unwrap(), e);
    }
});
