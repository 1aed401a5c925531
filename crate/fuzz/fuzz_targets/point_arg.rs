#![no_main]

use libfuzzer_sys::fuzz_target;
use qtorsion::corpus::parse_point_arg;
use qtorsion::curve::Point;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(Point::Affine(x, y)) = parse_point_arg(text) {
        assert_eq!(parse_point_arg(&format!("{x},{y}")).unwrap(), Point::Affine(x, y));
    }
});
