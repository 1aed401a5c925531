#![no_main]

use libfuzzer_sys::fuzz_target;
use qtorsion::corpus::parse_corpus_csv;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(entries) = parse_corpus_csv(text) {
        for e in &entries {
            // accepted rows are nonsingular and have distinct labels
            assert!(!e.curve().disc().eq(&qtorsion::exact::ri(0)));
        }
        let mut labels: Vec<&str> = entries.iter().map(|e| e.label.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        assert_eq!(labels.len(), entries.len());
    }
});
