#![no_main]

use libfuzzer_sys::fuzz_target;
use qtorsion::corpus::{parse_corpus_json, CorpusEntry};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(entries) = parse_corpus_json(text) {
        let again = serde_json::to_string(&entries).unwrap();
        let back: Vec<CorpusEntry> = serde_json::from_str(&again).unwrap();
        assert_eq!(back, entries);
    }
});
