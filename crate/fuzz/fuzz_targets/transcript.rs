#![no_main]

use libfuzzer_sys::fuzz_target;
use mistrust::harness::Transcript;

fuzz_target!(|data: &[u8]| {
    if let Ok(t) = Transcript::from_slice(data) {
        let text = t.to_jsonl();
        let back = Transcript::from_jsonl(&text).expect("re-read what we wrote");
        assert_eq!(back.to_jsonl(), text);
    }
});
