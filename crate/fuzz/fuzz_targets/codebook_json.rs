#![no_main]

use libfuzzer_sys::fuzz_target;
use mistrust::codebook::Codebook;

fuzz_target!(|data: &[u8]| {
    if let Ok(cb) = Codebook::from_slice(data) {
        assert!(cb.recertify().is_ok());
        let back = Codebook::from_json(&cb.to_json()).expect("re-read what we wrote");
        assert_eq!(back, cb);
    }
});
