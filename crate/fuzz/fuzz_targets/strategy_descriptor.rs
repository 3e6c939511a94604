#![no_main]

use libfuzzer_sys::fuzz_target;
use mistrust::harness::{Party, StrategyDescriptor};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for party in [Party::Alice, Party::Bob] {
        if let Ok(d) = StrategyDescriptor::parse(party, text) {
            let again = StrategyDescriptor::parse(party, &d.to_string()).expect("display parses");
            assert_eq!(again, d);
        }
    }
});
