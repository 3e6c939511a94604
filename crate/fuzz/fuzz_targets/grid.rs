#![no_main]

use libfuzzer_sys::fuzz_target;
use mistrust_cli::grid::{parse_assignments, parse_count_grid, parse_grid, MAX_GRID_POINTS};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(xs) = parse_grid(text) {
        assert!(xs.len() <= MAX_GRID_POINTS);
        assert!(xs.iter().all(|x| x.is_finite()));
    }
    if let Ok(ns) = parse_count_grid(text) {
        assert!(ns.len() <= MAX_GRID_POINTS);
    }
    let _ = parse_assignments(text);
});
