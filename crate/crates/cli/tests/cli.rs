use std::process::{Command, Output};

fn mistrust(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mistrust"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(
        mistrust(&["bounds", "--theta", "0.3"]).status.code(),
        Some(0)
    );
    assert_eq!(
        mistrust(&["run", "--protocol", "quantum_poker", "--seed", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        mistrust(&["run", "--protocol", "coin_toss"]).status.code(),
        Some(2)
    );
    assert_eq!(
        mistrust(&["bounds", "--theta", "pi/x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        mistrust(&[
            "run",
            "--protocol",
            "coin_toss",
            "--alice",
            "helstrom",
            "--seed",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        mistrust(&[
            "sweep",
            "--experiment",
            "cheat-bound",
            "--variable",
            "pairs",
            "--values",
            "1",
            "--seed",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(mistrust(&["bounds", "--theta", "2"]).status.code(), Some(1));
    assert_eq!(
        mistrust(&[
            "run",
            "--protocol",
            "coin_toss",
            "--batches",
            "1",
            "--seed",
            "1"
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn bounds_rows_match_grid() {
    let out = mistrust(&["bounds", "--theta", "0.1:pi/2:7", "--r2", "1"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 7);
    let last: Vec<&str> = lines[7].split(',').collect();
    assert_eq!(last[1], "2.0000000000000000e0");
    assert_eq!(last[2], "0.0000000000000000e0");
    assert_eq!(*last.last().unwrap(), "1.0000000000000000e0");
}

#[test]
fn honest_coin_tosses_complete() {
    let out = mistrust(&[
        "run",
        "--protocol",
        "coin_toss",
        "--seed",
        "4",
        "--trials",
        "100",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().any(|l| l == "completed,100,,100"));
}

#[test]
fn transcripts_are_written_per_trial() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = mistrust(&[
        "run",
        "--protocol",
        "codebook",
        "--construction",
        "simplex",
        "--dim",
        "4",
        "--seed",
        "9",
        "--trials",
        "3",
        "--transcripts-dir",
        d,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for i in 0..3 {
        let path = dir.path().join(format!("codebook_commit-9-{i}.jsonl"));
        let text = std::fs::read_to_string(path).unwrap();
        mistrust::harness::Transcript::from_jsonl(&text).unwrap();
    }
}

#[test]
fn json_output_parses() {
    let out = mistrust(&[
        "sweep",
        "--experiment",
        "cheat-bound",
        "--variable",
        "theta",
        "--values",
        "0.1,0.2",
        "--seed",
        "0",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["columns"][1], "cheat_bound");
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn grid_seeds_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus/grid");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let ok = match name.as_str() {
            "counts" => mistrust_cli::grid::parse_count_grid(&text).is_ok(),
            "assign" => mistrust_cli::grid::parse_assignments(&text).is_ok(),
            _ => mistrust_cli::grid::parse_grid(&text).is_ok(),
        };
        assert!(ok, "{name}");
    }
}
