//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fail.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use mistrust::bitwise::{
    bob_ensemble, bob_entropy, encode_bit, helstrom_attack, reveal_probabilities,
};
use mistrust::codebook::{
    bob_info_report, cheat_operator, gram_matrix, multistring_bound, random_codebook,
    simplex_codebook,
};
use mistrust::cointoss::{
    best_of_m_advantage, expected_best_prefix, run_coin_toss, singlet, singlet_test, AliceStrategy,
    BobStrategy, CoinTossParams, PairState,
};
use mistrust::harness::{rng_stream, Verdict};
use mistrust::qmath::{
    binary_entropy, hermitian_eigen, projector, von_neumann_entropy, StateVector,
};
use rand::seq::index::sample;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn within_sigmas(observed: f64, expected: f64, sigma: f64, k: f64) -> bool {
    (observed - expected).abs() <= k * sigma
}

fn cheat_ceiling() -> Check {
    let mut rng = rng_stream(101, "acceptance/cheat");
    let mut worst_gap = f64::NEG_INFINITY;
    for theta in [0.05, 0.1, 0.3, 0.6, 1.0, FRAC_PI_2] {
        let q = projector(&encode_bit(false, theta).map_err(e)?)
            .add(&projector(&encode_bit(true, theta).map_err(e)?))
            .map_err(e)?;
        let eig = hermitian_eigen(&q).map_err(e)?;
        let (top, state) = eig.top();
        let bound = 1.0 + theta.sin();
        ensure((top - bound).abs() < 1e-9, || {
            format!("θ={theta}: λ_max {top} vs {bound}")
        })?;
        let (p0, p1) = reveal_probabilities(state, theta).map_err(e)?;
        ensure((p0 + p1 - bound).abs() < 1e-9, || {
            format!("θ={theta}: top state gives {}", p0 + p1)
        })?;
        for _ in 0..10_000 {
            let s = StateVector::haar(2, &mut rng).map_err(e)?;
            let (p0, p1) = reveal_probabilities(&s, theta).map_err(e)?;
            worst_gap = worst_gap.max(p0 + p1 - bound);
        }
    }
    ensure(worst_gap <= 1e-9, || {
        format!("random state exceeded the ceiling by {worst_gap}")
    })?;
    Ok(format!("largest random-state excess {worst_gap:.3e}"))
}

fn ensemble_entropy() -> Check {
    let mut worst: f64 = 0.0;
    for theta in [0.1, 0.3, 1.0] {
        for n in 1..=8 {
            let rho = bob_ensemble(n, theta).map_err(e)?;
            let exact = von_neumann_entropy(&rho).map_err(e)?;
            let closed = n as f64 * binary_entropy((1.0 + theta.sin()) / 2.0).map_err(e)?;
            worst = worst.max((exact - closed).abs());
        }
    }
    ensure(worst < 1e-9, || format!("max deviation {worst:.3e}"))?;
    Ok(format!("max deviation {worst:.3e}"))
}

fn holevo_ceiling() -> Check {
    let mut notes = Vec::new();
    for (n, theta) in [(8, 0.3), (16, 0.6)] {
        let mut rng = rng_stream(303, &format!("acceptance/helstrom/{n}"));
        let r = helstrom_attack(n, theta, 100_000, &mut rng).map_err(e)?;
        let ceiling = bob_entropy(n, theta).map_err(e)?;
        ensure(r.info_bits <= ceiling + 4.0 * r.info_sigma, || {
            format!("n={n} θ={theta}: {} bits > {ceiling} + 4σ", r.info_bits)
        })?;
        let expected = (1.0 + theta.cos()) / 2.0;
        let sigma = (expected * (1.0 - expected) / r.qubits as f64).sqrt();
        ensure(within_sigmas(r.success_rate, expected, sigma, 3.0), || {
            format!("n={n} θ={theta}: success {} vs {expected}", r.success_rate)
        })?;
        notes.push(format!("n={n}: {:.3} ≤ {ceiling:.3} bits", r.info_bits));
    }
    Ok(notes.join(", "))
}

fn multistring_bound_check() -> Check {
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_mismatch: f64 = 0.0;
    for seed in 0..5 {
        let cb = random_codebook(16, 32, 0.25, seed, 20).map_err(e)?;
        let mut rng = rng_stream(seed, "acceptance/targets");
        for r in [2, 4, 8] {
            for _ in 0..50 {
                let targets = sample(&mut rng, 32, r).into_vec();
                let q = cheat_operator(&cb, &targets)
                    .map_err(e)?
                    .eigen()
                    .map_err(e)?;
                let g = gram_matrix(&cb, &targets).map_err(e)?.eigen().map_err(e)?;
                worst_excess = worst_excess.max(q.eigenvalues()[0] - multistring_bound(r, 0.25));
                for k in 0..16 {
                    let gk = g.eigenvalues().get(k).copied().unwrap_or(0.0);
                    worst_mismatch = worst_mismatch.max((q.eigenvalues()[k] - gk).abs());
                }
            }
        }
    }
    ensure(worst_excess <= 1e-9, || {
        format!("λ_max exceeded the bound by {worst_excess}")
    })?;
    ensure(worst_mismatch < 1e-9, || {
        format!("Gram/Q spectra differ by {worst_mismatch}")
    })?;
    Ok(format!(
        "slack ≥ {:.3}, spectral mismatch {worst_mismatch:.1e}",
        -worst_excess
    ))
}

fn simplex_exactness() -> Check {
    for d in 2..=16usize {
        let cb = simplex_codebook(d).map_err(e)?;
        let v = cb.vectors();
        for i in 0..v.len() {
            for j in 0..i {
                let ip = v[i].inner(&v[j]).map_err(e)?;
                ensure(
                    (ip.re + 1.0 / d as f64).abs() < 1e-12 && ip.im.abs() < 1e-12,
                    || format!("d={d}: ⟨v{i}|v{j}⟩ = {ip}"),
                )?;
            }
        }
        let all: Vec<usize> = (0..=d).collect();
        let g = gram_matrix(&cb, &all).map_err(e)?.eigen().map_err(e)?;
        let top = (d + 1) as f64 / d as f64;
        let ok = g.eigenvalues()[..d].iter().all(|l| (l - top).abs() < 1e-9)
            && g.eigenvalues()[d].abs() < 1e-9;
        ensure(ok, || format!("d={d}: Gram spectrum {:?}", g.eigenvalues()))?;
    }
    Ok("d = 2..16".into())
}

fn hiding_gap() -> Check {
    let cb = random_codebook(16, 64, 0.35, 6, 20).map_err(e)?;
    let info = bob_info_report(&cb).map_err(e)?;
    ensure(info.holevo <= info.dim_bound + 1e-9, || {
        format!("Holevo {} above log₂ d {}", info.holevo, info.dim_bound)
    })?;
    ensure(info.dim_bound < info.committed_bits as f64, || {
        format!(
            "log₂ d {} not below {} committed bits",
            info.dim_bound, info.committed_bits
        )
    })?;
    Ok(format!(
        "χ = {:.6} ≤ log₂ d = {} < {} bits",
        info.holevo, info.dim_bound, info.committed_bits
    ))
}

fn honest_coin_toss() -> Check {
    let params = CoinTossParams::new(4, 16).map_err(e)?;
    let mut zeros = 0usize;
    for seed in 0..1000 {
        let out = run_coin_toss(&params, &AliceStrategy::Honest, &BobStrategy::Honest, seed)
            .map_err(e)?;
        ensure(out.verdict == Verdict::Completed, || {
            format!("seed {seed}: {}", out.verdict)
        })?;
        let (a, b) = (out.bits.unwrap(), out.bob_bits.unwrap());
        ensure(a == b.complement(), || format!("seed {seed}: {a} vs {b}"))?;
        zeros += a.len() - a.count_ones();
    }
    let total = 16_000.0;
    let f = zeros as f64 / total;
    ensure(within_sigmas(f, 0.5, (0.25 / total).sqrt(), 3.0), || {
        format!("zero frequency {f}")
    })?;
    Ok(format!("zero frequency {f:.4}"))
}

fn cheating_alice() -> Check {
    let mut rng = rng_stream(808, "acceptance/singlet-test");
    let trials = 100_000;
    let tampered = PairState::product(false, true);
    let mut notes = Vec::new();
    for k in [1usize, 2, 4] {
        let mut batch = vec![singlet(); 16];
        for slot in batch.iter_mut().step_by(3).take(k) {
            *slot = tampered.clone();
        }
        let passes = (0..trials)
            .map(|_| singlet_test(&batch, &mut rng).map(|f| usize::from(f.is_none())))
            .sum::<Result<usize, _>>()
            .map_err(e)?;
        let p = 0.5f64.powi(k as i32);
        let rate = passes as f64 / trials as f64;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        ensure(within_sigmas(rate, p, sigma, 3.0), || {
            format!("k={k}: pass rate {rate} vs {p}")
        })?;
        if k == 1 {
            let fail = 1.0 - rate;
            ensure(within_sigmas(fail, 0.5, sigma, 3.0), || {
                format!("k=1: fail rate {fail}")
            })?;
        }
        notes.push(format!("k={k}: {rate:.4}"));
    }
    Ok(notes.join(", "))
}

fn cheating_bob() -> Check {
    let two = CoinTossParams::new(2, 32).map_err(e)?;
    let est = best_of_m_advantage(&two, 10_000, 9);
    let exact = expected_best_prefix(2, 32);
    ensure(within_sigmas(est.mean, exact, est.stderr, 3.0), || {
        format!(
            "M=2: {:.4} ± {:.4} vs exact {exact:.4}",
            est.mean, est.stderr
        )
    })?;
    let mut notes = vec![format!("M=2: {:.3} (exact {exact:.3})", est.mean)];
    for m in [4usize, 16, 64, 256] {
        let params = CoinTossParams::new(m, 64).map_err(e)?;
        let est = best_of_m_advantage(&params, 1000, m as u64);
        let log_m = (m as f64).log2();
        ensure((est.mean - log_m).abs() <= 2.0, || {
            format!("M={m}: {} vs log₂ M {log_m}", est.mean)
        })?;
        notes.push(format!("M={m}: {:.2}", est.mean));
    }
    Ok(notes.join(", "))
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_mistrust"))
        .args(args)
        .status()
        .map_err(e)?;
    ensure(status.success(), || {
        format!("`mistrust {}` exited with {status}", args.join(" "))
    })
}

fn commands(dir: &Path) -> Vec<Vec<String>> {
    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        [
            s(&[
                "bounds",
                "--theta",
                "0.05:pi/2:9",
                "--n",
                "1,4,16",
                "--r",
                "3",
                "--out",
            ]),
            vec![p("bounds.csv")],
        ]
        .concat(),
        [
            s(&["bounds", "--theta", "0.3", "--format", "json", "--out"]),
            vec![p("bounds.json")],
        ]
        .concat(),
        [
            s(&[
                "run",
                "--protocol",
                "coin_toss",
                "--seed",
                "11",
                "--trials",
                "40",
                "--bob",
                "best_of_m",
                "--transcripts-dir",
            ]),
            vec![p("toss"), "--out".into(), p("toss.csv")],
        ]
        .concat(),
        [
            s(&[
                "run",
                "--protocol",
                "bitwise",
                "--alice",
                "cheat",
                "--bob",
                "helstrom",
                "--seed",
                "12",
                "--trials",
                "30",
                "--transcripts-dir",
            ]),
            vec![
                p("bit"),
                "--out".into(),
                p("bit.json"),
                "--format".into(),
                "json".into(),
            ],
        ]
        .concat(),
        [
            s(&[
                "run",
                "--protocol",
                "codebook",
                "--alice",
                "cheat:r=3",
                "--dim",
                "8",
                "--count",
                "16",
                "--epsilon",
                "0.5",
                "--seed",
                "13",
                "--trials",
                "10",
                "--transcripts-dir",
            ]),
            vec![p("code"), "--out".into(), p("code.csv")],
        ]
        .concat(),
        [
            s(&[
                "sweep",
                "--experiment",
                "best-of-m",
                "--variable",
                "batches",
                "--values",
                "2,8,32",
                "--trials",
                "200",
                "--seed",
                "14",
                "--out",
            ]),
            vec![p("sweep-bom.csv")],
        ]
        .concat(),
        [
            s(&[
                "sweep",
                "--experiment",
                "session",
                "--protocol",
                "coin_toss",
                "--alice",
                "tamper:fraction=0.1",
                "--variable",
                "pairs",
                "--values",
                "4,8,16",
                "--trials",
                "50",
                "--seed",
                "15",
                "--out",
            ]),
            vec![p("sweep-session.csv")],
        ]
        .concat(),
        [
            s(&[
                "sweep",
                "--experiment",
                "helstrom",
                "--variable",
                "theta",
                "--values",
                "0.2:1.2:3",
                "--fixed",
                "n=4",
                "--trials",
                "2000",
                "--seed",
                "16",
                "--out",
            ]),
            vec![p("sweep-helstrom.csv")],
        ]
        .concat(),
    ]
}

fn files(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).map_err(e)? {
            let path = entry.map_err(e)?.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path
                    .strip_prefix(dir)
                    .map_err(e)?
                    .to_string_lossy()
                    .into_owned();
                out.push((rel, std::fs::read(&path).map_err(e)?));
            }
        }
    }
    out.sort();
    Ok(out)
}

fn cli_determinism() -> Check {
    let a = tempfile::tempdir().map_err(e)?;
    let b = tempfile::tempdir().map_err(e)?;
    for dir in [a.path(), b.path()] {
        for args in commands(dir) {
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            run_cli(&args)?;
        }
    }
    let (fa, fb) = (files(a.path())?, files(b.path())?);
    ensure(fa.len() == fb.len(), || {
        "runs produced different file sets".into()
    })?;
    for ((na, ca), (nb, cb)) in fa.iter().zip(&fb) {
        ensure(na == nb && ca == cb, || {
            format!("{na} differs between runs")
        })?;
    }
    ensure(
        fa.iter().any(|(n, _)| n.ends_with("coin_toss-11-39.jsonl")),
        || "transcript naming".into(),
    )?;
    Ok(format!("{} files byte-identical", fa.len()))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    check: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "bit-wise cheat ceiling 1 + sin θ",
            limit: Some(Duration::from_secs(5)),
            check: cheat_ceiling,
        },
        Criterion {
            id: 2,
            name: "ensemble entropy n·H₂((1 + sin θ)/2)",
            limit: Some(Duration::from_secs(30)),
            check: ensemble_entropy,
        },
        Criterion {
            id: 3,
            name: "Helstrom attack under the entropy ceiling",
            limit: None,
            check: holevo_ceiling,
        },
        Criterion {
            id: 4,
            name: "multistring bound 1 + (r − 1)ε",
            limit: Some(Duration::from_secs(10)),
            check: multistring_bound_check,
        },
        Criterion {
            id: 5,
            name: "simplex codebook geometry",
            limit: None,
            check: simplex_exactness,
        },
        Criterion {
            id: 6,
            name: "codebook hiding gap",
            limit: None,
            check: hiding_gap,
        },
        Criterion {
            id: 7,
            name: "honest coin toss",
            limit: None,
            check: honest_coin_toss,
        },
        Criterion {
            id: 8,
            name: "tampered pairs fail the singlet test",
            limit: None,
            check: cheating_alice,
        },
        Criterion {
            id: 9,
            name: "best-of-M receiver fixes about log₂ M bits",
            limit: Some(Duration::from_secs(60)),
            check: cheating_bob,
        },
        Criterion {
            id: 10,
            name: "CLI determinism",
            limit: None,
            check: cli_determinism,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.check)();
        let took = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if took > limit => {
                Err(format!("took {took:.2?}, limit {limit:?}"))
            }
            (r, _) => r,
        };
        match result {
            Ok(note) => println!("PASS {:>2} {} ({note}; {took:.2?})", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {}: {why} ({took:.2?})", c.id, c.name);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
