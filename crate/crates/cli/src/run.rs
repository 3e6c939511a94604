//! Batches of seeded sessions and their summary.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use mistrust::harness::{
    derive_seed, run_session, ProtocolParams, StrategyDescriptor, Transcript, Verdict,
};
use rayon::prelude::*;

use crate::error::CliError;
use crate::table::{Cell, Table};

/// Seed of trial `trial` in a batch started from `seed`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    derive_seed(seed, &format!("trial/{trial}"))
}

/// Runs `trials` sessions in parallel; results are in trial order.
pub fn run_trials(
    params: &ProtocolParams,
    alice: &StrategyDescriptor,
    bob: &StrategyDescriptor,
    seed: u64,
    trials: usize,
) -> Result<Vec<Transcript>, CliError> {
    (0..trials)
        .into_par_iter()
        .map(|i| run_session(params, alice, bob, trial_seed(seed, i)).map_err(CliError::from))
        .collect()
}

/// `{protocol}-{seed}-{trial}.jsonl` for every transcript.
pub fn write_transcripts(
    dir: &Path,
    seed: u64,
    transcripts: &[Transcript],
) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    for (i, t) in transcripts.iter().enumerate() {
        let name = format!("{}-{seed}-{i}.jsonl", t.protocol().as_str());
        fs::write(dir.join(name), t.to_jsonl())?;
    }
    Ok(())
}

/// Sample mean, its standard error and the sample count.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64, usize) {
    let k = xs.len();
    if k == 0 {
        return (f64::NAN, f64::NAN, 0);
    }
    let mean = xs.iter().sum::<f64>() / k as f64;
    if k == 1 {
        return (mean, 0.0, 1);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    (mean, (var / k as f64).sqrt(), k)
}

/// The two terminal verdicts a protocol can reach.
pub fn summarize_verdicts(params: &ProtocolParams) -> [Verdict; 2] {
    match params {
        ProtocolParams::CoinToss(_) => [Verdict::Completed, Verdict::CheatDetected],
        _ => [Verdict::Accepted, Verdict::Rejected],
    }
}

/// Rows of (metric, value, stderr, samples).
pub fn summarize(params: &ProtocolParams, transcripts: &[Transcript]) -> Table {
    let mut table = Table::new(["metric", "value", "stderr", "samples"]);
    let total = transcripts.len();
    table.push(vec![
        "trials".into(),
        total.into(),
        Cell::Empty,
        total.into(),
    ]);
    for v in summarize_verdicts(params) {
        let k = transcripts.iter().filter(|t| t.verdict == v).count();
        table.push(vec![v.as_str().into(), k.into(), Cell::Empty, total.into()]);
    }
    for v in summarize_verdicts(params) {
        let xs: Vec<f64> = transcripts
            .iter()
            .map(|t| f64::from(u8::from(t.verdict == v)))
            .collect();
        push_mean(&mut table, &format!("{}_rate", v.as_str()), &xs);
    }

    let mut stats: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for t in transcripts {
        for (k, v) in &t.stats {
            stats.entry(k).or_default().push(*v);
        }
    }
    for (k, xs) in &stats {
        push_mean(&mut table, &format!("stat_{k}"), xs);
    }

    if let ProtocolParams::CoinToss(p) = params {
        let zeros: f64 = stats.get("zeros").map_or(0.0, |z| z.iter().sum());
        let bits = stats.get("zeros").map_or(0, Vec::len) * p.pairs;
        if bits > 0 {
            let f = zeros / bits as f64;
            let se = (f * (1.0 - f) / bits as f64).sqrt();
            table.push(vec![
                "bit_zero_frequency".into(),
                f.into(),
                se.into(),
                bits.into(),
            ]);
        }
    }

    // A committer who picks the revealed bit at random: acceptance rate per
    // choice, and their sum.
    if stats.contains_key("reveal_bit") {
        let mut rates = [(0.0, 0.0); 2];
        for b in [0usize, 1] {
            let xs: Vec<f64> = transcripts
                .iter()
                .filter(|t| t.stats.get("reveal_bit") == Some(&(b as f64)))
                .map(|t| f64::from(u8::from(t.verdict == Verdict::Accepted)))
                .collect();
            let (m, se, _) = mean_stderr(&xs);
            rates[b] = (m, se);
            push_mean(&mut table, &format!("accept_rate_reveal_{b}"), &xs);
        }
        let sum = rates[0].0 + rates[1].0;
        let se = rates[0].1.hypot(rates[1].1);
        table.push(vec![
            "accept_rate_sum".into(),
            sum.into(),
            se.into(),
            total.into(),
        ]);
    }
    table
}

fn push_mean(table: &mut Table, name: &str, xs: &[f64]) {
    let (m, se, k) = mean_stderr(xs);
    let cell = |x: f64| if k == 0 { Cell::Empty } else { x.into() };
    table.push(vec![name.into(), cell(m), cell(se), k.into()]);
}
