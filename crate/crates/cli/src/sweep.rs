//! One-dimensional parameter sweeps.

use std::collections::{BTreeMap, BTreeSet};

use mistrust::bitwise::{bob_entropy, cheat_bound, helstrom_attack, optimal_bit_cheat};
use mistrust::cointoss::{best_of_m_advantage, expected_best_prefix, CoinTossParams};
use mistrust::harness::{derive_seed, rng_stream, Protocol, StrategyDescriptor};
use rayon::prelude::*;

use crate::error::CliError;
use crate::params::{ProtocolArgs, PARAMETER_NAMES};
use crate::run::{mean_stderr, run_trials, summarize_verdicts};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Experiment {
    /// 1 + sin θ against the largest eigenvalue of P₀ + P₁.
    CheatBound,
    /// Cheating receiver's coin-toss advantage against log₂ M.
    BestOfM,
    /// Per-qubit Helstrom attack on the bit-wise commitment.
    Helstrom,
    /// Full sessions of `protocol` between the given strategies.
    Session,
}

impl Experiment {
    fn variables(self) -> &'static [&'static str] {
        match self {
            Experiment::CheatBound => &["theta"],
            Experiment::BestOfM => &["batches", "pairs"],
            Experiment::Helstrom => &["theta", "n"],
            Experiment::Session => &PARAMETER_NAMES,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub experiment: Experiment,
    pub variable: String,
    pub values: Vec<f64>,
    pub fixed: BTreeMap<String, f64>,
    pub trials: usize,
    pub seed: u64,
    pub protocol: Option<Protocol>,
    pub alice: StrategyDescriptor,
    pub bob: StrategyDescriptor,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::InvalidSpec(msg.into())
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let allowed = self.experiment.variables();
        if !allowed.contains(&self.variable.as_str()) {
            return Err(invalid(format!(
                "cannot sweep `{}` here; choose one of {}",
                self.variable,
                allowed.join(", ")
            )));
        }
        if self.values.is_empty() {
            return Err(invalid("no values to sweep"));
        }
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if self.fixed.contains_key(&self.variable) {
            return Err(invalid(format!(
                "`{}` is both swept and fixed",
                self.variable
            )));
        }
        if let Some(k) = self.fixed.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(invalid(format!("unknown fixed parameter `{k}`")));
        }
        if self.experiment == Experiment::Session && self.protocol.is_none() {
            return Err(invalid("session sweeps need a protocol"));
        }
        Ok(())
    }

    fn point(&self, value: f64) -> Result<ProtocolArgs, CliError> {
        let mut args = ProtocolArgs::default();
        for (k, v) in &self.fixed {
            args.set(k, *v)?;
        }
        args.set(&self.variable, value)?;
        Ok(args)
    }

    fn point_seed(&self, j: usize) -> u64 {
        derive_seed(self.seed, &format!("point/{j}"))
    }
}

/// Integer parameters print as integers; `set` has already checked them.
fn value_cell(variable: &str, value: f64) -> Cell {
    match variable {
        "theta" | "epsilon" => value.into(),
        _ => (value as usize).into(),
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Table, CliError> {
    spec.validate()?;
    let points = spec
        .values
        .iter()
        .map(|v| spec.point(*v))
        .collect::<Result<Vec<_>, _>>()?;
    let var = spec.variable.as_str();
    match spec.experiment {
        Experiment::CheatBound => {
            let mut t = Table::new([var, "cheat_bound", "eigen_max"]);
            for (v, p) in spec.values.iter().zip(&points) {
                let c = optimal_bit_cheat(p.theta)?;
                t.push(vec![
                    value_cell(var, *v),
                    cheat_bound(p.theta)?.into(),
                    (c.p0 + c.p1).into(),
                ]);
            }
            Ok(t)
        }
        Experiment::BestOfM => {
            let rows = points
                .par_iter()
                .enumerate()
                .map(|(j, p)| {
                    let params = CoinTossParams::new(p.batches, p.pairs)?;
                    let est = best_of_m_advantage(&params, spec.trials, spec.point_seed(j));
                    Ok(vec![
                        est.mean.into(),
                        est.stderr.into(),
                        (p.batches as f64).log2().into(),
                        expected_best_prefix(p.batches, p.pairs).into(),
                        spec.trials.into(),
                    ])
                })
                .collect::<Result<Vec<Vec<Cell>>, CliError>>()?;
            let mut t = Table::new([
                var,
                "advantage",
                "advantage_stderr",
                "log2_m",
                "expected",
                "sessions",
            ]);
            for (v, row) in spec.values.iter().zip(rows) {
                t.push([vec![value_cell(var, *v)], row].concat());
            }
            Ok(t)
        }
        Experiment::Helstrom => {
            let rows = points
                .par_iter()
                .enumerate()
                .map(|(j, p)| {
                    let mut rng = rng_stream(spec.point_seed(j), "nature");
                    let r = helstrom_attack(p.n, p.theta, spec.trials, &mut rng)?;
                    let sigma = (r.success_rate * (1.0 - r.success_rate) / r.qubits as f64).sqrt();
                    Ok(vec![
                        r.success_rate.into(),
                        sigma.into(),
                        ((1.0 + p.theta.cos()) / 2.0).into(),
                        r.info_bits.into(),
                        r.info_sigma.into(),
                        bob_entropy(p.n, p.theta)?.into(),
                        spec.trials.into(),
                    ])
                })
                .collect::<Result<Vec<Vec<Cell>>, CliError>>()?;
            let mut t = Table::new([
                var,
                "success_rate",
                "success_stderr",
                "success_expected",
                "info_bits",
                "info_stderr",
                "entropy_bound",
                "trials",
            ]);
            for (v, row) in spec.values.iter().zip(rows) {
                t.push([vec![value_cell(var, *v)], row].concat());
            }
            Ok(t)
        }
        Experiment::Session => session_sweep(spec, &points),
    }
}

fn session_sweep(spec: &SweepSpec, points: &[ProtocolArgs]) -> Result<Table, CliError> {
    let protocol = spec.protocol.expect("validated");
    let mut per_point = Vec::with_capacity(points.len());
    for (j, p) in points.iter().enumerate() {
        let params = p.build(protocol)?;
        let transcripts = run_trials(
            &params,
            &spec.alice,
            &spec.bob,
            spec.point_seed(j),
            spec.trials,
        )?;
        per_point.push((params, transcripts));
    }
    let keys: BTreeSet<String> = per_point
        .iter()
        .flat_map(|(_, ts)| ts.iter().flat_map(|t| t.stats.keys().cloned()))
        .collect();

    let mut columns = vec![spec.variable.clone(), "trials".to_owned()];
    let verdicts = summarize_verdicts(&per_point[0].0);
    for v in verdicts {
        columns.push(format!("{}_rate", v.as_str()));
        columns.push(format!("{}_stderr", v.as_str()));
    }
    for k in &keys {
        columns.push(format!("{k}_mean"));
        columns.push(format!("{k}_stderr"));
    }
    let mut table = Table::new(columns);
    for (v, (_, ts)) in spec.values.iter().zip(&per_point) {
        let mut row: Vec<Cell> = vec![value_cell(&spec.variable, *v), ts.len().into()];
        for verdict in verdicts {
            let xs: Vec<f64> = ts
                .iter()
                .map(|t| f64::from(u8::from(t.verdict == verdict)))
                .collect();
            let (m, se, _) = mean_stderr(&xs);
            row.extend([m.into(), se.into()]);
        }
        for k in &keys {
            let xs: Vec<f64> = ts.iter().filter_map(|t| t.stats.get(k).copied()).collect();
            let (m, se, n) = mean_stderr(&xs);
            if n == 0 {
                row.extend([Cell::Empty, Cell::Empty]);
            } else {
                row.extend([m.into(), se.into()]);
            }
        }
        table.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mistrust::harness::Party;

    fn spec(experiment: Experiment, variable: &str, values: Vec<f64>) -> SweepSpec {
        SweepSpec {
            experiment,
            variable: variable.to_owned(),
            values,
            fixed: BTreeMap::new(),
            trials: 1,
            seed: 1,
            protocol: None,
            alice: StrategyDescriptor::honest(Party::Alice),
            bob: StrategyDescriptor::honest(Party::Bob),
        }
    }

    #[test]
    fn invalid_specs() {
        let empty = spec(Experiment::CheatBound, "theta", vec![]);
        assert!(matches!(run_sweep(&empty), Err(CliError::InvalidSpec(_))));
        let wrong = spec(Experiment::CheatBound, "pairs", vec![1.0]);
        assert!(matches!(run_sweep(&wrong), Err(CliError::InvalidSpec(_))));
        let mut both = spec(Experiment::BestOfM, "batches", vec![2.0]);
        both.fixed.insert("batches".into(), 4.0);
        assert!(matches!(run_sweep(&both), Err(CliError::InvalidSpec(_))));
        let mut zero = spec(Experiment::BestOfM, "batches", vec![2.0]);
        zero.trials = 0;
        assert!(matches!(run_sweep(&zero), Err(CliError::InvalidSpec(_))));
        let no_protocol = spec(Experiment::Session, "pairs", vec![2.0]);
        assert!(matches!(
            run_sweep(&no_protocol),
            Err(CliError::InvalidSpec(_))
        ));
    }

    #[test]
    fn cheat_bound_column_is_closed_form() {
        let thetas = vec![0.05, 0.3, 1.0, std::f64::consts::FRAC_PI_2];
        let t = run_sweep(&spec(Experiment::CheatBound, "theta", thetas.clone())).unwrap();
        for (row, th) in t.rows.iter().zip(&thetas) {
            assert_eq!(row[1], Cell::Float(1.0 + th.sin()));
            let Cell::Float(e) = row[2] else { panic!() };
            assert!((e - (1.0 + th.sin())).abs() < 1e-9);
        }
    }

    #[test]
    fn session_sweep_columns() {
        let mut s = spec(Experiment::Session, "pairs", vec![4.0, 8.0]);
        s.protocol = Some(Protocol::CoinToss);
        s.trials = 20;
        let t = run_sweep(&s).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(
            t.column("completed_rate").unwrap(),
            vec![&Cell::Float(1.0); 2]
        );
    }
}
