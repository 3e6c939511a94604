//! Protocol parameters as flags, and by name for sweeps.

use clap::Args;
use mistrust::bitwise::SecurityParams;
use mistrust::codebook::{CodebookParams, Construction};
use mistrust::cointoss::CoinTossParams;
use mistrust::harness::{Protocol, ProtocolParams};

use crate::error::CliError;
use crate::grid::parse_scalar;

fn angle(text: &str) -> Result<f64, String> {
    parse_scalar(text).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ConstructionArg {
    Random,
    Simplex,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct ProtocolArgs {
    /// Bit-wise commitment angle θ (accepts forms like pi/8).
    #[arg(long, default_value = "0.3", value_parser = angle)]
    pub theta: f64,
    /// Committed bits (bit-wise commitment).
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Bits the receiver may learn; r = n − m.
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    /// Codebook dimension d.
    #[arg(long, default_value_t = 16)]
    pub dim: usize,
    /// Codebook size.
    #[arg(long, default_value_t = 32)]
    pub count: usize,
    /// Codebook overlap bound ε.
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = ConstructionArg::Random)]
    pub construction: ConstructionArg,
    #[arg(long, default_value_t = 0)]
    pub codebook_seed: u64,
    #[arg(long, default_value_t = 20)]
    pub max_attempts: usize,
    /// Coin toss batch count M.
    #[arg(long, default_value_t = 4)]
    pub batches: usize,
    /// Coin toss pairs per batch N.
    #[arg(long, default_value_t = 16)]
    pub pairs: usize,
}

impl Default for ProtocolArgs {
    fn default() -> Self {
        Self {
            theta: 0.3,
            n: 8,
            m: 0,
            dim: 16,
            count: 32,
            epsilon: 0.25,
            construction: ConstructionArg::Random,
            codebook_seed: 0,
            max_attempts: 20,
            batches: 4,
            pairs: 16,
        }
    }
}

/// Names accepted by [`ProtocolArgs::set`].
pub const PARAMETER_NAMES: [&str; 10] = [
    "theta",
    "n",
    "m",
    "dim",
    "count",
    "epsilon",
    "codebook_seed",
    "max_attempts",
    "batches",
    "pairs",
];

fn integer(key: &str, value: f64) -> Result<usize, CliError> {
    if value >= 0.0 && value.fract() == 0.0 && value < 1e15 {
        Ok(value as usize)
    } else {
        Err(CliError::Usage(format!(
            "`{key}` must be a nonnegative integer, got {value}"
        )))
    }
}

impl ProtocolArgs {
    pub fn set(&mut self, key: &str, value: f64) -> Result<(), CliError> {
        match key {
            "theta" => self.theta = value,
            "epsilon" => self.epsilon = value,
            "n" => self.n = integer(key, value)?,
            "m" => self.m = integer(key, value)?,
            "dim" => self.dim = integer(key, value)?,
            "count" => self.count = integer(key, value)?,
            "codebook_seed" => self.codebook_seed = integer(key, value)? as u64,
            "max_attempts" => self.max_attempts = integer(key, value)?,
            "batches" => self.batches = integer(key, value)?,
            "pairs" => self.pairs = integer(key, value)?,
            _ => return Err(CliError::Usage(format!("unknown parameter `{key}`"))),
        }
        Ok(())
    }

    pub fn build(&self, protocol: Protocol) -> Result<ProtocolParams, CliError> {
        Ok(match protocol {
            Protocol::BitwiseCommit => {
                ProtocolParams::BitwiseCommit(SecurityParams::new(self.theta, self.n, self.m)?)
            }
            Protocol::CodebookCommit => ProtocolParams::CodebookCommit(match self.construction {
                ConstructionArg::Random => CodebookParams::Random {
                    dim: self.dim,
                    count: self.count,
                    epsilon: self.epsilon,
                    codebook_seed: self.codebook_seed,
                    max_attempts: self.max_attempts,
                },
                ConstructionArg::Simplex => CodebookParams::Simplex { dim: self.dim },
            }),
            Protocol::CoinToss => {
                ProtocolParams::CoinToss(CoinTossParams::new(self.batches, self.pairs)?)
            }
        })
    }
}

impl From<ConstructionArg> for Construction {
    fn from(c: ConstructionArg) -> Self {
        match c {
            ConstructionArg::Random => Construction::Random,
            ConstructionArg::Simplex => Construction::Simplex,
        }
    }
}
