//! Bit-wise string commitment.
//!
//! Bit `a` is sent as the qubit ψ₀ = |0⟩ or ψ₁ = sin θ|0⟩ + cos θ|1⟩, one
//! qubit per bit. Unveiling declares the string and the receiver checks each
//! qubit with the projector onto the claimed state.
//!
//! The committer's best single-qubit cheat is the top eigenvector of
//! P₀ + P₁, which reveals either value with total probability 1 + sin θ.
//! The receiver faces the equal mixture of all 2ⁿ product encodings, a
//! tensor power of ρ₁ = ½(|ψ₀⟩⟨ψ₀| + |ψ₁⟩⟨ψ₁|), whose entropy
//! n·H₂((1 + sin θ)/2) caps his accessible information.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::harness::{
    rng_stream, unexpected, Channel, Observer, Party, Payload, Protocol, ProtocolParams,
    SessionStats, StrategyDescriptor, Transcript, Verdict,
};
use crate::qmath::{
    binary_entropy, hermitian_eigen, projector, DensityMatrix, Measurement, StateVector,
};
use crate::{Error, Result};

/// Largest n for which [`bob_ensemble`] builds the 2ⁿ-dimensional matrix.
pub const MAX_ENSEMBLE_QUBITS: usize = 10;

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta <= FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::domain(format!("theta {theta} outside (0, π/2]")))
    }
}

/// θ, δ = sin²θ, string length n, tolerated leakage m and r = n − m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSecurityParams")]
pub struct SecurityParams {
    pub theta: f64,
    pub delta: f64,
    pub n: usize,
    pub m: usize,
    pub r: usize,
}

#[derive(Deserialize)]
struct RawSecurityParams {
    theta: f64,
    delta: f64,
    n: usize,
    m: usize,
    r: usize,
}

impl TryFrom<RawSecurityParams> for SecurityParams {
    type Error = Error;

    fn try_from(raw: RawSecurityParams) -> Result<Self> {
        let p = SecurityParams::new(raw.theta, raw.n, raw.m)?;
        if (p.delta - raw.delta).abs() > 1e-12 || p.r != raw.r {
            return Err(Error::domain("delta or r inconsistent with theta, n, m"));
        }
        Ok(p)
    }
}

impl SecurityParams {
    pub fn new(theta: f64, n: usize, m: usize) -> Result<Self> {
        check_theta(theta)?;
        if n == 0 {
            return Err(Error::domain("string length n must be at least 1"));
        }
        if m >= n {
            return Err(Error::domain(format!("need m < n, got m = {m}, n = {n}")));
        }
        Ok(Self {
            theta,
            delta: theta.sin().powi(2),
            n,
            m,
            r: n - m,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BitwiseCommitment {
    qubits: Vec<StateVector>,
}

impl BitwiseCommitment {
    /// Wraps arbitrary qubits, e.g. a cheating committer's.
    pub fn from_qubits(qubits: Vec<StateVector>) -> Result<Self> {
        if let Some(q) = qubits.iter().find(|q| q.dim() != 2) {
            return Err(Error::DimMismatch {
                expected: 2,
                actual: q.dim(),
            });
        }
        Ok(Self { qubits })
    }

    pub fn qubits(&self) -> &[StateVector] {
        &self.qubits
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }
}

/// Receiver's decision. `failing_index` is set exactly when rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnveilVerdict {
    accepted: bool,
    failing_index: Option<usize>,
    passed: usize,
}

impl UnveilVerdict {
    pub(crate) fn from_outcomes(outcomes: impl IntoIterator<Item = bool>) -> Self {
        let mut failing_index = None;
        let mut passed = 0;
        for (i, ok) in outcomes.into_iter().enumerate() {
            if ok {
                passed += 1;
            } else if failing_index.is_none() {
                failing_index = Some(i);
            }
        }
        Self {
            accepted: failing_index.is_none(),
            failing_index,
            passed,
        }
    }

    pub fn accepted(&self) -> bool {
        self.accepted
    }

    /// First position whose test returned eigenvalue 0.
    pub fn failing_index(&self) -> Option<usize> {
        self.failing_index
    }

    /// Number of individual tests that returned eigenvalue 1.
    pub fn passed(&self) -> usize {
        self.passed
    }
}

/// ψ₀ = |0⟩, ψ₁ = sin θ|0⟩ + cos θ|1⟩.
pub fn encode_bit(bit: bool, theta: f64) -> Result<StateVector> {
    check_theta(theta)?;
    let amps = if bit {
        [theta.sin(), theta.cos()]
    } else {
        [1.0, 0.0]
    };
    StateVector::from_unit(amps.iter().map(|&x| x.into()).collect())
}

pub fn commit(bits: &BitString, params: &SecurityParams) -> Result<BitwiseCommitment> {
    if bits.len() != params.n {
        return Err(Error::LengthMismatch {
            expected: params.n,
            actual: bits.len(),
        });
    }
    let qubits = bits
        .iter()
        .map(|b| encode_bit(b, params.theta))
        .collect::<Result<Vec<_>>>()?;
    Ok(BitwiseCommitment { qubits })
}

/// Per-qubit tests {P_claimed, 1 − P_claimed}, every qubit measured in order.
pub fn verify_unveil<R: Rng + ?Sized>(
    held: &BitwiseCommitment,
    claimed: &BitString,
    theta: f64,
    rng: &mut R,
) -> Result<UnveilVerdict> {
    if claimed.len() != held.len() {
        return Err(Error::LengthMismatch {
            expected: held.len(),
            actual: claimed.len(),
        });
    }
    let tests = [
        Measurement::test(projector(&encode_bit(false, theta)?))?,
        Measurement::test(projector(&encode_bit(true, theta)?))?,
    ];
    let outcomes = held
        .qubits
        .iter()
        .zip(claimed.iter())
        .map(|(q, b)| tests[usize::from(b)].sample(q, rng).map(|k| k == 0))
        .collect::<Result<Vec<_>>>()?;
    Ok(UnveilVerdict::from_outcomes(outcomes))
}

/// Probabilities ⟨ψ₀|φ⟩² and ⟨ψ₁|φ⟩² that `state` passes a claim of 0 or 1.
pub fn reveal_probabilities(state: &StateVector, theta: f64) -> Result<(f64, f64)> {
    Ok((
        encode_bit(false, theta)?.overlap_sqr(state)?,
        encode_bit(true, theta)?.overlap_sqr(state)?,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BitCheat {
    pub state: StateVector,
    pub p0: f64,
    pub p1: f64,
}

/// Committer's optimal state for keeping both values open.
pub fn optimal_bit_cheat(theta: f64) -> Result<BitCheat> {
    let p0 = projector(&encode_bit(false, theta)?);
    let p1 = projector(&encode_bit(true, theta)?);
    let eig = hermitian_eigen(&p0.add(&p1)?)?;
    let state = eig.top().1.clone();
    let (p0, p1) = reveal_probabilities(&state, theta)?;
    Ok(BitCheat { state, p0, p1 })
}

/// max p⁰ + p¹ = 1 + sin θ.
pub fn cheat_bound(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(1.0 + theta.sin())
}

/// Equal mixture over all 2ⁿ product encodings, built term by term.
pub fn bob_ensemble(n: usize, theta: f64) -> Result<DensityMatrix> {
    check_theta(theta)?;
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if n > MAX_ENSEMBLE_QUBITS {
        return Err(Error::TooLarge {
            what: "ensemble qubit count",
            size: n,
            limit: MAX_ENSEMBLE_QUBITS,
        });
    }
    let encodings = [encode_bit(false, theta)?, encode_bit(true, theta)?];
    let states: Vec<StateVector> = (0..1usize << n)
        .map(|index| {
            let bits = BitString::from_index(index, n).expect("index < 2ⁿ");
            let mut iter = bits.iter();
            let first = encodings[usize::from(iter.next().expect("n ≥ 1"))].clone();
            iter.fold(first, |acc, b| acc.tensor(&encodings[usize::from(b)]))
        })
        .collect();
    DensityMatrix::uniform_mixture(&states)
}

/// ρ₁ = ½(|ψ₀⟩⟨ψ₀| + |ψ₁⟩⟨ψ₁|).
pub fn single_qubit_ensemble(theta: f64) -> Result<DensityMatrix> {
    DensityMatrix::uniform_mixture(&[encode_bit(false, theta)?, encode_bit(true, theta)?])
}

fn entropy_per_qubit(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    binary_entropy((1.0 + theta.sin()) / 2.0)
}

/// S(ρ) = n·H₂((1 + sin θ)/2) bits.
pub fn bob_entropy(n: usize, theta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    Ok(n as f64 * entropy_per_qubit(theta)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InaccessibleBits {
    /// n − S(ρ).
    pub gap: f64,
    /// gap > r.
    pub satisfied: bool,
}

pub fn inaccessible_bits(n: usize, theta: f64, r: usize) -> Result<InaccessibleBits> {
    let gap = n as f64 - bob_entropy(n, theta)?;
    Ok(InaccessibleBits {
        gap,
        satisfied: gap > r as f64,
    })
}

/// Smallest n whose entropy gap n − S(ρ) exceeds `r`.
pub fn min_n_for(r: usize, theta: f64) -> Result<usize> {
    if r == 0 {
        return Err(Error::domain("r must be at least 1"));
    }
    let per_qubit = 1.0 - entropy_per_qubit(theta)?;
    if !(per_qubit > 0.0) {
        return Err(Error::Unbounded);
    }
    let estimate = (r as f64 / per_qubit).floor() + 1.0;
    if !(estimate < 1e12) {
        return Err(Error::Unbounded);
    }
    // The estimate is within a step or two; settle it against the same
    // arithmetic `inaccessible_bits` uses.
    let mut n = (estimate as usize).max(1);
    while !inaccessible_bits(n, theta, r)?.satisfied {
        n += 1;
    }
    while n > 1 && inaccessible_bits(n - 1, theta, r)?.satisfied {
        n -= 1;
    }
    Ok(n)
}

/// Optimal two-state discrimination of ψ₀ against ψ₁: projectors onto the
/// positive and negative eigenspaces of P₀ − P₁. Outcome k guesses bit k.
pub fn helstrom_measurement(theta: f64) -> Result<Measurement> {
    let p0 = projector(&encode_bit(false, theta)?);
    let p1 = projector(&encode_bit(true, theta)?);
    let eig = hermitian_eigen(&p0.sub(&p1)?)?;
    Measurement::from_basis(eig.eigenvectors())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelstromReport {
    pub qubits: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// n·(1 − H₂(success_rate)).
    pub info_bits: f64,
    /// Delta-method standard error of `info_bits`.
    pub info_sigma: f64,
}

/// Receiver measures every qubit of `trials` random commitments with the
/// Helstrom measurement and guesses each bit.
pub fn helstrom_attack<R: Rng + ?Sized>(
    n: usize,
    theta: f64,
    trials: usize,
    rng: &mut R,
) -> Result<HelstromReport> {
    if trials < 1000 {
        return Err(Error::domain("helstrom_attack needs at least 1000 trials"));
    }
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let m = helstrom_measurement(theta)?;
    let probs = [
        m.probabilities(&encode_bit(false, theta)?)?,
        m.probabilities(&encode_bit(true, theta)?)?,
    ];
    let mut successes = 0usize;
    for _ in 0..trials {
        let bits = BitString::random(n, rng);
        for b in bits.iter() {
            let guess = crate::qmath::sample_index(&probs[usize::from(b)], rng.random());
            successes += usize::from(guess == usize::from(b));
        }
    }
    let qubits = n * trials;
    let rate = successes as f64 / qubits as f64;
    let info_bits = n as f64 * (1.0 - binary_entropy(rate)?);
    let info_sigma = if rate > 0.0 && rate < 1.0 {
        let sigma_rate = (rate * (1.0 - rate) / qubits as f64).sqrt();
        n as f64 * (rate / (1.0 - rate)).log2().abs() * sigma_rate
    } else {
        0.0
    };
    Ok(HelstromReport {
        qubits,
        successes,
        success_rate: rate,
        info_bits,
        info_sigma,
    })
}

/// Committer behaviour in a session.
#[derive(Debug, Clone, PartialEq)]
pub enum AliceStrategy {
    /// Commit a uniformly random string and unveil it.
    Honest,
    /// Send the optimal cheat state on every qubit, then claim the constant
    /// string `reveal` (random per session when `None`).
    Cheat { reveal: Option<bool> },
}

/// Receiver behaviour in a session.
#[derive(Debug, Clone, PartialEq)]
pub enum BobStrategy {
    Honest,
    /// Measure every qubit with the Helstrom measurement on arrival, then
    /// run the unveiling tests on the collapsed qubits.
    Helstrom,
}

impl AliceStrategy {
    pub fn from_descriptor(d: &StrategyDescriptor) -> Result<Self> {
        match d.name.as_str() {
            "honest" => {
                d.expect_keys(&[])?;
                Ok(Self::Honest)
            }
            "cheat" => {
                d.expect_keys(&["reveal"])?;
                Ok(Self::Cheat {
                    reveal: d.bit("reveal")?,
                })
            }
            _ => Err(d.unknown()),
        }
    }
}

impl BobStrategy {
    pub fn from_descriptor(d: &StrategyDescriptor) -> Result<Self> {
        d.expect_keys(&[])?;
        match d.name.as_str() {
            "honest" => Ok(Self::Honest),
            "helstrom" => Ok(Self::Helstrom),
            _ => Err(d.unknown()),
        }
    }
}

fn descriptor_of_alice(s: &AliceStrategy) -> StrategyDescriptor {
    match s {
        AliceStrategy::Honest => StrategyDescriptor::honest(Party::Alice),
        AliceStrategy::Cheat { reveal } => {
            let d = StrategyDescriptor::new(Party::Alice, "cheat");
            match reveal {
                Some(b) => d.with("reveal", f64::from(u8::from(*b))),
                None => d,
            }
        }
    }
}

fn descriptor_of_bob(s: &BobStrategy) -> StrategyDescriptor {
    match s {
        BobStrategy::Honest => StrategyDescriptor::honest(Party::Bob),
        BobStrategy::Helstrom => StrategyDescriptor::new(Party::Bob, "helstrom"),
    }
}

/// One commit–unveil session.
///
/// Streams: `alice` for the committer's choices, `bob` for the receiver's,
/// `nature` for every measurement outcome.
pub fn run_session(
    params: &SecurityParams,
    alice: &AliceStrategy,
    bob: &BobStrategy,
    seed: u64,
    observer: &mut Observer<'_>,
) -> Result<Transcript> {
    let mut alice_rng = rng_stream(seed, "alice");
    let mut nature = rng_stream(seed, "nature");
    let theta = params.theta;
    let mut channel = Channel::new(Protocol::BitwiseCommit, observer);
    let mut stats = SessionStats::new();

    // Commit.
    let (held, committed) = match alice {
        AliceStrategy::Honest => {
            let bits = BitString::random(params.n, &mut alice_rng);
            (commit(&bits, params)?, Some(bits))
        }
        AliceStrategy::Cheat { .. } => {
            let cheat = optimal_bit_cheat(theta)?;
            (
                BitwiseCommitment::from_qubits(vec![cheat.state; params.n])?,
                None,
            )
        }
    };
    channel.send(Party::Alice, Payload::CommitQubits { count: held.len() })?;

    // Receiver holds (or measures) the qubits.
    let held = match channel.last_received(Party::Bob)? {
        Payload::CommitQubits { count } if *count == params.n => match bob {
            BobStrategy::Honest => held,
            BobStrategy::Helstrom => {
                let m = helstrom_measurement(theta)?;
                let mut guesses = Vec::with_capacity(held.len());
                let mut collapsed = Vec::with_capacity(held.len());
                for q in held.qubits() {
                    let (k, post) = m.sample_and_collapse(q, &mut nature)?;
                    guesses.push(k == 1);
                    collapsed.push(post);
                }
                if let Some(bits) = &committed {
                    let guesses = BitString::new(guesses);
                    let correct = bits.len()
                        - bits
                            .iter()
                            .zip(guesses.iter())
                            .filter(|(a, b)| a != b)
                            .count();
                    stats.insert("bob_guess_correct".into(), correct as f64);
                }
                BitwiseCommitment::from_qubits(collapsed)?
            }
        },
        other => return Err(unexpected(Party::Bob, other, "commit_qubits")),
    };

    // Unveil.
    let claimed = match (alice, &committed) {
        (AliceStrategy::Honest, Some(bits)) => bits.clone(),
        (AliceStrategy::Cheat { reveal }, _) => {
            let b = reveal.unwrap_or_else(|| alice_rng.random::<bool>());
            stats.insert("reveal_bit".into(), f64::from(u8::from(b)));
            BitString::repeat(b, params.n)
        }
        (AliceStrategy::Honest, None) => unreachable!("honest commitments record their string"),
    };
    channel.send(Party::Alice, Payload::UnveilBits { claimed })?;

    let verdict = match channel.last_received(Party::Bob)? {
        Payload::UnveilBits { claimed } => verify_unveil(&held, claimed, theta, &mut nature)?,
        other => return Err(unexpected(Party::Bob, other, "unveil_bits")),
    };
    stats.insert("qubits_passed".into(), verdict.passed() as f64);
    channel.send(
        Party::Bob,
        Payload::UnveilVerdict {
            accepted: verdict.accepted(),
            failing_index: verdict.failing_index(),
        },
    )?;

    Ok(Transcript {
        params: ProtocolParams::BitwiseCommit(*params),
        seed,
        alice: descriptor_of_alice(alice),
        bob: descriptor_of_bob(bob),
        messages: channel.into_messages(),
        verdict: if verdict.accepted() {
            Verdict::Accepted
        } else {
            Verdict::Rejected
        },
        stats,
    })
}
