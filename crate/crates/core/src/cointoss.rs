//! Cut-and-choose coin tossing with Bell singlets.
//!
//! Alice prepares M batches of N pairs and hands one particle of every pair
//! to Bob. Bob picks one batch to keep; Alice sends the partners of the
//! other M − 1 and Bob checks each of those pairs with a Bell-basis
//! measurement. If every pair passes, both measure σ_z on the kept batch
//! and Alice's outcomes (+1 → 0, −1 → 1, pairs in the order sent) are the
//! coin string. Bob's outcomes are the complement.
//!
//! A pair's joint amplitudes are indexed 2a + b, with a Alice's particle.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::harness::{
    derive_seed, rng_stream, unexpected, Channel, Observer, Party, Payload, Protocol,
    ProtocolParams, SessionStats, StrategyDescriptor, Transcript, Verdict,
};
use crate::qmath::{sample_index, StateVector};
use crate::{Error, Result};

/// Upper bound on M·N pairs held in memory by one session.
pub const MAX_PAIRS: usize = 1 << 20;

/// M batches of N pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCoinTossParams")]
pub struct CoinTossParams {
    pub batches: usize,
    pub pairs: usize,
}

#[derive(Deserialize)]
struct RawCoinTossParams {
    batches: usize,
    pairs: usize,
}

impl TryFrom<RawCoinTossParams> for CoinTossParams {
    type Error = Error;

    fn try_from(raw: RawCoinTossParams) -> Result<Self> {
        CoinTossParams::new(raw.batches, raw.pairs)
    }
}

impl CoinTossParams {
    pub fn new(batches: usize, pairs: usize) -> Result<Self> {
        if batches < 2 {
            return Err(Error::domain(format!(
                "need at least 2 batches, got {batches}"
            )));
        }
        if pairs < 1 {
            return Err(Error::domain("need at least 1 pair per batch"));
        }
        let total = batches.saturating_mul(pairs);
        if total > MAX_PAIRS {
            return Err(Error::TooLarge {
                what: "pair count",
                size: total,
                limit: MAX_PAIRS,
            });
        }
        Ok(Self { batches, pairs })
    }

    /// log₂ M / N. Bob's influence is negligible when this is small.
    pub fn influence_ratio(&self) -> f64 {
        (self.batches as f64).log2() / self.pairs as f64
    }
}

/// Joint state of one particle pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairState(StateVector);

impl PairState {
    pub fn new(state: StateVector) -> Result<Self> {
        if state.dim() != 4 {
            return Err(Error::DimMismatch {
                expected: 4,
                actual: state.dim(),
            });
        }
        Ok(Self(state))
    }

    /// |ab⟩ with a Alice's bit.
    pub fn product(a: bool, b: bool) -> Self {
        Self(StateVector::basis(4, 2 * usize::from(a) + usize::from(b)).expect("index < 4"))
    }

    pub fn state(&self) -> &StateVector {
        &self.0
    }

    fn probs(&self) -> [f64; 4] {
        let a = self.0.amplitudes();
        [
            a[0].norm_sqr(),
            a[1].norm_sqr(),
            a[2].norm_sqr(),
            a[3].norm_sqr(),
        ]
    }
}

/// (|01⟩ − |10⟩)/√2.
pub fn singlet() -> PairState {
    let z = Complex64::new(0.0, 0.0);
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    PairState(StateVector::from_unit(vec![z, h, -h, z]).expect("unit norm"))
}

#[derive(Debug, Clone, PartialEq)]
pub enum AliceStrategy {
    Honest,
    /// Replace ⌈fraction·N⌉ pairs of each batch (or only of `batch`) by the
    /// product state that gives Alice outcome `target`.
    Tamper {
        fraction: f64,
        target: bool,
        batch: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum BobStrategy {
    Honest,
    /// Measure σ_z on every received particle, keep the batch whose coin
    /// string has the longest run of leading zeros, and report all tests
    /// passed.
    BestOfM,
}

impl AliceStrategy {
    pub fn from_descriptor(d: &StrategyDescriptor) -> Result<Self> {
        match d.name.as_str() {
            "honest" => {
                d.expect_keys(&[])?;
                Ok(Self::Honest)
            }
            "tamper" => {
                d.expect_keys(&["fraction", "target", "batch"])?;
                let fraction = d.get("fraction").unwrap_or(1.0);
                if !(0.0..=1.0).contains(&fraction) {
                    return Err(Error::InvalidStrategy(format!(
                        "`fraction` must lie in [0, 1], got {fraction}"
                    )));
                }
                Ok(Self::Tamper {
                    fraction,
                    target: d.bit("target")?.unwrap_or(false),
                    batch: d.count("batch")?,
                })
            }
            _ => Err(d.unknown()),
        }
    }

    fn descriptor(&self) -> StrategyDescriptor {
        match self {
            Self::Honest => StrategyDescriptor::honest(Party::Alice),
            Self::Tamper {
                fraction,
                target,
                batch,
            } => {
                let d = StrategyDescriptor::new(Party::Alice, "tamper")
                    .with("fraction", *fraction)
                    .with("target", f64::from(u8::from(*target)));
                match batch {
                    Some(b) => d.with("batch", *b as f64),
                    None => d,
                }
            }
        }
    }
}

impl BobStrategy {
    pub fn from_descriptor(d: &StrategyDescriptor) -> Result<Self> {
        d.expect_keys(&[])?;
        match d.name.as_str() {
            "honest" => Ok(Self::Honest),
            "best_of_m" => Ok(Self::BestOfM),
            _ => Err(d.unknown()),
        }
    }

    fn descriptor(&self) -> StrategyDescriptor {
        match self {
            Self::Honest => StrategyDescriptor::honest(Party::Bob),
            Self::BestOfM => StrategyDescriptor::new(Party::Bob, "best_of_m"),
        }
    }
}

/// Number of pairs a tamper fraction replaces in a batch of `pairs`.
pub fn tampered_count(fraction: f64, pairs: usize) -> usize {
    // The slack keeps products such as 0.3·10 from rounding up a whole pair.
    let k = (fraction * pairs as f64 - 1e-9).ceil();
    (k.max(0.0) as usize).min(pairs)
}

pub fn prepare_batches<R: Rng + ?Sized>(
    strategy: &AliceStrategy,
    params: &CoinTossParams,
    rng: &mut R,
) -> Result<Vec<Vec<PairState>>> {
    let mut batches = vec![vec![singlet(); params.pairs]; params.batches];
    if let AliceStrategy::Tamper {
        fraction,
        target,
        batch,
    } = *strategy
    {
        if let Some(b) = batch {
            if b >= params.batches {
                return Err(Error::IndexOutOfRange {
                    index: b,
                    len: params.batches,
                });
            }
        }
        let k = tampered_count(fraction, params.pairs);
        let fake = PairState::product(target, !target);
        for (i, pairs) in batches.iter_mut().enumerate() {
            if batch.is_some_and(|b| b != i) {
                continue;
            }
            let mut positions = sample(rng, params.pairs, k).into_vec();
            positions.sort_unstable();
            for p in positions {
                pairs[p] = fake.clone();
            }
        }
    }
    Ok(batches)
}

/// Bell-basis measurement on every pair; passes iff each one lands on the
/// singlet. Returns the position of the first failing pair.
pub fn singlet_test<R: Rng + ?Sized>(batch: &[PairState], rng: &mut R) -> Result<Option<usize>> {
    let s = singlet();
    for (i, pair) in batch.iter().enumerate() {
        let p = pair.state().overlap_sqr(s.state())?.min(1.0);
        if sample_index(&[p, 1.0 - p], rng.random::<f64>()) != 0 {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Joint σ_z ⊗ σ_z on every pair: (Alice's bits, Bob's bits).
pub fn generate_bits<R: Rng + ?Sized>(batch: &[PairState], rng: &mut R) -> (BitString, BitString) {
    let (a, b): (Vec<bool>, Vec<bool>) = batch
        .iter()
        .map(|pair| {
            let k = sample_index(&pair.probs(), rng.random::<f64>());
            (k & 2 != 0, k & 1 != 0)
        })
        .unzip();
    (BitString::new(a), BitString::new(b))
}

/// σ_z on Bob's particle alone, collapsing the pair.
pub fn measure_bob_half<R: Rng + ?Sized>(
    pair: &PairState,
    rng: &mut R,
) -> Result<(bool, PairState)> {
    let p = pair.probs();
    let bit = sample_index(&[p[0] + p[2], p[1] + p[3]], rng.random::<f64>()) == 1;
    let keep = usize::from(bit);
    let amps = pair
        .state()
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            if k & 1 == keep {
                *a
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok((bit, PairState(StateVector::normalized(amps)?)))
}

/// Length of the leading run of zeros.
pub fn zero_prefix_score(bits: &BitString) -> f64 {
    bits.iter().take_while(|b| !b).count() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct TossOutcome {
    pub verdict: Verdict,
    /// Alice's σ_z outcomes on the kept batch; the coin string.
    pub bits: Option<BitString>,
    /// Bob's σ_z outcomes on the kept batch.
    pub bob_bits: Option<BitString>,
    pub kept_batch: usize,
    pub transcript: Transcript,
}

pub fn run_coin_toss(
    params: &CoinTossParams,
    alice: &AliceStrategy,
    bob: &BobStrategy,
    seed: u64,
) -> Result<TossOutcome> {
    run_coin_toss_observed(params, alice, bob, seed, &mut |_, _| {})
}

/// One session. Streams: `alice` for preparation, `bob` for the batch
/// choice, `nature` for every measurement outcome.
pub fn run_coin_toss_observed(
    params: &CoinTossParams,
    alice: &AliceStrategy,
    bob: &BobStrategy,
    seed: u64,
    observer: &mut Observer<'_>,
) -> Result<TossOutcome> {
    let mut alice_rng = rng_stream(seed, "alice");
    let mut bob_rng = rng_stream(seed, "bob");
    let mut nature = rng_stream(seed, "nature");
    let mut channel = Channel::new(Protocol::CoinToss, observer);
    let mut stats = SessionStats::new();
    let (m, n) = (params.batches, params.pairs);

    let mut batches = prepare_batches(alice, params, &mut alice_rng)?;
    let tampered = batches
        .iter()
        .flatten()
        .filter(|p| p.state().amplitudes() != singlet().state().amplitudes())
        .count();
    stats.insert("tampered_pairs".into(), tampered as f64);
    channel.send(
        Party::Alice,
        Payload::SendHalves {
            batches: m,
            pairs: n,
        },
    )?;

    // Bob chooses which batch to keep.
    match channel.last_received(Party::Bob)? {
        Payload::SendHalves { batches, pairs } if (*batches, *pairs) == (m, n) => {}
        other => return Err(unexpected(Party::Bob, other, "send_halves")),
    }
    let mut bob_record = None;
    let kept = match bob {
        BobStrategy::Honest => bob_rng.random_range(0..m),
        BobStrategy::BestOfM => {
            let mut best = (f64::NEG_INFINITY, 0, BitString::default());
            for (i, batch) in batches.iter_mut().enumerate() {
                let mut own = Vec::with_capacity(n);
                for pair in batch.iter_mut() {
                    let (bit, post) = measure_bob_half(pair, &mut nature)?;
                    own.push(bit);
                    *pair = post;
                }
                let own = BitString::new(own);
                let score = zero_prefix_score(&own.complement());
                if score > best.0 {
                    best = (score, i, own);
                }
            }
            stats.insert("bob_score".into(), best.0);
            bob_record = Some(best.2);
            best.1
        }
    };
    let tested: Vec<usize> = (0..m).filter(|&i| i != kept).collect();
    channel.send(
        Party::Bob,
        Payload::ChooseTests {
            tested: tested.clone(),
            kept,
        },
    )?;

    // Alice releases the partners of the tested batches.
    let to_send = match channel.last_received(Party::Alice)? {
        Payload::ChooseTests { tested: t, kept: k }
            if *k < m
                && t.len() == m - 1
                && t.iter()
                    .enumerate()
                    .all(|(j, &b)| b == j + usize::from(j >= *k)) =>
        {
            t.clone()
        }
        other => return Err(unexpected(Party::Alice, other, "choose_tests")),
    };
    channel.send(Party::Alice, Payload::SendPartners { batches: to_send })?;

    let failed = match channel.last_received(Party::Bob)? {
        Payload::SendPartners { batches: t } => match bob {
            BobStrategy::Honest => {
                let mut failed = None;
                for &b in t {
                    if singlet_test(&batches[b], &mut nature)?.is_some() {
                        failed = Some(b);
                        break;
                    }
                }
                failed
            }
            BobStrategy::BestOfM => None,
        },
        other => return Err(unexpected(Party::Bob, other, "send_partners")),
    };
    channel.send(
        Party::Bob,
        Payload::TestResult {
            passed: failed.is_none(),
            failed_batch: failed,
        },
    )?;

    let (verdict, bits, bob_bits) = if failed.is_some() {
        (Verdict::CheatDetected, None, None)
    } else {
        let (a_bits, b_bits) = generate_bits(&batches[kept], &mut nature);
        let b_bits = bob_record.unwrap_or(b_bits);
        stats.insert("zero_prefix".into(), zero_prefix_score(&a_bits));
        stats.insert("zeros".into(), (n - a_bits.count_ones()) as f64);
        channel.send(
            Party::Alice,
            Payload::AnnounceOutcome {
                bits: a_bits.clone(),
            },
        )?;
        channel.send(
            Party::Bob,
            Payload::AnnounceOutcome {
                bits: b_bits.clone(),
            },
        )?;
        (Verdict::Completed, Some(a_bits), Some(b_bits))
    };
    stats.insert("kept_batch".into(), kept as f64);

    Ok(TossOutcome {
        verdict,
        bits,
        bob_bits,
        kept_batch: kept,
        transcript: Transcript {
            params: ProtocolParams::CoinToss(*params),
            seed,
            alice: alice.descriptor(),
            bob: bob.descriptor(),
            messages: channel.into_messages(),
            verdict,
            stats,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestOfM {
    /// Score of the kept batch's coin string.
    pub advantage_bits: f64,
    pub chosen: usize,
}

/// Bob measures σ_z on every batch of honest singlets, scores each
/// resulting coin string and keeps the best (first on ties).
pub fn bob_best_of_m<R: Rng + ?Sized>(
    params: &CoinTossParams,
    score: &dyn Fn(&BitString) -> f64,
    rng: &mut R,
) -> BestOfM {
    let p = singlet().probs();
    let bob_half = [p[0] + p[2], p[1] + p[3]];
    let mut best = BestOfM {
        advantage_bits: f64::NEG_INFINITY,
        chosen: 0,
    };
    for i in 0..params.batches {
        // Bob's outcome b leaves Alice's particle in the opposite state.
        let coin: Vec<bool> = (0..params.pairs)
            .map(|_| sample_index(&bob_half, rng.random::<f64>()) == 0)
            .collect();
        let v = score(&BitString::new(coin));
        if v > best.advantage_bits {
            best = BestOfM {
                advantage_bits: v,
                chosen: i,
            };
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let k = xs.len();
        if k == 0 {
            return Self {
                mean: f64::NAN,
                stderr: f64::NAN,
                samples: 0,
            };
        }
        let mean = xs.iter().sum::<f64>() / k as f64;
        let stderr = if k > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
            (var / k as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            stderr,
            samples: k,
        }
    }
}

/// Mean best-of-M zero-prefix length over `sessions` independent sessions,
/// session i drawing from the stream derived from (`seed`, "best-of-m/i").
pub fn best_of_m_advantage(params: &CoinTossParams, sessions: usize, seed: u64) -> Estimate {
    let xs = (0..sessions)
        .map(|i| {
            let mut rng = rng_stream(derive_seed(seed, &format!("best-of-m/{i}")), "nature");
            bob_best_of_m(params, &zero_prefix_score, &mut rng).advantage_bits
        })
        .collect::<Vec<_>>();
    Estimate::from_samples(&xs)
}

/// Exact E[max of M zero-prefix lengths] for uniform N-bit strings:
/// Σ_{k=1..N} P(max ≥ k) = Σ_k 1 − (1 − 2^{−k})^M.
pub fn expected_best_prefix(batches: usize, pairs: usize) -> f64 {
    (1..=pairs)
        .map(|k| 1.0 - (1.0 - 0.5f64.powi(k as i32)).powi(batches as i32))
        .sum()
}
