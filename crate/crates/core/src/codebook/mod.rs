//! Codebook string commitment.
//!
//! A string of N bits is committed by sending one vector v_i of a codebook
//! whose members overlap pairwise by less than ε. A committer who wants to
//! keep r strings open is limited by the spectrum of Q = Σ P_{i_k}: any
//! state reveals them with total probability at most λ_max(Q), which the
//! Gram matrix bounds by 1 + (r − 1)ε. A receiver who holds the state
//! learns at most the entropy of the codebook mixture, ≤ log₂ d bits,
//! while the string carries ⌊log₂ count⌋ bits.

mod io;

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bitstring::BitString;
use crate::bitwise::UnveilVerdict;
use crate::harness::{
    rng_stream, unexpected, Channel, Observer, Party, Payload, Protocol, ProtocolParams,
    SessionStats, StrategyDescriptor, Transcript, Verdict,
};
use crate::qmath::{
    hermitian_eigen, projector, von_neumann_entropy, CMatrix, DensityMatrix, HermitianOperator,
    Measurement, StateVector,
};
use crate::{Error, Result};

pub use io::CODEBOOK_FORMAT_VERSION;

/// Largest dimension [`bob_info_report`] will diagonalize.
pub const MAX_REPORT_DIM: usize = 256;
/// Coherence-descent iterations per construction attempt.
pub const REFINE_STEPS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Random,
    Simplex,
}

/// Unit vectors in dimension d with certified pairwise overlap below ε.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    dim: usize,
    vectors: Vec<StateVector>,
    epsilon: f64,
    construction: Construction,
    seed: Option<u64>,
    id: String,
}

/// Largest |⟨v_i|v_j⟩| over i ≠ j.
pub fn max_overlap(vectors: &[StateVector]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, a) in vectors.iter().enumerate() {
        for b in &vectors[i + 1..] {
            worst = worst.max(a.inner(b)?.norm());
        }
    }
    Ok(worst)
}

fn fingerprint(dim: usize, vectors: &[StateVector]) -> String {
    let mut h = Sha256::new();
    h.update((dim as u64).to_le_bytes());
    for v in vectors {
        for a in v.amplitudes() {
            h.update(a.re.to_le_bytes());
            h.update(a.im.to_le_bytes());
        }
    }
    h.finalize()[..16]
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl Codebook {
    /// Certifies the overlap bound and the basic shape invariants.
    pub fn new(
        vectors: Vec<StateVector>,
        epsilon: f64,
        construction: Construction,
        seed: Option<u64>,
    ) -> Result<Self> {
        if vectors.len() < 2 {
            return Err(Error::InvalidCodebook(format!(
                "need at least 2 vectors, got {}",
                vectors.len()
            )));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidCodebook(format!(
                "epsilon {epsilon} outside (0, 1]"
            )));
        }
        let dim = vectors[0].dim();
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimMismatch {
                expected: dim,
                actual: v.dim(),
            });
        }
        let worst = max_overlap(&vectors)?;
        if !(worst < epsilon) {
            return Err(Error::InvalidCodebook(format!(
                "pairwise overlap {worst} is not below epsilon {epsilon}"
            )));
        }
        let id = fingerprint(dim, &vectors);
        Ok(Self {
            dim,
            vectors,
            epsilon,
            construction,
            seed,
            id,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn vector(&self, index: usize) -> Result<&StateVector> {
        self.vectors.get(index).ok_or(Error::IndexOutOfRange {
            index,
            len: self.vectors.len(),
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Content fingerprint, used to tie commitments to their codebook.
    pub fn id(&self) -> &str {
        &self.id
    }

    /// Committed string length N = ⌊log₂ count⌋.
    pub fn bits(&self) -> usize {
        self.count().ilog2() as usize
    }

    /// log₂(count) / log₂(d), the empirical growth exponent of the packing.
    pub fn packing_constant(&self) -> f64 {
        (self.count() as f64).log2() / (self.dim as f64).log2()
    }

    /// Re-checks every pairwise overlap against ε.
    pub fn recertify(&self) -> Result<f64> {
        let worst = max_overlap(&self.vectors)?;
        if worst < self.epsilon {
            Ok(worst)
        } else {
            Err(Error::InvalidCodebook(format!(
                "pairwise overlap {worst} is not below epsilon {}",
                self.epsilon
            )))
        }
    }
}

/// One pass of coherence descent: every vector steps away from the vectors
/// it overlaps with most, weighted by (|g_ij| / max |g|)^10.
fn refine_step(vectors: &mut [StateVector], worst: f64) -> Result<()> {
    const STEP: f64 = 0.2;
    const POWER: i32 = 10;
    let n = vectors.len();
    let dim = vectors[0].dim();
    let mut updated = Vec::with_capacity(n);
    for i in 0..n {
        let mut grad = vec![Complex64::new(0.0, 0.0); dim];
        for j in 0..n {
            if i == j {
                continue;
            }
            // Component of v_i along v_j.
            let g = vectors[j].inner(&vectors[i])?;
            let w = (g.norm() / worst).powi(POWER);
            for (acc, a) in grad.iter_mut().zip(vectors[j].amplitudes()) {
                *acc += a * g * w;
            }
        }
        let stepped: Vec<Complex64> = vectors[i]
            .amplitudes()
            .iter()
            .zip(&grad)
            .map(|(a, g)| a - g * STEP)
            .collect();
        updated.push(StateVector::normalized(stepped)?);
    }
    vectors.clone_from_slice(&updated);
    Ok(())
}

/// Seeded low-coherence codebook.
///
/// Each attempt starts from `count` Haar-random vectors and runs up to
/// [`REFINE_STEPS`] passes of coherence descent, stopping as soon as every
/// pairwise overlap is below `epsilon`. The result is certified exactly;
/// after `max_attempts` failed attempts the packing is reported infeasible.
pub fn random_codebook(
    dim: usize,
    count: usize,
    epsilon: f64,
    seed: u64,
    max_attempts: usize,
) -> Result<Codebook> {
    if count < 2 {
        return Err(Error::domain("a codebook needs at least 2 vectors"));
    }
    if dim == 0 {
        return Err(Error::domain("dimension must be positive"));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::domain(format!("epsilon {epsilon} outside (0, 1]")));
    }
    let mut rng = rng_stream(seed, "codebook");
    for _ in 0..max_attempts {
        let mut vectors = (0..count)
            .map(|_| StateVector::haar(dim, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        for _ in 0..=REFINE_STEPS {
            let worst = max_overlap(&vectors)?;
            if worst < epsilon {
                return Codebook::new(vectors, epsilon, Construction::Random, Some(seed));
            }
            refine_step(&mut vectors, worst)?;
        }
    }
    Err(Error::PackingFailure {
        dim,
        count,
        epsilon,
        attempts: max_attempts,
    })
}

/// The d + 1 vertices of a regular simplex centred at the origin of ℝ^d,
/// pairwise inner product exactly −1/d.
///
/// Vertex i has coordinates √((d+1)/d)·h_k[i] for k = 1..d, where h_k is the
/// k-th Helmert contrast (1,…,1,−k,0,…,0)/√(k(k+1)).
pub fn simplex_codebook(dim: usize) -> Result<Codebook> {
    if dim < 2 {
        return Err(Error::domain("simplex codebook needs d ≥ 2"));
    }
    let scale = ((dim + 1) as f64 / dim as f64).sqrt();
    let vectors = (0..=dim)
        .map(|i| {
            let amps = (1..=dim)
                .map(|k| {
                    let norm = ((k * (k + 1)) as f64).sqrt();
                    let h = match i.cmp(&k) {
                        std::cmp::Ordering::Less => 1.0 / norm,
                        std::cmp::Ordering::Equal => -(k as f64) / norm,
                        std::cmp::Ordering::Greater => 0.0,
                    };
                    Complex64::new(scale * h, 0.0)
                })
                .collect();
            StateVector::from_unit(amps)
        })
        .collect::<Result<Vec<_>>>()?;
    Codebook::new(
        vectors,
        1.0 / dim as f64 + 1e-12,
        Construction::Simplex,
        None,
    )
}

/// A committed codebook state, tied to its codebook by fingerprint.
#[derive(Debug, Clone, PartialEq)]
pub struct CodebookCommitment {
    state: StateVector,
    codebook_id: String,
}

impl CodebookCommitment {
    /// Wraps an arbitrary state, e.g. a cheating committer's.
    pub fn from_state(codebook: &Codebook, state: StateVector) -> Result<Self> {
        if state.dim() != codebook.dim() {
            return Err(Error::DimMismatch {
                expected: codebook.dim(),
                actual: state.dim(),
            });
        }
        Ok(Self {
            state,
            codebook_id: codebook.id().to_owned(),
        })
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn codebook_id(&self) -> &str {
        &self.codebook_id
    }
}

pub fn commit_string(codebook: &Codebook, index: usize) -> Result<CodebookCommitment> {
    CodebookCommitment::from_state(codebook, codebook.vector(index)?.clone())
}

/// Commits the N-bit string read as a big-endian index.
pub fn commit_bits(codebook: &Codebook, bits: &BitString) -> Result<CodebookCommitment> {
    if bits.len() != codebook.bits() {
        return Err(Error::LengthMismatch {
            expected: codebook.bits(),
            actual: bits.len(),
        });
    }
    let index = bits.to_index().expect("N ≤ log₂ count fits in usize");
    commit_string(codebook, index)
}

/// Projective test {P_claimed, 1 − P_claimed} on the held state.
pub fn verify_unveil<R: Rng + ?Sized>(
    codebook: &Codebook,
    held: &CodebookCommitment,
    claimed: usize,
    rng: &mut R,
) -> Result<UnveilVerdict> {
    if held.codebook_id() != codebook.id() {
        return Err(Error::InvalidCodebook(
            "commitment was made against a different codebook".into(),
        ));
    }
    let test = Measurement::test(projector(codebook.vector(claimed)?))?;
    let ok = test.sample(held.state(), rng)? == 0;
    Ok(UnveilVerdict::from_outcomes([ok]))
}

fn check_targets(codebook: &Codebook, targets: &[usize]) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::domain("target set is empty"));
    }
    let mut seen = BTreeSet::new();
    for &t in targets {
        codebook.vector(t)?;
        if !seen.insert(t) {
            return Err(Error::DuplicateTargets(t));
        }
    }
    Ok(())
}

/// Q = Σ_k P_{i_k}.
pub fn cheat_operator(codebook: &Codebook, targets: &[usize]) -> Result<HermitianOperator> {
    check_targets(codebook, targets)?;
    let mut q = CMatrix::zeros(codebook.dim());
    for &t in targets {
        q.add_outer(1.0, &codebook.vectors[t])?;
    }
    HermitianOperator::new(q)
}

/// Gram matrix G_jk = ⟨v_{i_j}|v_{i_k}⟩ of the targets.
pub fn gram_matrix(codebook: &Codebook, targets: &[usize]) -> Result<HermitianOperator> {
    check_targets(codebook, targets)?;
    let vs: Vec<&StateVector> = targets.iter().map(|&t| &codebook.vectors[t]).collect();
    let mut g = CMatrix::zeros(vs.len());
    for (j, a) in vs.iter().enumerate() {
        for (k, b) in vs.iter().enumerate() {
            g[(j, k)] = if j == k {
                Complex64::new(1.0, 0.0)
            } else {
                a.inner(b)?
            };
        }
    }
    HermitianOperator::new(g)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheatReport {
    pub target_indices: Vec<usize>,
    pub cheat_state: StateVector,
    /// Probability of passing an unveiling of each target.
    pub success_probs: Vec<f64>,
    /// Σ p_i, which equals λ_max(Q).
    pub total: f64,
    /// 1 + (r − 1)ε.
    pub bound: f64,
}

/// Best state for keeping all `targets` open: the top eigenvector of Q.
pub fn optimal_multistring_cheat(codebook: &Codebook, targets: &[usize]) -> Result<CheatReport> {
    let q = cheat_operator(codebook, targets)?;
    let eig = hermitian_eigen(&q)?;
    let cheat_state = eig.top().1.clone();
    let success_probs = targets
        .iter()
        .map(|&t| codebook.vectors[t].overlap_sqr(&cheat_state))
        .collect::<Result<Vec<_>>>()?;
    let total = success_probs.iter().sum();
    Ok(CheatReport {
        target_indices: targets.to_vec(),
        cheat_state,
        success_probs,
        total,
        bound: multistring_bound(targets.len(), codebook.epsilon()),
    })
}

/// 1 + (r − 1)ε.
pub fn multistring_bound(r: usize, epsilon: f64) -> f64 {
    1.0 + (r.saturating_sub(1)) as f64 * epsilon
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BobInfo {
    /// Entropy of the equal mixture of all codebook states.
    pub holevo: f64,
    /// log₂ d.
    pub dim_bound: f64,
    /// ⌊log₂ count⌋.
    pub committed_bits: usize,
}

pub fn bob_info_report(codebook: &Codebook) -> Result<BobInfo> {
    if codebook.dim() > MAX_REPORT_DIM {
        return Err(Error::TooLarge {
            what: "codebook dimension",
            size: codebook.dim(),
            limit: MAX_REPORT_DIM,
        });
    }
    let rho = DensityMatrix::uniform_mixture(codebook.vectors())?;
    Ok(BobInfo {
        holevo: von_neumann_entropy(&rho)?,
        dim_bound: (codebook.dim() as f64).log2(),
        committed_bits: codebook.bits(),
    })
}

/// Codebook agreed before a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum CodebookParams {
    Random {
        dim: usize,
        count: usize,
        epsilon: f64,
        codebook_seed: u64,
        max_attempts: usize,
    },
    Simplex {
        dim: usize,
    },
}

impl CodebookParams {
    pub fn build(&self) -> Result<Codebook> {
        match *self {
            CodebookParams::Random {
                dim,
                count,
                epsilon,
                codebook_seed,
                max_attempts,
            } => random_codebook(dim, count, epsilon, codebook_seed, max_attempts),
            CodebookParams::Simplex { dim } => simplex_codebook(dim),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AliceStrategy {
    /// Commit a uniformly random N-bit string and unveil it.
    Honest,
    /// Keep `r` random strings open with the top eigenvector of Q, then
    /// unveil one of them at random.
    Cheat { r: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum BobStrategy {
    Honest,
}

impl AliceStrategy {
    pub fn from_descriptor(d: &StrategyDescriptor) -> Result<Self> {
        match d.name.as_str() {
            "honest" => {
                d.expect_keys(&[])?;
                Ok(Self::Honest)
            }
            "cheat" => {
                d.expect_keys(&["r"])?;
                let r = d.count("r")?.unwrap_or(2);
                if r == 0 {
                    return Err(Error::InvalidStrategy("cheat needs r ≥ 1".into()));
                }
                Ok(Self::Cheat { r })
            }
            _ => Err(d.unknown()),
        }
    }

    fn descriptor(&self) -> StrategyDescriptor {
        match self {
            Self::Honest => StrategyDescriptor::honest(Party::Alice),
            Self::Cheat { r } => {
                StrategyDescriptor::new(Party::Alice, "cheat").with("r", *r as f64)
            }
        }
    }
}

impl BobStrategy {
    pub fn from_descriptor(d: &StrategyDescriptor) -> Result<Self> {
        d.expect_keys(&[])?;
        match d.name.as_str() {
            "honest" => Ok(Self::Honest),
            _ => Err(d.unknown()),
        }
    }
}

/// One commit–unveil session against the codebook built from `params`.
pub fn run_session(
    params: &CodebookParams,
    alice: &AliceStrategy,
    bob: &BobStrategy,
    seed: u64,
    observer: &mut Observer<'_>,
) -> Result<Transcript> {
    let BobStrategy::Honest = bob;
    let codebook = params.build()?;
    let mut alice_rng = rng_stream(seed, "alice");
    let mut nature = rng_stream(seed, "nature");
    let mut channel = Channel::new(Protocol::CodebookCommit, observer);
    let mut stats = SessionStats::new();
    let strings = 1usize << codebook.bits();

    let (held, unveil_index) = match alice {
        AliceStrategy::Honest => {
            let index = alice_rng.random_range(0..strings);
            (commit_string(&codebook, index)?, index)
        }
        AliceStrategy::Cheat { r } => {
            if *r > strings {
                return Err(Error::InvalidStrategy(format!(
                    "cannot keep {r} of {strings} strings open"
                )));
            }
            let targets = sample(&mut alice_rng, strings, *r).into_vec();
            let report = optimal_multistring_cheat(&codebook, &targets)?;
            stats.insert("cheat_total".into(), report.total);
            stats.insert("cheat_bound".into(), report.bound);
            let pick = targets[alice_rng.random_range(0..targets.len())];
            (
                CodebookCommitment::from_state(&codebook, report.cheat_state)?,
                pick,
            )
        }
    };
    channel.send(
        Party::Alice,
        Payload::CommitState {
            dim: codebook.dim(),
            codebook: codebook.id().to_owned(),
        },
    )?;
    match channel.last_received(Party::Bob)? {
        Payload::CommitState { dim, codebook: id }
            if *dim == codebook.dim() && id == codebook.id() => {}
        other => return Err(unexpected(Party::Bob, other, "commit_state")),
    }

    channel.send(
        Party::Alice,
        Payload::UnveilIndex {
            claimed: BitString::from_index(unveil_index, codebook.bits())?,
            index: unveil_index,
        },
    )?;
    let verdict = match channel.last_received(Party::Bob)? {
        Payload::UnveilIndex { claimed, index } if claimed.to_index() == Some(*index) => {
            verify_unveil(&codebook, &held, *index, &mut nature)?
        }
        other => return Err(unexpected(Party::Bob, other, "unveil_index")),
    };
    channel.send(
        Party::Bob,
        Payload::UnveilVerdict {
            accepted: verdict.accepted(),
            failing_index: verdict.failing_index(),
        },
    )?;

    Ok(Transcript {
        params: ProtocolParams::CodebookCommit(params.clone()),
        seed,
        alice: alice.descriptor(),
        bob: StrategyDescriptor::honest(Party::Bob),
        messages: channel.into_messages(),
        verdict: if verdict.accepted() {
            Verdict::Accepted
        } else {
            Verdict::Rejected
        },
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::inner;

    #[test]
    fn vacuous_bound_always_packs() {
        let cb = random_codebook(2, 2, 1.0, 3, 1).unwrap();
        assert_eq!(cb.count(), 2);
        assert_eq!(cb.bits(), 1);
    }

    #[test]
    fn sixteen_dims_thirty_two_vectors() {
        for seed in 0..5 {
            let cb = random_codebook(16, 32, 0.25, seed, 10).unwrap();
            assert_eq!(cb.count(), 32);
            assert!(cb.recertify().unwrap() < 0.25);
            assert!((cb.packing_constant() - 1.25).abs() < 1e-12);
        }
    }

    #[test]
    fn four_qubit_states_cannot_be_nearly_orthogonal() {
        // Four unit vectors in ℂ² have coherence at least √(1/3) (Welch).
        assert!(matches!(
            random_codebook(2, 4, 0.1, 1, 3),
            Err(Error::PackingFailure { .. })
        ));
    }

    #[test]
    fn random_codebook_is_deterministic() {
        let a = random_codebook(8, 12, 0.5, 77, 5).unwrap();
        let b = random_codebook(8, 12, 0.5, 77, 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.id(), random_codebook(8, 12, 0.5, 78, 5).unwrap().id());
    }

    #[test]
    fn simplex_geometry() {
        for d in 2..=6 {
            let cb = simplex_codebook(d).unwrap();
            assert_eq!(cb.count(), d + 1);
            for i in 0..=d {
                for j in 0..=d {
                    let ip = inner(&cb.vectors()[i], &cb.vectors()[j]).unwrap();
                    let expect = if i == j { 1.0 } else { -1.0 / d as f64 };
                    assert!((ip.re - expect).abs() < 1e-12 && ip.im == 0.0);
                }
            }
        }
        assert!(simplex_codebook(1).is_err());
    }

    #[test]
    fn simplex_gram_spectrum() {
        let d = 5;
        let cb = simplex_codebook(d).unwrap();
        let all: Vec<usize> = (0..=d).collect();
        let eig = gram_matrix(&cb, &all).unwrap().eigen().unwrap();
        let top = (d + 1) as f64 / d as f64;
        for l in &eig.eigenvalues()[..d] {
            assert!((l - top).abs() < 1e-9);
        }
        assert!(eig.eigenvalues()[d].abs() < 1e-9);
    }

    #[test]
    fn commit_and_index_errors() {
        let cb = simplex_codebook(3).unwrap();
        assert_eq!(commit_string(&cb, 0).unwrap().state(), &cb.vectors()[0]);
        assert_eq!(
            commit_string(&cb, 4),
            Err(Error::IndexOutOfRange { index: 4, len: 4 })
        );
        let c = commit_bits(&cb, &"11".parse().unwrap()).unwrap();
        assert_eq!(c.state(), &cb.vectors()[3]);
    }

    #[test]
    fn unveil_checks_codebook_identity() {
        let a = simplex_codebook(3).unwrap();
        let b = simplex_codebook(4).unwrap();
        let held = commit_string(&a, 1).unwrap();
        let mut rng = rng_stream(0, "t");
        assert!(verify_unveil(&b, &held, 1, &mut rng).is_err());
        assert!(verify_unveil(&a, &held, 1, &mut rng).unwrap().accepted());
        assert!(matches!(
            verify_unveil(&a, &held, 9, &mut rng),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn cheat_operator_shape() {
        let cb = random_codebook(16, 32, 0.25, 1, 10).unwrap();
        let q = cheat_operator(&cb, &[3]).unwrap();
        assert!((q.eigen().unwrap().eigenvalues()[0] - 1.0).abs() < 1e-12);
        let q = cheat_operator(&cb, &[0, 5, 9, 30]).unwrap();
        assert!((q.trace() - 4.0).abs() < 1e-9);
        assert_eq!(
            cheat_operator(&cb, &[1, 2, 1]),
            Err(Error::DuplicateTargets(1))
        );
        assert!(cheat_operator(&cb, &[]).is_err());
    }

    #[test]
    fn two_target_cheat_matches_overlap() {
        let cb = random_codebook(16, 32, 0.25, 2, 10).unwrap();
        let s = cb.vectors()[4].inner(&cb.vectors()[7]).unwrap().norm();
        let report = optimal_multistring_cheat(&cb, &[4, 7]).unwrap();
        assert!((report.total - (1.0 + s)).abs() < 1e-9);
        assert!(report.total <= 1.0 + cb.epsilon());
        let single = optimal_multistring_cheat(&cb, &[4]).unwrap();
        assert!((single.total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gram_matrix_two_by_two() {
        let cb = simplex_codebook(2).unwrap();
        let g = gram_matrix(&cb, &[0, 2]).unwrap();
        let eig = g.eigen().unwrap();
        assert!((eig.eigenvalues()[0] - 1.5).abs() < 1e-12);
        assert!((eig.eigenvalues()[1] - 0.5).abs() < 1e-12);
        assert_eq!(
            gram_matrix(&cb, &[1]).unwrap().matrix(),
            &CMatrix::identity(1)
        );
    }

    #[test]
    fn simplex_info_report() {
        let info = bob_info_report(&simplex_codebook(2).unwrap()).unwrap();
        assert!(info.holevo <= 1.0 + 1e-9);
        assert_eq!(info.committed_bits, 1);
    }

    #[test]
    fn single_vector_rejected() {
        let v = StateVector::basis(2, 0).unwrap();
        assert!(matches!(
            Codebook::new(vec![v], 0.5, Construction::Random, None),
            Err(Error::InvalidCodebook(_))
        ));
        assert!(random_codebook(4, 1, 0.5, 0, 1).is_err());
    }

    #[test]
    fn sessions() {
        let params = CodebookParams::Random {
            dim: 16,
            count: 32,
            epsilon: 0.25,
            codebook_seed: 4,
            max_attempts: 10,
        };
        let t = run_session(
            &params,
            &AliceStrategy::Honest,
            &BobStrategy::Honest,
            3,
            &mut |_, _| {},
        )
        .unwrap();
        assert_eq!(t.verdict, Verdict::Accepted);
        let t = run_session(
            &params,
            &AliceStrategy::Cheat { r: 4 },
            &BobStrategy::Honest,
            3,
            &mut |_, _| {},
        )
        .unwrap();
        assert!(t.stats["cheat_total"] <= t.stats["cheat_bound"] + 1e-9);
        assert!(run_session(
            &params,
            &AliceStrategy::Cheat { r: 33 },
            &BobStrategy::Honest,
            3,
            &mut |_, _| {}
        )
        .is_err());
    }
}
