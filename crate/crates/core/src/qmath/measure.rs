use rand::Rng;

use super::matrix::{projector, CMatrix, HermitianOperator};
use super::state::StateVector;
use crate::{Error, Result};

/// Projectors of a complete measurement must sum to the identity within this.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// A complete projective measurement, validated once and reusable.
#[derive(Debug, Clone)]
pub struct Measurement {
    projectors: Vec<HermitianOperator>,
}

impl Measurement {
    pub fn new(projectors: Vec<HermitianOperator>) -> Result<Self> {
        let Some(first) = projectors.first() else {
            return Err(Error::IncompleteMeasurement {
                deviation: f64::INFINITY,
            });
        };
        let dim = first.dim();
        let mut total = CMatrix::zeros(dim);
        for p in &projectors {
            total = total.add(p.matrix())?;
        }
        let deviation = total.max_abs_diff(&CMatrix::identity(dim));
        if !(deviation <= COMPLETENESS_TOL) {
            return Err(Error::IncompleteMeasurement { deviation });
        }
        Ok(Self { projectors })
    }

    /// Measurement in an orthonormal basis.
    pub fn from_basis(basis: &[StateVector]) -> Result<Self> {
        Self::new(basis.iter().map(projector).collect())
    }

    pub fn computational(dim: usize) -> Result<Self> {
        let basis = (0..dim)
            .map(|k| StateVector::basis(dim, k))
            .collect::<Result<Vec<_>>>()?;
        Self::from_basis(&basis)
    }

    /// The two-outcome test {P, 1 − P}: outcome 0 is "eigenvalue 1".
    pub fn test(p: HermitianOperator) -> Result<Self> {
        let rest = HermitianOperator::identity(p.dim()).sub(&p)?;
        Self::new(vec![p, rest])
    }

    pub fn outcomes(&self) -> usize {
        self.projectors.len()
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn projectors(&self) -> &[HermitianOperator] {
        &self.projectors
    }

    /// Born probabilities ⟨ψ|P_k|ψ⟩, clipped to [0, 1].
    pub fn probabilities(&self, state: &StateVector) -> Result<Vec<f64>> {
        self.projectors
            .iter()
            .map(|p| p.expectation(state).map(|x| x.clamp(0.0, 1.0)))
            .collect()
    }

    /// Draws one outcome. Consumes exactly one uniform double from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, state: &StateVector, rng: &mut R) -> Result<usize> {
        let probs = self.probabilities(state)?;
        Ok(sample_index(&probs, rng.random::<f64>()))
    }

    /// Draws an outcome and returns the renormalized post-measurement state.
    pub fn sample_and_collapse<R: Rng + ?Sized>(
        &self,
        state: &StateVector,
        rng: &mut R,
    ) -> Result<(usize, StateVector)> {
        let k = self.sample(state, rng)?;
        let projected = self.projectors[k].matrix().apply(state)?;
        Ok((k, StateVector::normalized(projected)?))
    }
}

/// Inverse-CDF selection; outcomes of zero probability are never returned.
pub fn sample_index(probs: &[f64], u: f64) -> usize {
    let total: f64 = probs.iter().sum();
    let target = u * total;
    let mut cumulative = 0.0;
    let mut last_possible = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        last_possible = k;
        cumulative += p;
        if target < cumulative {
            return k;
        }
    }
    last_possible
}

/// One Born-rule draw of `state` against `projectors`.
pub fn born_sample<R: Rng + ?Sized>(
    state: &StateVector,
    projectors: &[HermitianOperator],
    rng: &mut R,
) -> Result<usize> {
    Measurement::new(projectors.to_vec())?.sample(state, rng)
}
