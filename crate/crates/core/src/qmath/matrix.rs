use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use super::eigen::{hermitian_eigen, EigenDecomposition};
use super::state::StateVector;
use crate::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// |v⟩⟨v|.
    pub fn outer(v: &StateVector) -> Self {
        let a = v.amplitudes();
        Self::from_fn(a.len(), |i, j| a[i] * a[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &CMatrix) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Accumulates `weight · |v⟩⟨v|` in place.
    pub fn add_outer(&mut self, weight: f64, v: &StateVector) -> Result<()> {
        if v.dim() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                actual: v.dim(),
            });
        }
        let a = v.amplitudes();
        for i in 0..self.dim {
            let ai = a[i] * weight;
            let row = &mut self.data[i * self.dim..(i + 1) * self.dim];
            for (entry, aj) in row.iter_mut().zip(a) {
                *entry += ai * aj.conj();
            }
        }
        Ok(())
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product with `self` as the slow index.
    pub fn kron(&self, other: &CMatrix) -> Self {
        let (n, m) = (self.dim, other.dim);
        Self::from_fn(n * m, |i, j| self[(i / m, j / m)] * other[(i % m, j % m)])
    }

    pub fn apply(&self, v: &StateVector) -> Result<Vec<Complex64>> {
        if v.dim() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                actual: v.dim(),
            });
        }
        let a = v.amplitudes();
        Ok((0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(a)
                    .map(|(m, x)| m * x)
                    .sum()
            })
            .collect())
    }

    /// ⟨v|M|v⟩.
    pub fn expectation(&self, v: &StateVector) -> Result<Complex64> {
        let mv = self.apply(v)?;
        Ok(v.amplitudes()
            .iter()
            .zip(&mv)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest |M_ij − conj(M_ji)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_dim(&self, other: &CMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// A Hermitian operator (observable, projector or sum of projectors).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(CMatrix);

/// Rank-one projector |v⟩⟨v|.
pub fn projector(v: &StateVector) -> HermitianOperator {
    HermitianOperator(CMatrix::outer(v))
}

impl HermitianOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.dim() == 0 {
            return Err(Error::domain("operator dimension must be positive"));
        }
        let defect = m.hermiticity_defect();
        if !(defect <= HERMITIAN_TOL) {
            return Err(Error::domain(format!(
                "matrix is not Hermitian (defect {defect:e})"
            )));
        }
        Ok(Self(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn add(&self, other: &HermitianOperator) -> Result<Self> {
        self.0.add(&other.0).map(Self)
    }

    pub fn sub(&self, other: &HermitianOperator) -> Result<Self> {
        self.0.sub(&other.0).map(Self)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.scaled(factor))
    }

    /// Sum of operators of equal dimension; `None` for an empty list.
    pub fn sum<'a>(ops: impl IntoIterator<Item = &'a HermitianOperator>) -> Result<Option<Self>> {
        let mut acc: Option<CMatrix> = None;
        for op in ops {
            acc = Some(match acc {
                None => op.0.clone(),
                Some(m) => m.add(&op.0)?,
            });
        }
        Ok(acc.map(Self))
    }

    /// ⟨v|H|v⟩, which is real for Hermitian H.
    pub fn expectation(&self, v: &StateVector) -> Result<f64> {
        self.0.expectation(v).map(|z| z.re)
    }

    pub fn eigen(&self) -> Result<EigenDecomposition> {
        hermitian_eigen(self)
    }
}

/// A density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    /// Validates all three density-matrix invariants, including positivity
    /// through a full eigendecomposition.
    pub fn new(m: CMatrix) -> Result<Self> {
        let h = HermitianOperator::new(m)?;
        let trace = h.0.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::domain(format!("trace {trace} is not 1")));
        }
        let eig = hermitian_eigen(&h)?;
        if let Some(&min) = eig.eigenvalues().last() {
            if min < -PSD_TOL {
                return Err(Error::domain(format!(
                    "matrix has negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(Self(h.0))
    }

    pub fn pure(v: &StateVector) -> Self {
        Self(CMatrix::outer(v))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("dimension must be positive"));
        }
        Ok(Self(CMatrix::identity(dim).scaled(1.0 / dim as f64)))
    }

    /// Σ w_k |v_k⟩⟨v_k| for a probability vector `w`. Positive semidefinite by
    /// construction, so no eigendecomposition is needed.
    pub fn mixture(weights: &[f64], states: &[StateVector]) -> Result<Self> {
        if weights.len() != states.len() {
            return Err(Error::LengthMismatch {
                expected: states.len(),
                actual: weights.len(),
            });
        }
        let Some(first) = states.first() else {
            return Err(Error::domain("mixture of zero states"));
        };
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::domain("mixture weights must be nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::domain(format!("mixture weights sum to {total}")));
        }
        let mut m = CMatrix::zeros(first.dim());
        for (w, v) in weights.iter().zip(states) {
            m.add_outer(*w, v)?;
        }
        Ok(Self(m))
    }

    /// Equal-weight mixture.
    pub fn uniform_mixture(states: &[StateVector]) -> Result<Self> {
        let w = vec![1.0 / states.len().max(1) as f64; states.len()];
        Self::mixture(&w, states)
    }

    pub fn kron(&self, other: &DensityMatrix) -> Self {
        Self(self.0.kron(&other.0))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn as_operator(&self) -> HermitianOperator {
        HermitianOperator(self.0.clone())
    }

    /// Tr(ρ H).
    pub fn expectation(&self, h: &HermitianOperator) -> Result<f64> {
        Ok(self.0.matmul(&h.0)?.trace().re)
    }
}
