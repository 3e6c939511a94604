use num_complex::Complex64;

use super::matrix::{CMatrix, HermitianOperator};
use super::state::StateVector;
use crate::{Error, Result};

/// Sweep budget for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;
/// Convergence threshold on off-diagonal magnitudes, for operators of
/// Frobenius norm at most 1. Larger operators scale it by their norm.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
/// Dimension guard.
pub const MAX_EIGEN_DIM: usize = 4096;

/// Spectrum of a Hermitian operator, eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<StateVector>,
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[StateVector] {
        &self.eigenvectors
    }

    /// Largest eigenvalue and its eigenvector.
    pub fn top(&self) -> (f64, &StateVector) {
        (self.eigenvalues[0], &self.eigenvectors[0])
    }

    /// Σ λ_k |u_k⟩⟨u_k|.
    pub fn reconstruct(&self) -> CMatrix {
        let dim = self.eigenvectors.first().map_or(0, StateVector::dim);
        let mut m = CMatrix::zeros(dim);
        for (l, u) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            m.add_outer(*l, u)
                .expect("eigenvectors share the operator dimension");
        }
        m
    }
}

fn max_off_diagonal(a: &[Complex64], n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            worst = worst.max(a[p * n + q].norm());
        }
    }
    worst
}

/// Cyclic complex Jacobi eigendecomposition.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies
/// the real symmetric Jacobi rotation, so the unitary acting on the (p, q)
/// plane is
///
/// ```text
/// U = [[ c,            s          ],
///      [ -s·e^{-iφ},   c·e^{-iφ}  ]],   a_pq = |a_pq|·e^{iφ}
/// ```
///
/// and `A ← U† A U`, `V ← V U`. Only the upper triangle is read for pivots;
/// the lower triangle is kept as its conjugate mirror.
pub fn hermitian_eigen(h: &HermitianOperator) -> Result<EigenDecomposition> {
    let n = h.dim();
    if n > MAX_EIGEN_DIM {
        return Err(Error::TooLarge {
            what: "eigensolver dimension",
            size: n,
            limit: MAX_EIGEN_DIM,
        });
    }
    let mut a = h.matrix().clone();
    let tol = OFF_DIAGONAL_TOL * a.frobenius_norm().max(1.0);
    let a = a.as_mut_slice();
    let mut v = CMatrix::identity(n);
    let v = v.as_mut_slice();

    // Diagonal entries are real for Hermitian input; drop rounding residue.
    for i in 0..n {
        a[i * n + i] = Complex64::new(a[i * n + i].re, 0.0);
    }

    let mut residual = max_off_diagonal(a, n);
    let mut sweeps = 0;
    while residual >= tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                residual,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let b = a[p * n + q];
                let mag = b.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = b / mag; // e^{iφ}
                let phase_c = phase.conj(); // e^{-iφ}
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;

                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau.abs() > 1e150 {
                    0.5 / tau
                } else {
                    let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                    sign / (tau.abs() + (tau * tau + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                let u_qp = -phase_c * s;
                let u_qq = phase_c * c;

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = akp * c + akq * u_qp;
                    let new_kq = akp * s + akq * u_qq;
                    a[k * n + p] = new_kp;
                    a[k * n + q] = new_kq;
                    a[p * n + k] = new_kp.conj();
                    a[q * n + k] = new_kq.conj();
                }
                a[p * n + p] = Complex64::new(app - t * mag, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c + vkq * u_qp;
                    v[k * n + q] = vkp * s + vkq * u_qq;
                }
            }
        }
        residual = max_off_diagonal(a, n);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let eigenvectors = order
        .iter()
        .map(|&col| {
            let amps: Vec<Complex64> = (0..n).map(|k| v[k * n + col]).collect();
            StateVector::normalized(amps)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}
