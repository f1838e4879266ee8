//! Pure and mixed states in the `|j, m>` basis (m ascending from -j to +j).

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigenvalues, hermiticity_defect, CMatrix, CVector, C64};

const NORM_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-9;
const PSD_TOL: f64 = 1e-9;
const EXPECTATION_IMAG_TOL: f64 = 1e-10;

/// Unit-norm state vector of dimension `2j + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    amplitudes: CVector,
}

impl SpinState {
    /// Wraps `amplitudes`, rejecting vectors whose norm is not 1 (1e-10).
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Numerical(format!("state norm {norm} differs from 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes an arbitrary non-zero vector.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::param("amplitudes", "cannot normalize a zero or non-finite vector"));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    pub(crate) fn from_raw(amplitudes: CVector) -> Self {
        Self { amplitudes }
    }

    /// Basis state at position `index` (0 is m = -j).
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::param("index", format!("{index} outside dimension {dim}")));
        }
        let mut v = CVector::zeros(dim);
        v[index] = c(1.0);
        Ok(Self { amplitudes: v })
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &SpinState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|<self|other>|`, insensitive to global phase.
    pub fn fidelity(&self, other: &SpinState) -> f64 {
        self.inner(other).norm()
    }

    pub fn apply(&self, op: &CMatrix) -> Self {
        Self {
            amplitudes: op * &self.amplitudes,
        }
    }

    pub fn projector(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    rho: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-10), trace (1e-9) and positivity (-1e-9).
    pub fn new(rho: CMatrix) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::DimensionMismatch {
                expected: rho.nrows(),
                found: rho.ncols(),
            });
        }
        let defect = hermiticity_defect(&rho);
        if defect > HERMITIAN_TOL {
            return Err(Error::Numerical(format!(
                "density matrix not Hermitian (defect {defect:e})"
            )));
        }
        let trace = rho.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::Numerical(format!("density matrix trace {trace} differs from 1")));
        }
        let min_eig = hermitian_eigenvalues(&rho)[0];
        if min_eig < -PSD_TOL {
            return Err(Error::Numerical(format!(
                "density matrix has negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { rho })
    }

    pub fn pure(state: &SpinState) -> Self {
        Self {
            rho: state.projector(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            rho: CMatrix::identity(dim, dim) * c(1.0 / dim as f64),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn into_matrix(self) -> CMatrix {
        self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // Tr(rho^2) = sum |rho_ik|^2 for Hermitian rho
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.rho)[0]
    }

    /// `u rho u^dag`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self {
            rho: u * &self.rho * u.adjoint(),
        }
    }
}

/// Expectation values of Hermitian observables.
pub trait Expectation {
    fn dim(&self) -> usize;

    /// Complex `<op>` without any checks.
    fn raw_expectation(&self, op: &CMatrix) -> C64;

    /// Real expectation of a Hermitian `op`.
    ///
    /// Rejects mismatched dimensions and non-Hermitian operators, and
    /// reports an imaginary residue above 1e-10 as a numerical failure.
    fn expectation(&self, op: &CMatrix) -> Result<f64> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: op.nrows().max(op.ncols()),
            });
        }
        let defect = hermiticity_defect(op);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let z = self.raw_expectation(op);
        if z.im.abs() > EXPECTATION_IMAG_TOL {
            return Err(Error::Numerical(format!(
                "expectation value has imaginary part {:e}",
                z.im
            )));
        }
        Ok(z.re)
    }
}

impl Expectation for SpinState {
    fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    fn raw_expectation(&self, op: &CMatrix) -> C64 {
        self.amplitudes.dotc(&(op * &self.amplitudes))
    }
}

impl Expectation for DensityMatrix {
    fn dim(&self) -> usize {
        self.rho.nrows()
    }

    fn raw_expectation(&self, op: &CMatrix) -> C64 {
        // Tr(rho op) = sum_ik rho_ik op_ki
        let n = self.rho.nrows();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.rho[(i, k)] * op[(k, i)];
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized_vector() {
        let v = CVector::from_vec(vec![c(1.0), c(1.0)]);
        assert!(SpinState::new(v.clone()).is_err());
        let s = SpinState::normalized(v).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn maximally_mixed_purity() {
        let rho = DensityMatrix::maximally_mixed(9);
        assert!((rho.purity() - 1.0 / 9.0).abs() < 1e-15);
        assert!(DensityMatrix::new(rho.into_matrix()).is_ok());
    }

    #[test]
    fn pure_state_purity_is_one() {
        let s = SpinState::normalized(CVector::from_vec(vec![c(1.0), C64::new(0.3, -0.2), c(0.5)]))
            .unwrap();
        let rho = DensityMatrix::pure(&s);
        assert!((rho.purity() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn density_matrix_rejects_bad_input() {
        let mut m = CMatrix::identity(2, 2);
        assert!(DensityMatrix::new(m.clone()).is_err()); // trace 2
        m[(1, 1)] = c(-0.5);
        m[(0, 0)] = c(1.5);
        assert!(DensityMatrix::new(m).is_err()); // negative eigenvalue
        let nh = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.0), c(0.5)]);
        assert!(DensityMatrix::new(nh).is_err());
    }

    #[test]
    fn expectation_checks_dimension_and_hermiticity() {
        let s = SpinState::basis(2, 0).unwrap();
        let op3 = CMatrix::identity(3, 3);
        assert!(matches!(
            s.expectation(&op3),
            Err(Error::DimensionMismatch { .. })
        ));
        let nh = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        assert!(matches!(s.expectation(&nh), Err(Error::NotHermitian(_))));
    }
}
