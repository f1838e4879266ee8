//! Entanglement between one qubit and the remaining `2j - 1` qubits of the
//! symmetric decomposition of a spin `j`.
//!
//! The single-qubit reduced state and linear entropy follow from the
//! collective means alone. Negativity needs the full state: it is embedded
//! into `C^2 (x) C^{2j}` (qubit times spin `j - 1/2`) with the Clebsch-Gordan
//! isometry
//!
//! ```text
//! |j, m> = sqrt((j+m)/2j) |up>|j-1/2, m-1/2> + sqrt((j-m)/2j) |down>|j-1/2, m+1/2>
//! ```
//!
//! Qubit basis order is `(up, down)`; the embedded index is `q * 2j + r`
//! with the rest factor in ascending-`m` order.

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigenvalues, CMatrix, C64, I};
use crate::spin::{AngularMomentumOps, SpinQuantum};
use crate::state::{DensityMatrix, Expectation, SpinState};

const PSD_TOL: f64 = 1e-9;
const MEAN_SLACK: f64 = 1e-9;
/// Negative partial-transpose eigenvalues above this are rounding noise.
pub const NEGATIVITY_FLOOR: f64 = 1e-10;

/// `(<Jx>, <Jy>, <Jz>)`.
pub fn mean_spin<S: Expectation>(state: &S, ops: &AngularMomentumOps) -> Result<[f64; 3]> {
    Ok([
        state.expectation(&ops.jx)?,
        state.expectation(&ops.jy)?,
        state.expectation(&ops.jz)?,
    ])
}

/// Reduced state of one qubit, `rho2 = 1/2 + s . sigma`.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitState {
    pub rho2: Matrix2<C64>,
    /// `<s> = <J>/(2j)`, with `|s| <= 1/2`.
    pub mean_spin: [f64; 3],
}

impl QubitState {
    pub fn from_mean_spin(s: [f64; 3]) -> Self {
        let [sx, sy, sz] = s;
        let rho2 = Matrix2::new(
            c(0.5 + sz),
            C64::new(sx, -sy),
            C64::new(sx, sy),
            c(0.5 - sz),
        );
        Self { rho2, mean_spin: s }
    }

    /// `Tr(rho2^2) = 1/2 + 2|s|^2`.
    pub fn purity(&self) -> f64 {
        self.rho2.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Smallest eigenvalue, `1/2 - |s|`.
    pub fn min_eigenvalue(&self) -> f64 {
        let [sx, sy, sz] = self.mean_spin;
        0.5 - (sx * sx + sy * sy + sz * sz).sqrt()
    }
}

/// Single-qubit reduced state from the collective means.
pub fn reduced_qubit<S: Expectation>(state: &S, ops: &AngularMomentumOps) -> Result<QubitState> {
    if state.dim() != ops.dim() {
        return Err(Error::DimensionMismatch {
            expected: ops.dim(),
            found: state.dim(),
        });
    }
    let twice_j = ops.spin().twice_j();
    if twice_j == 0 {
        return Err(Error::param("j", "a spin-0 state has no qubit decomposition"));
    }
    let mean = mean_spin(state, ops)?;
    let scale = 1.0 / twice_j as f64;
    let q = QubitState::from_mean_spin(mean.map(|v| v * scale));
    let min = q.min_eigenvalue();
    if min < -PSD_TOL {
        return Err(Error::Numerical(format!(
            "reduced qubit state has negative eigenvalue {min:e}"
        )));
    }
    Ok(q)
}

/// `S = 1/2 [1 - |<J>|^2 / j^2]`, in `[0, 1/2]`.
pub fn linear_entropy(mean_j: [f64; 3], spin: SpinQuantum) -> Result<f64> {
    let j = spin.j();
    if j == 0.0 {
        return Err(Error::param("j", "linear entropy needs j > 0"));
    }
    let norm2: f64 = mean_j.iter().map(|v| v * v).sum();
    let norm = norm2.sqrt();
    if !norm.is_finite() || norm > j + MEAN_SLACK {
        return Err(Error::param(
            "mean_j",
            format!("|<J>| = {norm} exceeds j = {j}"),
        ));
    }
    Ok((0.5 * (1.0 - norm2 / (j * j))).clamp(0.0, 0.5))
}

/// Linear entropy straight from a state.
pub fn state_linear_entropy<S: Expectation>(state: &S, ops: &AngularMomentumOps) -> Result<f64> {
    linear_entropy(mean_spin(state, ops)?, ops.spin())
}

/// Clebsch-Gordan isometry `V` from spin `j` into qubit (x) spin `j - 1/2`,
/// a `2 * 2j` by `2j + 1` matrix with `V^dag V = 1`.
pub fn cg_isometry(spin: SpinQuantum) -> Result<CMatrix> {
    let n = spin.twice_j() as usize;
    if n == 0 {
        return Err(Error::param("j", "embedding needs 2j >= 1"));
    }
    let two_j = n as f64;
    let mut v = CMatrix::zeros(2 * n, n + 1);
    for k in 0..=n {
        // k = j + m. Rest index r = m' + (j - 1/2) for m' = m -+ 1/2.
        if k >= 1 {
            // up branch: m' = m - 1/2  ->  r = k - 1
            v[(k - 1, k)] = c((k as f64 / two_j).sqrt());
        }
        if k < n {
            // down branch: m' = m + 1/2  ->  r = k
            v[(n + k, k)] = c(((n - k) as f64 / two_j).sqrt());
        }
    }
    Ok(v)
}

/// Density matrix on qubit (x) rest.
#[derive(Debug, Clone)]
pub struct EmbeddedState {
    matrix: CMatrix,
    rest_dim: usize,
}

impl EmbeddedState {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn rest_dim(&self) -> usize {
        self.rest_dim
    }

    /// Trace over the rest factor, a 2x2 matrix in `(up, down)` order.
    pub fn qubit_marginal(&self) -> Matrix2<C64> {
        let d = self.rest_dim;
        let mut out = Matrix2::zeros();
        for a in 0..2 {
            for b in 0..2 {
                out[(a, b)] = (0..d).map(|r| self.matrix[(a * d + r, b * d + r)]).sum();
            }
        }
        out
    }

    /// Transpose of the qubit factor.
    pub fn partial_transpose(&self) -> CMatrix {
        partial_transpose_qubit(&self.matrix, self.rest_dim)
    }
}

/// `V rho V^dag`.
pub fn embed_qubit_rest(rho: &DensityMatrix, spin: SpinQuantum) -> Result<EmbeddedState> {
    if rho.dim() != spin.dim() {
        return Err(Error::DimensionMismatch {
            expected: spin.dim(),
            found: rho.dim(),
        });
    }
    let v = cg_isometry(spin)?;
    Ok(EmbeddedState {
        matrix: &v * rho.matrix() * v.adjoint(),
        rest_dim: spin.twice_j() as usize,
    })
}

/// Swaps the qubit indices of a `(2 d) x (2 d)` matrix on qubit (x) rest.
pub fn partial_transpose_qubit(m: &CMatrix, rest_dim: usize) -> CMatrix {
    let d = rest_dim;
    CMatrix::from_fn(2 * d, 2 * d, |row, col| {
        let (a, r) = (row / d, row % d);
        let (b, s) = (col / d, col % d);
        m[(b * d + r, a * d + s)]
    })
}

/// `N = (||rho_T||_1 - 1)/2`, evaluated as `|sum of negative eigenvalues|`
/// of the qubit-transposed embedded state. Eigenvalues in
/// `(-NEGATIVITY_FLOOR, 0)` count as zero.
pub fn negativity(rho: &DensityMatrix, spin: SpinQuantum) -> Result<f64> {
    let pt = embed_qubit_rest(rho, spin)?.partial_transpose();
    Ok(hermitian_eigenvalues(&pt)
        .into_iter()
        .filter(|&l| l <= -NEGATIVITY_FLOOR)
        .map(|l| -l)
        .sum())
}

/// Negativity of a pure state.
pub fn pure_negativity(state: &SpinState, spin: SpinQuantum) -> Result<f64> {
    negativity(&DensityMatrix::pure(state), spin)
}

/// `Tr(rho^2)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// Arithmetic mean of a non-empty series.
pub fn time_average(series: &[f64]) -> Result<f64> {
    if series.is_empty() {
        return Err(Error::param("series", "cannot average an empty series"));
    }
    Ok(series.iter().sum::<f64>() / series.len() as f64)
}

/// Pauli matrices `(sigma_x, sigma_y, sigma_z)` in `(up, down)` order.
pub fn pauli() -> [Matrix2<C64>; 3] {
    let o = c(0.0);
    let l = c(1.0);
    [
        Matrix2::new(o, l, l, o),
        Matrix2::new(o, -I, I, o),
        Matrix2::new(l, o, o, -l),
    ]
}
