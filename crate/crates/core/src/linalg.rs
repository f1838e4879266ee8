//! Dense complex linear-algebra helpers shared by every module.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Largest entry-wise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entry-wise modulus of `a - a^dag`.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

/// Largest entry-wise modulus of `u^dag u - 1`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Columns of the returned matrix are the orthonormal eigenvectors.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.nrows();
    let sym = (a + a.adjoint()) * c(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &k| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[k]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let sym = (a + a.adjoint()) * c(0.5);
    let mut v: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `exp(scale * h)` for Hermitian `h` through its eigendecomposition.
pub fn exp_hermitian(h: &CMatrix, scale: C64) -> CMatrix {
    if scale == C64::new(0.0, 0.0) {
        return CMatrix::identity(h.nrows(), h.ncols());
    }
    let (values, vectors) = hermitian_eigen(h);
    let phases = CVector::from_iterator(values.len(), values.iter().map(|&l| (scale * l).exp()));
    let scaled = CMatrix::from_fn(vectors.nrows(), vectors.ncols(), |r, col| {
        vectors[(r, col)] * phases[col]
    });
    scaled * vectors.adjoint()
}

/// Complex Schur factorization `a = q t q^dag`, returned as `(q, t)`.
///
/// For a normal matrix `t` is diagonal up to rounding, so the columns of `q`
/// are orthonormal eigenvectors.
///
/// Gives up after `30 n` QR sweeps: the implicit-shift iteration stalls on
/// matrices close to a multiple of the identity.
pub fn schur(a: &CMatrix) -> Option<(CMatrix, CMatrix)> {
    Schur::try_new(a.clone(), f64::EPSILON, 30 * a.nrows().max(1)).map(|s| s.unpack())
}

/// Eigen-decomposition of a normal matrix from its two commuting Hermitian
/// parts `A = (M + M^dag)/2` and `B = (M - M^dag)/(2i)`.
///
/// `A` is diagonalized first; each cluster of `A` eigenvalues closer than
/// `cluster_gap` is then split by diagonalizing `B` inside that subspace.
/// Returns the eigenvalues `a_k + i b_k` and unitary eigenvector columns.
pub fn normal_eigen(m: &CMatrix, cluster_gap: f64) -> (Vec<C64>, CMatrix) {
    let n = m.nrows();
    let herm = (m + m.adjoint()) * c(0.5);
    let anti = (m - m.adjoint()) * C64::new(0.0, -0.5);
    let (a_vals, a_vecs) = hermitian_eigen(&herm);
    let mut values = Vec::with_capacity(n);
    let mut vectors = CMatrix::zeros(n, n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && a_vals[end] - a_vals[end - 1] < cluster_gap {
            end += 1;
        }
        let basis = a_vecs.columns(start, end - start).into_owned();
        let reduced = basis.adjoint() * &anti * &basis;
        let (b_vals, b_vecs) = hermitian_eigen(&reduced);
        let block = &basis * b_vecs;
        for (k, b) in b_vals.iter().enumerate() {
            let v = block.column(k);
            // Rayleigh quotient for the real part keeps split clusters accurate
            let a = v.dotc(&(&herm * v)).re;
            values.push(C64::new(a, *b));
            vectors.set_column(start + k, &v);
        }
        start = end;
    }
    (values, vectors)
}

/// General dense matrix exponential (Pade with scaling and squaring).
pub fn expm(a: &CMatrix) -> CMatrix {
    a.exp()
}

/// Column-stacking vectorization `vec(rho)`.
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVector, dim: usize) -> CMatrix {
    CMatrix::from_column_slice(dim, dim, v.as_slice())
}
