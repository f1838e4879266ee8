//! Floquet dynamics of the quantum top: one-period unitary, stroboscopic
//! evolution, eigenphase spectrum, overlap diagnostics and Husimi grids.

use std::f64::consts::PI;

use crate::classical::TopParams;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, normal_eigen, schur, unitarity_defect, CMatrix, CVector, C64};
use crate::spin::{coherent_amplitudes, AngularMomentumOps, SphericalCoord};
use crate::state::SpinState;

const UNITARITY_TOL: f64 = 1e-12;
/// Eigenphases closer than this are treated as one degenerate cluster.
pub const DEGENERACY_GAP: f64 = 1e-8;
const RESIDUAL_TOL: f64 = 1e-8;

/// `exp(-i kappa Jx^2 / 2j)`, built in the `Jx` eigenbasis.
pub fn twist_unitary(ops: &AngularMomentumOps, kappa: f64) -> CMatrix {
    let dim = ops.dim();
    if ops.spin().twice_j() == 0 || kappa == 0.0 {
        return CMatrix::identity(dim, dim);
    }
    let two_j = ops.spin().j() * 2.0;
    let (lambdas, v) = hermitian_eigen(&ops.jx);
    let scaled = CMatrix::from_fn(dim, dim, |r, col| {
        let l = lambdas[col];
        v[(r, col)] * C64::from_polar(1.0, -kappa * l * l / two_j)
    });
    scaled * v.adjoint()
}

/// `exp(-i p Jy)`.
pub fn kick_unitary(ops: &AngularMomentumOps, p: f64) -> CMatrix {
    ops.rotation([0.0, 1.0, 0.0], p)
}

/// One-period propagator `U = exp(-i kappa Jx^2/2j) exp(-i p Jy)`.
#[derive(Debug, Clone)]
pub struct FloquetOperator {
    params: TopParams,
    ops: AngularMomentumOps,
    kick: CMatrix,
    twist: CMatrix,
    u: CMatrix,
}

impl FloquetOperator {
    pub fn new(params: TopParams) -> Result<Self> {
        let ops = AngularMomentumOps::new(params.spin);
        let kick = kick_unitary(&ops, params.p);
        let twist = twist_unitary(&ops, params.kappa);
        let u = &twist * &kick;
        let defect = unitarity_defect(&u);
        if defect > UNITARITY_TOL {
            return Err(Error::Numerical(format!(
                "Floquet operator not unitary (defect {defect:e})"
            )));
        }
        Ok(Self {
            params,
            ops,
            kick,
            twist,
            u,
        })
    }

    pub fn params(&self) -> &TopParams {
        &self.params
    }

    pub fn ops(&self) -> &AngularMomentumOps {
        &self.ops
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.u
    }

    pub fn kick(&self) -> &CMatrix {
        &self.kick
    }

    pub fn twist(&self) -> &CMatrix {
        &self.twist
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    /// Coherent state for this operator's spin.
    pub fn coherent_state(&self, dir: SphericalCoord) -> SpinState {
        self.ops.coherent_state(dir)
    }
}

/// `[psi, U psi, U^2 psi, ..., U^n psi]`.
pub fn evolve(state: &SpinState, u: &FloquetOperator, n_kicks: usize) -> Result<Vec<SpinState>> {
    if state.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: state.dim(),
        });
    }
    let mut out = Vec::with_capacity(n_kicks + 1);
    out.push(state.clone());
    let mut current = state.clone();
    for _ in 0..n_kicks {
        current = current.apply(u.matrix());
        out.push(current.clone());
    }
    Ok(out)
}

/// Eigenphases in `(-pi, pi]`, ascending, with orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct FloquetSpectrum {
    omegas: Vec<f64>,
    vectors: CMatrix,
}

/// Folds an angle into `(-pi, pi]`; values within 1e-9 of `-pi` go to `pi`.
pub fn principal_phase(x: f64) -> f64 {
    let mut w = x.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    if w <= -PI + 1e-9 {
        w += 2.0 * PI;
    }
    w
}

impl FloquetSpectrum {
    /// Diagonalizes a Floquet operator through a complex Schur factorization.
    ///
    /// `U` is normal, so its Schur factor is diagonal up to rounding and the
    /// Schur vectors are its eigenvectors. When the Schur iteration stalls
    /// (close to a multiple of the identity) the commuting Hermitian parts of
    /// `U` are diagonalized instead. Near-degenerate clusters are
    /// re-orthonormalized, then each vector's largest component is made real
    /// and positive.
    pub fn new(u: &FloquetOperator) -> Result<Self> {
        Self::from_unitary(u.matrix())
    }

    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        let n = u.nrows();
        let (q, eigenvalues) = match schur(u) {
            Some((q, t)) => {
                let diag = (0..n).map(|k| t[(k, k)]).collect::<Vec<_>>();
                (q, diag)
            }
            None => {
                log::debug!("Schur iteration stalled; using Hermitian-part diagonalization");
                let (vals, vecs) = normal_eigen(u, 1e-6);
                (vecs, vals)
            }
        };
        let mut order: Vec<(f64, usize)> = eigenvalues
            .iter()
            .enumerate()
            .map(|(k, z)| (principal_phase(z.arg()), k))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        let omegas: Vec<f64> = order.iter().map(|o| o.0).collect();
        let mut vectors = CMatrix::from_fn(n, n, |r, col| q[(r, order[col].1)]);

        for cluster in degenerate_clusters(&omegas) {
            if cluster.len() > 1 {
                orthonormalize_columns(&mut vectors, &cluster);
            }
        }
        for col in 0..n {
            fix_phase(&mut vectors, col);
        }

        for (col, &w) in omegas.iter().enumerate() {
            let v = vectors.column(col);
            let residual = (u * v - v * C64::from_polar(1.0, w)).norm();
            if residual > RESIDUAL_TOL {
                return Err(Error::Numerical(format!(
                    "eigenpair {col} has residual {residual:e}"
                )));
            }
        }
        Ok(Self { omegas, vectors })
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    /// Columns are the eigenvectors `|u_n>`.
    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn eigenstate(&self, n: usize) -> SpinState {
        SpinState::from_raw(self.vectors.column(n).into_owned())
    }

    /// `sum_n e^{i w_n} |u_n><u_n|`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.len();
        let phases = CMatrix::from_diagonal(&CVector::from_iterator(
            n,
            self.omegas.iter().map(|&w| C64::from_polar(1.0, w)),
        ));
        &self.vectors * phases * self.vectors.adjoint()
    }

    /// Amplitudes `<u_n|psi>` for every eigenvector.
    fn amplitudes(&self, state: &SpinState) -> Result<CVector> {
        if state.dim() != self.vectors.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.vectors.nrows(),
                found: state.dim(),
            });
        }
        Ok(self.vectors.ad_mul(state.amplitudes()))
    }
}

/// Indices grouped into runs whose consecutive eigenphase gaps are below
/// [`DEGENERACY_GAP`], including the wrap from `pi` back to `-pi`.
fn degenerate_clusters(omegas: &[f64]) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (k, &w) in omegas.iter().enumerate() {
        match clusters.last_mut() {
            Some(last) if w - omegas[*last.last().unwrap()] < DEGENERACY_GAP => last.push(k),
            _ => clusters.push(vec![k]),
        }
    }
    if clusters.len() > 1 {
        let first = omegas[0];
        let last = omegas[omegas.len() - 1];
        if first + 2.0 * PI - last < DEGENERACY_GAP {
            let head = clusters.remove(0);
            clusters.last_mut().unwrap().extend(head);
        }
    }
    clusters
}

/// Modified Gram-Schmidt on the listed columns.
fn orthonormalize_columns(m: &mut CMatrix, cols: &[usize]) {
    for (a, &ca) in cols.iter().enumerate() {
        for &cb in &cols[..a] {
            let proj = m.column(cb).dotc(&m.column(ca));
            let vb = m.column(cb).into_owned();
            let mut col = m.column_mut(ca);
            col -= vb * proj;
        }
        let norm = m.column(ca).norm();
        m.column_mut(ca).unscale_mut(norm);
    }
}

/// Rotates column `col` so its largest-magnitude entry is real and positive.
fn fix_phase(m: &mut CMatrix, col: usize) {
    let column = m.column(col);
    let max = column.iter().map(|z| z.norm()).fold(0.0, f64::max);
    // first entry within rounding of the maximum keeps the choice stable
    let pivot = column
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .unwrap_or(0);
    let z = column[pivot];
    if z.norm() > 0.0 {
        let phase = z.conj() / z.norm();
        for r in 0..m.nrows() {
            m[(r, col)] *= phase;
        }
    }
}

/// One entry of an eigenphase overlap spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlap {
    pub omega: f64,
    /// `|<u_n|psi>|^2`.
    pub weight: f64,
}

/// `f_n = |<u_n|psi>|^2` alongside each eigenphase.
pub fn overlap_distribution(state: &SpinState, spec: &FloquetSpectrum) -> Result<Vec<Overlap>> {
    let amps = spec.amplitudes(state)?;
    Ok(spec
        .omegas
        .iter()
        .zip(amps.iter())
        .map(|(&omega, a)| Overlap {
            omega,
            weight: a.norm_sqr(),
        })
        .collect())
}

/// `1 / sum f_n^2`, the effective number of occupied eigenstates.
pub fn participation_ratio(dist: &[Overlap]) -> f64 {
    1.0 / dist.iter().map(|o| o.weight * o.weight).sum::<f64>()
}

/// Support of a state on the Floquet eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    /// `s = sum_n |<u_n|psi>|`.
    pub s: f64,
    /// `sqrt(dim)`, the value for equal support on every eigenstate.
    pub s0: f64,
}

impl Support {
    pub fn normalized(&self) -> f64 {
        self.s / self.s0
    }
}

pub fn support_measure(state: &SpinState, spec: &FloquetSpectrum) -> Result<Support> {
    let amps = spec.amplitudes(state)?;
    Ok(Support {
        s: amps.iter().map(|a| a.norm()).sum(),
        s0: (state.dim() as f64).sqrt(),
    })
}

/// Husimi density `P(theta, phi) = (2j+1)/(4 pi) |<theta,phi|psi>|^2` on a
/// uniform grid: `theta` spans `[0, pi]` inclusive, `phi` spans `[0, 2 pi)`.
#[derive(Debug, Clone)]
pub struct HusimiGrid {
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    /// Row-major, `values[i * phis.len() + k]` at `(thetas[i], phis[k])`.
    pub values: Vec<f64>,
}

impl HusimiGrid {
    pub const DEFAULT_SHAPE: (usize, usize) = (101, 201);

    pub fn at(&self, i_theta: usize, i_phi: usize) -> f64 {
        self.values[i_theta * self.phis.len() + i_phi]
    }

    /// Quadrature of `P sin(theta)` over the sphere.
    ///
    /// Simpson in `theta` for an odd number of nodes (trapezoid otherwise);
    /// the periodic rectangle rule in `phi` is exact for `n_phi > 2 * 2j`.
    /// At the default 101 x 201 grid the error is well below 1e-3.
    pub fn integral(&self) -> f64 {
        let wt = theta_weights(&self.thetas);
        let dphi = 2.0 * PI / self.phis.len() as f64;
        let mut total = 0.0;
        for (i, &theta) in self.thetas.iter().enumerate() {
            let row: f64 = (0..self.phis.len()).map(|k| self.at(i, k)).sum();
            total += wt[i] * theta.sin() * row * dphi;
        }
        total
    }

    /// Grid node holding the largest value.
    pub fn argmax(&self) -> (f64, f64) {
        let (idx, _) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let n_phi = self.phis.len();
        (self.thetas[idx / n_phi], self.phis[idx % n_phi])
    }
}

fn theta_weights(thetas: &[f64]) -> Vec<f64> {
    let n = thetas.len();
    let h = if n > 1 { thetas[1] - thetas[0] } else { 0.0 };
    if n >= 3 && n % 2 == 1 {
        (0..n)
            .map(|i| {
                let w = if i == 0 || i == n - 1 {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * h / 3.0
            })
            .collect()
    } else {
        (0..n)
            .map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h })
            .collect()
    }
}

pub fn husimi(state: &SpinState, n_theta: usize, n_phi: usize) -> Result<HusimiGrid> {
    if n_theta < 2 || n_phi < 2 {
        return Err(Error::param("grid", "need at least 2 x 2 nodes"));
    }
    let spin = crate::spin::SpinQuantum::from_twice(
        u32::try_from(state.dim() - 1).map_err(|_| Error::param("state", "dimension too large"))?,
    );
    let prefactor = state.dim() as f64 / (4.0 * PI);
    let thetas: Vec<f64> = (0..n_theta)
        .map(|i| PI * i as f64 / (n_theta - 1) as f64)
        .collect();
    let phis: Vec<f64> = (0..n_phi)
        .map(|k| 2.0 * PI * k as f64 / n_phi as f64)
        .collect();
    let mut values = Vec::with_capacity(n_theta * n_phi);
    for &theta in &thetas {
        for &phi in &phis {
            let cs = coherent_amplitudes(spin, SphericalCoord { theta, phi });
            values.push(prefactor * cs.inner(state).norm_sqr());
        }
    }
    Ok(HusimiGrid {
        thetas,
        phis,
        values,
    })
}

/// Index of the eigenstate carrying the largest overlap weight.
pub fn dominant_eigenstate(dist: &[Overlap]) -> usize {
    dist.iter()
        .enumerate()
        .fold((0, f64::MIN), |acc, (i, o)| if o.weight > acc.1 { (i, o.weight) } else { acc })
        .0
}
