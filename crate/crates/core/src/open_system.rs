//! Kicked top with photon-scattering decoherence.
//!
//! Between kicks the state follows the Lindblad equation
//! `d rho/dt = -i[H, rho] + sum_q (D_q rho D_q^dag - 1/2 {D_q^dag D_q, rho})`
//! with `H = kappa/(2j) Jx^2`. Kicks are instantaneous and decoherence-free.
//! Superoperators act on column-stacked density matrices, so
//! `vec(A X B) = (B^T (x) A) vec(X)`.

use crate::classical::TopParams;
use crate::error::{Error, Result};
use crate::linalg::{
    c, expm, hermitian_eigenvalues, hermiticity_defect, unvectorize, vectorize, CMatrix, I,
};
use crate::quantum::kick_unitary;
use crate::spin::{AngularMomentumOps, SpinQuantum};
use crate::state::DensityMatrix;

/// Upper bound of the coherence-to-scattering ratio for Cs on the D1 line.
pub const BETA_MAX_CS: f64 = 8.2;

const TRACE_ABORT_TOL: f64 = 1e-6;

/// `gamma_s = kappa / (2 F tau beta)` (hbar = 1).
pub fn gamma_from_kappa(kappa: f64, f: SpinQuantum, beta: f64, tau: f64) -> Result<f64> {
    if !kappa.is_finite() || kappa < 0.0 {
        return Err(Error::param("kappa", format!("{kappa} must be >= 0")));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::param("beta", format!("{beta} must be > 0")));
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::param("tau", format!("{tau} must be > 0")));
    }
    if f.twice_j() == 0 {
        return Err(Error::param("F", "must be > 0"));
    }
    Ok(kappa / (2.0 * f.j() * tau * beta))
}

/// Kick angle from a Larmor frequency and pulse duration, `p = omega_L T`.
pub fn kick_angle(omega_l: f64, duration: f64) -> f64 {
    omega_l * duration
}

/// Set of jump operators `D_q` (units of sqrt(rate)).
#[derive(Debug, Clone, PartialEq)]
pub struct JumpSet {
    ops: Vec<CMatrix>,
}

impl JumpSet {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        if let Some(first) = ops.first() {
            let d = first.nrows();
            if let Some(bad) = ops.iter().find(|m| m.nrows() != d || m.ncols() != d) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: bad.nrows().max(bad.ncols()),
                });
            }
        }
        Ok(Self { ops })
    }

    pub fn empty() -> Self {
        Self { ops: Vec::new() }
    }

    /// `L_a = sqrt(gamma_s / (j(j+1))) J_a` for `a = x, y, z`.
    ///
    /// The Casimir identity makes `sum_a L_a^dag L_a = gamma_s * 1`, so the
    /// total jump rate is `gamma_s` for every state.
    pub fn isotropic(gamma_s: f64, ops: &AngularMomentumOps) -> Result<Self> {
        if !(gamma_s.is_finite() && gamma_s >= 0.0) {
            return Err(Error::param("gamma_s", format!("{gamma_s} must be >= 0")));
        }
        let j = ops.spin().j();
        let scale = if j > 0.0 {
            (gamma_s / (j * (j + 1.0))).sqrt()
        } else {
            0.0
        };
        Ok(Self {
            ops: vec![&ops.jx * c(scale), &ops.jy * c(scale), &ops.jz * c(scale)],
        })
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    /// `sum_q D_q^dag D_q`.
    pub fn rate_operator(&self, dim: usize) -> CMatrix {
        self.ops
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, d| acc + d.adjoint() * d)
    }
}

/// Which jump operators accompany the scattering rate.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum JumpModel {
    /// [`JumpSet::isotropic`].
    #[default]
    Isotropic,
    /// Caller-supplied operators, used verbatim (rate already folded in).
    Custom(JumpSet),
}

impl JumpModel {
    pub fn jump_set(&self, gamma_s: f64, ops: &AngularMomentumOps) -> Result<JumpSet> {
        match self {
            JumpModel::Isotropic => JumpSet::isotropic(gamma_s, ops),
            JumpModel::Custom(set) => {
                if let Some(d) = set.ops.first() {
                    if d.nrows() != ops.dim() {
                        return Err(Error::DimensionMismatch {
                            expected: ops.dim(),
                            found: d.nrows(),
                        });
                    }
                }
                Ok(set.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceParams {
    /// Single-atom scattering rate, per kick period.
    pub gamma_s: f64,
    pub beta: f64,
    pub model: JumpModel,
}

impl DecoherenceParams {
    pub fn new(gamma_s: f64, beta: f64, model: JumpModel) -> Result<Self> {
        if !(gamma_s.is_finite() && gamma_s >= 0.0) {
            return Err(Error::param("gamma_s", format!("{gamma_s} must be >= 0")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::param("beta", format!("{beta} must be > 0")));
        }
        Ok(Self {
            gamma_s,
            beta,
            model,
        })
    }

    /// Scattering rate implied by `kappa` at figure of merit `beta`.
    pub fn from_beta(params: &TopParams, beta: f64) -> Result<Self> {
        let gamma_s = gamma_from_kappa(params.kappa, params.spin, beta, params.tau())?;
        Self::new(gamma_s, beta, JumpModel::Isotropic)
    }

    pub fn closed() -> Self {
        Self {
            gamma_s: 0.0,
            beta: BETA_MAX_CS,
            model: JumpModel::Isotropic,
        }
    }
}

/// Linear map on column-stacked `dim x dim` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    matrix: CMatrix,
    dim: usize,
}

impl Superoperator {
    pub fn from_matrix(matrix: CMatrix, dim: usize) -> Result<Self> {
        if matrix.nrows() != dim * dim || matrix.ncols() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: matrix.nrows(),
            });
        }
        Ok(Self { matrix, dim })
    }

    /// `rho -> u rho u^dag`.
    pub fn conjugation(u: &CMatrix) -> Self {
        Self {
            matrix: u.conjugate().kronecker(u),
            dim: u.nrows(),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, m: &CMatrix) -> CMatrix {
        unvectorize(&(&self.matrix * vectorize(m)), self.dim)
    }

    pub fn compose(&self, first: &Superoperator) -> Superoperator {
        Superoperator {
            matrix: &self.matrix * &first.matrix,
            dim: self.dim,
        }
    }

    /// `exp(t L)` by scaling and squaring.
    pub fn exp(&self, t: f64) -> Superoperator {
        Superoperator {
            matrix: expm(&(&self.matrix * c(t))),
            dim: self.dim,
        }
    }

    /// Largest entry of `vec(1)^dag L`; zero for a trace-preserving generator.
    pub fn trace_defect_generator(&self) -> f64 {
        let id = vectorize(&CMatrix::identity(self.dim, self.dim));
        (id.adjoint() * &self.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Choi matrix `sum_ij |i><j| (x) Phi(|i><j|)` of this map.
    pub fn choi(&self) -> CMatrix {
        let d = self.dim;
        CMatrix::from_fn(d * d, d * d, |row, col| {
            let (i, a) = (row / d, row % d);
            let (j, b) = (col / d, col % d);
            self.matrix[(a + b * d, i + j * d)]
        })
    }

    /// Smallest Choi eigenvalue; non-negative for a completely positive map.
    pub fn choi_min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.choi())[0]
    }
}

/// Vectorized generator of the Lindblad equation.
pub fn lindblad_superoperator(h: &CMatrix, jumps: &JumpSet) -> Result<Superoperator> {
    let d = h.nrows();
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: h.ncols(),
        });
    }
    if let Some(bad) = jumps.ops.iter().find(|m| m.nrows() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.nrows(),
        });
    }
    let id = CMatrix::identity(d, d);
    let mut l = (id.kronecker(h) - h.transpose().kronecker(&id)) * (-I);
    for op in &jumps.ops {
        let rate = op.adjoint() * op;
        l += op.conjugate().kronecker(op);
        l -= (id.kronecker(&rate) + rate.transpose().kronecker(&id)) * c(0.5);
    }
    Ok(Superoperator { matrix: l, dim: d })
}

/// Cached `exp(duration * L)` with trace and Hermiticity bookkeeping.
#[derive(Debug, Clone)]
pub struct IntervalPropagator {
    channel: Superoperator,
}

impl IntervalPropagator {
    pub fn new(generator: &Superoperator, duration: f64) -> Result<Self> {
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(Error::param("duration", format!("{duration} must be >= 0")));
        }
        Ok(Self {
            channel: generator.exp(duration),
        })
    }

    pub fn channel(&self) -> &Superoperator {
        &self.channel
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.channel.dim {
            return Err(Error::DimensionMismatch {
                expected: self.channel.dim,
                found: rho.dim(),
            });
        }
        settle(self.channel.apply(rho.matrix()))
    }
}

/// Aborts on trace drift above 1e-6, then symmetrizes to restore Hermiticity.
fn settle(out: CMatrix) -> Result<DensityMatrix> {
    let trace = out.trace();
    if (trace.re - 1.0).abs() > TRACE_ABORT_TOL || trace.im.abs() > TRACE_ABORT_TOL {
        return Err(Error::Numerical(format!(
            "trace drifted to {trace} during propagation"
        )));
    }
    let defect = hermiticity_defect(&out);
    if defect > 0.0 {
        log::trace!("hermiticity restored after propagation (defect {defect:e})");
    }
    let sym = (&out + out.adjoint()) * c(0.5);
    DensityMatrix::new(sym)
}

/// One-shot `exp(duration * L)[rho]`.
pub fn propagate_interval(
    rho: &DensityMatrix,
    generator: &Superoperator,
    duration: f64,
) -> Result<DensityMatrix> {
    IntervalPropagator::new(generator, duration)?.apply(rho)
}

/// Open kicked top: instantaneous kick, then twist with decoherence over one period.
#[derive(Debug, Clone)]
pub struct OpenKickedTop {
    params: TopParams,
    decoherence: DecoherenceParams,
    ops: AngularMomentumOps,
    kick: CMatrix,
    generator: Superoperator,
    interval: IntervalPropagator,
}

impl OpenKickedTop {
    pub fn new(params: TopParams, decoherence: DecoherenceParams) -> Result<Self> {
        let ops = AngularMomentumOps::new(params.spin);
        let kick = kick_unitary(&ops, params.p);
        let h = twist_hamiltonian(&ops, params.kappa);
        let jumps = decoherence.model.jump_set(decoherence.gamma_s, &ops)?;
        let generator = lindblad_superoperator(&h, &jumps)?;
        let interval = IntervalPropagator::new(&generator, params.tau())?;
        Ok(Self {
            params,
            decoherence,
            ops,
            kick,
            generator,
            interval,
        })
    }

    pub fn params(&self) -> &TopParams {
        &self.params
    }

    pub fn decoherence(&self) -> &DecoherenceParams {
        &self.decoherence
    }

    pub fn ops(&self) -> &AngularMomentumOps {
        &self.ops
    }

    pub fn generator(&self) -> &Superoperator {
        &self.generator
    }

    pub fn kick(&self) -> &CMatrix {
        &self.kick
    }

    /// Full one-period channel (kick, then interval) as a superoperator.
    pub fn period_channel(&self) -> Superoperator {
        self.interval
            .channel()
            .compose(&Superoperator::conjugation(&self.kick))
    }

    pub fn step(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.interval.apply(&rho.conjugate_by(&self.kick))
    }

    /// `[rho0, rho_1, ..., rho_n]`, one entry per completed period.
    pub fn run(&self, rho0: &DensityMatrix, n_kicks: usize) -> Result<Vec<DensityMatrix>> {
        if rho0.dim() != self.ops.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ops.dim(),
                found: rho0.dim(),
            });
        }
        let mut out = Vec::with_capacity(n_kicks + 1);
        out.push(rho0.clone());
        for k in 0..n_kicks {
            let next = self.step(&out[k])?;
            out.push(next);
        }
        Ok(out)
    }
}

/// `kappa/(2j) Jx^2` with tau = 1.
pub fn twist_hamiltonian(ops: &AngularMomentumOps, kappa: f64) -> CMatrix {
    let twice_j = ops.spin().twice_j();
    if twice_j == 0 {
        return CMatrix::zeros(1, 1);
    }
    &ops.jx * &ops.jx * c(kappa / twice_j as f64)
}

/// Free-function form of [`OpenKickedTop::run`].
pub fn open_kicked_top(
    rho0: &DensityMatrix,
    params: TopParams,
    decoherence: DecoherenceParams,
    n_kicks: usize,
) -> Result<Vec<DensityMatrix>> {
    OpenKickedTop::new(params, decoherence)?.run(rho0, n_kicks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::spin::SphericalCoord;
    use std::f64::consts::PI;

    fn spin4() -> (SpinQuantum, AngularMomentumOps) {
        let s = SpinQuantum::from_twice(8);
        (s, AngularMomentumOps::new(s))
    }

    #[test]
    fn gamma_conversion() {
        let f = SpinQuantum::from_twice(8);
        let g = gamma_from_kappa(3.0, f, 8.2, 1.0).unwrap();
        assert!((g - 3.0 / 65.6).abs() < 1e-15);
        assert!((g - 0.04573).abs() < 1e-5);
        assert_eq!(gamma_from_kappa(0.0, f, 8.2, 1.0).unwrap(), 0.0);
        let g2 = gamma_from_kappa(3.0, f, 16.4, 1.0).unwrap();
        assert!((g2 - g / 2.0).abs() < 1e-15);
        assert!(gamma_from_kappa(3.0, f, 0.0, 1.0).is_err());
        assert!(gamma_from_kappa(3.0, f, 8.2, -1.0).is_err());
    }

    #[test]
    fn kick_angle_values() {
        assert!((kick_angle(PI, 0.5) - PI / 2.0).abs() < 1e-15);
        assert_eq!(kick_angle(PI, 0.0), 0.0);
        assert!((kick_angle(PI / 2.0, 1.0) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn isotropic_rate_identity() {
        let (_, ops) = spin4();
        let zero = JumpSet::isotropic(0.0, &ops).unwrap();
        assert!(zero.ops().iter().all(|m| m.iter().all(|z| z.norm() == 0.0)));
        let set = JumpSet::isotropic(0.04573, &ops).unwrap();
        let expected = CMatrix::identity(9, 9) * c(0.04573);
        assert!(max_abs_diff(&set.rate_operator(9), &expected) < 1e-12);
    }

    #[test]
    fn empty_generator_is_zero() {
        let g = lindblad_superoperator(&CMatrix::zeros(3, 3), &JumpSet::empty()).unwrap();
        assert!(g.matrix().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn maximally_mixed_is_stationary_under_isotropic_jumps() {
        let (_, ops) = spin4();
        let g = lindblad_superoperator(
            &CMatrix::zeros(9, 9),
            &JumpSet::isotropic(0.3, &ops).unwrap(),
        )
        .unwrap();
        let mm = DensityMatrix::maximally_mixed(9);
        let out = g.apply(mm.matrix());
        assert!(out.iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn zero_duration_is_identity() {
        let (_, ops) = spin4();
        let g = lindblad_superoperator(
            &twist_hamiltonian(&ops, 3.0),
            &JumpSet::isotropic(0.05, &ops).unwrap(),
        )
        .unwrap();
        let psi = ops.coherent_state(SphericalCoord::new(2.25, 2.5).unwrap());
        let rho = DensityMatrix::pure(&psi);
        let out = propagate_interval(&rho, &g, 0.0).unwrap();
        assert!(max_abs_diff(out.matrix(), rho.matrix()) < 1e-14);
        assert!(propagate_interval(&rho, &g, -1.0).is_err());
    }

    #[test]
    fn hamiltonian_part_is_minus_i_commutator() {
        // without jumps exp(L t) must be conjugation by exp(-i H t)
        let (_, ops) = spin4();
        let h = twist_hamiltonian(&ops, 3.0);
        let channel = lindblad_superoperator(&h, &JumpSet::empty()).unwrap().exp(0.7);
        let u = crate::linalg::exp_hermitian(&h, crate::linalg::C64::new(0.0, -0.7));
        let rho = DensityMatrix::pure(&ops.coherent_state(SphericalCoord::new(1.0, 0.3).unwrap()));
        assert!(max_abs_diff(&channel.apply(rho.matrix()), rho.conjugate_by(&u).matrix()) < 1e-12);
    }

    #[test]
    fn dissipation_lowers_purity() {
        let (_, ops) = spin4();
        let g = lindblad_superoperator(
            &CMatrix::zeros(9, 9),
            &JumpSet::isotropic(0.05, &ops).unwrap(),
        )
        .unwrap();
        let psi = ops.coherent_state(SphericalCoord::new(1.0, 0.3).unwrap());
        let rho = DensityMatrix::pure(&psi);
        let out = propagate_interval(&rho, &g, 1.0).unwrap();
        assert!(out.purity() < rho.purity() - 1e-6);
    }

    #[test]
    fn settle_aborts_on_trace_loss() {
        let m = CMatrix::identity(2, 2) * c(0.4);
        assert!(matches!(settle(m), Err(Error::Numerical(_))));
    }

    #[test]
    fn custom_model_dimension_checked() {
        let (_, ops) = spin4();
        let set = JumpSet::new(vec![CMatrix::identity(3, 3)]).unwrap();
        assert!(JumpModel::Custom(set).jump_set(0.1, &ops).is_err());
    }
}
