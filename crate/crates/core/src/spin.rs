//! Angular-momentum operators, rotations and spin coherent states.
//!
//! Basis ordering is `|j, m>` with `m` ascending from `-j` to `+j`, so basis
//! index `k` carries `m = k - j`. Units have hbar = 1.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{c, exp_hermitian, CMatrix, C64};
use crate::state::SpinState;

/// Spin magnitude `j`, stored as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinQuantum {
    twice_j: u32,
}

impl SpinQuantum {
    /// Accepts any `j` for which `2j` is a non-negative integer.
    pub fn new(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !twice.is_finite() || twice < 0.0 || (twice - twice.round()).abs() > 1e-12 {
            return Err(Error::InvalidSpin(twice));
        }
        Ok(Self {
            twice_j: twice.round() as u32,
        })
    }

    pub const fn from_twice(twice_j: u32) -> Self {
        Self { twice_j }
    }

    pub fn j(&self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    pub fn twice_j(&self) -> u32 {
        self.twice_j
    }

    /// Hilbert-space dimension `2j + 1`.
    pub fn dim(&self) -> usize {
        self.twice_j as usize + 1
    }

    /// Magnetic quantum number of basis index `k`.
    pub fn m_of(&self, k: usize) -> f64 {
        k as f64 - self.j()
    }

    /// Basis index of `m`, if `m` is one of `-j, -j+1, ..., j`.
    pub fn index_of(&self, m: f64) -> Option<usize> {
        let k = m + self.j();
        let r = k.round();
        ((k - r).abs() < 1e-12 && r >= 0.0 && (r as usize) < self.dim()).then_some(r as usize)
    }

    /// Dicke state `|j, m>`.
    pub fn dicke(&self, m: f64) -> Result<SpinState> {
        let k = self
            .index_of(m)
            .ok_or_else(|| Error::param("m", format!("{m} is not a valid projection for j = {}", self.j())))?;
        SpinState::basis(self.dim(), k)
    }

    /// `|j, m = j>`, the maximal-projection state along +z.
    pub fn top_state(&self) -> SpinState {
        SpinState::basis(self.dim(), self.dim() - 1).expect("index in range")
    }
}

/// Polar angle `theta` in `[0, pi]` and azimuth `phi` in `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCoord {
    pub theta: f64,
    pub phi: f64,
}

impl SphericalCoord {
    /// Rejects `theta` outside `[0, pi]`; wraps `phi` into `[0, 2 pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
            return Err(Error::param("theta", format!("{theta} outside [0, pi]")));
        }
        if !phi.is_finite() {
            return Err(Error::param("phi", "not finite"));
        }
        Ok(Self {
            theta,
            phi: wrap_angle(phi),
        })
    }

    /// Unit vector `(sin t cos p, sin t sin p, cos t)`.
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Maps any finite angle into `[0, 2 pi)`.
pub fn wrap_angle(phi: f64) -> f64 {
    let w = phi.rem_euclid(2.0 * PI);
    // rem_euclid can round up to exactly 2 pi for tiny negative inputs
    if w >= 2.0 * PI {
        0.0
    } else {
        w
    }
}

/// Axis label for the three Cartesian components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Dense `J_x`, `J_y`, `J_z` for a fixed `j`.
#[derive(Debug, Clone)]
pub struct AngularMomentumOps {
    spin: SpinQuantum,
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
}

impl AngularMomentumOps {
    /// Ladder-operator construction:
    /// `J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>`, `Jx = (J+ + J-)/2`,
    /// `Jy = (J+ - J-)/(2i)`.
    pub fn new(spin: SpinQuantum) -> Self {
        let dim = spin.dim();
        let j = spin.j();
        let mut jplus = CMatrix::zeros(dim, dim);
        for k in 0..dim.saturating_sub(1) {
            let m = spin.m_of(k);
            jplus[(k + 1, k)] = c((j * (j + 1.0) - m * (m + 1.0)).sqrt());
        }
        let jminus = jplus.adjoint();
        let jx = (&jplus + &jminus) * c(0.5);
        let jy = (&jplus - &jminus) * C64::new(0.0, -0.5);
        let jz = CMatrix::from_fn(dim, dim, |r, col| {
            if r == col {
                c(spin.m_of(r))
            } else {
                c(0.0)
            }
        });
        Self { spin, jx, jy, jz }
    }

    pub fn spin(&self) -> SpinQuantum {
        self.spin
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    pub fn component(&self, axis: Axis) -> &CMatrix {
        match axis {
            Axis::X => &self.jx,
            Axis::Y => &self.jy,
            Axis::Z => &self.jz,
        }
    }

    /// `J_x^2 + J_y^2 + J_z^2`.
    pub fn casimir(&self) -> CMatrix {
        &self.jx * &self.jx + &self.jy * &self.jy + &self.jz * &self.jz
    }

    /// `exp(-i angle n.J)` for a unit axis `n`.
    pub fn rotation(&self, axis: [f64; 3], angle: f64) -> CMatrix {
        let generator = &self.jx * c(axis[0]) + &self.jy * c(axis[1]) + &self.jz * c(axis[2]);
        exp_hermitian(&generator, C64::new(0.0, -angle))
    }

    /// Spin coherent state `exp(i theta [Jx sin phi - Jy cos phi]) |j, j>`.
    pub fn coherent_state(&self, dir: SphericalCoord) -> SpinState {
        let (sp, cp) = dir.phi.sin_cos();
        let generator = &self.jx * c(sp) - &self.jy * c(cp);
        let rot = exp_hermitian(&generator, C64::new(0.0, dir.theta));
        self.spin.top_state().apply(&rot)
    }
}

/// Spin coherent state from the closed-form amplitudes
/// `<j,m|theta,phi> = e^{i(j-m)phi} sqrt(C(2j, j+m)) cos^{j+m}(theta/2) sin^{j-m}(theta/2)`.
///
/// Equal to [`AngularMomentumOps::coherent_state`] (same phase convention)
/// but needs no matrix exponential.
pub fn coherent_amplitudes(spin: SpinQuantum, dir: SphericalCoord) -> SpinState {
    let n = spin.twice_j() as usize;
    let (sh, ch) = (0.5 * dir.theta).sin_cos();
    let mut binom = 1.0_f64;
    let amps = (0..=n)
        .map(|k| {
            // k = j + m, so j - m = n - k
            if k > 0 {
                binom *= (n + 1 - k) as f64 / k as f64;
            }
            let magnitude = binom.sqrt() * ch.powi(k as i32) * sh.powi((n - k) as i32);
            C64::from_polar(magnitude, (n - k) as f64 * dir.phi)
        })
        .collect::<Vec<_>>();
    SpinState::from_raw(crate::linalg::CVector::from_vec(amps))
}

/// Convenience wrapper: operators plus coherent state in one call.
pub fn coherent_state(spin: SpinQuantum, dir: SphericalCoord) -> SpinState {
    AngularMomentumOps::new(spin).coherent_state(dir)
}
