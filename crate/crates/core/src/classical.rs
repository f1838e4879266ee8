//! Classical kick-to-kick map of the top on the unit sphere.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spin::{wrap_angle, SphericalCoord, SpinQuantum};

/// Drift of `|pt| - 1` above which a trajectory renormalizes.
pub const NORM_DRIFT_TOL: f64 = 1e-12;

/// Kicked-top parameters. The kick period is fixed to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopParams {
    pub spin: SpinQuantum,
    /// Twist strength.
    pub kappa: f64,
    /// Rotation angle per kick (radians).
    pub p: f64,
}

impl TopParams {
    pub const TAU: f64 = 1.0;

    pub fn new(spin: SpinQuantum, kappa: f64, p: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa < 0.0 {
            return Err(Error::param("kappa", format!("{kappa} must be finite and >= 0")));
        }
        if !p.is_finite() {
            return Err(Error::param("p", "not finite"));
        }
        Ok(Self { spin, kappa, p })
    }

    pub fn tau(&self) -> f64 {
        Self::TAU
    }
}

/// Normalized spin direction `(X, Y, Z) = <J>/j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ClassicalPoint {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_spherical(dir: SphericalCoord) -> Self {
        let [x, y, z] = dir.unit_vector();
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// `(acos Z, atan2(Y, X))` with `phi` in `[0, 2 pi)`.
    pub fn to_spherical(&self) -> SphericalCoord {
        let n = self.norm();
        let theta = (self.z / n).clamp(-1.0, 1.0).acos();
        SphericalCoord {
            theta,
            phi: wrap_angle(self.y.atan2(self.x)),
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    fn renormalized(&self) -> Self {
        let n = self.norm();
        Self::new(self.x / n, self.y / n, self.z / n)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2) + (self.z - other.z).powi(2))
            .sqrt()
    }
}

/// One kick period: rotate by `p` about y, then twist about x by `kappa * X~`.
pub fn classical_step(pt: ClassicalPoint, params: &TopParams) -> ClassicalPoint {
    let (sp, cp) = params.p.sin_cos();
    let x_kicked = pt.x * cp + pt.z * sp;
    let z_kicked = pt.z * cp - pt.x * sp;
    let (st, ct) = (params.kappa * x_kicked).sin_cos();
    ClassicalPoint {
        x: x_kicked,
        y: pt.y * ct - z_kicked * st,
        z: z_kicked * ct + pt.y * st,
    }
}

/// Exact inverse of [`classical_step`]: untwist, then un-rotate.
pub fn inverse_step(pt: ClassicalPoint, params: &TopParams) -> ClassicalPoint {
    // the twist leaves X unchanged, so its angle is known from the output
    let (st, ct) = (params.kappa * pt.x).sin_cos();
    let y = pt.y * ct + pt.z * st;
    let z_kicked = pt.z * ct - pt.y * st;
    let (sp, cp) = params.p.sin_cos();
    ClassicalPoint {
        x: pt.x * cp - z_kicked * sp,
        y,
        z: z_kicked * cp + pt.x * sp,
    }
}

/// Stroboscopic orbit plus a record of norm drift.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// `points[k]` is the state after `k` kicks.
    pub points: Vec<ClassicalPoint>,
    /// Largest `| |pt| - 1 |` seen before any renormalization.
    pub max_drift: f64,
    /// Number of steps whose drift exceeded [`NORM_DRIFT_TOL`].
    pub renormalizations: usize,
}

pub fn trajectory(pt0: ClassicalPoint, params: &TopParams, n_kicks: usize) -> Trajectory {
    let mut points = Vec::with_capacity(n_kicks + 1);
    points.push(pt0);
    let mut max_drift: f64 = 0.0;
    let mut renormalizations = 0;
    let mut pt = pt0;
    for _ in 0..n_kicks {
        pt = classical_step(pt, params);
        let drift = (pt.norm() - 1.0).abs();
        max_drift = max_drift.max(drift);
        if drift > NORM_DRIFT_TOL {
            pt = pt.renormalized();
            renormalizations += 1;
        }
        points.push(pt);
    }
    Trajectory {
        points,
        max_drift,
        renormalizations,
    }
}

/// `n_cos * n_phi` initial conditions, cell-centred and uniform in `(cos theta, phi)`.
pub fn uniform_sphere_grid(n_cos: usize, n_phi: usize) -> Vec<SphericalCoord> {
    let mut out = Vec::with_capacity(n_cos * n_phi);
    for a in 0..n_cos {
        let cos_t = 1.0 - 2.0 * (a as f64 + 0.5) / n_cos as f64;
        for b in 0..n_phi {
            let phi = 2.0 * PI * (b as f64 + 0.5) / n_phi as f64;
            out.push(SphericalCoord {
                theta: cos_t.acos(),
                phi,
            });
        }
    }
    out
}

/// One stroboscopic sample of a phase portrait.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortraitPoint {
    pub ic_index: usize,
    pub kick: usize,
    pub theta: f64,
    pub phi: f64,
}

/// Orbit of a single initial condition in `(theta, phi)` chart form.
pub fn portrait_orbit(
    ic_index: usize,
    ic: SphericalCoord,
    params: &TopParams,
    n_kicks: usize,
) -> Vec<PortraitPoint> {
    trajectory(ClassicalPoint::from_spherical(ic), params, n_kicks)
        .points
        .iter()
        .enumerate()
        .map(|(kick, pt)| {
            let s = pt.to_spherical();
            PortraitPoint {
                ic_index,
                kick,
                theta: s.theta,
                phi: s.phi,
            }
        })
        .collect()
}

/// Stroboscopic `(theta, phi)` points for every initial condition, IC-major.
pub fn phase_portrait(
    ics: &[SphericalCoord],
    params: &TopParams,
    n_kicks: usize,
) -> Result<Vec<PortraitPoint>> {
    if ics.is_empty() {
        return Err(Error::param("ics", "at least one initial condition is required"));
    }
    Ok(ics
        .iter()
        .enumerate()
        .flat_map(|(i, &ic)| portrait_orbit(i, ic, params, n_kicks))
        .collect())
}
