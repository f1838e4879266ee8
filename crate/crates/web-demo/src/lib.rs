//! WebAssembly bindings for a three-panel browser demo: classical phase
//! portrait, entanglement series, and Husimi density after `n` kicks.
//!
//! Each export wraps a plain Rust function returning `Vec<f64>` so the
//! numerics can be tested natively.

use kicktop::classical::{phase_portrait, uniform_sphere_grid};
use kicktop::entanglement::{pure_negativity, state_linear_entropy};
use kicktop::quantum::{evolve, husimi};
use kicktop::{FloquetOperator, SphericalCoord, SpinQuantum, TopParams};
use wasm_bindgen::prelude::*;

/// Spin length the demo is built around.
pub const TWICE_J: u32 = 8;
const MAX_KICKS: usize = 5000;

fn top(kappa: f64, p: f64) -> Result<TopParams, String> {
    TopParams::new(SpinQuantum::from_twice(TWICE_J), kappa, p).map_err(|e| e.to_string())
}

fn check_kicks(kicks: usize) -> Result<(), String> {
    if kicks == 0 || kicks > MAX_KICKS {
        return Err(format!("kicks must be in 1..={MAX_KICKS}"));
    }
    Ok(())
}

/// Flat `[theta_0, phi_0, theta_1, phi_1, ...]` over a `grid x grid` set of
/// initial conditions, `kicks + 1` points each, IC-major.
pub fn portrait_points(kappa: f64, p: f64, grid: usize, kicks: usize) -> Result<Vec<f64>, String> {
    check_kicks(kicks)?;
    if grid == 0 || grid > 40 {
        return Err("grid must be in 1..=40".into());
    }
    let pts = phase_portrait(&uniform_sphere_grid(grid, grid), &top(kappa, p)?, kicks)
        .map_err(|e| e.to_string())?;
    Ok(pts.iter().flat_map(|pt| [pt.theta, pt.phi]).collect())
}

/// Flat `[S_0, N_0, S_1, N_1, ...]` for kicks `0..=kicks`.
pub fn series_values(kappa: f64, p: f64, theta: f64, phi: f64, kicks: usize) -> Result<Vec<f64>, String> {
    check_kicks(kicks)?;
    let err = |e: kicktop::Error| e.to_string();
    let f = FloquetOperator::new(top(kappa, p)?).map_err(err)?;
    let ic = SphericalCoord::new(theta, phi).map_err(err)?;
    let states = evolve(&f.coherent_state(ic), &f, kicks).map_err(err)?;
    let spin = f.ops().spin();
    let mut out = Vec::with_capacity(2 * states.len());
    for psi in &states {
        out.push(state_linear_entropy(psi, f.ops()).map_err(err)?);
        out.push(pure_negativity(psi, spin).map_err(err)?);
    }
    Ok(out)
}

/// Row-major Husimi density (`n_theta` rows over `[0, pi]`, `n_phi`
/// columns over `[0, 2 pi)`) of the state after `kicks` kicks.
pub fn husimi_values(
    kappa: f64,
    p: f64,
    theta: f64,
    phi: f64,
    kicks: usize,
    n_theta: usize,
    n_phi: usize,
) -> Result<Vec<f64>, String> {
    if kicks > MAX_KICKS {
        return Err(format!("kicks must be at most {MAX_KICKS}"));
    }
    if n_theta * n_phi > 200_000 {
        return Err("Husimi grid too large".into());
    }
    let err = |e: kicktop::Error| e.to_string();
    let f = FloquetOperator::new(top(kappa, p)?).map_err(err)?;
    let ic = SphericalCoord::new(theta, phi).map_err(err)?;
    let psi = evolve(&f.coherent_state(ic), &f, kicks).map_err(err)?.pop().expect("initial state");
    Ok(husimi(&psi, n_theta, n_phi).map_err(err)?.values)
}

#[wasm_bindgen]
pub fn portrait(kappa: f64, p: f64, grid: usize, kicks: usize) -> Result<Vec<f64>, JsError> {
    portrait_points(kappa, p, grid, kicks).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn entanglement_series(kappa: f64, p: f64, theta: f64, phi: f64, kicks: usize) -> Result<Vec<f64>, JsError> {
    series_values(kappa, p, theta, phi, kicks).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn husimi_after(
    kappa: f64,
    p: f64,
    theta: f64,
    phi: f64,
    kicks: usize,
    n_theta: usize,
    n_phi: usize,
) -> Result<Vec<f64>, JsError> {
    husimi_values(kappa, p, theta, phi, kicks, n_theta, n_phi).map_err(|e| JsError::new(&e))
}
