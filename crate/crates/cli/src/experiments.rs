//! Experiment pipelines behind each subcommand. Pure functions returning
//! rows; file handling lives in [`crate::run`].

use std::f64::consts::PI;

use kicktop::classical::{phase_portrait, uniform_sphere_grid, PortraitPoint};
use kicktop::entanglement::{negativity, pure_negativity, state_linear_entropy, time_average};
use kicktop::open_system::{DecoherenceParams, JumpModel, OpenKickedTop};
use kicktop::quantum::{
    dominant_eigenstate, evolve, husimi, overlap_distribution, support_measure, Overlap,
};
use kicktop::{
    DensityMatrix, FloquetOperator, FloquetSpectrum, HusimiGrid, SphericalCoord, TopParams,
};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub kick: usize,
    pub s: f64,
    pub n: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenRow {
    pub kick: usize,
    pub s: f64,
    pub n: f64,
    pub purity: f64,
}

/// One sweep point: scanned coordinate, 1..=n kick averages of S and N,
/// and (phi scans only) the normalized support measure of the IC.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub x: f64,
    pub s_avg: f64,
    pub n_avg: f64,
    pub support: Option<f64>,
}

pub fn portrait(
    params: &TopParams,
    ics: &[SphericalCoord],
    kicks: usize,
) -> CliResult<Vec<PortraitPoint>> {
    Ok(phase_portrait(ics, params, kicks)?)
}

pub fn portrait_grid(n_cos: usize, n_phi: usize) -> Vec<SphericalCoord> {
    uniform_sphere_grid(n_cos, n_phi)
}

/// Closed-system S and N for kicks `0..=kicks`.
pub fn entanglement_series(
    floquet: &FloquetOperator,
    ic: SphericalCoord,
    kicks: usize,
) -> CliResult<Vec<SeriesRow>> {
    let ops = floquet.ops();
    let spin = ops.spin();
    let states = evolve(&floquet.coherent_state(ic), floquet, kicks)?;
    states
        .iter()
        .enumerate()
        .map(|(kick, psi)| {
            Ok(SeriesRow {
                kick,
                s: state_linear_entropy(psi, ops)?,
                n: pure_negativity(psi, spin)?,
            })
        })
        .collect()
}

/// Averages over kicks `1..=n`; kick 0 is the separable initial state.
fn averages(rows: &[SeriesRow]) -> CliResult<(f64, f64)> {
    let s: Vec<f64> = rows.iter().skip(1).map(|r| r.s).collect();
    let n: Vec<f64> = rows.iter().skip(1).map(|r| r.n).collect();
    Ok((time_average(&s)?, time_average(&n)?))
}

pub fn average_entanglement(
    floquet: &FloquetOperator,
    ic: SphericalCoord,
    kicks: usize,
) -> CliResult<(f64, f64)> {
    averages(&entanglement_series(floquet, ic, kicks)?)
}

fn pool(jobs: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::config(format!("cannot start {jobs} workers: {e}")))
}

/// `phi_k = 2 pi k / points` along fixed `theta`. Rows come back in sweep
/// order whatever order the workers finish in.
pub fn scan_phi(
    params: TopParams,
    theta: f64,
    points: usize,
    kicks: usize,
    jobs: usize,
) -> CliResult<Vec<ScanRow>> {
    let floquet = FloquetOperator::new(params)?;
    let spectrum = FloquetSpectrum::new(&floquet)?;
    let phis: Vec<f64> = (0..points).map(|k| 2.0 * PI * k as f64 / points as f64).collect();
    pool(jobs)?.install(|| {
        phis.par_iter()
            .map(|&phi| {
                let ic = SphericalCoord::new(theta, phi)?;
                let (s_avg, n_avg) = average_entanglement(&floquet, ic, kicks)?;
                let support = support_measure(&floquet.coherent_state(ic), &spectrum)?;
                Ok(ScanRow { x: phi, s_avg, n_avg, support: Some(support.normalized()) })
            })
            .collect()
    })
}

/// `kappa_k = kappa_max k / (points - 1)`, inclusive of both ends.
pub fn scan_kappa(
    base: TopParams,
    ic: SphericalCoord,
    kappa_max: f64,
    points: usize,
    kicks: usize,
    jobs: usize,
) -> CliResult<Vec<ScanRow>> {
    let kappas: Vec<f64> = (0..points)
        .map(|k| if points == 1 { 0.0 } else { kappa_max * k as f64 / (points - 1) as f64 })
        .collect();
    pool(jobs)?.install(|| {
        kappas
            .par_iter()
            .map(|&kappa| {
                let floquet = FloquetOperator::new(TopParams::new(base.spin, kappa, base.p)?)?;
                let (s_avg, n_avg) = average_entanglement(&floquet, ic, kicks)?;
                Ok(ScanRow { x: kappa, s_avg, n_avg, support: None })
            })
            .collect()
    })
}

pub struct SpectrumReport {
    pub spectrum: FloquetSpectrum,
    pub overlaps: Vec<Overlap>,
    pub dominant: usize,
}

pub fn spectrum_report(params: TopParams, ic: SphericalCoord) -> CliResult<SpectrumReport> {
    let floquet = FloquetOperator::new(params)?;
    let spectrum = FloquetSpectrum::new(&floquet)?;
    let overlaps = overlap_distribution(&floquet.coherent_state(ic), &spectrum)?;
    let dominant = dominant_eigenstate(&overlaps);
    Ok(SpectrumReport { spectrum, overlaps, dominant })
}

/// Husimi grids of every eigenstate, in eigenphase order.
pub fn eigenstate_husimis(
    spectrum: &FloquetSpectrum,
    grid: [usize; 2],
    jobs: usize,
) -> CliResult<Vec<HusimiGrid>> {
    pool(jobs)?.install(|| {
        (0..spectrum.len())
            .into_par_iter()
            .map(|n| Ok(husimi(&spectrum.eigenstate(n), grid[0], grid[1])?))
            .collect()
    })
}

pub fn decoherence(params: &TopParams, gamma_s: Option<f64>, beta: f64) -> CliResult<DecoherenceParams> {
    Ok(match gamma_s {
        Some(g) => DecoherenceParams::new(g, beta, JumpModel::Isotropic)?,
        None => DecoherenceParams::from_beta(params, beta)?,
    })
}

/// Open-system S, N and purity for kicks `0..=kicks`, plus the Husimi
/// distribution of the state at `snapshot` if requested.
pub fn open_series(
    params: TopParams,
    dec: DecoherenceParams,
    ic: SphericalCoord,
    kicks: usize,
    snapshot: Option<(usize, [usize; 2])>,
) -> CliResult<(Vec<OpenRow>, Option<HusimiGrid>)> {
    let open = OpenKickedTop::new(params, dec)?;
    let ops = open.ops();
    let spin = ops.spin();
    let rho0 = DensityMatrix::pure(&ops.coherent_state(ic));
    let rhos = open.run(&rho0, kicks)?;
    let rows = rhos
        .iter()
        .enumerate()
        .map(|(kick, rho)| {
            Ok(OpenRow {
                kick,
                s: state_linear_entropy(rho, ops)?,
                n: negativity(rho, spin)?,
                purity: rho.purity(),
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let snap = match snapshot {
        Some((k, grid)) => Some(mixed_husimi(&rhos[k], grid)?),
        None => None,
    };
    Ok((rows, snap))
}

/// Husimi density of a mixed state as the eigen-weighted sum of pure ones.
pub fn mixed_husimi(rho: &DensityMatrix, grid: [usize; 2]) -> CliResult<HusimiGrid> {
    let (weights, vectors) = kicktop::linalg::hermitian_eigen(rho.matrix());
    let mut total: Option<HusimiGrid> = None;
    for (k, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        let psi = kicktop::SpinState::normalized(vectors.column(k).into_owned())?;
        let g = husimi(&psi, grid[0], grid[1])?;
        match total.as_mut() {
            None => {
                let mut g = g;
                g.values.iter_mut().for_each(|v| *v *= w);
                total = Some(g);
            }
            Some(t) => t.values.iter_mut().zip(&g.values).for_each(|(a, b)| *a += w * b),
        }
    }
    total.ok_or_else(|| CliError::Numerical("density matrix has no positive weight".into()))
}
