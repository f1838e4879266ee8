//! Subcommand execution: resolve inputs, run a pipeline, write CSVs and the
//! manifest.

use chrono::{SecondsFormat, Utc};
use serde_json::json;

use crate::config::{Decoherence, RunConfig};
use crate::error::{CliError, CliResult};
use crate::experiments as exp;
use crate::output::{fmt_g12, Cell, Manifest, OutputDir, Table};

/// Purity may not grow across a kick by more than this.
const PURITY_SLACK: f64 = 1e-10;

/// Run one data-producing subcommand and return the manifest written.
pub fn execute(cfg: &RunConfig) -> CliResult<Manifest> {
    let started = now();
    let mut out = OutputDir::create(&cfg.out)?;
    let notes = match cfg.command.as_str() {
        "portrait" => portrait(cfg, &mut out)?,
        "series" => series(cfg, &mut out)?,
        "scan-phi" => scan_phi(cfg, &mut out)?,
        "scan-kappa" => scan_kappa(cfg, &mut out)?,
        "spectrum" => spectrum(cfg, &mut out)?,
        "open" => open(cfg, &mut out)?,
        other => return Err(CliError::config(format!("unknown subcommand `{other}`"))),
    };
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: cfg.command.clone(),
        started_utc: started,
        finished_utc: now(),
        config: serde_json::to_value(cfg).map_err(|e| CliError::config(e.to_string()))?,
        notes,
        files: out.files().to_vec(),
    };
    out.finish(manifest.clone())?;
    Ok(manifest)
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

fn portrait(cfg: &RunConfig, out: &mut OutputDir) -> CliResult<serde_json::Value> {
    let ics = if cfg.portrait_single_ic {
        vec![cfg.initial_direction()?]
    } else {
        exp::portrait_grid(cfg.portrait_grid[0], cfg.portrait_grid[1])
    };
    let mut files = Vec::new();
    for &kappa in &cfg.portrait_kappas {
        let params = cfg.top_params_with_kappa(kappa)?;
        let points = exp::portrait(&params, &ics, cfg.kicks)?;
        let mut t = Table::new("ic_index,kick,theta,phi");
        for pt in &points {
            t.row(&[Cell::Int(pt.ic_index), Cell::Int(pt.kick), Cell::Num(pt.theta), Cell::Num(pt.phi)]);
        }
        let name = format!("portrait_k{}.csv", fmt_g12(kappa));
        out.write_table(&name, &t)?;
        files.push(name);
    }
    Ok(json!({ "initial_conditions": ics.len(), "files_by_kappa": files }))
}

fn series(cfg: &RunConfig, out: &mut OutputDir) -> CliResult<serde_json::Value> {
    let floquet = kicktop::FloquetOperator::new(cfg.top_params()?)?;
    let rows = exp::entanglement_series(&floquet, cfg.initial_direction()?, cfg.kicks)?;
    let mut t = Table::new("kick,S,N");
    for r in &rows {
        t.row(&[Cell::Int(r.kick), Cell::Num(r.s), Cell::Num(r.n)]);
    }
    out.write_table("series.csv", &t)?;
    Ok(json!({}))
}

fn scan_phi(cfg: &RunConfig, out: &mut OutputDir) -> CliResult<serde_json::Value> {
    let rows = exp::scan_phi(cfg.top_params()?, cfg.theta, cfg.scan_points, cfg.kicks, cfg.jobs)?;
    let mut t = Table::new("phi,S_avg,N_avg,s_support");
    for r in &rows {
        let s = r.support.expect("phi scans carry the support measure");
        t.row(&[Cell::Num(r.x), Cell::Num(r.s_avg), Cell::Num(r.n_avg), Cell::Num(s)]);
    }
    out.write_table("scan_phi.csv", &t)?;
    Ok(json!({ "support_normalization": "s / s0, s0 = sqrt(2j+1)" }))
}

fn scan_kappa(cfg: &RunConfig, out: &mut OutputDir) -> CliResult<serde_json::Value> {
    let rows = exp::scan_kappa(
        cfg.top_params()?,
        cfg.initial_direction()?,
        cfg.kappa_max,
        cfg.scan_points,
        cfg.kicks,
        cfg.jobs,
    )?;
    let mut t = Table::new("kappa,S_avg,N_avg");
    for r in &rows {
        t.row(&[Cell::Num(r.x), Cell::Num(r.s_avg), Cell::Num(r.n_avg)]);
    }
    out.write_table("scan_kappa.csv", &t)?;
    Ok(json!({}))
}

fn husimi_table(g: &kicktop::HusimiGrid) -> Table {
    let mut t = Table::new("theta,phi,p");
    for (i, &theta) in g.thetas.iter().enumerate() {
        for (k, &phi) in g.phis.iter().enumerate() {
            t.row(&[Cell::Num(theta), Cell::Num(phi), Cell::Num(g.at(i, k))]);
        }
    }
    t
}

fn spectrum(cfg: &RunConfig, out: &mut OutputDir) -> CliResult<serde_json::Value> {
    let report = exp::spectrum_report(cfg.top_params()?, cfg.initial_direction()?)?;
    let mut t = Table::new("n,omega,f");
    for (n, o) in report.overlaps.iter().enumerate() {
        t.row(&[Cell::Int(n), Cell::Num(o.omega), Cell::Num(o.weight)]);
    }
    out.write_table("spectrum.csv", &t)?;
    let grids = exp::eigenstate_husimis(&report.spectrum, cfg.husimi_grid, cfg.jobs)?;
    let mut integrals = Vec::new();
    for (n, g) in grids.iter().enumerate() {
        out.write_table(&format!("husimi_n{n}.csv"), &husimi_table(g))?;
        integrals.push(g.integral());
    }
    Ok(json!({
        "dominant_eigenstate": report.dominant,
        "dominant_husimi": format!("husimi_n{}.csv", report.dominant),
        "participation_ratio": kicktop::quantum::participation_ratio(&report.overlaps),
        "husimi_integrals": integrals,
    }))
}

fn open(cfg: &RunConfig, out: &mut OutputDir) -> CliResult<serde_json::Value> {
    let params = cfg.top_params()?;
    let dec = match cfg.decoherence {
        Decoherence::GammaS(g) => exp::decoherence(&params, Some(g), kicktop::open_system::BETA_MAX_CS)?,
        Decoherence::Beta(b) => exp::decoherence(&params, None, b)?,
    };
    let snapshot = cfg.snapshot_kick.map(|k| (k, cfg.husimi_grid));
    let (rows, snap) = exp::open_series(params, dec.clone(), cfg.initial_direction()?, cfg.kicks, snapshot)?;
    for w in rows.windows(2) {
        if w[1].purity > w[0].purity + PURITY_SLACK {
            return Err(CliError::Numerical(format!(
                "purity rose from {} to {} at kick {}",
                w[0].purity, w[1].purity, w[1].kick
            )));
        }
    }
    let mut t = Table::new("kick,S,N,purity");
    for r in &rows {
        t.row(&[Cell::Int(r.kick), Cell::Num(r.s), Cell::Num(r.n), Cell::Num(r.purity)]);
    }
    out.write_table("open.csv", &t)?;
    if let (Some(k), Some(g)) = (cfg.snapshot_kick, snap) {
        out.write_table(&format!("husimi_kick{k}.csv"), &husimi_table(&g))?;
    }
    Ok(json!({ "gamma_s": dec.gamma_s, "beta": dec.beta, "jump_model": "isotropic" }))
}
