//! Layered run configuration: built-in defaults, then a preset, then the
//! JSON config file, then command-line flags.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use kicktop::open_system::BETA_MAX_CS;
use kicktop::{SphericalCoord, SpinQuantum, TopParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// One configuration layer. Every field is optional; later layers win.
///
/// This is also the JSON file schema, so unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub preset: Option<String>,
    pub j: Option<f64>,
    pub kappa: Option<f64>,
    pub p: Option<f64>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub kicks: Option<usize>,
    pub gamma_s: Option<f64>,
    pub beta: Option<f64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    /// Twist strengths drawn by `portrait`, one file each.
    pub portrait_kappas: Option<Vec<f64>>,
    /// `[n_cos_theta, n_phi]` cells of the uniform initial-condition grid.
    pub portrait_grid: Option<[usize; 2]>,
    /// Use the single IC `(theta, phi)` instead of the grid.
    pub portrait_single_ic: Option<bool>,
    pub scan_points: Option<usize>,
    pub kappa_max: Option<f64>,
    /// `[n_theta, n_phi]` Husimi nodes.
    pub husimi_grid: Option<[usize; 2]>,
    /// Kick at which `open` writes a Husimi snapshot.
    pub snapshot_kick: Option<usize>,
}

macro_rules! overlay_fields {
    ($base:ident, $top:ident; $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f; } )*
    };
}

impl ConfigLayer {
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }

    /// `top` overrides `self` field by field. Setting either decoherence
    /// input in `top` clears the other one from `self`.
    pub fn overlay(mut self, top: ConfigLayer) -> Self {
        if top.gamma_s.is_some() || top.beta.is_some() {
            self.gamma_s = None;
            self.beta = None;
        }
        overlay_fields!(self, top; preset, j, kappa, p, theta, phi, kicks, gamma_s, beta, out,
            jobs, portrait_kappas, portrait_grid, portrait_single_ic, scan_points, kappa_max,
            husimi_grid, snapshot_kick);
        self
    }
}

/// Named parameter sets for the three standard initial conditions plus a
/// pure-rotation check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub kappa: f64,
    pub theta: f64,
    pub phi: f64,
}

pub const PRESETS: [Preset; 4] = [
    Preset { name: "regular-k3", kappa: 3.0, theta: 2.25, phi: 2.5 },
    Preset { name: "chaotic-k3", kappa: 3.0, theta: 2.25, phi: 1.1 },
    Preset { name: "regular-k1", kappa: 1.0, theta: 2.25, phi: 1.1 },
    Preset { name: "rotation-k0", kappa: 0.0, theta: 2.25, phi: 2.5 },
];

pub fn preset(name: &str) -> CliResult<Preset> {
    PRESETS.iter().copied().find(|p| p.name == name).ok_or_else(|| {
        let known: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
        CliError::config(format!("unknown preset `{name}` (known: {})", known.join(", ")))
    })
}

impl Preset {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            preset: Some(self.name.to_string()),
            kappa: Some(self.kappa),
            theta: Some(self.theta),
            phi: Some(self.phi),
            ..Default::default()
        }
    }
}

/// Stack preset, file and flag layers. The preset may be named in the file
/// or on the command line; the flag wins.
pub fn layered(file: Option<ConfigLayer>, flags: ConfigLayer) -> CliResult<ConfigLayer> {
    let file = file.unwrap_or_default();
    let name = flags.preset.clone().or_else(|| file.preset.clone());
    let base = match name {
        Some(n) => preset(&n)?.layer(),
        None => ConfigLayer::default(),
    };
    Ok(base.overlay(file).overlay(flags))
}

/// How the open-system scattering rate was specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decoherence {
    GammaS(f64),
    Beta(f64),
}

/// Fully resolved, validated run configuration. Echoed into the manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub preset: Option<String>,
    pub j: f64,
    pub kappa: f64,
    pub p: f64,
    pub theta: f64,
    pub phi: f64,
    pub kicks: usize,
    pub decoherence: Decoherence,
    pub out: PathBuf,
    pub jobs: usize,
    pub portrait_kappas: Vec<f64>,
    pub portrait_grid: [usize; 2],
    pub portrait_single_ic: bool,
    pub scan_points: usize,
    pub kappa_max: f64,
    pub husimi_grid: [usize; 2],
    pub snapshot_kick: Option<usize>,
}

/// Default kick count for each subcommand.
fn default_kicks(command: &str) -> usize {
    match command {
        "portrait" => 150,
        "open" => 100,
        _ => 600,
    }
}

fn finite(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::config(format!("{name} must be finite, got {v}")))
    }
}

impl RunConfig {
    pub fn resolve(command: &str, layer: ConfigLayer) -> CliResult<Self> {
        let j = finite("j", layer.j.unwrap_or(4.0))?;
        let kappa = finite("kappa", layer.kappa.unwrap_or(3.0))?;
        let p = finite("p", layer.p.unwrap_or(FRAC_PI_2))?;
        let theta = finite("theta", layer.theta.unwrap_or(2.25))?;
        let phi = finite("phi", layer.phi.unwrap_or(1.1))?;
        let kicks = layer.kicks.unwrap_or_else(|| default_kicks(command));
        if kicks < 1 {
            return Err(CliError::config("kicks must be >= 1"));
        }
        let decoherence = match (layer.gamma_s, layer.beta) {
            (Some(_), Some(_)) => {
                return Err(CliError::config("gamma_s and beta are mutually exclusive"))
            }
            (Some(g), None) => Decoherence::GammaS(finite("gamma_s", g)?),
            (None, Some(b)) => Decoherence::Beta(finite("beta", b)?),
            (None, None) => Decoherence::Beta(BETA_MAX_CS),
        };
        let jobs = match layer.jobs {
            Some(0) => return Err(CliError::config("jobs must be >= 1")),
            Some(n) => n,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        let portrait_kappas = layer.portrait_kappas.unwrap_or_else(|| match layer.kappa {
            Some(k) => vec![k],
            None => vec![1.0, 3.0],
        });
        if portrait_kappas.is_empty() {
            return Err(CliError::config("portrait_kappas must not be empty"));
        }
        let portrait_grid = layer.portrait_grid.unwrap_or([12, 12]);
        if portrait_grid.contains(&0) {
            return Err(CliError::config("portrait_grid entries must be >= 1"));
        }
        let default_points = if command == "scan-kappa" { 140 } else { 200 };
        let scan_points = layer.scan_points.unwrap_or(default_points);
        if scan_points == 0 {
            return Err(CliError::config("scan_points must be >= 1 (zero-length sweep)"));
        }
        let kappa_max = finite("kappa_max", layer.kappa_max.unwrap_or(7.0))?;
        if kappa_max < 0.0 {
            return Err(CliError::config("kappa_max must be >= 0"));
        }
        let husimi_grid = layer.husimi_grid.unwrap_or([101, 201]);
        if husimi_grid[0] < 2 || husimi_grid[1] < 2 {
            return Err(CliError::config("husimi_grid needs at least 2 x 2 nodes"));
        }
        if let Some(k) = layer.snapshot_kick {
            if k > kicks {
                return Err(CliError::config(format!("snapshot_kick {k} exceeds kicks {kicks}")));
            }
        }
        let cfg = RunConfig {
            command: command.to_string(),
            preset: layer.preset,
            j,
            kappa,
            p,
            theta,
            phi,
            kicks,
            decoherence,
            out: layer.out.unwrap_or_else(|| PathBuf::from("out")),
            jobs,
            portrait_kappas,
            portrait_grid,
            portrait_single_ic: layer.portrait_single_ic.unwrap_or(false),
            scan_points,
            kappa_max,
            husimi_grid,
            snapshot_kick: layer.snapshot_kick,
        };
        // surface library-side parameter checks as config errors up front
        cfg.top_params()?;
        cfg.initial_direction()?;
        for &k in &cfg.portrait_kappas {
            cfg.top_params_with_kappa(k)?;
        }
        Ok(cfg)
    }

    pub fn spin(&self) -> CliResult<SpinQuantum> {
        Ok(SpinQuantum::new(self.j)?)
    }

    pub fn top_params(&self) -> CliResult<TopParams> {
        self.top_params_with_kappa(self.kappa)
    }

    pub fn top_params_with_kappa(&self, kappa: f64) -> CliResult<TopParams> {
        Ok(TopParams::new(self.spin()?, kappa, self.p)?)
    }

    pub fn initial_direction(&self) -> CliResult<SphericalCoord> {
        Ok(SphericalCoord::new(self.theta, self.phi)?)
    }
}
