use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kicktop_cli::output::verify;
use kicktop_cli::{execute, layered, CliError, ConfigLayer, RunConfig};

#[derive(Parser)]
#[command(name = "kicktop", version, about = "Quantum kicked top experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classical stroboscopic phase portraits
    Portrait(RunArgs),
    /// Closed-system linear entropy and negativity per kick
    Series(RunArgs),
    /// Time-averaged entanglement and support along theta = const
    ScanPhi(RunArgs),
    /// Time-averaged entanglement against twist strength
    ScanKappa(RunArgs),
    /// Floquet spectrum, overlap distribution and eigenstate Husimi grids
    Spectrum(RunArgs),
    /// Open-system evolution with purity
    Open(RunArgs),
    /// Re-check the checksums listed in a run's manifest
    Verify {
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    kicks: Option<usize>,
    #[arg(long = "gamma-s", conflicts_with = "beta")]
    gamma_s: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Write a Husimi snapshot at this kick (open only)
    #[arg(long)]
    snapshot: Option<usize>,
}

impl RunArgs {
    fn flag_layer(&self) -> ConfigLayer {
        ConfigLayer {
            preset: self.preset.clone(),
            out: self.out.clone(),
            jobs: self.jobs,
            kappa: self.kappa,
            p: self.p,
            theta: self.theta,
            phi: self.phi,
            kicks: self.kicks,
            gamma_s: self.gamma_s,
            beta: self.beta,
            snapshot_kick: self.snapshot,
            ..Default::default()
        }
    }

    fn resolve(&self, command: &str) -> Result<RunConfig, CliError> {
        let file = self.config.as_deref().map(ConfigLayer::from_file).transpose()?;
        RunConfig::resolve(command, layered(file, self.flag_layer())?)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (name, args) = match &cli.command {
        Command::Portrait(a) => ("portrait", a),
        Command::Series(a) => ("series", a),
        Command::ScanPhi(a) => ("scan-phi", a),
        Command::ScanKappa(a) => ("scan-kappa", a),
        Command::Spectrum(a) => ("spectrum", a),
        Command::Open(a) => ("open", a),
        Command::Verify { out } => {
            let report = verify(out)?;
            for p in &report.problems {
                eprintln!("{p}");
            }
            if !report.problems.is_empty() {
                return Err(CliError::Numerical(format!(
                    "{} of {} files failed verification",
                    report.problems.len(),
                    report.checked
                )));
            }
            println!("{} files verified", report.checked);
            return Ok(());
        }
    };
    let cfg = args.resolve(name)?;
    let manifest = execute(&cfg)?;
    for f in &manifest.files {
        println!("{}", cfg.out.join(&f.name).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kicktop: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
