use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pbchron::cli::{
    cmd_crs, cmd_plum, cmd_run, cmd_simulate, error_json, exit_code_for, GridSpec, Model,
    RunConfig,
};
use pbchron::agedepth::SlopeMemory;
use pbchron::simulator::Scenario;
use pbchron::Result;

/// Lead-210 sediment core chronologies.
#[derive(Parser)]
#[command(name = "pbchron", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bayesian chronology: piecewise-linear age-depth model under a
    /// constant rate of supply, sampled with the t-walk.
    Plum(CommonArgs),
    /// Classical constant-rate-of-supply dating with Monte Carlo errors.
    Crs(CommonArgs),
    /// Generate a synthetic dataset with a known true chronology.
    Simulate(CommonArgs),
    /// Config-file-driven run; the model comes from --model or the file.
    Run(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat key = value config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input measurement CSV (depth_cm,pb210_bqkg,sigma_bqkg,density[,thickness_cm]).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Designate the deepest N samples as supported-activity estimates.
    #[arg(long, conflicts_with = "supported_file")]
    supported_tail: Option<usize>,
    /// Separate supported-activity CSV (value_bqkg,sigma_bqkg).
    #[arg(long)]
    supported_file: Option<PathBuf>,
    /// Dating model for `run`: plum or crs.
    #[arg(long)]
    model: Option<String>,
    /// Age-depth section length, cm (default 1).
    #[arg(long)]
    dc: Option<f64>,
    /// MCMC iterations (default 2500 x parameter dimension).
    #[arg(long)]
    iters: Option<usize>,
    /// Master seed; all randomness derives from it (default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Detection threshold for the chronology limit, Bq/m² (default 0.1).
    #[arg(long)]
    al: Option<f64>,
    /// Output directory (default .).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary depth grid lo:hi:step (default 0 to the deepest dated
    /// sample in dc steps). Depths past the dated range extend the model.
    #[arg(long)]
    grid: Option<String>,
    /// Simulator scenario: full | odd_depths | top_n K | skip_range LO:HI.
    #[arg(long, num_args = 1..=2)]
    scenario: Option<Vec<String>>,
    /// CRS Monte Carlo replicates (default 5000).
    #[arg(long)]
    n_mc: Option<usize>,
    /// CRS: extrapolate inventory below the deepest sample.
    #[arg(long)]
    extrapolate: bool,
    /// Burn-in fraction (default 0.2).
    #[arg(long)]
    burn_in: Option<f64>,
    /// Keep every n-th draw (default: parameter dimension).
    #[arg(long)]
    thin: Option<usize>,
    /// Dataset label in outputs (default: input file stem).
    #[arg(long)]
    label: Option<String>,
    /// Slope-memory anchor: deep (recursion starts at the deepest
    /// section) or top (starts at the surface; fitted slopes carry
    /// downward). Default deep.
    #[arg(long)]
    slope_memory: Option<String>,
    /// Supply prior shape (Gamma; default 2).
    #[arg(long)]
    phi_shape: Option<f64>,
    /// Supply prior mean, Bq/(m² yr) (default 50).
    #[arg(long)]
    phi_mean: Option<f64>,
    /// Supported prior shape (Gamma; default 2).
    #[arg(long)]
    ps_shape: Option<f64>,
    /// Supported prior mean, Bq/kg (default 20).
    #[arg(long)]
    ps_mean: Option<f64>,
    /// Memory prior Beta a (default 4).
    #[arg(long)]
    omega_a: Option<f64>,
    /// Memory prior Beta b (default 1.714).
    #[arg(long)]
    omega_b: Option<f64>,
    /// Accumulation prior shape (Gamma; default 1.5).
    #[arg(long)]
    alpha_shape: Option<f64>,
    /// Accumulation prior mean, yr/cm (default 10).
    #[arg(long)]
    alpha_mean: Option<f64>,
}

impl CommonArgs {
    fn into_config(self) -> Result<RunConfig> {
        let base = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            input: self.input,
            supported_tail: self.supported_tail,
            supported_file: self.supported_file,
            model: self.model.as_deref().map(Model::parse).transpose()?,
            dc: self.dc,
            iters: self.iters,
            seed: self.seed,
            al: self.al,
            out: self.out,
            grid: self.grid.as_deref().map(GridSpec::parse).transpose()?,
            scenario: self.scenario.as_deref().map(Scenario::parse).transpose()?,
            n_mc: self.n_mc,
            extrapolate: if self.extrapolate { Some(true) } else { None },
            burn_in: self.burn_in,
            thin: self.thin,
            label: self.label,
            slope_memory: self
                .slope_memory
                .as_deref()
                .map(SlopeMemory::parse)
                .transpose()?,
            phi_shape: self.phi_shape,
            phi_mean: self.phi_mean,
            ps_shape: self.ps_shape,
            ps_mean: self.ps_mean,
            omega_a: self.omega_a,
            omega_b: self.omega_b,
            alpha_shape: self.alpha_shape,
            alpha_mean: self.alpha_mean,
        };
        Ok(base.overlay(flags))
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Plum(args) => {
            let cfg = args.into_config()?;
            let art = cmd_plum(&cfg)?;
            eprintln!(
                "plum: {} draws, acceptance {:.3}, outputs in {}",
                art.metadata.stored_draws,
                art.metadata.acceptance_rate,
                art.metadata_path.parent().unwrap_or(std::path::Path::new(".")).display()
            );
            Ok(())
        }
        Cmd::Crs(args) => {
            let cfg = args.into_config()?;
            let art = cmd_crs(&cfg)?;
            eprintln!(
                "crs: {} dated depths, {} dropped, outputs in {}",
                art.result.records.len(),
                art.result.dropped_depths.len(),
                art.metadata_path.parent().unwrap_or(std::path::Path::new(".")).display()
            );
            Ok(())
        }
        Cmd::Simulate(args) => {
            let cfg = args.into_config()?;
            let art = cmd_simulate(&cfg)?;
            eprintln!(
                "simulate: {} rows written to {}",
                art.dataset.measurements().len(),
                art.dataset_path.display()
            );
            Ok(())
        }
        Cmd::Run(args) => {
            let cfg = args.into_config()?;
            cmd_run(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
