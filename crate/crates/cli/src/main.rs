//! Certified convergence bounds for birth-death queues, from the shell.
//!
//! Exit codes: 0 success (all verifications pass), 1 verification
//! failure, 2 configuration error, 3 infeasible scenario, 4 runtime
//! failure (integration, IO).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod artifacts;
mod config;
mod pipeline;

use artifacts::OutDir;
use config::{Analysis, RunConfig, SCHEMA_VERSION};
use pipeline::{Pipeline, Report};

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Infeasible(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Infeasible(_) => 3,
            Failure::Runtime(_) => 4,
        }
    }

    fn describe(&self) -> String {
        match self {
            Failure::Config(m) => format!("config error: {m}"),
            Failure::Infeasible(m) => format!("infeasible: {m}"),
            Failure::Runtime(m) => format!("runtime error: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "bdp-bounds",
    version,
    about = "Certified exponential convergence bounds for time-varying birth-death queues"
)]
struct Cli {
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides the config's out_dir.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// ODE tolerance; overrides the config's tol_ode.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Truncation level; overrides the preset's k_trunc.
    #[arg(long, global = true)]
    trunc: Option<usize>,
    /// Suppress progress output.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Check feasibility and build the weight sequence.
    Feasibility,
    /// Feasibility plus decay certificates and envelopes.
    Bounds,
    /// Full pipeline: certificates checked against the integrator.
    Verify,
    /// Tabulate the certified rate across a parameter grid.
    Sweep,
    /// Eigenvalues of the frozen reduced matrix.
    Spectrum,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Feasibility => "feasibility",
            Command::Bounds => "bounds",
            Command::Verify => "verify",
            Command::Sweep => "sweep",
            Command::Spectrum => "spectrum",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", f.describe());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Failure::Config("--config is required".into()))?;
    let mut config = RunConfig::load(path)?;
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure::Config(format!("--tol must be positive, got {tol}")));
        }
        config.tol_ode = tol;
    }
    if let Some(out) = &cli.out {
        config.out_dir = out.clone();
    }
    let out = OutDir::create(&config.out_dir)?;

    if matches!(cli.command, Command::Sweep) {
        let summary = pipeline::sweep(&config, &out, cli.quiet)?;
        let spec = config.build_spec(cli.trunc)?;
        let pipe = Pipeline {
            config: &config,
            spec,
            out,
            quiet: cli.quiet,
        };
        let report = Report {
            schema_version: SCHEMA_VERSION,
            command: "sweep".into(),
            model: pipe.model_summary(),
            feasibility: None,
            certificates: None,
            verification: None,
            spectrum: None,
            cesaro: None,
            sweep: Some(summary),
        };
        pipe.out.write_json("report.json", &report)?;
        return Ok(0);
    }

    let spec = config.build_spec(cli.trunc)?;
    let pipe = Pipeline {
        config: &config,
        spec,
        out,
        quiet: cli.quiet,
    };
    let mut report = Report {
        schema_version: SCHEMA_VERSION,
        command: cli.command.name().into(),
        model: pipe.model_summary(),
        feasibility: None,
        certificates: None,
        verification: None,
        spectrum: None,
        cesaro: None,
        sweep: None,
    };

    let mut exit = 0u8;
    match cli.command {
        Command::Spectrum => {
            report.spectrum = Some(pipe.spectrum()?);
        }
        Command::Feasibility | Command::Bounds | Command::Verify => {
            let (w, feas, summary) = pipe.feasibility()?;
            report.feasibility = Some(summary);
            if matches!(cli.command, Command::Bounds | Command::Verify) {
                let (certs, skipped) = pipe.bounds(&w, &feas)?;
                report.certificates =
                    Some(certs.iter().map(|c| c.statement_id.clone()).collect());
                if matches!(cli.command, Command::Verify) {
                    let verification = pipe.verify(&w, &certs, skipped)?;
                    if !verification.all_pass {
                        exit = 1;
                    }
                    report.verification = Some(verification);
                    if pipe.wants(Analysis::Spectrum) {
                        report.spectrum = Some(pipe.spectrum()?);
                    }
                    if pipe.wants(Analysis::Cesaro) {
                        report.cesaro = Some(pipe.cesaro()?);
                    }
                }
            }
        }
        Command::Sweep => unreachable!(),
    }
    pipe.out.write_json("report.json", &report)?;
    Ok(exit)
}
