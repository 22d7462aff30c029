//! Parameter sweeps over the lattice scattering models, written as CSV tables
//! with a JSON run manifest.

pub mod commands;
pub mod config;
pub mod grid;
pub mod output;
pub mod store;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use lscat_core::Error;

use config::{Defaults, Flags, Settings};
use output::{write_run, CacheStats, RunManifest};
use store::SpectrumStore;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{context}: {source}")]
    Cell { context: String, source: Error },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 bad arguments, 3 capacity, 4 numerical failure, 1 anything else.
    pub fn exit_code(&self) -> u8 {
        let core = match self {
            CliError::Usage(_) => return 2,
            CliError::Io(_) => return 1,
            CliError::Core(e) | CliError::Cell { source: e, .. } => e,
        };
        match core {
            Error::InvalidLattice(_) | Error::InvalidProbe(_) | Error::KinematicallyForbidden { .. } => 2,
            Error::Capacity { .. } => 3,
            Error::Io(_) => 1,
            _ => 4,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "lscat", version, about = "Matter-wave scattering from bosons in a 1D optical lattice")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Elastic and inelastic cross sections over the scattering angle
    ThetaScan(Flags),
    /// Inelastic cross section at one angle over the interaction 𝒰
    UScan(Flags),
    /// Bogoliubov inelastic cross section over probe energy and angle
    Heatmap(Flags),
    /// Condensate depletion over lattice size, filling and interaction
    Depletion(Flags),
    /// Angle-averaged deviation of a model from exact diagonalization
    DeviationMap(Flags),
    /// Weak-interaction slope over the angle, with exact-angle markers
    Slope(Flags),
    /// Exact against model cross sections over the angle
    Compare(Flags),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ThetaScan(_) => "theta-scan",
            Command::UScan(_) => "u-scan",
            Command::Heatmap(_) => "heatmap",
            Command::Depletion(_) => "depletion",
            Command::DeviationMap(_) => "deviation-map",
            Command::Slope(_) => "slope",
            Command::Compare(_) => "compare",
        }
    }

    fn parts(&self) -> (&Flags, Defaults) {
        match self {
            Command::ThetaScan(f) => (f, commands::theta_scan_defaults()),
            Command::UScan(f) => (f, commands::u_scan_defaults()),
            Command::Heatmap(f) => (f, commands::heatmap_defaults()),
            Command::Depletion(f) => (f, commands::depletion_defaults()),
            Command::DeviationMap(f) => (f, commands::deviation_map_defaults()),
            Command::Slope(f) => (f, commands::slope_defaults()),
            Command::Compare(f) => (f, commands::compare_defaults()),
        }
    }
}

/// Runs one subcommand and returns the paths of the files written.
pub fn run(command: &Command) -> Result<Vec<PathBuf>, CliError> {
    let start = Instant::now();
    let (flags, defaults) = command.parts();
    let settings = Settings::resolve(flags, &defaults)?;
    let store = SpectrumStore::new(settings.cache_dir.clone(), settings.dimension_cap)?;
    let report = match command {
        Command::ThetaScan(_) => commands::theta_scan(&settings, &store),
        Command::UScan(_) => commands::u_scan(&settings, &store),
        Command::Heatmap(_) => commands::heatmap(&settings),
        Command::Depletion(_) => commands::depletion(&settings),
        Command::DeviationMap(_) => commands::deviation_map(&settings, &store),
        Command::Slope(_) => commands::slope(&settings),
        Command::Compare(_) => commands::compare(&settings, &store),
    }?;
    let mut manifest = RunManifest {
        command: command.name(),
        version: env!("CARGO_PKG_VERSION"),
        parameters: &settings,
        metadata: &report.metadata,
        cache: CacheStats {
            hits: store.hits(),
            misses: store.misses(),
        },
        wall_time_seconds: start.elapsed().as_secs_f64(),
        files: Vec::new(),
    };
    let files = write_run(&settings.out, &report.table, &mut manifest)?;
    Ok(files.into_iter().map(|f| settings.out.join(f)).collect())
}
