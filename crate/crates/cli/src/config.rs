//! Resolution of run parameters: flags override a `key=value` config file,
//! which overrides per-command defaults.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use lscat_core::model::{LatticeSpec, ProbeSpec};
use lscat_core::{DEFAULT_DEPTH, DEFAULT_MASS_RATIO, DEFAULT_TUNNELING};
use serde::Serialize;

use crate::grid::{parse_counts, parse_grid, parse_value};
use crate::CliError;

/// Flags shared by every subcommand. Values stay textual until resolution so
/// that the config file can fill the gaps.
#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// Lattice sites; a comma list for `slope` and `depletion`
    #[arg(long = "L")]
    pub sites: Option<String>,
    /// Particle number; sets the filling to N/L
    #[arg(long = "N")]
    pub particles: Option<String>,
    /// Filling factor; a grid for `deviation-map` and `depletion`
    #[arg(long = "n")]
    pub filling: Option<String>,
    /// On-site interaction in units of J; a grid for `deviation-map`
    #[arg(long = "U-over-J")]
    pub u_over_j: Option<String>,
    /// Tunneling strength in recoil energies
    #[arg(long = "J")]
    pub tunneling: Option<String>,
    /// Lattice depth in recoil energies
    #[arg(long = "V0")]
    pub depth: Option<String>,
    /// Probe kinetic energy; a grid for `heatmap`
    #[arg(long = "E0")]
    pub energy: Option<String>,
    /// Probe-to-lattice-atom mass ratio m/M
    #[arg(long = "mass-ratio")]
    pub mass_ratio: Option<String>,
    /// Scattering angles, `start:stop:points` or a comma list
    #[arg(long = "theta-grid")]
    pub theta_grid: Option<String>,
    /// Interaction parameter 𝒰 = Un/J values
    #[arg(long = "u-grid")]
    pub u_grid: Option<String>,
    /// Comma list of exact, bogoliubov, sf-limit, mi-limit, largeL, linear
    #[arg(long = "provenance")]
    pub provenance: Option<String>,
    /// Directory for cached spectra
    #[arg(long = "cache-dir")]
    pub cache_dir: Option<PathBuf>,
    /// Output directory
    #[arg(long = "out")]
    pub out: Option<PathBuf>,
    /// key=value file with defaults for any of the flags above
    #[arg(long = "config")]
    pub config: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "L",
    "N",
    "n",
    "U-over-J",
    "J",
    "V0",
    "E0",
    "mass-ratio",
    "theta-grid",
    "u-grid",
    "provenance",
    "cache-dir",
    "out",
];

/// Reads `key = value` lines; `#` starts a comment, keys are flag names
/// without the leading dashes.
pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{}:{}: expected key=value", path.display(), no + 1)))?;
        let key = key.trim().trim_start_matches("--");
        if !KEYS.contains(&key) {
            return Err(CliError::Usage(format!("{}:{}: unknown key {key:?}", path.display(), no + 1)));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Provenance {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "bogoliubov")]
    Bogoliubov,
    #[serde(rename = "sf-limit")]
    SfLimit,
    #[serde(rename = "mi-limit")]
    MiLimit,
    #[serde(rename = "largeL")]
    LargeL,
    #[serde(rename = "linear")]
    Linear,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Bogoliubov => "bogoliubov",
            Self::SfLimit => "sf-limit",
            Self::MiLimit => "mi-limit",
            Self::LargeL => "largeL",
            Self::Linear => "linear",
        }
    }

    fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s.trim() {
            "exact" => Self::Exact,
            "bogoliubov" => Self::Bogoliubov,
            "sf-limit" => Self::SfLimit,
            "mi-limit" => Self::MiLimit,
            "largeL" => Self::LargeL,
            "linear" => Self::Linear,
            other => return Err(CliError::Usage(format!("unknown provenance {other:?}"))),
        })
    }
}

/// Per-command fallback values, in the same textual form as the flags.
#[derive(Debug, Clone, Copy)]
pub struct Defaults {
    pub sites: &'static str,
    pub particles: Option<&'static str>,
    pub filling: &'static str,
    pub u_over_j: &'static str,
    pub energy: &'static str,
    pub theta_grid: &'static str,
    pub u_grid: &'static str,
    pub provenance: &'static str,
}

impl Default for Defaults {
    fn default() -> Self {
        Self {
            sites: "5",
            particles: None,
            filling: "1",
            u_over_j: "0",
            energy: "2",
            theta_grid: "0:pi/2:181",
            u_grid: "0:1:11",
            provenance: "bogoliubov",
        }
    }
}

/// Fully resolved parameters, echoed into the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    #[serde(rename = "L")]
    pub sites: Vec<usize>,
    #[serde(rename = "N")]
    pub particles: Option<usize>,
    #[serde(rename = "n")]
    pub filling: Vec<f64>,
    #[serde(rename = "U_over_J")]
    pub u_over_j: Vec<f64>,
    #[serde(rename = "J")]
    pub tunneling: f64,
    #[serde(rename = "V0")]
    pub depth: f64,
    #[serde(rename = "E0")]
    pub energy: Vec<f64>,
    pub mass_ratio: f64,
    pub theta_grid: Vec<f64>,
    pub u_grid: Vec<f64>,
    pub provenance: Vec<Provenance>,
    pub cache_dir: Option<PathBuf>,
    pub out: PathBuf,
    pub dimension_cap: usize,
}

impl Settings {
    pub fn resolve(flags: &Flags, defaults: &Defaults) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        let pick = |flag: &Option<String>, key: &str, fallback: &str| -> String {
            flag.clone()
                .or_else(|| file.get(key).cloned())
                .unwrap_or_else(|| fallback.to_string())
        };
        let pick_path = |flag: &Option<PathBuf>, key: &str| flag.clone().or_else(|| file.get(key).map(PathBuf::from));

        let sites = parse_counts(&pick(&flags.sites, "L", defaults.sites))?;
        if sites.iter().any(|&l| l < 2) {
            return Err(CliError::Usage("L must be at least 2".into()));
        }
        let particles = match flags.particles.clone().or_else(|| file.get("N").cloned()) {
            Some(raw) => Some(parse_counts(&raw)?),
            None if flags.filling.is_some() || file.contains_key("n") => None,
            None => defaults.particles.map(parse_counts).transpose()?,
        };
        let particles = match particles.as_deref() {
            None => None,
            Some([n]) => Some(*n),
            Some(_) => return Err(CliError::Usage("N takes a single value".into())),
        };
        let filling = match particles {
            Some(n) => {
                if sites.len() != 1 {
                    return Err(CliError::Usage("N requires a single L".into()));
                }
                vec![n as f64 / sites[0] as f64]
            }
            None => parse_grid(&pick(&flags.filling, "n", defaults.filling))?,
        };
        let provenance = pick(&flags.provenance, "provenance", defaults.provenance)
            .split(',')
            .map(Provenance::parse)
            .collect::<Result<Vec<_>, _>>()?;

        let settings = Self {
            sites,
            particles,
            filling,
            u_over_j: parse_grid(&pick(&flags.u_over_j, "U-over-J", defaults.u_over_j))?,
            tunneling: parse_value(&pick(&flags.tunneling, "J", &DEFAULT_TUNNELING.to_string()))?,
            depth: parse_value(&pick(&flags.depth, "V0", &DEFAULT_DEPTH.to_string()))?,
            energy: parse_grid(&pick(&flags.energy, "E0", defaults.energy))?,
            mass_ratio: parse_value(&pick(&flags.mass_ratio, "mass-ratio", &DEFAULT_MASS_RATIO.to_string()))?,
            theta_grid: parse_grid(&pick(&flags.theta_grid, "theta-grid", defaults.theta_grid))?,
            u_grid: parse_grid(&pick(&flags.u_grid, "u-grid", defaults.u_grid))?,
            provenance,
            cache_dir: pick_path(&flags.cache_dir, "cache-dir"),
            out: pick_path(&flags.out, "out").unwrap_or_else(|| PathBuf::from(".")),
            dimension_cap: lscat_core::fock::DEFAULT_DIMENSION_CAP,
        };
        settings.validate()?;
        Ok(settings)
    }

    fn validate(&self) -> Result<(), CliError> {
        for &n in &self.filling {
            LatticeSpec::new(self.sites[0], self.depth, self.tunneling, 0.0, n)?;
        }
        if self.u_over_j.iter().chain(&self.u_grid).any(|&u| u < 0.0) {
            return Err(CliError::Usage("interaction values must be nonnegative".into()));
        }
        for &e0 in &self.energy {
            for &t in &self.theta_grid {
                ProbeSpec::new(e0, self.mass_ratio, t)?;
            }
        }
        Ok(())
    }

    pub fn wants(&self, p: Provenance) -> bool {
        self.provenance.contains(&p)
    }

    pub fn one<T: Copy>(values: &[T], name: &str) -> Result<T, CliError> {
        match values {
            [v] => Ok(*v),
            _ => Err(CliError::Usage(format!("{name} takes a single value here"))),
        }
    }

    pub fn lattice(&self, sites: usize, filling: f64, u_over_j: f64) -> Result<LatticeSpec, CliError> {
        Ok(LatticeSpec::new(sites, self.depth, self.tunneling, u_over_j * self.tunneling, filling)?)
    }

    pub fn probe(&self, energy: f64, theta: f64) -> Result<ProbeSpec, CliError> {
        Ok(ProbeSpec::new(energy, self.mass_ratio, theta)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn flags_beat_file_beat_defaults() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "# comment\nL = 7\nE0=3\n--V0 = 20").unwrap();
        let flags = Flags {
            energy: Some("4".into()),
            config: Some(file.path().to_path_buf()),
            ..Flags::default()
        };
        let s = Settings::resolve(&flags, &Defaults::default()).unwrap();
        assert_eq!(s.sites, vec![7]);
        assert_eq!(s.energy, vec![4.0]);
        assert_eq!(s.depth, 20.0);
        assert_eq!(s.tunneling, 0.0065);
        assert_eq!(s.theta_grid.len(), 181);
    }

    #[test]
    fn particle_number_sets_filling() {
        let flags = Flags {
            sites: Some("5".into()),
            particles: Some("10".into()),
            ..Flags::default()
        };
        let s = Settings::resolve(&flags, &Defaults::default()).unwrap();
        assert_eq!(s.filling, vec![2.0]);
    }

    #[test]
    fn bad_input_is_a_usage_error() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "colour = red").unwrap();
        let cases = [
            Flags {
                config: Some(file.path().to_path_buf()),
                ..Flags::default()
            },
            Flags {
                provenance: Some("magic".into()),
                ..Flags::default()
            },
            Flags {
                theta_grid: Some("0:2:5".into()),
                ..Flags::default()
            },
            Flags {
                sites: Some("1".into()),
                ..Flags::default()
            },
        ];
        for flags in cases {
            let err = Settings::resolve(&flags, &Defaults::default()).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{err}");
        }
    }
}
