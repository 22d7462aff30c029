//! Lattice and probe parameters, scattering kinematics and the single-site
//! building blocks of every cross section.
//!
//! Units: the lattice constant `d` and the recoil energy `E_r` are both 1, so
//! momenta are in `1/d`, energies in `E_r` and cross sections in `a_s^2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Threshold on `|sin(k/2)|` below which the interference sum is evaluated in
/// its coherent limit `L^2`.
pub const SINGULAR_THRESHOLD: f64 = 1e-9;

/// One-dimensional Bose-Hubbard lattice with periodic boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    /// Number of sites.
    pub sites: usize,
    /// Lattice depth `V0`.
    pub depth: f64,
    /// Tunneling strength `J`.
    pub tunneling: f64,
    /// On-site interaction `U`.
    pub interaction: f64,
    /// Mean filling `n = N/L`.
    pub filling: f64,
}

impl LatticeSpec {
    pub fn new(sites: usize, depth: f64, tunneling: f64, interaction: f64, filling: f64) -> Result<Self> {
        let spec = Self {
            sites,
            depth,
            tunneling,
            interaction,
            filling,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites < 2 {
            return Err(Error::InvalidLattice(format!("L = {} (need L >= 2)", self.sites)));
        }
        if !(self.depth > 0.0 && self.depth.is_finite()) {
            return Err(Error::InvalidLattice(format!("V0 = {} (need V0 > 0)", self.depth)));
        }
        if !(self.tunneling > 0.0 && self.tunneling.is_finite()) {
            return Err(Error::InvalidLattice(format!("J = {} (need J > 0)", self.tunneling)));
        }
        if !(self.interaction >= 0.0 && self.interaction.is_finite()) {
            return Err(Error::InvalidLattice(format!("U = {} (need U >= 0)", self.interaction)));
        }
        if !(self.filling > 0.0 && self.filling.is_finite()) {
            return Err(Error::InvalidLattice(format!("n = {} (need n > 0)", self.filling)));
        }
        Ok(())
    }

    /// Same lattice with the interaction fixed by `𝒰 = U n / J`.
    pub fn with_interaction_param(mut self, interaction_param: f64) -> Self {
        self.interaction = interaction_param * self.tunneling / self.filling;
        self
    }

    pub fn with_interaction(mut self, interaction: f64) -> Self {
        self.interaction = interaction;
        self
    }

    /// Total particle number `N = n L` (not necessarily an integer).
    pub fn particles(&self) -> f64 {
        self.filling * self.sites as f64
    }

    /// Integer particle number used by the canonical exact path, `round(n L)`.
    pub fn particle_count(&self) -> usize {
        self.particles().round() as usize
    }

    /// Dimensionless interaction `𝒰 = U n / J`.
    pub fn interaction_param(&self) -> f64 {
        self.interaction * self.filling / self.tunneling
    }
}

/// Incoming matter-wave probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeSpec {
    /// Incoming energy `E0`.
    pub energy: f64,
    /// Probe-to-target mass ratio `m/M`.
    pub mass_ratio: f64,
    /// Scattering angle in radians, within `[-π/2, π/2]`.
    pub theta: f64,
}

/// Outcome of the recommended probe-energy window check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeWindow {
    /// `4J sqrt(1 + 𝒰/2)`, the top of the Bogoliubov band.
    pub band_top: f64,
    /// Energy of the first interband excitation.
    pub band_gap: f64,
    pub above_band: bool,
    pub below_gap: bool,
}

/// Energy gap to the second band at `V0 = 15`.
pub const INTERBAND_GAP: f64 = 6.0;

impl ProbeSpec {
    pub fn new(energy: f64, mass_ratio: f64, theta: f64) -> Result<Self> {
        let probe = Self {
            energy,
            mass_ratio,
            theta,
        };
        probe.validate()?;
        Ok(probe)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.energy > 0.0 && self.energy.is_finite()) {
            return Err(Error::InvalidProbe(format!("E0 = {} (need E0 > 0)", self.energy)));
        }
        if !(self.mass_ratio > 0.0 && self.mass_ratio.is_finite()) {
            return Err(Error::InvalidProbe(format!("m/M = {} (need m/M > 0)", self.mass_ratio)));
        }
        if !(self.theta.abs() <= PI / 2.0) {
            return Err(Error::InvalidProbe(format!("theta = {} outside [-π/2, π/2]", self.theta)));
        }
        Ok(())
    }

    pub fn at_angle(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_energy(mut self, energy: f64) -> Self {
        self.energy = energy;
        self
    }

    /// Reports whether `4J sqrt(1 + 𝒰/2) << E0 < 6 E_r`; never rejects.
    pub fn window(&self, tunneling: f64, interaction_param: f64) -> ProbeWindow {
        let band_top = 4.0 * tunneling * (1.0 + interaction_param / 2.0).sqrt();
        ProbeWindow {
            band_top,
            band_gap: INTERBAND_GAP,
            above_band: self.energy > 10.0 * band_top,
            below_gap: self.energy < INTERBAND_GAP,
        }
    }
}

/// Allowed nonzero quasimomenta of a periodic lattice, `2πs/L` for `s = 1..L-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid(Vec<f64>);

impl MomentumGrid {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }
}

pub fn quasimomentum_grid(sites: usize) -> Result<MomentumGrid> {
    if sites < 2 {
        return Err(Error::InvalidLattice(format!("L = {sites} (need L >= 2)")));
    }
    let l = sites as f64;
    Ok(MomentumGrid((1..sites).map(|s| 2.0 * PI * s as f64 / l).collect()))
}

/// Lowest-band dispersion `ε_q = 4J sin²(q/2)`.
pub fn bloch_dispersion(q: f64, tunneling: f64) -> f64 {
    let s = (q / 2.0).sin();
    4.0 * tunneling * s * s
}

/// Momentum transfer along the lattice for elastic scattering.
pub fn kappa_elastic(probe: &ProbeSpec) -> f64 {
    -PI * probe.theta.sin() * (probe.energy * probe.mass_ratio).sqrt()
}

/// Momentum transfer when the target absorbs `excitation` from the probe.
pub fn kappa_transferred(probe: &ProbeSpec, excitation: f64) -> Result<f64> {
    if excitation >= probe.energy {
        return Err(Error::KinematicallyForbidden {
            excitation,
            e0: probe.energy,
        });
    }
    if excitation < 0.0 {
        return Err(Error::Domain(format!("negative excitation energy {excitation}")));
    }
    Ok(kappa_elastic(probe) * (1.0 - excitation / probe.energy).sqrt())
}

/// Form factor of the Gaussian (harmonic) Wannier density.
pub fn form_factor(kappa: f64, depth: f64) -> f64 {
    (-kappa * kappa / (4.0 * PI * PI * depth.sqrt())).exp()
}

/// Overlap `W_jl(κ)` of Gaussian Wannier functions centred on sites `j` and `l`.
pub fn wannier_overlap(kappa: f64, depth: f64, j: i64, l: i64) -> Result<Complex64> {
    if j == l {
        return Err(Error::Domain(
            "on-site overlap is the form factor, not an off-diagonal term".into(),
        ));
    }
    let separation = (j - l) as f64;
    let magnitude = form_factor(kappa, depth) * (-separation * separation * PI * PI * depth.sqrt() / 4.0).exp();
    let midpoint = (j + l) as f64 / 2.0;
    Ok(Complex64::from_polar(magnitude, kappa * midpoint))
}

/// Magnitude of the off-diagonal overlap at the given separation, `|W_jl(κ)|`.
pub fn wannier_overlap_abs(kappa: f64, depth: f64, separation: u32) -> f64 {
    let s = separation as f64;
    form_factor(kappa, depth) * (-s * s * PI * PI * depth.sqrt() / 4.0).exp()
}

/// `|Σ_j e^{i k x_j}|^2 = sin²(kL/2) / sin²(k/2)` over `L` sites.
pub fn lattice_sum_sq(k: f64, sites: usize) -> f64 {
    let l = sites as f64;
    let den = (k / 2.0).sin();
    if den.abs() < SINGULAR_THRESHOLD {
        return l * l;
    }
    let num = (k * l / 2.0).sin();
    (num * num) / (den * den)
}

/// Folds a momentum into `[0, 2π)`.
pub fn fold(k: f64) -> f64 {
    k.rem_euclid(2.0 * PI)
}
