use num_complex::Complex64;

use super::basis::FockBasis;
use super::hamiltonian::build_hamiltonian;
use super::spectrum::{density_elements, full_spectrum, DensityTable, SpectrumResult};
use crate::error::{Error, Result};
use crate::model::{form_factor, kappa_elastic, LatticeSpec, ProbeSpec};

/// What the exact cross section needs from a diagonalization: the ascending
/// spectrum and the diagonal density matrix elements against the ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationData {
    pub particles: usize,
    pub sites: usize,
    pub eigenvalues: Vec<f64>,
    pub density: DensityTable,
}

impl ExcitationData {
    pub fn from_spectrum(spectrum: &SpectrumResult, basis: &FockBasis) -> Self {
        Self {
            particles: basis.particles(),
            sites: basis.sites(),
            eigenvalues: spectrum.eigenvalues.clone(),
            density: density_elements(spectrum, basis),
        }
    }

    /// Diagonalizes the lattice at `N = round(nL)` particles.
    pub fn solve(lattice: &LatticeSpec, cap: usize) -> Result<Self> {
        lattice.validate()?;
        let basis = FockBasis::with_cap(lattice.particle_count(), lattice.sites, cap)?;
        let h = build_hamiltonian(&basis, lattice.tunneling, lattice.interaction);
        let spectrum = full_spectrum(&h)?;
        Ok(Self::from_spectrum(&spectrum, &basis))
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn ground_density(&self) -> &[f64] {
        self.density.row(0)
    }

    /// `Σ_j e^{iκ x_j} ⟨e|n̂_j|g⟩` with site positions `x_j = j`, `j = 1..L`.
    pub fn density_amplitude(&self, e: usize, kappa: f64) -> Complex64 {
        self.density
            .row(e)
            .iter()
            .enumerate()
            .map(|(j, &d)| Complex64::from_polar(d, kappa * (j + 1) as f64))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactCrossSection {
    pub theta: f64,
    /// Elastic part in `a_s^2`.
    pub elastic: f64,
    /// Inelastic part in `a_s^2`.
    pub inelastic: f64,
    /// Excited states with `E_e - E_g < E0`.
    pub contributing_states: usize,
}

/// Born-approximation cross section from the diagonal Wannier part of the
/// density operator; off-diagonal Wannier terms are omitted.
pub fn exact_cross_section(data: &ExcitationData, lattice: &LatticeSpec, probe: &ProbeSpec) -> Result<ExactCrossSection> {
    if data.sites != lattice.sites {
        return Err(Error::Domain(format!(
            "spectrum has {} sites, lattice has {}",
            data.sites, lattice.sites
        )));
    }
    let kel = kappa_elastic(probe);
    let w_el = form_factor(kel, lattice.depth);
    let elastic = w_el * w_el * data.density_amplitude(0, kel).norm_sqr();

    let e_g = data.ground_energy();
    let mut inelastic = 0.0;
    let mut contributing_states = 0;
    for (e, &energy) in data.eigenvalues.iter().enumerate().skip(1) {
        let excitation = energy - e_g;
        if excitation >= probe.energy {
            // ascending spectrum: every later channel is closed too
            break;
        }
        contributing_states += 1;
        if kel == 0.0 {
            // Σ_j n̂_j = N̂ connects the ground state to nothing else
            continue;
        }
        let weight = (1.0 - excitation / probe.energy).sqrt();
        let kappa = kel * weight;
        let w = form_factor(kappa, lattice.depth);
        inelastic += weight * w * w * data.density_amplitude(e, kappa).norm_sqr();
    }

    Ok(ExactCrossSection {
        theta: probe.theta,
        elastic,
        inelastic,
        contributing_states,
    })
}
