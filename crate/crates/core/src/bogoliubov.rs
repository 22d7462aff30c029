//! Weak-interaction (Bogoliubov) treatment of the lattice condensate:
//! quasiparticle dispersion, self-consistent depletion and the resulting
//! inelastic cross section.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{
    bloch_dispersion, form_factor, fold, kappa_elastic, lattice_sum_sq, quasimomentum_grid, LatticeSpec,
    MomentumGrid, ProbeSpec,
};

/// Lower end of the condensate-density bracket, relative to `n`.
pub const BRACKET_FLOOR: f64 = 1e-15;
pub const MAX_BISECTIONS: usize = 200;
/// Required `|residual| / n` of the depletion equation.
pub const DEPLETION_RESIDUAL: f64 = 1e-12;

/// `ω_q = sqrt(ε_q (ε_q + 2 U n0))`.
pub fn bogoliubov_dispersion(q: f64, tunneling: f64, un0: f64) -> Result<f64> {
    let eps = bloch_dispersion(q, tunneling);
    if eps == 0.0 || (q / 2.0).sin().abs() < 1e-12 {
        return Err(Error::Domain(format!("q = {q} is the condensate mode")));
    }
    Ok(omega_from(eps, un0))
}

fn omega_from(eps: f64, un0: f64) -> f64 {
    (eps * (eps + 2.0 * un0)).sqrt()
}

/// `(ε + Un0)/(2ω) - 1/2`, rewritten as `x² / (2ω(ε + x + ω))` to avoid
/// cancellation at weak coupling.
fn mode_depletion(eps: f64, un0: f64) -> f64 {
    let omega = omega_from(eps, un0);
    un0 * un0 / (2.0 * omega * (eps + un0 + omega))
}

/// Depleted density `(1/L) Σ_{q≠0} [(ε_q + U n0)/(2ω_q) - 1/2]`.
pub fn depleted_density(epsilon: &[f64], interaction: f64, n0: f64) -> f64 {
    let un0 = interaction * n0;
    let sites = epsilon.len() + 1;
    epsilon.iter().map(|&e| mode_depletion(e, un0)).sum::<f64>() / sites as f64
}

/// Solved condensate for one lattice configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovState {
    pub lattice: LatticeSpec,
    /// Condensate filling `n0`.
    pub n0: f64,
    /// `δn/n = 1 - n0/n`.
    pub depletion_fraction: f64,
    /// Mean-field chemical potential `U n0 - 2J`.
    pub mu: f64,
    pub grid: MomentumGrid,
    /// `ε_q` on the grid.
    pub epsilon: Vec<f64>,
    /// `ω_q` on the grid.
    pub omega: Vec<f64>,
    pub healing_ok: bool,
}

impl BogoliubovState {
    /// `U n0`.
    pub fn un0(&self) -> f64 {
        self.lattice.interaction * self.n0
    }

    pub fn condensate_fraction(&self) -> f64 {
        self.n0 / self.lattice.filling
    }

    /// `a_q = sqrt(ε_q / ω_q)`.
    pub fn amplitude(&self, mode: usize) -> f64 {
        (self.epsilon[mode] / self.omega[mode]).sqrt()
    }
}

/// Solves `n = n0 + δn(n0)` for the condensate filling by bisection.
pub fn solve_depletion(lattice: &LatticeSpec) -> Result<BogoliubovState> {
    lattice.validate()?;
    let grid = quasimomentum_grid(lattice.sites)?;
    let epsilon: Vec<f64> = grid.iter().map(|q| bloch_dispersion(q, lattice.tunneling)).collect();
    let n = lattice.filling;
    let u = lattice.interaction;

    let n0 = if u == 0.0 {
        n
    } else {
        let residual = |n0: f64| n0 + depleted_density(&epsilon, u, n0) - n;
        let mut lo = BRACKET_FLOOR * n;
        let mut hi = n;
        let (mut r_lo, mut r_hi) = (residual(lo), residual(hi));
        if !(r_lo <= 0.0 && r_hi >= 0.0) {
            return Err(Error::Convergence {
                residual: r_lo.abs().min(r_hi.abs()),
                iterations: 0,
                lower: lo,
                upper: hi,
            });
        }
        let mut iterations = 0;
        while iterations < MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let r = residual(mid);
            if r < 0.0 {
                lo = mid;
                r_lo = r;
            } else {
                hi = mid;
                r_hi = r;
            }
            iterations += 1;
        }
        let (root, r) = if r_hi.abs() <= r_lo.abs() { (hi, r_hi) } else { (lo, r_lo) };
        if r.abs() > DEPLETION_RESIDUAL * n {
            return Err(Error::Convergence {
                residual: r,
                iterations,
                lower: lo,
                upper: hi,
            });
        }
        root
    };

    let un0 = u * n0;
    let omega = epsilon.iter().map(|&e| omega_from(e, un0)).collect();
    let healing_ok = validity_check(lattice, n0).valid;
    Ok(BogoliubovState {
        lattice: *lattice,
        n0,
        depletion_fraction: 1.0 - n0 / n,
        mu: chemical_potential(u, n0, lattice.tunneling),
        grid,
        epsilon,
        omega,
        healing_ok,
    })
}

/// Coefficient of the weak-coupling law `δn/n ≈ α 𝒰²`.
pub fn depletion_alpha(sites: usize, particles: f64) -> f64 {
    let l2 = (sites * sites) as f64;
    (l2 * l2 + 10.0 * l2 - 11.0) / (2880.0 * particles)
}

pub fn depletion_quadratic(lattice: &LatticeSpec) -> f64 {
    let u = lattice.interaction_param();
    depletion_alpha(lattice.sites, lattice.particles()) * u * u
}

pub fn chemical_potential(interaction: f64, n0: f64, tunneling: f64) -> f64 {
    interaction * n0 - 2.0 * tunneling
}

/// Healing-length window on `U n0 / J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub valid: bool,
    pub value: f64,
    /// Lower bound, clipped at zero for display.
    pub lower: f64,
    pub upper: f64,
}

pub fn validity_check(lattice: &LatticeSpec, n0: f64) -> ValidityReport {
    let j = lattice.tunneling;
    let width = 1.0 / (PI * PI * j);
    let lower = 2.0 * (1.0 - width);
    let upper = 2.0 * (1.0 + width);
    let value = lattice.interaction * n0 / j;
    ValidityReport {
        valid: lower < value && value < upper,
        value,
        lower: lower.max(0.0),
        upper,
    }
}

/// `(1/L²) Σ_{q≠0, ω_q<E0} sqrt(1-ω_q/E0) (ε_q/ω_q) |Σ(κ_q - q) W(κ_q)|²` at
/// the given `U n0`, without the condensate fraction. The one-quasiparticle
/// cross section per particle is this times `n0/n`.
pub fn one_quasiparticle_sum(sites: usize, tunneling: f64, un0: f64, depth: f64, probe: &ProbeSpec) -> Result<f64> {
    let grid = quasimomentum_grid(sites)?;
    let kel = kappa_elastic(probe);
    if kel == 0.0 {
        return Ok(0.0);
    }
    let e0 = probe.energy;
    let mut acc = 0.0;
    for q in grid.iter() {
        let eps = bloch_dispersion(q, tunneling);
        let omega = omega_from(eps, un0);
        if !(omega < e0) {
            continue;
        }
        let weight = (1.0 - omega / e0).sqrt();
        let kappa = kel * weight;
        let w = form_factor(kappa, depth);
        acc += weight * (eps / omega) * lattice_sum_sq(kappa - q, sites) * w * w;
    }
    Ok(acc / (sites * sites) as f64)
}

/// Inelastic Bogoliubov cross section per particle, in units of `N a_s²`.
pub fn bog_inelastic_cs(state: &BogoliubovState, probe: &ProbeSpec) -> f64 {
    let lat = &state.lattice;
    let kel = kappa_elastic(probe);
    if kel == 0.0 {
        // zero momentum transfer: the density operator is the conserved N
        return 0.0;
    }
    let e0 = probe.energy;
    let mut acc = 0.0;
    for ((q, &eps), &omega) in state.grid.iter().zip(&state.epsilon).zip(&state.omega) {
        if !(omega < e0) {
            continue;
        }
        let weight = (1.0 - omega / e0).sqrt();
        let kappa = kel * weight;
        let w = form_factor(kappa, lat.depth);
        acc += weight * (eps / omega) * lattice_sum_sq(kappa - q, lat.sites) * w * w;
    }
    let l = lat.sites as f64;
    state.condensate_fraction() * acc / (l * l)
}

/// One-quasiparticle term in `a_s²`, i.e. scaled by `N0` rather than `N`.
pub fn one_qp_contribution(state: &BogoliubovState, probe: &ProbeSpec) -> f64 {
    bog_inelastic_cs(state, probe) * state.lattice.particles()
}

/// Weight `f(q, q')` of a quasiparticle pair.
pub fn pair_factor(eps_q: f64, eps_p: f64, un0: f64, same_mode: bool) -> f64 {
    let omega_q = omega_from(eps_q, un0);
    let omega_p = omega_from(eps_p, un0);
    let num = eps_q * eps_p + un0 * (eps_q + eps_p) + 2.0 * un0 * un0 - omega_q * omega_p;
    let multiplicity = if same_mode { 2.0 } else { 1.0 };
    num / (multiplicity * omega_q * omega_p)
}

/// Two-quasiparticle term in `a_s²`. Diagnostic only: it is of order one in
/// the condensate occupation and is never added to reported cross sections.
pub fn two_qp_contribution(state: &BogoliubovState, probe: &ProbeSpec) -> f64 {
    let lat = &state.lattice;
    let kel = kappa_elastic(probe);
    if kel == 0.0 {
        return 0.0;
    }
    let e0 = probe.energy;
    let un0 = state.un0();
    let q: Vec<f64> = state.grid.values().to_vec();
    let mut acc = 0.0;
    for a in 0..q.len() {
        for b in 0..q.len() {
            let excitation = state.omega[a] + state.omega[b];
            if !(excitation < e0) {
                continue;
            }
            let f = pair_factor(state.epsilon[a], state.epsilon[b], un0, a == b);
            if f == 0.0 {
                continue;
            }
            let weight = (1.0 - excitation / e0).sqrt();
            let kappa = kel * weight;
            let w = form_factor(kappa, lat.depth);
            let total_q = fold(q[a] + q[b]);
            acc += weight * f * lattice_sum_sq(kappa - total_q, lat.sites) * w * w;
        }
    }
    let l = lat.sites as f64;
    acc / (2.0 * l * l)
}

#[cfg(test)]
mod tests {
    use super::*;

    const J: f64 = 0.0065;

    fn lattice(sites: usize, filling: f64, u_over_j: f64) -> LatticeSpec {
        LatticeSpec::new(sites, 15.0, J, u_over_j * J, filling).unwrap()
    }

    #[test]
    fn dispersion_examples() {
        for q in [0.3, 1.0, 2.5] {
            assert_eq!(bogoliubov_dispersion(q, J, 0.0).unwrap(), bloch_dispersion(q, J));
        }
        let w = bogoliubov_dispersion(PI, J, 2.0 * J).unwrap();
        assert!((w - 32f64.sqrt() * J).abs() < 1e-16);
        let a = bogoliubov_dispersion(0.7, J, 0.01).unwrap();
        let b = bogoliubov_dispersion(-0.7, J, 0.01).unwrap();
        assert!((a - b).abs() < 1e-18);
        assert!(bogoliubov_dispersion(0.0, J, 0.01).is_err());
        assert!(bogoliubov_dispersion(2.0 * PI, J, 0.01).is_err());
    }

    #[test]
    fn free_gas_is_not_depleted() {
        let s = solve_depletion(&lattice(10, 3.0, 0.0)).unwrap();
        assert_eq!(s.n0, 3.0);
        assert_eq!(s.depletion_fraction, 0.0);
        assert_eq!(s.omega, s.epsilon);
    }

    #[test]
    fn state_invariants() {
        let s = solve_depletion(&lattice(12, 2.0, 5.0)).unwrap();
        assert!(s.n0 > 0.0 && s.n0 <= 2.0);
        assert!(s.omega.iter().all(|&w| w > 0.0));
        let m = s.omega.len();
        for i in 0..m {
            assert!((s.omega[i] - s.omega[m - 1 - i]).abs() < 1e-15);
        }
        assert!((s.mu - (s.un0() - 2.0 * J)).abs() < 1e-18);
        assert!((s.amplitude(0).powi(2) - s.epsilon[0] / s.omega[0]).abs() < 1e-15);
    }

    #[test]
    fn depletion_matches_caption_value() {
        let s = solve_depletion(&lattice(100, 1.0, 0.02)).unwrap();
        assert!((s.depletion_fraction - 0.012).abs() < 0.0015);
    }

    #[test]
    fn alpha_example() {
        assert!((depletion_alpha(5, 20.0) - 0.015).abs() < 1e-15);
        assert_eq!(depletion_quadratic(&lattice(5, 4.0, 0.0)), 0.0);
    }

    #[test]
    fn alpha_matches_trigonometric_sum() {
        // δn/n ≈ 𝒰² J² /(4N) Σ 1/ε_q² at weak coupling
        for sites in 2..40 {
            let l = sites as f64;
            let brute: f64 = (1..sites)
                .map(|s| (PI * s as f64 / l).sin().powi(-4))
                .sum::<f64>()
                / (64.0 * 7.0);
            let alpha = depletion_alpha(sites, 7.0);
            assert!((alpha - brute).abs() <= 1e-12 * alpha, "L={sites}");
        }
    }

    #[test]
    fn chemical_potential_examples() {
        assert_eq!(chemical_potential(0.0, 3.0, J), -2.0 * J);
        assert!((chemical_potential(J, 1.0, J) + J).abs() < 1e-18);
        assert_eq!(chemical_potential(2.0 * J, 1.0, J), 0.0);
    }

    #[test]
    fn validity_window() {
        let lat = lattice(10, 1.0, 10.0);
        let r = validity_check(&lat, 1.0);
        assert_eq!(r.lower, 0.0);
        assert!((r.upper - 33.18).abs() < 0.01);
        assert!(r.valid);
        assert!(!validity_check(&lattice(10, 1.0, 40.0), 1.0).valid);
    }

    #[test]
    fn pair_factor_example() {
        let f = pair_factor(4.0 * J, 4.0 * J, 2.0 * J, true);
        assert!((f - 0.125).abs() < 1e-12);
        assert_eq!(pair_factor(1.3 * J, 2.1 * J, 0.0, false), 0.0);
    }

    #[test]
    fn two_qp_vanishes_without_interaction() {
        let s = solve_depletion(&lattice(8, 2.0, 0.0)).unwrap();
        let p = ProbeSpec::new(2.0, 1.0, 0.6).unwrap();
        assert_eq!(two_qp_contribution(&s, &p), 0.0);
    }

    #[test]
    fn forward_scattering_vanishes() {
        for u in [0.0, 1.0, 10.0] {
            let s = solve_depletion(&lattice(7, 2.0, u)).unwrap();
            let p = ProbeSpec::new(2.0, 1.0, 0.0).unwrap();
            assert!(bog_inelastic_cs(&s, &p) < 1e-28);
        }
    }

    #[test]
    fn closed_modes_are_dropped() {
        let s = solve_depletion(&lattice(6, 2.0, 1.0)).unwrap();
        let p = ProbeSpec::new(1e-3, 1.0, 0.8).unwrap();
        assert_eq!(bog_inelastic_cs(&s, &p), 0.0);
    }
}
