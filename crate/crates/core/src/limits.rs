//! Closed-form limits: superfluid and Mott-insulator cross sections, the
//! large-lattice forms, the weak-interaction slope and the angle-averaged
//! deviation between two cross-section models.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::bogoliubov::{bog_inelastic_cs, solve_depletion, BogoliubovState};
use crate::error::{Error, Result};
use crate::model::{
    bloch_dispersion, fold, form_factor, kappa_elastic, lattice_sum_sq, quasimomentum_grid, wannier_overlap_abs,
    LatticeSpec, ProbeSpec, SINGULAR_THRESHOLD,
};

/// Above `HIGH_ENERGY_FACTOR · J sqrt(1 + 𝒰/2)` the large-L forms use their
/// high-energy shortcut.
pub const HIGH_ENERGY_FACTOR: f64 = 100.0;
/// Largest site separation kept in the Mott off-diagonal sum.
pub const MI_MAX_SEPARATION: u32 = 3;
pub const ROOT_TOLERANCE: f64 = 1e-12;
const MAX_FIXED_POINT: usize = 500;
/// Relative floor below which an exact value is excluded from `Δ_CS`.
pub const DEVIATION_FLOOR: f64 = 1e-12;
pub const DEFAULT_ANGLE_POINTS: usize = 181;

fn is_reciprocal(kappa: f64) -> bool {
    (kappa / 2.0).sin().abs() < SINGULAR_THRESHOLD
}

/// Superfluid (`U = 0`) inelastic cross section per particle.
pub fn sf_inelastic(sites: usize, probe: &ProbeSpec, depth: f64, tunneling: f64) -> Result<f64> {
    let grid = quasimomentum_grid(sites)?;
    let kel = kappa_elastic(probe);
    if kel == 0.0 {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    for q in grid.iter() {
        let eps = bloch_dispersion(q, tunneling);
        if !(eps < probe.energy) {
            continue;
        }
        let c = (1.0 - eps / probe.energy).sqrt();
        let kappa = kel * c;
        let w = form_factor(kappa, depth);
        acc += c * lattice_sum_sq(kappa - q, sites) * w * w;
    }
    let l = sites as f64;
    Ok(acc / (l * l))
}

/// `sf_inelastic` with every channel taken at `κ = κ_el` and unit kinematic
/// weight, the `E0 ≫ J` form of the finite-lattice sum.
pub fn sf_inelastic_high_energy(sites: usize, kel: f64, depth: f64) -> Result<f64> {
    let grid = quasimomentum_grid(sites)?;
    if kel == 0.0 {
        return Ok(0.0);
    }
    let w = form_factor(kel, depth);
    let acc: f64 = grid.iter().map(|q| lattice_sum_sq(kel - q, sites)).sum();
    let l = sites as f64;
    Ok(acc * w * w / (l * l))
}

/// Elastic cross section in `a_s²`, the same in both limits once off-diagonal
/// Wannier terms are dropped.
pub fn elastic_cs(sites: usize, particles: f64, probe: &ProbeSpec, depth: f64) -> f64 {
    let kel = kappa_elastic(probe);
    let w = form_factor(kel, depth);
    let l = sites as f64;
    particles * particles * lattice_sum_sq(kel, sites) * w * w / (l * l)
}

/// Mott-insulator inelastic cross section in `a_s²`, carried entirely by
/// off-diagonal Wannier overlaps and truncated at `|j - l| <= 3`.
pub fn mi_inelastic(sites: usize, filling: f64, probe: &ProbeSpec, depth: f64, interaction: f64) -> f64 {
    mi_inelastic_truncated(sites, filling, probe, depth, interaction, MI_MAX_SEPARATION)
}

pub fn mi_inelastic_truncated(
    sites: usize,
    filling: f64,
    probe: &ProbeSpec,
    depth: f64,
    interaction: f64,
    max_separation: u32,
) -> f64 {
    if !(interaction < probe.energy) {
        return 0.0;
    }
    let c = (1.0 - interaction / probe.energy).sqrt();
    let kappa = kappa_elastic(probe) * c;
    let reach = (max_separation as usize).min(sites - 1);
    // ordered pairs (j, l) on the chain with |j - l| = s
    let overlaps: f64 = (1..=reach)
        .map(|s| 2.0 * (sites - s) as f64 * wannier_overlap_abs(kappa, depth, s as u32).powi(2))
        .sum();
    filling * (filling + 1.0) * c * overlaps
}

/// Solves `p = κ_el sqrt(1 - E(p)/E0)` for the unfolded transferred momentum
/// `p`, given the excitation energy `E(p)`.
fn transferred_momentum_root<F>(kel: f64, e0: f64, energy: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let map = |p: f64| {
        let r = 1.0 - energy(p) / e0;
        if r > 0.0 {
            Some(kel * r.sqrt())
        } else {
            None
        }
    };

    let mut p = kel;
    let mut converged = false;
    for _ in 0..MAX_FIXED_POINT {
        let Some(next) = map(p) else { break };
        let updated = 0.5 * (p + next);
        if (updated - p).abs() <= ROOT_TOLERANCE * (1.0 + p.abs()) && (next - p).abs() <= ROOT_TOLERANCE * (1.0 + p.abs()) {
            p = next;
            converged = true;
            break;
        }
        p = updated;
    }
    if converged {
        return Ok(p);
    }

    // bisection fallback on r(p) = p - κ_el sqrt(1 - E(p)/E0) between 0 and κ_el
    let residual = |p: f64| map(p).map(|m| p - m);
    let (mut lo, mut hi) = if kel < 0.0 { (kel, 0.0) } else { (0.0, kel) };
    let (Some(mut r_lo), Some(_)) = (residual(lo), residual(hi)) else {
        return Err(Error::RootFinding {
            lower: lo,
            upper: hi,
            reason: "channel closed inside the bracket".into(),
        });
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let Some(r) = residual(mid) else {
            return Err(Error::RootFinding {
                lower: lo,
                upper: hi,
                reason: "channel closed inside the bracket".into(),
            });
        };
        if (r < 0.0) == (r_lo < 0.0) {
            lo = mid;
            r_lo = r;
        } else {
            hi = mid;
        }
        if hi - lo <= ROOT_TOLERANCE * (1.0 + kel.abs()) {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::RootFinding {
        lower: lo,
        upper: hi,
        reason: "no sign change resolved".into(),
    })
}

fn high_energy(e0: f64, tunneling: f64, interaction_param: f64) -> bool {
    e0 > HIGH_ENERGY_FACTOR * tunneling * (1.0 + interaction_param / 2.0).sqrt()
}

/// Large-L superfluid inelastic cross section per particle.
pub fn largeL_sf_inelastic(probe: &ProbeSpec, depth: f64, tunneling: f64) -> Result<f64> {
    let kel = kappa_elastic(probe);
    if high_energy(probe.energy, tunneling, 0.0) {
        return Ok(largeL_sf_high_energy(kel, depth));
    }
    largeL_sf_general(probe, depth, tunneling)
}

/// `|W(κ_el)|² (1 - δ_{κ_el, Q})`.
pub fn largeL_sf_high_energy(kel: f64, depth: f64) -> f64 {
    if is_reciprocal(kel) {
        return 0.0;
    }
    form_factor(kel, depth).powi(2)
}

/// Large-L superfluid form with the kinematic Jacobian, valid at any `E0`.
pub fn largeL_sf_general(probe: &ProbeSpec, depth: f64, tunneling: f64) -> Result<f64> {
    let kel = kappa_elastic(probe);
    let e0 = probe.energy;
    let p = transferred_momentum_root(kel, e0, |p| bloch_dispersion(p, tunneling))?;
    if is_reciprocal(p) {
        return Ok(0.0);
    }
    let c = (1.0 - bloch_dispersion(p, tunneling) / e0).sqrt();
    let jacobian = (1.0 + kel * tunneling * p.sin() / (e0 * c)).abs();
    Ok(c * form_factor(p, depth).powi(2) / jacobian)
}

/// Large-L Bogoliubov inelastic cross section per particle.
pub fn largeL_bog_cs(state: &BogoliubovState, probe: &ProbeSpec) -> Result<f64> {
    let lat = &state.lattice;
    if high_energy(probe.energy, lat.tunneling, lat.interaction_param()) {
        return Ok(largeL_bog_high_energy(state, kappa_elastic(probe)));
    }
    largeL_bog_general(state, probe)
}

/// `(n0/n)(ε/ω)|W(κ_el)|²` with `ε`, `ω` at the folded `κ_el`.
pub fn largeL_bog_high_energy(state: &BogoliubovState, kel: f64) -> f64 {
    if is_reciprocal(kel) {
        return 0.0;
    }
    let lat = &state.lattice;
    let eps = bloch_dispersion(fold(kel), lat.tunneling);
    let ratio = 1.0 / (1.0 + 2.0 * state.un0() / eps).sqrt();
    state.condensate_fraction() * ratio * form_factor(kel, lat.depth).powi(2)
}

pub fn largeL_bog_general(state: &BogoliubovState, probe: &ProbeSpec) -> Result<f64> {
    let lat = &state.lattice;
    let kel = kappa_elastic(probe);
    let e0 = probe.energy;
    let un0 = state.un0();
    let omega = |p: f64| {
        let e = bloch_dispersion(p, lat.tunneling);
        (e * (e + 2.0 * un0)).sqrt()
    };
    let p = transferred_momentum_root(kel, e0, omega)?;
    if is_reciprocal(p) {
        return Ok(0.0);
    }
    let eps = bloch_dispersion(p, lat.tunneling);
    let w = omega(p);
    let c = (1.0 - w / e0).sqrt();
    let jacobian = (1.0 + kel * lat.tunneling * p.sin() * (eps + un0) / (e0 * w * c)).abs();
    Ok(state.condensate_fraction() * c * (eps / w) * form_factor(p, lat.depth).powi(2) / jacobian)
}

/// Weak-interaction decay of the Bogoliubov cross section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeResult {
    /// `Λ(L, E0, θ)`: the cross section falls as `Γ_sf - Λ 𝒰`.
    pub lambda: f64,
    /// Superfluid intercept `Γ_sf(L, E0, θ)`.
    pub gamma_sf: f64,
    /// Large-L slope `|W(κ_el)|² / (4 sin²(κ_el/2))`; infinite at reciprocal vectors.
    pub large_l_slope: f64,
}

/// `d/dk |Σ(k)|²` over `sites` sites.
fn lattice_sum_sq_derivative(k: f64, sites: usize) -> f64 {
    let l = sites as f64;
    let s = (k / 2.0).sin();
    if s.abs() < SINGULAR_THRESHOLD {
        return 0.0;
    }
    let num = (k * l / 2.0).sin();
    let s2 = s * s;
    (0.5 * l * (k * l).sin() * s2 - num * num * 0.5 * k.sin()) / (s2 * s2)
}

pub fn slope_lambda(sites: usize, probe: &ProbeSpec, depth: f64, tunneling: f64) -> Result<SlopeResult> {
    let grid = quasimomentum_grid(sites)?;
    let kel = kappa_elastic(probe);
    let e0 = probe.energy;
    let width = PI * PI * depth.sqrt();
    let mut acc = 0.0;
    for q in grid.iter().filter(|_| kel != 0.0) {
        let eps = bloch_dispersion(q, tunneling);
        if !(eps < e0) {
            continue;
        }
        let c = (1.0 - eps / e0).sqrt();
        let kappa = kel * c;
        let w2 = form_factor(kappa, depth).powi(2);
        let sum = lattice_sum_sq(kappa - q, sites);
        let g = sum * w2;
        let dg = lattice_sum_sq_derivative(kappa - q, sites) * w2 - sum * w2 * kappa / width;
        acc += (2.0 * e0 - eps) / (eps * c) * g + kel * dg;
    }
    let l = sites as f64;
    let lambda = tunneling / (2.0 * l * l * e0) * acc;
    let gamma_sf = sf_inelastic(sites, probe, depth, tunneling)?;
    let large_l_slope = large_l_slope(kel, depth);
    Ok(SlopeResult {
        lambda,
        gamma_sf,
        large_l_slope,
    })
}

pub fn large_l_slope(kel: f64, depth: f64) -> f64 {
    if is_reciprocal(kel) {
        return f64::INFINITY;
    }
    let s = (kel / 2.0).sin();
    form_factor(kel, depth).powi(2) / (4.0 * s * s)
}

/// `Γ_sf - Λ 𝒰`.
pub fn linear_decay(slope: &SlopeResult, interaction_param: f64) -> f64 {
    slope.gamma_sf - slope.lambda * interaction_param
}

/// `|W(κ_el)|² (1 - 𝒰 / (4 sin²(κ_el/2)))`, zero at reciprocal vectors.
pub fn large_l_linear_decay(kel: f64, depth: f64, interaction_param: f64) -> f64 {
    if is_reciprocal(kel) {
        return 0.0;
    }
    form_factor(kel, depth).powi(2) - large_l_slope(kel, depth) * interaction_param
}

/// Angles at which the high-energy large-L forms coincide with the finite
/// lattice, `θ_s = arcsin(2 sqrt(M/(m E0)) (j + s/L))`, `s = 1..L-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactAngles {
    /// `(s, θ_s)` for every `s` whose arcsine argument lies in `[-1, 1]`.
    pub angles: Vec<(usize, f64)>,
    /// `[θ_1, θ_{L-1}]` when both ends exist.
    pub interval: Option<(f64, f64)>,
}

pub fn exact_angles(sites: usize, e0: f64, mass_ratio: f64, order: i64) -> ExactAngles {
    let scale = 2.0 / (e0 * mass_ratio).sqrt();
    let l = sites as f64;
    let angle = |s: usize| {
        let arg = scale * (order as f64 + s as f64 / l);
        (arg.abs() <= 1.0).then(|| arg.asin())
    };
    let angles: Vec<(usize, f64)> = (1..sites).filter_map(|s| angle(s).map(|t| (s, t))).collect();
    let interval = match (angle(1), angle(sites - 1)) {
        (Some(a), Some(b)) => Some((a, b)),
        _ => None,
    };
    ExactAngles { angles, interval }
}

/// Uniform grid of `points` angles on `[0, π/2]`, endpoints included.
pub fn angle_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points)
            .map(|i| {
                if i == points - 1 {
                    PI / 2.0
                } else {
                    PI / 2.0 * i as f64 / (points - 1) as f64
                }
            })
            .collect(),
    }
}

/// Angle-averaged relative deviation of `model` from `reference`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    pub delta: f64,
    pub used: usize,
    pub excluded: usize,
    pub floor: f64,
}

pub fn deviation_from_samples(reference: &[f64], model: &[f64]) -> Result<Deviation> {
    if reference.len() != model.len() {
        return Err(Error::Domain(format!(
            "sample counts differ: {} vs {}",
            reference.len(),
            model.len()
        )));
    }
    let max = reference.iter().fold(0.0f64, |m, &v| m.max(v));
    let floor = DEVIATION_FLOOR * max;
    let (sum, used) = reference
        .iter()
        .zip(model)
        .filter(|(&r, _)| r > floor)
        .fold((0.0, 0usize), |(s, n), (&r, &m)| (s + (m - r).abs() / r, n + 1));
    if used == 0 {
        return Err(Error::UndefinedDeviation);
    }
    Ok(Deviation {
        delta: sum / used as f64,
        used,
        excluded: reference.len() - used,
        floor,
    })
}

/// `Δ_CS` with both models evaluated on `grid`.
pub fn deviation_delta_cs<E, B>(exact: E, bog: B, grid: &[f64]) -> Result<Deviation>
where
    E: Fn(f64) -> f64,
    B: Fn(f64) -> f64,
{
    let reference: Vec<f64> = grid.iter().map(|&t| exact(t)).collect();
    let model: Vec<f64> = grid.iter().map(|&t| bog(t)).collect();
    deviation_from_samples(&reference, &model)
}

/// One point of a small-𝒰 decay scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecaySample {
    pub interaction_param: f64,
    pub depletion_fraction: f64,
    pub cross_section: f64,
}

pub fn decay_samples(lattice: &LatticeSpec, probe: &ProbeSpec, u_grid: &[f64]) -> Result<Vec<DecaySample>> {
    u_grid
        .iter()
        .map(|&u| {
            let state = solve_depletion(&lattice.with_interaction_param(u))?;
            Ok(DecaySample {
                interaction_param: u,
                depletion_fraction: state.depletion_fraction,
                cross_section: bog_inelastic_cs(&state, probe),
            })
        })
        .collect()
}

/// Small-𝒰 slope of the Bogoliubov cross section.
///
/// The cross section factorizes as `(1 - δn/n) F(𝒰 (1 - δn/n))` with `F`
/// independent of the density, so the fit is done on
/// `y = σ / (1 - δn/n)` against `x = 𝒰 (1 - δn/n)`. Returns the linear
/// coefficient of a least-squares polynomial of the given degree, which is
/// `-Λ` in the weak-coupling limit.
pub fn fit_decay_slope(samples: &[DecaySample], degree: usize) -> Result<f64> {
    if samples.len() <= degree {
        return Err(Error::Domain(format!(
            "{} samples cannot fix a degree-{degree} polynomial",
            samples.len()
        )));
    }
    if degree == 0 {
        return Err(Error::Domain("slope needs degree >= 1".into()));
    }
    let xs: Vec<f64> = samples
        .iter()
        .map(|s| s.interaction_param * (1.0 - s.depletion_fraction))
        .collect();
    let ys: Vec<f64> = samples
        .iter()
        .map(|s| s.cross_section / (1.0 - s.depletion_fraction))
        .collect();
    let scale = xs.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    if scale == 0.0 {
        return Err(Error::Domain("all interaction values are zero".into()));
    }
    let design = DMatrix::from_fn(xs.len(), degree + 1, |i, k| (xs[i] / scale).powi(k as i32));
    let rhs = DVector::from_vec(ys);
    let coeffs = design
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Domain(format!("least squares failed: {e}")))?;
    Ok(coeffs[1] / scale)
}

/// Evenly spaced values on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..points)
            .map(|i| {
                if i == points - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (points - 1) as f64
                }
            })
            .collect(),
    }
}
