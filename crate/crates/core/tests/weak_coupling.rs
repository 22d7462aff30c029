use std::f64::consts::PI;

use lscat_core::bogoliubov::{bog_inelastic_cs, depletion_quadratic, one_quasiparticle_sum, solve_depletion};
use lscat_core::fock::{exact_cross_section, ExcitationData};
use lscat_core::limits::{angle_grid, deviation_from_samples, linear_decay, slope_lambda};
use lscat_core::model::{LatticeSpec, ProbeSpec};

const J: f64 = 0.0065;
const V0: f64 = 15.0;

fn probe(theta: f64) -> ProbeSpec {
    ProbeSpec::new(2.0, 1.0, theta).unwrap()
}

#[test]
fn lambda_matches_finite_difference() {
    for (sites, theta) in [(5, PI / 4.0), (5, 0.3), (9, 1.1), (12, 0.8)] {
        let p = probe(theta);
        let f = |u: f64| one_quasiparticle_sum(sites, J, u * J, V0, &p).unwrap();
        let h = 1e-4;
        let fd = -(f(h) - f(-h)) / (2.0 * h);
        let an = slope_lambda(sites, &p, V0, J).unwrap().lambda;
        assert!((fd - an).abs() <= 1e-6 * an.abs().max(1e-3), "L={sites} θ={theta}: {fd} vs {an}");
    }
}

#[test]
fn linear_law_at_weak_coupling() {
    let p = probe(PI / 4.0);
    let slope = slope_lambda(5, &p, V0, J).unwrap();
    let base = LatticeSpec::new(5, V0, J, 0.0, 2.0).unwrap();
    for i in 0..=10 {
        let u = 0.005 * i as f64;
        let bog = bog_inelastic_cs(&solve_depletion(&base.with_interaction_param(u)).unwrap(), &p);
        assert!((bog - linear_decay(&slope, u)).abs() <= 1e-3 * slope.gamma_sf, "𝒰={u}");
    }
}

#[test]
fn quadratic_depletion_law_at_small_coupling() {
    for (sites, filling) in [(5, 4.0), (9, 1.0)] {
        let base = LatticeSpec::new(sites, V0, J, 0.0, filling).unwrap();
        for u in [1e-4, 1e-3, 3e-3] {
            let lat = base.with_interaction_param(u);
            let solved = solve_depletion(&lat).unwrap().depletion_fraction;
            let law = depletion_quadratic(&lat);
            assert!(((solved - law) / law).abs() < 0.05, "L={sites} 𝒰={u}: {solved} vs {law}");
        }
    }
}

fn deviation(filling: f64, u_over_j: f64, grid: &[f64]) -> f64 {
    let lat = LatticeSpec::new(5, V0, J, u_over_j * J, filling).unwrap();
    let data = ExcitationData::solve(&lat, 10_000).unwrap();
    let state = solve_depletion(&lat).unwrap();
    let n = lat.particle_count() as f64;
    let exact: Vec<f64> = grid
        .iter()
        .map(|&t| exact_cross_section(&data, &lat, &probe(t)).unwrap().inelastic / n)
        .collect();
    let bog: Vec<f64> = grid.iter().map(|&t| bog_inelastic_cs(&state, &probe(t))).collect();
    deviation_from_samples(&exact, &bog).unwrap().delta
}

#[test]
fn deviation_has_interior_minimum_at_n2() {
    let grid = angle_grid(91);
    let d: Vec<f64> = [1.0, 3.0, 10.0].iter().map(|&u| deviation(2.0, u, &grid)).collect();
    assert!(d[1] < d[0] && d[1] < d[2], "{d:?}");
}

#[test]
fn deviation_falls_with_density_at_weak_coupling() {
    let grid = angle_grid(91);
    let low = deviation(1.0, 0.3, &grid);
    let high = deviation(2.0, 0.3, &grid);
    assert!(high < low, "{high} vs {low}");
}
