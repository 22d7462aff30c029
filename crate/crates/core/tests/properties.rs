use std::f64::consts::PI;

use lscat_core::bogoliubov::{bog_inelastic_cs, depleted_density, solve_depletion};
use lscat_core::fock::FockBasis;
use lscat_core::model::{bloch_dispersion, fold, lattice_sum_sq, quasimomentum_grid, LatticeSpec, ProbeSpec};
use num_complex::Complex64;
use proptest::prelude::*;

const J: f64 = 0.0065;

proptest! {
    #[test]
    fn lattice_sum_closed_form(k in -20.0f64..20.0, sites in 1usize..60) {
        let explicit: Complex64 = (1..=sites).map(|j| Complex64::from_polar(1.0, k * j as f64)).sum();
        let a = lattice_sum_sq(k, sites);
        let b = explicit.norm_sqr();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0) * sites as f64, "{} vs {}", a, b);
    }

    #[test]
    fn fold_lands_in_zone(k in -1e3f64..1e3) {
        let f = fold(k);
        prop_assert!((0.0..2.0 * PI).contains(&f));
        prop_assert!(((f - k) / (2.0 * PI)).fract().abs() < 1e-9 || ((f - k) / (2.0 * PI)).fract().abs() > 1.0 - 1e-9);
    }

    #[test]
    fn basis_rank_round_trips(particles in 1usize..7, sites in 2usize..7) {
        let basis = FockBasis::new(particles, sites).unwrap();
        for i in 0..basis.len() {
            prop_assert_eq!(basis.index_of(basis.state(i)), Some(i));
        }
    }

    #[test]
    fn depletion_is_self_consistent(
        sites in 2usize..400,
        filling in 0.2f64..20.0,
        u in 1e-3f64..50.0,
    ) {
        let lat = LatticeSpec::new(sites, 15.0, J, 0.0, filling).unwrap().with_interaction_param(u);
        let state = solve_depletion(&lat).unwrap();
        let eps: Vec<f64> = quasimomentum_grid(sites).unwrap().iter().map(|q| bloch_dispersion(q, J)).collect();
        let residual = state.n0 + depleted_density(&eps, lat.interaction, state.n0) - filling;
        prop_assert!(residual.abs() <= 1e-12 * filling, "residual {}", residual);
        prop_assert!(state.n0 > 0.0 && state.n0 <= filling);
    }

    #[test]
    fn depletion_grows_with_interaction(sites in 2usize..200, filling in 0.5f64..10.0) {
        let base = LatticeSpec::new(sites, 15.0, J, 0.0, filling).unwrap();
        let mut last = 0.0;
        for u in [1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0, 1e3] {
            let f = solve_depletion(&base.with_interaction_param(u)).unwrap().depletion_fraction;
            prop_assert!(f >= last, "𝒰={}: {} < {}", u, f, last);
            prop_assert!(f < 1.0);
            last = f;
        }
    }

    #[test]
    fn interaction_never_raises_bogoliubov_cs(theta in 0.0f64..PI / 2.0, sites in 3usize..30) {
        let probe = ProbeSpec::new(2.0, 1.0, theta).unwrap();
        let base = LatticeSpec::new(sites, 15.0, J, 0.0, 2.0).unwrap();
        let free = bog_inelastic_cs(&solve_depletion(&base).unwrap(), &probe);
        for i in 1..=50 {
            let u = 0.5 * i as f64;
            let v = bog_inelastic_cs(&solve_depletion(&base.with_interaction_param(u)).unwrap(), &probe);
            prop_assert!(v <= free * (1.0 + 1e-12), "𝒰={}: {} > {}", u, v, free);
        }
    }
}
