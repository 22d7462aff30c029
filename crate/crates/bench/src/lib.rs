//! Shared fixtures for the criterion benches.

use lscat_core::model::{LatticeSpec, ProbeSpec};
use lscat_core::{DEFAULT_DEPTH, DEFAULT_TUNNELING};

pub fn lattice(sites: usize, filling: f64, interaction_param: f64) -> LatticeSpec {
    LatticeSpec::new(sites, DEFAULT_DEPTH, DEFAULT_TUNNELING, 0.0, filling)
        .expect("fixture lattice")
        .with_interaction_param(interaction_param)
}

pub fn probe(energy: f64, theta: f64) -> ProbeSpec {
    ProbeSpec::new(energy, 1.0, theta).expect("fixture probe")
}
