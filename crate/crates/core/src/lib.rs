//! Elastic and inelastic matter-wave scattering from interacting bosons in a
//! one-dimensional optical lattice.
//!
//! Two routes to the inelastic cross section are provided: exact
//! diagonalization of the Bose-Hubbard Hamiltonian at fixed particle number
//! ([`fock`]) and the analytic weak-interaction Bogoliubov formula
//! ([`bogoliubov`]). [`limits`] collects the superfluid and Mott-insulator
//! closed forms, the large-lattice expressions and the weak-coupling slope.
//!
//! All quantities use the lattice constant and the recoil energy as units.

#![allow(non_snake_case)]
// `!(a < b)` is used on purpose so that NaN counts as a closed channel
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bogoliubov;
pub mod error;
pub mod fock;
pub mod limits;
pub mod model;

pub use bogoliubov::{bog_inelastic_cs, solve_depletion, BogoliubovState};
pub use error::{Error, Result};
pub use fock::{exact_cross_section, ExactCrossSection, ExcitationData, FockBasis};
pub use model::{LatticeSpec, MomentumGrid, ProbeSpec};

/// Tunneling strength of a `V0 = 15 E_r` lattice.
pub const DEFAULT_TUNNELING: f64 = 0.0065;
pub const DEFAULT_DEPTH: f64 = 15.0;
pub const DEFAULT_PROBE_ENERGY: f64 = 2.0;
pub const DEFAULT_MASS_RATIO: f64 = 1.0;
