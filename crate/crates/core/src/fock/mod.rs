//! Exact canonical diagonalization of the Bose-Hubbard model and the
//! many-body Born cross section built from its full spectrum.

pub mod basis;
pub mod cache;
pub mod cross_section;
pub mod hamiltonian;
pub mod spectrum;

pub use basis::{binomial, fock_dimension, FockBasis, DEFAULT_DIMENSION_CAP};
pub use cache::{read_spectrum, write_spectrum, CacheKey};
pub use cross_section::{exact_cross_section, ExactCrossSection, ExcitationData};
pub use hamiltonian::build_hamiltonian;
pub use spectrum::{density_elements, full_spectrum, DensityTable, SpectrumResult};
