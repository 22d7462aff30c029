use nalgebra::{DMatrix, SymmetricEigen};

use super::basis::FockBasis;
use crate::error::{Error, Result};

/// Relative gap below which the ground state counts as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;
/// Bound on `‖Hv - λv‖ / ‖H‖` for every returned eigenpair.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Full eigendecomposition of a real symmetric Hamiltonian, ascending.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    /// Column `e` is the normalized eigenvector for `eigenvalues[e]`.
    pub eigenvectors: DMatrix<f64>,
}

impl SpectrumResult {
    pub fn ground_index(&self) -> usize {
        0
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }
}

pub fn full_spectrum(h: &DMatrix<f64>) -> Result<SpectrumResult> {
    let dim = h.nrows();
    if dim == 0 || dim != h.ncols() {
        return Err(Error::Domain(format!("expected a square nonempty matrix, got {}x{}", h.nrows(), h.ncols())));
    }

    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = eig.eigenvectors.select_columns(order.iter());

    let norm = eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if norm > 0.0 {
        let bound = RESIDUAL_TOLERANCE * norm;
        let hv = h * &eigenvectors;
        for (e, &lambda) in eigenvalues.iter().enumerate() {
            let residual = (hv.column(e) - eigenvectors.column(e) * lambda).norm();
            if residual > bound {
                return Err(Error::EigenResidual {
                    index: e,
                    residual,
                    bound,
                });
            }
        }
    }

    if dim > 1 {
        let range = eigenvalues[dim - 1] - eigenvalues[0];
        let tolerance = DEGENERACY_TOLERANCE * range;
        let gap = eigenvalues[1] - eigenvalues[0];
        if gap < tolerance {
            return Err(Error::DegenerateGroundState { gap, tolerance });
        }
    }

    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors,
    })
}

/// `⟨e|n̂_j|g⟩` for every eigenstate `e` and site `j`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityTable {
    states: usize,
    sites: usize,
    data: Vec<f64>,
}

impl DensityTable {
    pub fn from_raw(states: usize, sites: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != states * sites {
            return Err(Error::Domain(format!(
                "density table needs {} entries, got {}",
                states * sites,
                data.len()
            )));
        }
        Ok(Self { states, sites, data })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn row(&self, e: usize) -> &[f64] {
        &self.data[e * self.sites..(e + 1) * self.sites]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

pub fn density_elements(spectrum: &SpectrumResult, basis: &FockBasis) -> DensityTable {
    let dim = basis.len();
    let sites = basis.sites();
    let ground = spectrum.eigenvectors.column(spectrum.ground_index());
    let weighted = DMatrix::from_fn(dim, sites, |b, j| basis.state(b)[j] as f64 * ground[b]);
    let table = spectrum.eigenvectors.tr_mul(&weighted);
    let mut data = Vec::with_capacity(dim * sites);
    for e in 0..dim {
        data.extend(table.row(e).iter());
    }
    DensityTable {
        states: dim,
        sites,
        data,
    }
}
