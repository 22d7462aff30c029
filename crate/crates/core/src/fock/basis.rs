//! Fixed-N occupation-number basis with combinatorial ranking.

use crate::error::{Error, Result};

/// Default cap on the number of basis states admitted by the exact path.
pub const DEFAULT_DIMENSION_CAP: usize = 30_000;

/// Binomial coefficient in 128-bit arithmetic; `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Number of ways to place `particles` bosons on `sites` sites.
pub fn fock_dimension(particles: usize, sites: usize) -> Option<u128> {
    if sites == 0 {
        return Some(u128::from(particles == 0));
    }
    binomial((particles + sites - 1) as u64, particles as u64)
}

/// All occupation vectors `(n_1..n_L)` with `Σ n_j = N`, in ascending
/// lexicographic order. States are stored contiguously, `L` entries each.
#[derive(Debug, Clone)]
pub struct FockBasis {
    particles: usize,
    sites: usize,
    occupations: Vec<u8>,
    // compositions[m][p] = number of ways to distribute m bosons over p sites
    compositions: Vec<Vec<usize>>,
}

impl FockBasis {
    pub fn new(particles: usize, sites: usize) -> Result<Self> {
        Self::with_cap(particles, sites, DEFAULT_DIMENSION_CAP)
    }

    pub fn with_cap(particles: usize, sites: usize, cap: usize) -> Result<Self> {
        if sites < 2 {
            return Err(Error::InvalidLattice(format!("L = {sites} (need L >= 2)")));
        }
        if particles < 1 {
            return Err(Error::InvalidLattice("N = 0 (need N >= 1)".into()));
        }
        if particles > u8::MAX as usize {
            return Err(Error::InvalidLattice(format!("N = {particles} exceeds 255")));
        }
        let dimension = fock_dimension(particles, sites).unwrap_or(u128::MAX);
        if dimension > cap as u128 {
            return Err(Error::Capacity { dimension, cap });
        }
        let dimension = dimension as usize;

        let compositions: Vec<Vec<usize>> = (0..=particles)
            .map(|m| {
                (0..=sites)
                    .map(|p| fock_dimension(m, p).map_or(0, |d| d as usize))
                    .collect()
            })
            .collect();

        let mut occupations = Vec::with_capacity(dimension * sites);
        let mut state = vec![0u8; sites];
        state[sites - 1] = particles as u8;
        loop {
            occupations.extend_from_slice(&state);
            if !next_composition(&mut state) {
                break;
            }
        }
        debug_assert_eq!(occupations.len(), dimension * sites);

        Ok(Self {
            particles,
            sites,
            occupations,
            compositions,
        })
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn len(&self) -> usize {
        self.occupations.len() / self.sites
    }

    pub fn is_empty(&self) -> bool {
        self.occupations.is_empty()
    }

    pub fn state(&self, index: usize) -> &[u8] {
        &self.occupations[index * self.sites..(index + 1) * self.sites]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        self.occupations.chunks_exact(self.sites)
    }

    /// Position of an occupation vector in the basis, computed in `O(L)`.
    pub fn index_of(&self, state: &[u8]) -> Option<usize> {
        if state.len() != self.sites {
            return None;
        }
        let total: usize = state.iter().map(|&n| n as usize).sum();
        if total != self.particles {
            return None;
        }
        let mut rank = 0;
        let mut remaining = self.particles;
        for (k, &n) in state[..self.sites - 1].iter().enumerate() {
            let rest = self.sites - k - 1;
            for v in 0..n as usize {
                rank += self.compositions[remaining - v][rest];
            }
            remaining -= n as usize;
        }
        Some(rank)
    }
}

/// Advances to the next composition in ascending lexicographic order.
fn next_composition(state: &mut [u8]) -> bool {
    let last = state.len() - 1;
    // rightmost position left of the tail that can still be incremented
    let Some(k) = (0..last).rev().find(|&k| state[k + 1..].iter().any(|&n| n > 0)) else {
        return false;
    };
    let tail: u8 = state[k + 1..].iter().sum();
    state[k] += 1;
    for n in &mut state[k + 1..] {
        *n = 0;
    }
    state[last] = tail - 1;
    true
}
