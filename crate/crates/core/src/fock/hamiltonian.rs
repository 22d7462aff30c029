use nalgebra::DMatrix;

use super::basis::FockBasis;

/// Dense Bose-Hubbard Hamiltonian at fixed particle number with periodic
/// boundaries. The `-μN` term is a constant shift at fixed N and is dropped.
///
/// Every bond `j -> j+1 (mod L)` contributes `-J (c†_j c_{j+1} + h.c.)`. For
/// `L = 2` both bonds connect the same pair of sites, giving an effective
/// hopping of `2J`.
pub fn build_hamiltonian(basis: &FockBasis, tunneling: f64, interaction: f64) -> DMatrix<f64> {
    let dim = basis.len();
    let sites = basis.sites();
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    let mut scratch = vec![0u8; sites];

    for (col, state) in basis.iter().enumerate() {
        let onsite: u64 = state.iter().map(|&n| n as u64 * (n as u64).saturating_sub(1)).sum();
        h[(col, col)] = 0.5 * interaction * onsite as f64;

        for j in 0..sites {
            let k = (j + 1) % sites;
            for (to, from) in [(j, k), (k, j)] {
                if state[from] == 0 {
                    continue;
                }
                // the integer product keeps H[a,b] and H[b,a] bit-identical
                let weight = ((state[to] as u64 + 1) * state[from] as u64) as f64;
                scratch.copy_from_slice(state);
                scratch[to] += 1;
                scratch[from] -= 1;
                let row = basis
                    .index_of(&scratch)
                    .expect("hop preserves particle number");
                h[(row, col)] -= tunneling * weight.sqrt();
            }
        }
    }
    h
}
