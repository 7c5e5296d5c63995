//! Spin Hamiltonians and exact pure-state dynamics.
//!
//! Basis convention: bit `k` of a basis index is site `k + 1` and a set bit
//! is |↑⟩ (σ_z = +1).

mod floquet;
mod hamiltonian;
mod krylov;
mod spectrum;
mod state;
mod trotter;

pub use floquet::{floquet_run, FloquetSequence};
pub use hamiltonian::{apply_hamiltonian, Compiled, CouplingTerm, FieldTerm, HamiltonianSpec, Operator, Schedule};
pub use krylov::{evolve, krylov_exp, propagate_frozen, Propagator, KRYLOV_DIM};
pub use spectrum::{
    eigenpairs, first_coupled_gap, ground_state, lanczos_lowest, lowest_eigenpairs, CoupledGap, DenseSpectrum,
    Eigenpair, DENSE_LIMIT,
};
pub use state::{bitstring, pauli, Axis, SpinState};
pub use trotter::trotter_evolve;

use rand::distributions::WeightedIndex;
use rand::prelude::Distribution as _;

use crate::error::{Error, Result};
use crate::observables::ShotTable;
use crate::rng::stream_rng;
use crate::scalar::Real;

/// Samples `shots` projective measurements of every spin along `axis`.
pub fn measure<T: Real>(state: &SpinState<T>, axis: Axis, shots: u64, seed: u64) -> Result<ShotTable> {
    if shots == 0 {
        return Err(Error::Validation("shots must be at least 1".into()));
    }
    let probs: Vec<f64> = state.probabilities_in(axis).iter().map(|p| p.as_f64().max(0.0)).collect();
    let dist = WeightedIndex::new(&probs).map_err(|e| Error::Validation(format!("cannot sample state: {e}")))?;
    let mut rng = stream_rng(seed, 0);
    let mut table = ShotTable::new(state.n_sites(), axis);
    for _ in 0..shots {
        table.record(dist.sample(&mut rng), 1);
    }
    Ok(table)
}
