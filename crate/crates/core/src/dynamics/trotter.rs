use super::hamiltonian::HamiltonianSpec;
use super::krylov::propagate_frozen;
use super::state::SpinState;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// First-order product formula `(Π_k e^{−iH_k t/n})^n`, factors applied in
/// list order. Scheduled terms are frozen at the midpoint of each slice.
pub fn trotter_evolve<T: Real>(
    state: &SpinState<T>,
    specs: &[HamiltonianSpec<T>],
    t: T,
    n_steps: usize,
    tol: T,
) -> Result<SpinState<T>> {
    if n_steps == 0 {
        return Err(Error::Validation("n_steps must be at least 1".into()));
    }
    let n = state.n_sites();
    let compiled = specs
        .iter()
        .map(|s| {
            if s.n != n {
                return Err(Error::Dimension { expected: n, got: s.n });
            }
            s.compile()
        })
        .collect::<Result<Vec<_>>>()?;
    let dt = t / T::from_usize_lossy(n_steps);
    let slice_tol = tol / T::from_usize_lossy(n_steps * specs.len().max(1));
    let frozen: Vec<_> = compiled
        .iter()
        .map(|c| if c.is_time_dependent() { None } else { Some(c.at(T::zero())) })
        .collect();
    let mut psi = state.amplitudes().to_vec();
    for step in 0..n_steps {
        let mid = dt * (T::from_usize_lossy(step) + T::lit(0.5));
        for (c, f) in compiled.iter().zip(&frozen) {
            psi = match f {
                Some(op) => propagate_frozen(op, &psi, dt, slice_tol)?,
                None => propagate_frozen(&c.at(mid), &psi, dt, slice_tol)?,
            };
        }
    }
    SpinState::from_amplitudes(n, psi)
}
