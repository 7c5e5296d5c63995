use super::hamiltonian::HamiltonianSpec;
use super::krylov::Propagator;
use super::state::SpinState;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Hamiltonians applied one after another, repeated `n_periods` times.
#[derive(Debug, Clone, PartialEq)]
pub struct FloquetSequence<T: Real> {
    pub steps: Vec<(HamiltonianSpec<T>, T)>,
    pub n_periods: usize,
}

impl<T: Real> FloquetSequence<T> {
    pub fn period(&self) -> T {
        self.steps.iter().fold(T::zero(), |s, (_, d)| s + *d)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.steps.is_empty() {
            return Err(Error::Validation("Floquet sequence has no steps".into()));
        }
        for (spec, d) in &self.steps {
            if !(*d > T::zero()) {
                return Err(Error::Validation("Floquet step durations must be positive".into()));
            }
            if spec.n != n {
                return Err(Error::Dimension { expected: n, got: spec.n });
            }
        }
        Ok(())
    }
}

/// State after every full period. Each step's schedule clock starts at 0.
pub fn floquet_run<T: Real>(state: &SpinState<T>, seq: &FloquetSequence<T>, tol: T) -> Result<Vec<SpinState<T>>> {
    let n = state.n_sites();
    seq.validate(n)?;
    let props = seq
        .steps
        .iter()
        .map(|(spec, _)| Propagator::new(spec, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut psi = state.amplitudes().to_vec();
    let mut out = Vec::with_capacity(seq.n_periods);
    for _ in 0..seq.n_periods {
        for (prop, (_, d)) in props.iter().zip(&seq.steps) {
            prop.run(&mut psi, T::zero(), *d)?;
        }
        out.push(SpinState::from_amplitudes(n, psi.clone())?);
    }
    Ok(out)
}
