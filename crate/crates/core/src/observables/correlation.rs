use nalgebra::DMatrix;

use crate::dynamics::{pauli, Axis, HamiltonianSpec, Propagator, SpinState};
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// `⟨σ_i σ_j⟩ − ⟨σ_i⟩⟨σ_j⟩` for all pairs along `axis`.
pub fn connected_correlation<T: Real>(state: &SpinState<T>, axis: Axis) -> DMatrix<T> {
    let n = state.n_sites();
    let p = state.probabilities_in(axis);
    let mut mean = vec![T::zero(); n];
    let mut pair = DMatrix::<T>::zeros(n, n);
    for (b, &pb) in p.iter().enumerate() {
        for i in 0..n {
            let si = if b >> i & 1 == 1 { pb } else { -pb };
            mean[i] += si;
            for j in i + 1..n {
                let sj = b >> j & 1 == 1;
                pair[(i, j)] += if sj { si } else { -si };
            }
        }
    }
    let mut out = DMatrix::<T>::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = T::one() - mean[i] * mean[i];
        for j in i + 1..n {
            let c = pair[(i, j)] - mean[i] * mean[j];
            out[(i, j)] = c;
            out[(j, i)] = c;
        }
    }
    out
}

/// Single-site operator: a 2×2 matrix on (|↓⟩, |↑⟩) acting on a 0-based
/// site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteOp<T: Real> {
    pub site: usize,
    pub matrix: [[C<T>; 2]; 2],
}

impl<T: Real> SiteOp<T> {
    pub fn pauli(site: usize, axis: Axis) -> Self {
        Self { site, matrix: pauli(axis) }
    }

    fn apply(&self, s: &mut SpinState<T>) {
        s.apply_site(self.site, self.matrix);
    }
}

/// `F(τ) = ⟨W†(τ) V† W(τ) V⟩` with `W(τ) = e^{iHτ} W e^{−iHτ}`, evaluated
/// by evolving forward, applying `W` and evolving back.
pub fn otoc<T: Real>(
    state: &SpinState<T>,
    w: &SiteOp<T>,
    v: &SiteOp<T>,
    spec: &HamiltonianSpec<T>,
    tau: T,
    tol: T,
) -> Result<C<T>> {
    let n = state.n_sites();
    if spec.n != n {
        return Err(Error::Dimension { expected: n, got: spec.n });
    }
    if w.site >= n || v.site >= n {
        return Err(Error::Validation("site operator outside the chain".into()));
    }
    let prop = Propagator::new(spec, tol)?;
    let heisenberg_w = |s: &SpinState<T>| -> Result<SpinState<T>> {
        let mut a = s.amplitudes().to_vec();
        prop.run(&mut a, T::zero(), tau)?;
        let mut out = SpinState::from_amplitudes(n, a)?;
        w.apply(&mut out);
        let mut a = out.into_amplitudes();
        prop.run(&mut a, tau, T::zero())?;
        SpinState::from_amplitudes(n, a)
    };
    // |a⟩ = W(τ)V|ψ⟩, |b⟩ = V W(τ)|ψ⟩, F = ⟨b|a⟩
    let mut va = state.clone();
    v.apply(&mut va);
    let a = heisenberg_w(&va)?;
    let mut b = heisenberg_w(state)?;
    v.apply(&mut b);
    Ok(b.inner(&a))
}
