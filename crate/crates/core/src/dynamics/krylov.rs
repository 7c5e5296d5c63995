//! Krylov-subspace propagation `e^{−iHt}|ψ⟩`.

use nalgebra::DMatrix;
use num_traits::Zero;

use super::hamiltonian::{Compiled, HamiltonianSpec, Operator};
use super::state::SpinState;
use crate::error::{Error, Result};
use crate::scalar::{cabs, cplx, Real, C};

/// Krylov dimension per substep.
pub const KRYLOV_DIM: usize = 30;

fn norm<T: Real>(v: &[C<T>]) -> T {
    v.iter().fold(T::zero(), |s, a| s + a.norm_sqr()).sqrt()
}

fn dot<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).fold(C::zero(), |s, (x, y)| s + x.conj() * y)
}

/// One Krylov approximation of `e^{−iH dt}ψ`. Returns the new vector and an
/// a-posteriori estimate of its error norm.
pub fn krylov_exp<T: Real>(op: &Operator<T>, psi: &[C<T>], dt: T, m_max: usize) -> (Vec<C<T>>, T) {
    krylov_exp_within(op, psi, dt, m_max, T::zero())
}

// Coefficients of the Krylov approximation in its own basis and the error
// estimate of the truncation.
fn small_exp<T: Real>(alpha: &[T], beta: &[T], dt: T, beta0: T, breakdown: bool) -> (Vec<C<T>>, T) {
    let m = alpha.len();
    let mut t = DMatrix::<T>::zeros(m, m);
    for k in 0..m {
        t[(k, k)] = alpha[k];
        if k + 1 < m {
            t[(k, k + 1)] = beta[k];
            t[(k + 1, k)] = beta[k];
        }
    }
    let eig = t.symmetric_eigen();
    // y = Q e^{−iΛdt} Qᵀ e1
    let mut y = vec![C::zero(); m];
    for k in 0..m {
        let q0 = eig.eigenvectors[(0, k)];
        let ph = -eig.eigenvalues[k] * dt;
        let f = cplx(ph.cos(), ph.sin()).scale(q0);
        for (r, yr) in y.iter_mut().enumerate() {
            *yr += f.scale(eig.eigenvectors[(r, k)]);
        }
    }
    let err = if breakdown { T::zero() } else { beta0 * beta[m - 1] * cabs(y[m - 1]) };
    (y, err)
}

/// As [`krylov_exp`], but stops growing the subspace once the error
/// estimate falls below `target`.
pub fn krylov_exp_within<T: Real>(op: &Operator<T>, psi: &[C<T>], dt: T, m_max: usize, target: T) -> (Vec<C<T>>, T) {
    let (out, err, _) = krylov_step(op, psi, dt, m_max, target);
    (out, err)
}

// Also reports the subspace dimension used.
fn krylov_step<T: Real>(op: &Operator<T>, psi: &[C<T>], dt: T, m_max: usize, target: T) -> (Vec<C<T>>, T, usize) {
    let beta0 = norm(psi);
    if beta0 == T::zero() || dt == T::zero() {
        return (psi.to_vec(), T::zero(), 0);
    }
    let dim = psi.len();
    let m_max = m_max.min(dim).max(1);
    let mut basis: Vec<Vec<C<T>>> = Vec::with_capacity(m_max);
    basis.push(psi.iter().map(|a| a.unscale(beta0)).collect());
    let mut alpha: Vec<T> = Vec::with_capacity(m_max);
    let mut beta: Vec<T> = Vec::with_capacity(m_max);
    let mut w = vec![C::zero(); dim];
    let scale = op.norm_bound().max(T::TINY);
    let mut result = None;
    for j in 0..m_max {
        op.apply_into(&basis[j], &mut w);
        let a = dot(&basis[j], &w).re;
        alpha.push(a);
        // full reorthogonalisation (twice is enough)
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = norm(&w);
        beta.push(b);
        if b <= scale * T::EPS * T::lit(16.0) {
            result = Some(small_exp(&alpha, &beta, dt, beta0, true));
            break;
        }
        if target > T::zero() && j >= 3 && j % 2 == 1 {
            let (y, err) = small_exp(&alpha, &beta, dt, beta0, false);
            if err <= target {
                result = Some((y, err));
                break;
            }
        }
        if j + 1 < m_max {
            basis.push(w.iter().map(|a| a.unscale(b)).collect());
        }
    }
    let (y, err) = result.unwrap_or_else(|| small_exp(&alpha, &beta, dt, beta0, false));
    let mut out = vec![C::zero(); dim];
    for (v, &c) in basis.iter().zip(&y) {
        let c = c.scale(beta0);
        out.iter_mut().zip(v).for_each(|(o, x)| *o += c * x);
    }
    (out, err, y.len())
}

/// Propagates with a fixed operator over `dt`, subdividing until each
/// Krylov step's error estimate is within its share of `tol`.
pub fn propagate_frozen<T: Real>(op: &Operator<T>, psi: &[C<T>], dt: T, tol: T) -> Result<Vec<C<T>>> {
    let total = dt.abs();
    if total == T::zero() {
        return Ok(psi.to_vec());
    }
    let sign = if dt < T::zero() { -T::one() } else { T::one() };
    let bound = op.norm_bound().max(T::TINY);
    let mut h = total.min(T::lit(12.0) / bound);
    let min_step = total * T::lit(1e-13);
    let mut done = T::zero();
    let mut v = psi.to_vec();
    while done < total {
        let step = h.min(total - done);
        let budget = tol * step / total;
        let (next, err, used) = krylov_step(op, &v, sign * step, KRYLOV_DIM, budget);
        if err <= budget || step <= min_step {
            if err > budget && step <= min_step {
                return Err(Error::Integration { t: done.as_f64(), step: step.as_f64(), error: err.as_f64() });
            }
            v = next;
            done += step;
            if err < budget * T::lit(1e-3) || used <= KRYLOV_DIM / 2 {
                h = step * T::lit(2.0);
            } else {
                h = step;
            }
        } else {
            h = step * T::lit(0.5);
        }
    }
    Ok(v)
}

/// Reusable propagator for one Hamiltonian.
#[derive(Debug, Clone)]
pub struct Propagator<T: Real> {
    spec: HamiltonianSpec<T>,
    compiled: Compiled<T>,
    frozen: Option<Operator<T>>,
    tol: T,
}

impl<T: Real> Propagator<T> {
    pub fn new(spec: &HamiltonianSpec<T>, tol: T) -> Result<Self> {
        if !(tol > T::zero()) {
            return Err(Error::Validation("tolerance must be positive".into()));
        }
        let compiled = spec.compile()?;
        let frozen = if compiled.is_time_dependent() { None } else { Some(compiled.at(T::zero())) };
        Ok(Self { spec: spec.clone(), compiled, frozen, tol })
    }

    /// Evolves amplitudes in place from `t0` to `t1` (either direction).
    pub fn run(&self, psi: &mut Vec<C<T>>, t0: T, t1: T) -> Result<()> {
        if psi.len() != 1usize << self.spec.n {
            return Err(Error::Dimension { expected: 1 << self.spec.n, got: psi.len() });
        }
        if let Some(op) = &self.frozen {
            *psi = propagate_frozen(op, psi, t1 - t0, self.tol)?;
            return Ok(());
        }
        self.spec.check_window(t0, t1)?;
        self.run_midpoint(psi, t0, t1)
    }

    // Midpoint-frozen steps; each step is checked against two half steps.
    fn run_midpoint(&self, psi: &mut Vec<C<T>>, t0: T, t1: T) -> Result<()> {
        let total = (t1 - t0).abs();
        if total == T::zero() {
            return Ok(());
        }
        let sign = if t1 < t0 { -T::one() } else { T::one() };
        let inner_tol = self.tol * T::lit(1e-2);
        let half = T::lit(0.5);
        let quarter = T::lit(0.25);
        let bound = self.compiled.at(t0).norm_bound().max(T::TINY);
        let mut h = total.min(T::lit(2.0) / bound);
        let min_step = total * T::lit(1e-12);
        let mut done = T::zero();
        while done < total {
            let step = h.min(total - done);
            let t = t0 + sign * done;
            let full = propagate_frozen(&self.compiled.at(t + sign * step * half), psi, sign * step, inner_tol)?;
            let a = propagate_frozen(&self.compiled.at(t + sign * step * quarter), psi, sign * step * half, inner_tol)?;
            let b = propagate_frozen(
                &self.compiled.at(t + sign * step * T::lit(0.75)),
                &a,
                sign * step * half,
                inner_tol,
            )?;
            let diff = full.iter().zip(&b).fold(T::zero(), |s, (x, y)| s + (x - y).norm_sqr()).sqrt();
            let err = diff / T::lit(3.0);
            if err <= self.tol {
                *psi = b;
                done += step;
                let grow = if err == T::zero() {
                    T::lit(2.0)
                } else {
                    (T::lit(0.9) * (self.tol / err).powf(T::lit(1.0 / 3.0))).min(T::lit(2.0))
                };
                h = step * grow.max(T::one());
            } else {
                if step <= min_step {
                    return Err(Error::Integration { t: t.as_f64(), step: step.as_f64(), error: err.as_f64() });
                }
                let shrink = (T::lit(0.9) * (self.tol / err).powf(T::lit(1.0 / 3.0))).max(T::lit(0.2));
                h = step * shrink.min(T::lit(0.5));
            }
        }
        Ok(())
    }
}

/// `e^{−i∫H}` applied to `state` from `t0` to `t1` with local error ≤ `tol`.
pub fn evolve<T: Real>(
    state: &SpinState<T>,
    spec: &HamiltonianSpec<T>,
    t0: T,
    t1: T,
    tol: T,
) -> Result<SpinState<T>> {
    if state.n_sites() != spec.n {
        return Err(Error::Dimension { expected: spec.n, got: state.n_sites() });
    }
    let prop = Propagator::new(spec, tol)?;
    let mut psi = state.amplitudes().to_vec();
    prop.run(&mut psi, t0, t1)?;
    SpinState::from_amplitudes(spec.n, psi)
}
