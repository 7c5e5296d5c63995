//! Low-lying spectra: dense diagonalisation for small spaces, Lanczos with
//! full reorthogonalisation and locking otherwise.

use nalgebra::DMatrix;
use num_traits::Zero;
use rand::Rng;

use super::hamiltonian::{HamiltonianSpec, Operator};
use super::state::{Axis, SpinState};
use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::scalar::{cplx, Real, C};

/// Spaces up to this dimension are diagonalised densely.
pub const DENSE_LIMIT: usize = 512;

const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Eigenpair<T: Real> {
    pub value: T,
    pub vector: Vec<C<T>>,
}

/// Full eigendecomposition of a (small) Hamiltonian.
#[derive(Debug, Clone)]
pub struct DenseSpectrum<T: Real> {
    /// Ascending eigenvalues.
    pub values: Vec<T>,
    /// Columns are the matching eigenvectors.
    pub vectors: DMatrix<C<T>>,
}

impl<T: Real> DenseSpectrum<T> {
    pub fn new(op: &Operator<T>) -> Self {
        let eig = op.to_dense().symmetric_eigen();
        let dim = op.dim();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .partial_cmp(&eig.eigenvalues[b])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let mut vectors = DMatrix::from_element(dim, dim, C::zero());
        for (c, &k) in order.iter().enumerate() {
            vectors.set_column(c, &eig.eigenvectors.column(k));
        }
        Self { values, vectors }
    }

    pub fn vector(&self, k: usize) -> Vec<C<T>> {
        self.vectors.column(k).iter().copied().collect()
    }

    /// `e^{−iHt}ψ` by spectral decomposition.
    pub fn propagate(&self, psi: &[C<T>], t: T) -> Vec<C<T>> {
        let dim = self.values.len();
        let mut out = vec![C::zero(); dim];
        for k in 0..dim {
            let col = self.vectors.column(k);
            let c = col.iter().zip(psi).fold(C::<T>::zero(), |s, (v, p)| s + v.conj() * p);
            let ph = -self.values[k] * t;
            let c = c * cplx(ph.cos(), ph.sin());
            out.iter_mut().zip(col.iter()).for_each(|(o, v)| *o += c * v);
        }
        out
    }
}

fn norm<T: Real>(v: &[C<T>]) -> T {
    v.iter().fold(T::zero(), |s, a| s + a.norm_sqr()).sqrt()
}

fn dot<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).fold(C::zero(), |s, (x, y)| s + x.conj() * y)
}

fn project_out<T: Real>(w: &mut [C<T>], basis: &[Vec<C<T>>]) {
    for v in basis {
        let c = dot(v, w);
        w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
    }
}

fn residual<T: Real>(op: &Operator<T>, v: &[C<T>], value: T) -> T {
    let hv = op.apply(v);
    hv.iter()
        .zip(v)
        .fold(T::zero(), |s, (a, b)| s + (a - b.scale(value)).norm_sqr())
        .sqrt()
}

/// `k` lowest eigenpairs of a fixed operator, ascending.
pub fn lowest_eigenpairs<T: Real>(op: &Operator<T>, k: usize) -> Result<Vec<Eigenpair<T>>> {
    let dim = op.dim();
    if k == 0 || k > dim {
        return Err(Error::Validation(format!("k must be in 1..={dim}")));
    }
    if dim <= DENSE_LIMIT {
        let spec = DenseSpectrum::new(op);
        return Ok((0..k)
            .map(|c| Eigenpair { value: spec.values[c], vector: spec.vector(c) })
            .collect());
    }
    lanczos_lowest(op, k)
}

/// Lanczos with locking: converged Ritz pairs are deflated and fresh
/// starts are repeated until a run finds nothing below the current `k`-th
/// value, which recovers degenerate multiplets.
pub fn lanczos_lowest<T: Real>(op: &Operator<T>, k: usize) -> Result<Vec<Eigenpair<T>>> {
    let dim = op.dim();
    let tol = T::lit(RESIDUAL_TOL).max(T::EPS.sqrt() * op.norm_bound());
    let mut locked: Vec<Eigenpair<T>> = Vec::new();
    let mut carry: Option<Vec<C<T>>> = None;
    let mut quiet_runs = 0;
    for run in 0..400u64 {
        let room = dim - locked.len();
        if room == 0 {
            break;
        }
        let m = room.min((3 * k + 40).max(80));
        let mut rng = stream_rng(0x1a2b_3c4d, run);
        let mut start: Vec<C<T>> = (0..dim)
            .map(|_| cplx(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0))))
            .collect();
        if let Some(c) = carry.take() {
            let s = T::lit(1e-3);
            start.iter_mut().zip(&c).for_each(|(a, b)| *a = a.scale(s) + b);
        }
        let locked_vecs: Vec<Vec<C<T>>> = locked.iter().map(|p| p.vector.clone()).collect();
        project_out(&mut start, &locked_vecs);
        project_out(&mut start, &locked_vecs);
        let nrm = norm(&start);
        if nrm == T::zero() {
            break;
        }
        start.iter_mut().for_each(|a| *a = a.unscale(nrm));

        let mut basis = vec![start];
        let mut alpha = Vec::new();
        let mut beta: Vec<T> = Vec::new();
        let mut w = vec![C::zero(); dim];
        for j in 0..m {
            op.apply_into(&basis[j], &mut w);
            alpha.push(dot(&basis[j], &w).re);
            for _ in 0..2 {
                project_out(&mut w, &locked_vecs);
                project_out(&mut w, &basis);
            }
            let b = norm(&w);
            if j + 1 == m || b <= op.norm_bound() * T::EPS * T::lit(64.0) {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|a| a.unscale(b)).collect());
        }
        let size = alpha.len();
        let mut t = DMatrix::<T>::zeros(size, size);
        for i in 0..size {
            t[(i, i)] = alpha[i];
            if i + 1 < size {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = t.symmetric_eigen();
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap_or(std::cmp::Ordering::Equal));

        let kth = |locked: &Vec<Eigenpair<T>>| -> Option<T> {
            if locked.len() >= k {
                let mut v: Vec<T> = locked.iter().map(|p| p.value).collect();
                v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
                Some(v[k - 1])
            } else {
                None
            }
        };
        let threshold = kth(&locked);
        let mut new_locked = 0;
        let mut first_unconverged: Option<Vec<C<T>>> = None;
        for &idx in order.iter().take(k.min(size)) {
            let value = eig.eigenvalues[idx];
            if let Some(th) = threshold {
                if value >= th - tol {
                    break;
                }
            }
            let mut v = vec![C::zero(); dim];
            for (row, b) in basis.iter().enumerate() {
                let c = eig.eigenvectors[(row, idx)];
                v.iter_mut().zip(b).for_each(|(o, x)| *o += x.scale(c));
            }
            project_out(&mut v, &locked.iter().map(|p| p.vector.clone()).collect::<Vec<_>>());
            let nv = norm(&v);
            if nv == T::zero() {
                continue;
            }
            v.iter_mut().for_each(|a| *a = a.unscale(nv));
            let r = residual(op, &v, value);
            if r < tol {
                locked.push(Eigenpair { value, vector: v });
                new_locked += 1;
            } else if first_unconverged.is_none() {
                first_unconverged = Some(v);
            }
        }
        carry = first_unconverged;
        if new_locked == 0 && carry.is_none() && locked.len() >= k {
            quiet_runs += 1;
            if quiet_runs >= 2 {
                break;
            }
        } else {
            quiet_runs = 0;
        }
    }
    if locked.len() < k {
        return Err(Error::Spectral(format!("Lanczos converged {} of {} eigenpairs", locked.len(), k)));
    }
    locked.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap_or(std::cmp::Ordering::Equal));
    locked.truncate(k);
    // Rayleigh–Ritz on the locked block resolves near-degenerate mixing
    Ok(locked)
}

/// `k` lowest eigenpairs of `H(t)`.
pub fn eigenpairs<T: Real>(spec: &HamiltonianSpec<T>, t: T, k: usize) -> Result<Vec<Eigenpair<T>>> {
    lowest_eigenpairs(&spec.operator(t)?, k)
}

/// Result of [`first_coupled_gap`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledGap<T> {
    pub gap: T,
    /// Position of the coupled state in the ascending spectrum.
    pub index: usize,
    /// Ground level degenerate within 1e-9; the gap is measured from the
    /// edge of the ground manifold.
    pub degenerate_ground: bool,
}

const DEGENERACY_TOL: f64 = 1e-9;
const COUPLING_TOL: f64 = 1e-8;

/// Gap from the ground state to the lowest level coupled to it by
/// `Σ_i σ^axis_i`.
pub fn first_coupled_gap<T: Real>(spec: &HamiltonianSpec<T>, t: T, axis: Axis) -> Result<CoupledGap<T>> {
    let op = spec.operator(t)?;
    let probe = HamiltonianSpec::new(spec.n).uniform_field(axis, T::one()).operator(T::zero())?;
    let dim = op.dim();
    let mut k = (spec.n + 2).min(dim);
    loop {
        let pairs = lowest_eigenpairs(&op, k)?;
        if let Some(g) = coupled_in(&pairs, &probe) {
            return Ok(g);
        }
        if k == dim {
            return Err(Error::Spectral("no excited state couples to the ground state".into()));
        }
        k = (2 * k).min(dim);
    }
}

fn coupled_in<T: Real>(pairs: &[Eigenpair<T>], probe: &Operator<T>) -> Option<CoupledGap<T>> {
    let e0 = pairs[0].value;
    let deg = T::lit(DEGENERACY_TOL);
    let ground: Vec<&Eigenpair<T>> = pairs.iter().take_while(|p| p.value - e0 <= deg).collect();
    let images: Vec<Vec<C<T>>> = ground.iter().map(|g| probe.apply(&g.vector)).collect();
    let mut idx = ground.len();
    while idx < pairs.len() {
        // group the multiplet starting at idx
        let start = idx;
        let level = pairs[start].value;
        while idx < pairs.len() && pairs[idx].value - level <= deg {
            idx += 1;
        }
        let weight = pairs[start..idx]
            .iter()
            .flat_map(|e| images.iter().map(move |img| dot(&e.vector, img).norm_sqr()))
            .fold(T::zero(), |s, w| s + w)
            .sqrt();
        if weight > T::lit(COUPLING_TOL) {
            return Some(CoupledGap { gap: level - e0, index: start, degenerate_ground: ground.len() > 1 });
        }
    }
    None
}

/// Ground state of `H(t)` as a spin state.
pub fn ground_state<T: Real>(spec: &HamiltonianSpec<T>, t: T) -> Result<(T, SpinState<T>)> {
    let p = eigenpairs(spec, t, 1)?.remove(0);
    Ok((p.value, SpinState::from_amplitudes(spec.n, p.vector)?))
}
