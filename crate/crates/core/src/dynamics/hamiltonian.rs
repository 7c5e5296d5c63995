use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::state::Axis;
use crate::couplings::CouplingMatrix;
use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;
use crate::scalar::{cabs, cplx, Real, C};

/// Dimension above which the matrix-free product is split across threads.
const PARALLEL_DIM: usize = 1 << 12;
const CHUNK: usize = 2048;

/// Time-dependent multiplier attached to a Hamiltonian term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule<T> {
    /// Linear interpolation between `(times, values)`, clamped outside.
    PiecewiseLinear { times: Vec<T>, values: Vec<T> },
    /// `(e^{−t/τ} − floor) / (1 − floor)`; `floor = 0` is a plain decay.
    Exponential { tau: T, floor: T },
    /// `offset + amplitude·sin(ωt + phase)`.
    Sinusoidal { offset: T, amplitude: T, omega: T, phase: T },
    /// Monotone cubic interpolation of samples.
    Tabulated { times: Vec<T>, values: Vec<T> },
}

impl<T: Real> Schedule<T> {
    pub fn validate(&self) -> Result<()> {
        match self {
            Schedule::PiecewiseLinear { times, values } | Schedule::Tabulated { times, values } => {
                if times.len() != values.len() || times.is_empty() {
                    return Err(Error::Validation("schedule tables must be non-empty and of equal length".into()));
                }
                if times.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::Validation("schedule times must be strictly increasing".into()));
                }
                if matches!(self, Schedule::Tabulated { .. }) && times.len() < 2 {
                    return Err(Error::Validation("tabulated schedule needs two samples".into()));
                }
            }
            Schedule::Exponential { tau, floor } => {
                if !(*tau > T::zero()) || !(*floor < T::one()) {
                    return Err(Error::Validation("exponential schedule needs tau > 0 and floor < 1".into()));
                }
            }
            Schedule::Sinusoidal { .. } => {}
        }
        Ok(())
    }

    pub fn eval(&self, t: T) -> T {
        match self {
            Schedule::PiecewiseLinear { times, values } => {
                let n = times.len();
                if n == 1 || t <= times[0] {
                    return values[0];
                }
                if t >= times[n - 1] {
                    return values[n - 1];
                }
                let k = times.partition_point(|&x| x <= t) - 1;
                let s = (t - times[k]) / (times[k + 1] - times[k]);
                values[k] + s * (values[k + 1] - values[k])
            }
            Schedule::Exponential { tau, floor } => ((-t / *tau).exp() - *floor) / (T::one() - *floor),
            Schedule::Sinusoidal { offset, amplitude, omega, phase } => {
                *offset + *amplitude * (*omega * t + *phase).sin()
            }
            Schedule::Tabulated { times, values } => {
                // validated tables always interpolate
                MonotoneCubic::new(times.clone(), values.clone())
                    .map(|c| c.eval(t))
                    .unwrap_or(values[0])
            }
        }
    }

    /// Time window covered by a table, if any.
    pub fn domain(&self) -> Option<(T, T)> {
        match self {
            Schedule::PiecewiseLinear { times, .. } | Schedule::Tabulated { times, .. } => {
                Some((times[0], times[times.len() - 1]))
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTerm<T: Real> {
    pub axis: Axis,
    pub j: CouplingMatrix<T>,
    pub schedule: Option<Schedule<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldTerm<T: Real> {
    pub axis: Axis,
    pub amplitudes: Vec<T>,
    pub schedule: Option<Schedule<T>>,
}

/// `H(t) = Σ_terms s(t)·[Σ_{i<j} J_ij σ^a_i σ^a_j  or  Σ_i h_i σ^a_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec<T: Real> {
    pub n: usize,
    pub couplings: Vec<CouplingTerm<T>>,
    pub fields: Vec<FieldTerm<T>>,
}

impl<T: Real> HamiltonianSpec<T> {
    pub fn new(n: usize) -> Self {
        Self { n, couplings: Vec::new(), fields: Vec::new() }
    }

    pub fn coupling(mut self, axis: Axis, j: CouplingMatrix<T>) -> Self {
        self.couplings.push(CouplingTerm { axis, j, schedule: None });
        self
    }

    pub fn coupling_scheduled(mut self, axis: Axis, j: CouplingMatrix<T>, schedule: Schedule<T>) -> Self {
        self.couplings.push(CouplingTerm { axis, j, schedule: Some(schedule) });
        self
    }

    pub fn field(mut self, axis: Axis, amplitudes: Vec<T>) -> Self {
        self.fields.push(FieldTerm { axis, amplitudes, schedule: None });
        self
    }

    pub fn uniform_field(self, axis: Axis, b: T) -> Self {
        let n = self.n;
        self.field(axis, vec![b; n])
    }

    pub fn field_scheduled(mut self, axis: Axis, amplitudes: Vec<T>, schedule: Schedule<T>) -> Self {
        self.fields.push(FieldTerm { axis, amplitudes, schedule: Some(schedule) });
        self
    }

    /// Every term multiplied by `c`.
    pub fn scaled(&self, c: T) -> Self {
        let mut s = self.clone();
        for t in &mut s.couplings {
            t.j = t.j.scaled(c);
        }
        for f in &mut s.fields {
            f.amplitudes.iter_mut().for_each(|a| *a *= c);
        }
        s
    }

    /// Terms of `self` followed by those of `other`.
    pub fn plus(mut self, other: &Self) -> Self {
        self.couplings.extend(other.couplings.iter().cloned());
        self.fields.extend(other.fields.iter().cloned());
        self
    }

    pub fn is_time_dependent(&self) -> bool {
        self.couplings.iter().any(|t| t.schedule.is_some()) || self.fields.iter().any(|t| t.schedule.is_some())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > 30 {
            return Err(Error::Validation("site count must be in 1..=30".into()));
        }
        for t in &self.couplings {
            if t.j.n() != self.n {
                return Err(Error::Dimension { expected: self.n, got: t.j.n() });
            }
            if let Some(s) = &t.schedule {
                s.validate()?;
            }
        }
        for f in &self.fields {
            if f.amplitudes.len() != self.n {
                return Err(Error::Dimension { expected: self.n, got: f.amplitudes.len() });
            }
            if let Some(s) = &f.schedule {
                s.validate()?;
            }
        }
        Ok(())
    }

    /// Checks that every tabulated schedule covers `[t0, t1]`.
    pub fn check_window(&self, t0: T, t1: T) -> Result<()> {
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let schedules = self
            .couplings
            .iter()
            .filter_map(|t| t.schedule.as_ref())
            .chain(self.fields.iter().filter_map(|f| f.schedule.as_ref()));
        for s in schedules {
            if let Some((a, b)) = s.domain() {
                let slack = (b - a).abs() * T::lit(1e-9) + T::lit(1e-12);
                if lo < a - slack || hi > b + slack {
                    return Err(Error::Validation(format!(
                        "schedule defined on [{a}, {b}] does not cover [{lo}, {hi}]"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn compile(&self) -> Result<Compiled<T>> {
        self.validate()?;
        let n = self.n;
        let dim = 1usize << n;
        let mut schedules = Vec::new();
        let mut diag_parts = Vec::new();
        let mut flips: BTreeMap<usize, Vec<(usize, C<T>, usize)>> = BTreeMap::new();
        let spin = |b: usize, k: usize| if b >> k & 1 == 1 { T::one() } else { -T::one() };

        for term in &self.couplings {
            let idx = schedules.len();
            schedules.push(term.schedule.clone());
            match term.axis {
                Axis::Z => {
                    let pairs: Vec<_> = term.j.pairs().filter(|p| p.2 != T::zero()).collect();
                    let d: Vec<T> = (0..dim)
                        .map(|b| pairs.iter().fold(T::zero(), |s, &(i, k, v)| s + v * spin(b, i) * spin(b, k)))
                        .collect();
                    diag_parts.push((idx, d));
                }
                axis => {
                    for (i, k, v) in term.j.pairs() {
                        if v == T::zero() {
                            continue;
                        }
                        let mask = 1 << i | 1 << k;
                        let entry = if axis == Axis::X { (0, cplx(v, T::zero())) } else { (mask, cplx(-v, T::zero())) };
                        flips.entry(mask).or_default().push((entry.0, entry.1, idx));
                    }
                }
            }
        }
        for term in &self.fields {
            let idx = schedules.len();
            schedules.push(term.schedule.clone());
            match term.axis {
                Axis::Z => {
                    let d: Vec<T> = (0..dim)
                        .map(|b| {
                            term.amplitudes
                                .iter()
                                .enumerate()
                                .fold(T::zero(), |s, (k, &h)| s + h * spin(b, k))
                        })
                        .collect();
                    diag_parts.push((idx, d));
                }
                axis => {
                    for (k, &h) in term.amplitudes.iter().enumerate() {
                        if h == T::zero() {
                            continue;
                        }
                        let mask = 1 << k;
                        let entry = if axis == Axis::X { (0, cplx(h, T::zero())) } else { (mask, cplx(T::zero(), h)) };
                        flips.entry(mask).or_default().push((entry.0, entry.1, idx));
                    }
                }
            }
        }
        Ok(Compiled { n, schedules, diag_parts, flips: flips.into_iter().collect() })
    }

    /// Frozen operator at time `t`.
    pub fn operator(&self, t: T) -> Result<Operator<T>> {
        Ok(self.compile()?.at(t))
    }
}

/// Hamiltonian with its basis structure precomputed; schedules are
/// evaluated by [`Compiled::at`].
#[derive(Debug, Clone)]
pub struct Compiled<T: Real> {
    n: usize,
    schedules: Vec<Option<Schedule<T>>>,
    diag_parts: Vec<(usize, Vec<T>)>,
    flips: Vec<(usize, Vec<(usize, C<T>, usize)>)>,
}

impl<T: Real> Compiled<T> {
    pub fn at(&self, t: T) -> Operator<T> {
        let scales: Vec<T> = self
            .schedules
            .iter()
            .map(|s| s.as_ref().map_or(T::one(), |s| s.eval(t)))
            .collect();
        let dim = 1usize << self.n;
        let mut diag = vec![T::zero(); dim];
        for (idx, part) in &self.diag_parts {
            let c = scales[*idx];
            if c != T::zero() {
                diag.iter_mut().zip(part).for_each(|(d, &p)| *d += c * p);
            }
        }
        let groups = self
            .flips
            .iter()
            .map(|(mask, terms)| FlipGroup {
                mask: *mask,
                terms: terms.iter().map(|&(sm, c, idx)| (sm, c.scale(scales[idx]))).collect(),
            })
            .collect();
        Operator { n: self.n, diag, groups }
    }

    pub fn is_time_dependent(&self) -> bool {
        self.schedules.iter().any(|s| s.is_some())
    }
}

#[derive(Debug, Clone)]
struct FlipGroup<T> {
    mask: usize,
    // (mask of sites contributing a (−1) for spin down, coefficient)
    terms: Vec<(usize, C<T>)>,
}

/// Hamiltonian at a fixed time, applied without storing a matrix.
#[derive(Debug, Clone)]
pub struct Operator<T: Real> {
    n: usize,
    diag: Vec<T>,
    groups: Vec<FlipGroup<T>>,
}

impl<T: Real> Operator<T> {
    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `out = H psi`.
    pub fn apply_into(&self, psi: &[C<T>], out: &mut [C<T>]) {
        let dim = self.dim();
        assert_eq!(psi.len(), dim);
        assert_eq!(out.len(), dim);
        if dim >= PARALLEL_DIM {
            out.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| self.apply_block(c * CHUNK, psi, chunk));
        } else {
            self.apply_block(0, psi, out);
        }
    }

    // Rows `base..base + out.len()`, one flip group at a time.
    fn apply_block(&self, base: usize, psi: &[C<T>], out: &mut [C<T>]) {
        for (k, o) in out.iter_mut().enumerate() {
            *o = psi[base + k].scale(self.diag[base + k]);
        }
        for g in &self.groups {
            match g.terms.as_slice() {
                [(0, coef)] => {
                    for (k, o) in out.iter_mut().enumerate() {
                        *o += *coef * psi[(base + k) ^ g.mask];
                    }
                }
                terms => {
                    for (k, o) in out.iter_mut().enumerate() {
                        let src = (base + k) ^ g.mask;
                        let mut c = C::<T>::zero();
                        for &(sm, coef) in terms {
                            if (!src & sm).count_ones() & 1 == 1 {
                                c -= coef;
                            } else {
                                c += coef;
                            }
                        }
                        *o += c * psi[src];
                    }
                }
            }
        }
    }

    pub fn apply(&self, psi: &[C<T>]) -> Vec<C<T>> {
        let mut out = vec![C::zero(); psi.len()];
        self.apply_into(psi, &mut out);
        out
    }

    /// ⟨ψ|H|ψ⟩ (real for Hermitian H).
    pub fn expectation(&self, psi: &[C<T>]) -> T {
        let h = self.apply(psi);
        psi.iter().zip(&h).fold(T::zero(), |s, (a, b)| s + (a.conj() * b).re)
    }

    /// Upper bound on the spectral radius.
    pub fn norm_bound(&self) -> T {
        let d = self.diag.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        self.groups
            .iter()
            .fold(d, |s, g| s + g.terms.iter().fold(T::zero(), |t, (_, c)| t + cabs(*c)))
    }

    /// Diagonal in the σ_z basis.
    pub fn diagonal(&self) -> &[T] {
        &self.diag
    }

    /// True when every term is diagonal in the σ_z basis.
    pub fn is_diagonal(&self) -> bool {
        self.groups.iter().all(|g| g.terms.iter().all(|(_, c)| c.is_zero()))
    }

    pub fn to_dense(&self) -> DMatrix<C<T>> {
        let dim = self.dim();
        let mut h = DMatrix::from_element(dim, dim, C::zero());
        for b in 0..dim {
            h[(b, b)] = cplx(self.diag[b], T::zero());
            for g in &self.groups {
                for &(sm, coef) in &g.terms {
                    let v = if (!b & sm).count_ones() & 1 == 1 { -coef } else { coef };
                    h[(b ^ g.mask, b)] += v;
                }
            }
        }
        h
    }
}

/// Matrix-free `H(t)|ψ⟩`.
pub fn apply_hamiltonian<T: Real>(
    spec: &HamiltonianSpec<T>,
    t: T,
    state: &super::SpinState<T>,
) -> Result<super::SpinState<T>> {
    if state.n_sites() != spec.n {
        return Err(Error::Dimension { expected: spec.n, got: state.n_sites() });
    }
    let op = spec.operator(t)?;
    super::SpinState::from_amplitudes(spec.n, op.apply(state.amplitudes()))
}
