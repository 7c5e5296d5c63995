//! Inverse problem: choose beatnote detunings and per-ion Rabi frequencies
//! whose couplings approximate a target matrix.

use rand::Rng;
use rayon::prelude::*;

use super::{multi_tone_couplings, CouplingMatrix, MultiToneSpec, Tone};
use crate::crystal::IonCrystal;
use crate::error::{Error, Result};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::rng::stream_rng;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct DesignBounds<T> {
    /// Upper bound on every Rabi frequency, rad/ms.
    pub max_rabi: T,
    /// Detuning window `(lo, hi)` for each tone. `None` selects the open
    /// intervals above the COM mode and between adjacent modes, in order.
    pub windows: Option<Vec<(T, T)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignOptions<T> {
    pub delta_k: T,
    pub mass: T,
    pub restarts: usize,
    pub seed: u64,
    pub max_evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignResult<T> {
    pub spec: MultiToneSpec<T>,
    /// Frobenius distance between achieved and target couplings.
    pub residual: T,
    pub converged: bool,
    /// Index of the restart that produced the result (`None` for the
    /// all-zero fallback).
    pub restart: Option<usize>,
}

/// Windows above the COM mode and between adjacent modes, shrunk by a
/// guard band of 1e-3 of the mode bandwidth.
pub fn default_windows<T: Real>(crystal: &IonCrystal<T>, n_tones: usize) -> Vec<(T, T)> {
    let w = &crystal.mode_freqs;
    let bw = if w.len() > 1 { crystal.bandwidth() } else { w[0] * T::lit(0.1) };
    let guard = bw * T::lit(1e-3);
    (0..n_tones)
        .map(|n| {
            let (lo, hi) = if n == 0 { (w[0], w[0] + bw) } else { (w[n], w[n - 1]) };
            (lo + guard, hi - guard)
        })
        .collect()
}

fn sigmoid<T: Real>(u: T) -> T {
    T::one() / (T::one() + (-u).exp())
}

struct Layout<T> {
    n_ions: usize,
    windows: Vec<(T, T)>,
    max_rabi: T,
    delta_k: T,
}

impl<T: Real> Layout<T> {
    fn n_params(&self) -> usize {
        self.windows.len() * (self.n_ions + 1)
    }

    fn decode(&self, p: &[T]) -> MultiToneSpec<T> {
        let stride = self.n_ions + 1;
        let tones = self
            .windows
            .iter()
            .enumerate()
            .map(|(t, &(lo, hi))| {
                let block = &p[t * stride..(t + 1) * stride];
                let mu = lo + (hi - lo) * sigmoid(block[0]);
                let rabi = block[1..].iter().map(|&s| (s * s).min(self.max_rabi)).collect();
                Tone { mu, rabi }
            })
            .collect();
        MultiToneSpec { tones, delta_k: self.delta_k }
    }

    fn random_start(&self, rng: &mut impl Rng) -> Vec<T> {
        let mut p = Vec::with_capacity(self.n_params());
        for _ in &self.windows {
            let frac: f64 = rng.gen_range(0.05..0.95);
            p.push(T::lit((frac / (1.0 - frac)).ln()));
            for _ in 0..self.n_ions {
                let omega = rng.gen_range(0.0..1.0) * self.max_rabi.as_f64();
                p.push(T::lit(omega.sqrt()));
            }
        }
        p
    }
}

/// Multi-start simplex search for a tone set reproducing `target`.
/// Deterministic for a given seed; restarts run in parallel and the
/// lowest residual wins, ties going to the lowest restart index.
pub fn design_couplings<T: Real>(
    target: &CouplingMatrix<T>,
    crystal: &IonCrystal<T>,
    n_tones: usize,
    bounds: &DesignBounds<T>,
    opts: &DesignOptions<T>,
) -> Result<DesignResult<T>> {
    let n = crystal.n_ions();
    if target.n() != n {
        return Err(Error::Dimension { expected: n, got: target.n() });
    }
    if n_tones == 0 || n_tones > n {
        return Err(Error::Validation(format!("n_tones must be in 1..={n}")));
    }
    if !(bounds.max_rabi > T::zero()) {
        return Err(Error::Validation("max_rabi must be positive".into()));
    }
    let windows = match &bounds.windows {
        Some(w) => w.clone(),
        None => default_windows(crystal, n_tones),
    };
    if windows.len() != n_tones {
        return Err(Error::Validation("one detuning window per tone is required".into()));
    }
    for &(lo, hi) in &windows {
        if !(hi > lo) {
            return Err(Error::Validation("empty detuning window".into()));
        }
        if crystal.mode_freqs.iter().any(|&w| w >= lo && w <= hi) {
            return Err(Error::Validation("detuning window contains a mode frequency".into()));
        }
    }

    let zero_spec = MultiToneSpec {
        tones: windows
            .iter()
            .map(|&(lo, hi)| Tone { mu: (lo + hi) * T::lit(0.5), rabi: vec![T::zero(); n] })
            .collect(),
        delta_k: opts.delta_k,
    };
    let zero_residual = target.matrix().norm();

    let layout = Layout { n_ions: n, windows, max_rabi: bounds.max_rabi, delta_k: opts.delta_k };
    let objective = |p: &[T]| -> T {
        match multi_tone_couplings(crystal, &layout.decode(p), opts.mass) {
            Ok(j) => j.frobenius_distance(target),
            Err(_) => T::max_value().unwrap_or(T::lit(1e300)),
        }
    };
    let nm = NelderMeadOptions {
        max_evaluations: opts.max_evaluations,
        f_tol: T::lit(1e-15).max(T::EPS),
        restarts: 4,
    };
    let step: Vec<T> = (0..layout.n_params())
        .map(|k| {
            if k % (n + 1) == 0 {
                T::one()
            } else {
                bounds.max_rabi.sqrt() * T::lit(0.25)
            }
        })
        .collect();

    let runs: Vec<(usize, crate::optimize::Minimum<T>)> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(opts.seed, k as u64);
            let x0 = layout.random_start(&mut rng);
            (k, nelder_mead(objective, &x0, &step, &nm))
        })
        .collect();

    let best = runs
        .into_iter()
        .min_by(|a, b| {
            a.1.value
                .partial_cmp(&b.1.value)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.0.cmp(&b.0))
        })
        .expect("at least one restart");

    if !(best.1.value < zero_residual) {
        return Ok(DesignResult {
            spec: zero_spec,
            residual: zero_residual,
            converged: true,
            restart: None,
        });
    }
    Ok(DesignResult {
        spec: layout.decode(&best.1.x),
        residual: best.1.value,
        converged: best.1.converged,
        restart: Some(best.0),
    })
}
