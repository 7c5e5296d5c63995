//! Scalar diagnostics of time series and site profiles.

use crate::dynamics::SpinState;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Normalized Hamming distance from the initial Néel pattern, computed
/// from `⟨σ_i^z⟩`. `first_up` gives the orientation of site 1 in that
/// pattern.
pub fn hamming_distance<T: Real>(sz: &[T], first_up: bool) -> Result<T> {
    if sz.is_empty() {
        return Err(Error::Undefined("Hamming distance of an empty chain"));
    }
    let n = T::from_usize_lossy(sz.len());
    let overlap = sz.iter().enumerate().fold(T::zero(), |s, (k, &v)| {
        if (k % 2 == 0) == first_up {
            s + v
        } else {
            s - v
        }
    });
    Ok(T::lit(0.5) - overlap / (T::lit(2.0) * n))
}

/// Position of the spin excitation along the chain, −1 at site 1 and +1
/// at site N.
pub fn center_of_excitation<T: Real>(sz: &[T]) -> Result<T> {
    let n = sz.len();
    if n < 2 {
        return Err(Error::Undefined("centre of excitation needs at least two sites"));
    }
    let nm1 = T::from_usize_lossy(n - 1);
    Ok(sz.iter().enumerate().fold(T::zero(), |s, (k, &v)| {
        let w = T::from_usize_lossy(2 * k) - nm1;
        s + w / nm1 * (v + T::one()) * T::lit(0.5)
    }))
}

/// Return-rate function `−N⁻¹ ln Σ_r |⟨r|ψ⟩|²` over a set of reference
/// states (e.g. both members of a degenerate ground manifold).
pub fn rate_function<T: Real>(state: &SpinState<T>, references: &[SpinState<T>]) -> Result<T> {
    if references.is_empty() {
        return Err(Error::Validation("rate function needs at least one reference state".into()));
    }
    let mut p = T::zero();
    for r in references {
        if r.n_sites() != state.n_sites() {
            return Err(Error::Dimension { expected: state.n_sites(), got: r.n_sites() });
        }
        p += state.fidelity(r);
    }
    if !(p > T::zero()) {
        return Err(Error::Undefined("zero return probability"));
    }
    Ok(-p.min(T::one()).ln() / T::from_usize_lossy(state.n_sites()))
}

/// Sample indices where the discrete second difference spikes above
/// `factor ×` its median absolute value and is a local maximum.
pub fn detect_kinks<T: Real>(series: &[T], factor: T) -> Vec<usize> {
    if series.len() < 3 {
        return Vec::new();
    }
    let d2: Vec<T> = series.windows(3).map(|w| (w[2] - w[1] - (w[1] - w[0])).abs()).collect();
    let mut sorted = d2.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let m = sorted.len();
    let median = if m % 2 == 1 { sorted[m / 2] } else { (sorted[m / 2 - 1] + sorted[m / 2]) * T::lit(0.5) };
    let threshold = factor * median;
    (0..m)
        .filter(|&k| {
            let v = d2[k];
            v > threshold
                && v > T::zero()
                && (k == 0 || v >= d2[k - 1])
                && (k + 1 == m || v > d2[k + 1])
        })
        .map(|k| k + 1)
        .collect()
}

/// Indices `k` with a sign change between samples `k` and `k + 1`
/// (exact zeros count once, at the zero).
pub fn zero_crossings<T: Real>(series: &[T]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut k = 0;
    while k + 1 < series.len() {
        let (a, b) = (series[k], series[k + 1]);
        if a == T::zero() {
            if k > 0 && series[k - 1] * b < T::zero() {
                out.push(k);
            }
        } else if a * b < T::zero() {
            out.push(k);
        }
        k += 1;
    }
    out
}

/// Pointwise mean and standard error over realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanStderr<T> {
    pub mean: Vec<T>,
    pub stderr: Vec<T>,
    pub realizations: usize,
}

pub fn disorder_mean<T: Real>(runs: &[Vec<T>]) -> Result<MeanStderr<T>> {
    let r = runs.len();
    if r == 0 {
        return Err(Error::Undefined("no realizations to average"));
    }
    let len = runs[0].len();
    if let Some(bad) = runs.iter().find(|v| v.len() != len) {
        return Err(Error::Dimension { expected: len, got: bad.len() });
    }
    let rr = T::from_usize_lossy(r);
    let mean: Vec<T> = (0..len).map(|k| runs.iter().fold(T::zero(), |s, v| s + v[k]) / rr).collect();
    let stderr = (0..len)
        .map(|k| {
            if r < 2 {
                return T::zero();
            }
            let var = runs.iter().fold(T::zero(), |s, v| s + (v[k] - mean[k]).powi(2)) / T::from_usize_lossy(r - 1);
            (var / rr).sqrt()
        })
        .collect();
    Ok(MeanStderr { mean, stderr, realizations: r })
}

/// Phenomenological decay `p·e^{−t/t_d}` applied after the fact; never
/// part of the dynamics.
pub fn apply_decay<T: Real>(p: T, t: T, t_decay: T) -> T {
    p * (-t / t_decay).exp()
}
