//! Recovering Ising couplings from simulated spin dynamics.

use crate::couplings::CouplingMatrix;
use crate::dynamics::{Axis, HamiltonianSpec, Propagator, SpinState};
use crate::error::{Error, Result};
use crate::observables::{fourier_spectrum, Spectrum, Window};
use crate::optimize::{nelder_mead, NelderMeadOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEstimate {
    pub i: usize,
    pub j: usize,
    pub estimate: f64,
    pub exact: f64,
    pub error: f64,
}

/// Population of `|↓…↓⟩` (Ising axis z-basis) at each time, starting
/// from that state.
fn return_series(spec: &HamiltonianSpec<f64>, times: &[f64], tol: f64) -> Result<Vec<f64>> {
    let n = spec.n;
    let prop = Propagator::new(spec, tol)?;
    let mut psi = SpinState::<f64>::basis(n, 0).into_amplitudes();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        prop.run(&mut psi, now, t)?;
        now = t;
        out.push(psi[0].norm_sqr());
    }
    Ok(out)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-14 * (1.0 + a.abs() + b.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Isolates the pair `(i, j)`: evolves `J_ij σ_xσ_x` on two spins from
/// `|↓↓⟩`, then fits `cos²(Ĵt)` to the populations.
pub fn benchmark_pair(j: &CouplingMatrix<f64>, i: usize, k: usize, times: &[f64], tol: f64) -> Result<PairEstimate> {
    let n = j.n();
    if i >= n || k >= n || i == k {
        return Err(Error::Validation("pair indices must be distinct sites".into()));
    }
    if times.len() < 8 {
        return Err(Error::Validation("pair fit needs at least eight samples".into()));
    }
    let exact = j.get(i, k);
    let pair = CouplingMatrix::power_law(2, exact, 0.0);
    let spec = HamiltonianSpec::new(2).coupling(Axis::X, pair);
    let p = return_series(&spec, times, tol)?;
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    // P(t) = (1 + cos 2Jt)/2: spectral peak at 2|J|/2π
    let centred: Vec<f64> = p.iter().map(|v| v - 0.5).collect();
    let spec_f = fourier_spectrum(&centred, dt, Window::Hann, 8)?;
    let guess = spec_f.peak().1 * std::f64::consts::PI;
    let width = 2.0 * spec_f.native_bin * std::f64::consts::PI;
    let loss = |jj: f64| -> f64 { times.iter().zip(&p).map(|(&t, &v)| (v - (jj * t).cos().powi(2)).powi(2)).sum() };
    let est = golden_min(loss, (guess - width).max(0.0), guess + width);
    let est = if exact < 0.0 { -est } else { est };
    Ok(PairEstimate { i, j: k, estimate: est, exact, error: (est - exact).abs() })
}

/// Full-chain benchmark: the `|↓…↓⟩` return probability and its spectrum.
#[derive(Debug, Clone)]
pub struct ChainBenchmark {
    pub times: Vec<f64>,
    pub population: Vec<f64>,
    pub spectrum: Spectrum,
    /// Angular frequencies of the strongest spectral peaks, descending in
    /// amplitude.
    pub peaks: Vec<f64>,
}

pub fn benchmark_chain(j: &CouplingMatrix<f64>, times: &[f64], n_peaks: usize, tol: f64) -> Result<ChainBenchmark> {
    if times.len() < 8 {
        return Err(Error::Validation("chain benchmark needs at least eight samples".into()));
    }
    let spec = HamiltonianSpec::new(j.n()).coupling(Axis::X, j.clone());
    let population = return_series(&spec, times, tol)?;
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    let mean = population.iter().sum::<f64>() / population.len() as f64;
    let centred: Vec<f64> = population.iter().map(|v| v - mean).collect();
    let spectrum = fourier_spectrum(&centred, dt, Window::Hann, 8)?;
    let a = &spectrum.amps;
    let mut local: Vec<usize> = (1..a.len().saturating_sub(1)).filter(|&k| a[k] > a[k - 1] && a[k] >= a[k + 1]).collect();
    local.sort_by(|&x, &y| a[y].total_cmp(&a[x]));
    let peaks = local.iter().take(n_peaks).map(|&k| 2.0 * std::f64::consts::PI * spectrum.freqs[k]).collect();
    Ok(ChainBenchmark { times: times.to_vec(), population, spectrum, peaks })
}

/// Three-spin chain with couplings `J1` (neighbours) and `J2` (ends):
/// least-squares fit of the return probability, seeded from the two
/// leading spectral lines.
pub fn fit_three_spin(times: &[f64], population: &[f64], peaks: &[f64]) -> Result<(f64, f64)> {
    if peaks.len() < 2 || times.len() != population.len() {
        return Err(Error::Validation("three-spin fit needs two spectral lines and matching samples".into()));
    }
    // lines sit at 2(J1 + J2) and 2|J1 − J2| (weight 1/4 each) and at 4J1
    // (weight 1/8); seed from both readings of the two strongest
    let mut lines = peaks[..2].to_vec();
    lines.sort_by(|a, b| b.total_cmp(a));
    let (hi, lo) = (lines[0], lines[1]);
    let seeds = [((hi + lo) / 4.0, (hi - lo) / 4.0), (hi / 4.0, lo / 2.0 - hi / 4.0)];
    let model = |j1: f64, j2: f64, t: f64| -> f64 {
        // eigenvalues 2J1+J2, −2J1+J2, −J2 (twice), each with weight 1/4
        let e = [2.0 * j1 + j2, -2.0 * j1 + j2, -j2, -j2];
        let (re, im) = e.iter().fold((0.0, 0.0), |(r, i), &v| (r + 0.25 * (v * t).cos(), i - 0.25 * (v * t).sin()));
        re * re + im * im
    };
    let loss = |x: &[f64]| -> f64 { times.iter().zip(population).map(|(&t, &p)| (p - model(x[0], x[1], t)).powi(2)).sum() };
    let opts = NelderMeadOptions { max_evaluations: 4000, f_tol: 1e-20, restarts: 2 };
    let best = seeds
        .iter()
        .map(|&(j1, j2)| {
            let step = 0.05 * j1.abs().max(1e-6);
            nelder_mead(loss, &[j1, j2], &[step, step], &opts)
        })
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or(Error::Undefined("no fit seeds"))?;
    Ok((best.x[0], best.x[1]))
}

