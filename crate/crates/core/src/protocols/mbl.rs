//! Disorder-induced localization after a quench from a Néel state.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::couplings::CouplingMatrix;
use crate::dynamics::{Axis, HamiltonianSpec, Propagator, SpinState};
use crate::error::{Error, Result};
use crate::observables::{disorder_mean, hamming_distance, MeanStderr};
use crate::rng::{derive_seed, stream_rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MblParams {
    pub n: usize,
    /// Nearest-neighbour coupling, rad/ms.
    pub j0: f64,
    pub alpha: f64,
    /// Uniform transverse field; enters as `(B/2) Σσ_z`.
    pub b: f64,
    /// Disorder width; `D_i ~ U[−W/2, W/2]`.
    pub w: f64,
    pub disorder_axis: Axis,
    pub realizations: usize,
    pub seed: u64,
    pub times: Vec<f64>,
    /// Window `[t0, t1]` averaged for the steady-state Hamming distance.
    pub plateau: (f64, f64),
}

impl MblParams {
    /// Thirty realizations on `J0 t ∈ [0, 10]`, plateau over `[5, 10]/J0`.
    pub fn new(n: usize, j0: f64, alpha: f64, b: f64, w: f64, seed: u64) -> Self {
        let times = (0..=100).map(|k| 0.1 * k as f64 / j0).collect();
        Self {
            n,
            j0,
            alpha,
            b,
            w,
            disorder_axis: Axis::Z,
            realizations: 30,
            seed,
            times,
            plateau: (5.0 / j0, 10.0 / j0),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MblResult {
    pub times: Vec<f64>,
    pub hamming: MeanStderr<f64>,
    /// Disorder-averaged `⟨σ_i^z(t)⟩`, per time, per site.
    pub magnetization: Vec<Vec<f64>>,
    /// Time-averaged Hamming distance over the plateau window: mean over
    /// realizations and its standard error.
    pub plateau_mean: f64,
    pub plateau_stderr: f64,
    pub seeds: Vec<u64>,
}

/// Site offsets for one disorder realization.
pub fn disorder_offsets(n: usize, w: f64, seed: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, 0);
    (0..n).map(|_| if w > 0.0 { rng.gen_range(-0.5 * w..0.5 * w) } else { 0.0 }).collect()
}

pub fn mbl_hamiltonian(p: &MblParams, offsets: &[f64]) -> HamiltonianSpec<f64> {
    let mut spec = HamiltonianSpec::new(p.n)
        .coupling(Axis::X, CouplingMatrix::power_law(p.n, p.j0, p.alpha))
        .uniform_field(Axis::Z, 0.5 * p.b);
    if offsets.iter().any(|&d| d != 0.0) {
        spec = spec.field(p.disorder_axis, offsets.to_vec());
    }
    spec
}

struct Run {
    hamming: Vec<f64>,
    magnetization: Vec<Vec<f64>>,
    plateau: f64,
}

fn single(p: &MblParams, seed: u64, tol: f64) -> Result<Run> {
    let spec = mbl_hamiltonian(p, &disorder_offsets(p.n, p.w, seed));
    let prop = Propagator::new(&spec, tol)?;
    let mut psi = SpinState::<f64>::neel(p.n, Axis::Z, false).into_amplitudes();
    let mut now = 0.0;
    let mut hamming = Vec::with_capacity(p.times.len());
    let mut magnetization = Vec::with_capacity(p.times.len());
    for &t in &p.times {
        prop.run(&mut psi, now, t)?;
        now = t;
        let sz = SpinState::from_amplitudes(p.n, psi.clone())?.site_expectations(Axis::Z);
        hamming.push(hamming_distance(&sz, false)?);
        magnetization.push(sz);
    }
    let (lo, hi) = p.plateau;
    let window: Vec<f64> = p
        .times
        .iter()
        .zip(&hamming)
        .filter(|(&t, _)| t >= lo - 1e-12 && t <= hi + 1e-12)
        .map(|(_, &d)| d)
        .collect();
    if window.is_empty() {
        return Err(Error::Validation("plateau window contains no sample times".into()));
    }
    let plateau = window.iter().sum::<f64>() / window.len() as f64;
    Ok(Run { hamming, magnetization, plateau })
}

/// Runs every disorder realization (in parallel) from the Néel state
/// `↓↑↓↑…` and averages the results.
pub fn mbl_run(p: &MblParams, tol: f64) -> Result<MblResult> {
    if p.n < 2 || p.realizations == 0 {
        return Err(Error::Validation("MBL run needs N ≥ 2 and at least one realization".into()));
    }
    if !(p.w >= 0.0) {
        return Err(Error::Validation("disorder width must be non-negative".into()));
    }
    if p.times.windows(2).any(|w| !(w[1] > w[0])) || p.times.first().map_or(true, |&t| t < 0.0) {
        return Err(Error::Validation("times must be non-negative and strictly increasing".into()));
    }
    let seeds: Vec<u64> = (0..p.realizations as u64).map(|k| derive_seed(p.seed, k)).collect();
    let runs = seeds.par_iter().map(|&s| single(p, s, tol)).collect::<Result<Vec<_>>>()?;
    let hamming = disorder_mean(&runs.iter().map(|r| r.hamming.clone()).collect::<Vec<_>>())?;
    let plateaus: Vec<Vec<f64>> = runs.iter().map(|r| vec![r.plateau]).collect();
    let pl = disorder_mean(&plateaus)?;
    let r = runs.len() as f64;
    let magnetization = (0..p.times.len())
        .map(|k| (0..p.n).map(|i| runs.iter().map(|run| run.magnetization[k][i]).sum::<f64>() / r).collect())
        .collect();
    Ok(MblResult {
        times: p.times.clone(),
        hamming,
        magnetization,
        plateau_mean: pl.mean[0],
        plateau_stderr: pl.stderr[0],
        seeds,
    })
}
