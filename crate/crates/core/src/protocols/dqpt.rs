//! Dynamical phase transitions after a field quench of an Ising chain.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::couplings::CouplingMatrix;
use crate::dynamics::{pauli, Axis, HamiltonianSpec, Propagator, SpinState};
use crate::error::{Error, Result};
use crate::observables::{detect_kinks, rate_function, two_body_c2, zero_crossings, Distribution};

/// Spike factor for kink detection on the rate function.
pub const KINK_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    /// Every spin down along the field axis.
    ZPolarized,
    /// Every spin down along the Ising axis.
    XOrdered,
}

/// Ferromagnetic `−Σ J0/|i−j|^α σ_x σ_x + B Σσ_z`.
pub fn dqpt_hamiltonian(n: usize, j0: f64, alpha: f64, b: f64) -> HamiltonianSpec<f64> {
    HamiltonianSpec::new(n)
        .coupling(Axis::X, CouplingMatrix::power_law(n, -j0, alpha))
        .uniform_field(Axis::Z, b)
}

#[derive(Debug, Clone)]
pub struct DqptResult {
    pub times: Vec<f64>,
    pub rate: Vec<f64>,
    pub magnetization_x: Vec<f64>,
    pub c2: Vec<f64>,
    /// Sample indices of rate-function kinks.
    pub kinks: Vec<usize>,
    /// Indices `k` with a sign change of `M_x` between samples `k`, `k+1`.
    pub crossings: Vec<usize>,
}

impl DqptResult {
    /// Every kink lies within `slack` samples of an `M_x` sign change.
    pub fn kinks_match_crossings(&self, slack: usize) -> bool {
        !self.kinks.is_empty()
            && self.kinks.iter().all(|&k| {
                self.crossings.iter().any(|&c| {
                    // the crossing spans samples c and c+1
                    let d = if k <= c { c - k } else if k > c + 1 { k - c - 1 } else { 0 };
                    d <= slack
                })
            })
    }
}

fn initial(n: usize, kind: InitialKind) -> SpinState<f64> {
    match kind {
        InitialKind::ZPolarized => SpinState::polarized(n, Axis::Z, false),
        InitialKind::XOrdered => SpinState::polarized(n, Axis::X, false),
    }
}

/// The initial state and its image under the global flip `Πσ_z`, which
/// commutes with the quench Hamiltonian. A flip-invariant state is listed
/// once.
fn references(psi0: &SpinState<f64>) -> Vec<SpinState<f64>> {
    let mut flipped = psi0.clone();
    for k in 0..psi0.n_sites() {
        flipped.apply_site(k, pauli(Axis::Z));
    }
    if psi0.fidelity(&flipped) > 1.0 - 1e-12 {
        vec![psi0.clone()]
    } else {
        vec![psi0.clone(), flipped]
    }
}

/// Quenches `spec` from the chosen initial state, tracking the return
/// rate, `M_x` and `C₂`.
pub fn dqpt_run(spec: &HamiltonianSpec<f64>, kind: InitialKind, times: &[f64], tol: f64) -> Result<DqptResult> {
    if times.windows(2).any(|w| !(w[1] > w[0])) || times.first().map_or(true, |&t| t < 0.0) {
        return Err(Error::Validation("times must be non-negative and strictly increasing".into()));
    }
    let n = spec.n;
    let psi0 = initial(n, kind);
    let refs = references(&psi0);
    let prop = Propagator::new(spec, tol)?;
    let mut psi = psi0.into_amplitudes();
    let mut now = 0.0;
    let (mut rate, mut mx, mut c2) = (Vec::new(), Vec::new(), Vec::new());
    for &t in times {
        prop.run(&mut psi, now, t)?;
        now = t;
        let s = SpinState::from_amplitudes(n, psi.clone())?;
        rate.push(rate_function(&s, &refs)?);
        mx.push(s.site_expectations(Axis::X).iter().sum::<f64>() / n as f64);
        c2.push(two_body_c2(&Distribution::from_state(&s, Axis::X)));
    }
    Ok(DqptResult {
        kinks: detect_kinks(&rate, KINK_FACTOR),
        crossings: zero_crossings(&mx),
        times: times.to_vec(),
        rate,
        magnetization_x: mx,
        c2,
    })
}

/// Late-time mean of `C₂` over `samples` evenly spaced times in `window`
/// after quenching the x-ordered state to each field.
pub fn c2_sweep(
    n: usize,
    j0: f64,
    alpha: f64,
    fields: &[f64],
    window: (f64, f64),
    samples: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    if samples < 1 || !(window.1 >= window.0) || window.0 < 0.0 {
        return Err(Error::Validation("invalid late-time window".into()));
    }
    let times: Vec<f64> = (0..samples)
        .map(|k| {
            if samples == 1 {
                window.0
            } else {
                window.0 + (window.1 - window.0) * k as f64 / (samples - 1) as f64
            }
        })
        .collect();
    fields
        .par_iter()
        .map(|&b| {
            let spec = dqpt_hamiltonian(n, j0, alpha, b);
            let prop = Propagator::new(&spec, tol)?;
            let mut psi = initial(n, InitialKind::XOrdered).into_amplitudes();
            let mut now = 0.0;
            let mut acc = 0.0;
            for &t in &times {
                prop.run(&mut psi, now, t)?;
                now = t;
                let s = SpinState::from_amplitudes(n, psi.clone())?;
                acc += two_body_c2(&Distribution::from_state(&s, Axis::X));
            }
            Ok(acc / samples as f64)
        })
        .collect()
}

/// Location and relative depth of the minimum of a `C₂(B)` curve. Depth
/// is the drop from the first (weakest-field) point, relative to it.
pub fn c2_dip(fields: &[f64], c2: &[f64]) -> Option<(f64, f64)> {
    let k = (0..c2.len()).min_by(|&a, &b| c2[a].total_cmp(&c2[b]))?;
    let first = *c2.first()?;
    Some((fields[k], (first - c2[k]) / first))
}
