//! Sudden quenches and the spreading of correlations.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Axis, HamiltonianSpec, Propagator, SpinState};
use crate::error::{Error, Result};
use crate::observables::connected_correlation;

/// Default contour level for correlation arrival times.
pub const CORRELATION_THRESHOLD: f64 = 0.04;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuenchKind {
    /// Every spin down along the measurement axis.
    Global,
    /// As `Global` with the middle spin flipped up.
    Local,
}

impl QuenchKind {
    pub fn initial_state(self, n: usize, axis: Axis) -> SpinState<f64> {
        match self {
            QuenchKind::Global => SpinState::polarized(n, axis, false),
            QuenchKind::Local => SpinState::configuration(n, axis, 1 << centre_site(n)),
        }
    }
}

/// 0-based middle site (the left one of the central pair for even N).
pub fn centre_site(n: usize) -> usize {
    (n - 1) / 2
}

#[derive(Debug, Clone)]
pub struct QuenchResult {
    pub times: Vec<f64>,
    /// `⟨σ_i⟩` per time, per site.
    pub magnetization: Vec<Vec<f64>>,
    /// Connected correlations per time.
    pub correlations: Vec<DMatrix<f64>>,
    pub axis: Axis,
}

/// Evolves the quench state under `spec` and records single-site
/// expectations and connected correlations along `axis`.
pub fn quench_run(
    kind: QuenchKind,
    spec: &HamiltonianSpec<f64>,
    initial: Option<&SpinState<f64>>,
    times: &[f64],
    axis: Axis,
    tol: f64,
) -> Result<QuenchResult> {
    if times.windows(2).any(|w| !(w[1] >= w[0])) || times.first().map_or(false, |&t| t < 0.0) {
        return Err(Error::Validation("quench times must be non-negative and ascending".into()));
    }
    let n = spec.n;
    let start = match initial {
        Some(s) if s.n_sites() != n => return Err(Error::Dimension { expected: n, got: s.n_sites() }),
        Some(s) => s.clone(),
        None => kind.initial_state(n, axis),
    };
    let prop = Propagator::new(spec, tol)?;
    let mut psi = start.into_amplitudes();
    let mut now = 0.0;
    let mut magnetization = Vec::with_capacity(times.len());
    let mut correlations = Vec::with_capacity(times.len());
    for &t in times {
        prop.run(&mut psi, now, t)?;
        now = t;
        let s = SpinState::from_amplitudes(n, psi.clone())?;
        magnetization.push(s.site_expectations(axis));
        correlations.push(connected_correlation(&s, axis));
    }
    Ok(QuenchResult { times: times.to_vec(), magnetization, correlations, axis })
}

fn sites_at(n: usize, centre: usize, r: usize) -> Vec<usize> {
    let mut v = Vec::new();
    if centre >= r {
        v.push(centre - r);
    }
    if centre + r < n {
        v.push(centre + r);
    }
    v
}

/// First time the series reaches `level`, interpolated linearly.
fn first_reach(times: &[f64], series: &[f64], level: f64) -> Option<f64> {
    if series.first().map_or(false, |&v| v >= level) {
        return Some(times[0]);
    }
    series.windows(2).enumerate().find(|(_, w)| w[1] >= level).map(|(k, w)| {
        let s = (level - w[0]) / (w[1] - w[0]);
        times[k] + s * (times[k + 1] - times[k])
    })
}

impl QuenchResult {
    fn n(&self) -> usize {
        self.magnetization.first().map_or(0, Vec::len)
    }

    /// Excitation density at distance `r` from the flipped spin,
    /// `(⟨σ⟩(t) − ⟨σ⟩(0))/2`, averaged over both sides.
    pub fn excitation_at(&self, centre: usize, r: usize) -> Vec<f64> {
        let sites = sites_at(self.n(), centre, r);
        let m0 = &self.magnetization[0];
        self.magnetization
            .iter()
            .map(|m| sites.iter().map(|&i| 0.5 * (m[i] - m0[i])).sum::<f64>() / sites.len().max(1) as f64)
            .collect()
    }

    /// Arrival time at each distance `1..=r_max` after a local quench:
    /// the half-height point on the rising edge of the first excitation
    /// peak. `None` where no peak forms in the window.
    pub fn local_arrivals(&self, centre: usize, r_max: usize) -> Vec<Option<f64>> {
        (1..=r_max)
            .map(|r| {
                let s = self.excitation_at(centre, r);
                let peak = (1..s.len().saturating_sub(1)).find(|&k| s[k] > s[k - 1] && s[k] >= s[k + 1] && s[k] > 1e-9)?;
                first_reach(&self.times, &s, 0.5 * s[peak])
            })
            .collect()
    }

    /// Connected correlation at distance `r` averaged over all pairs.
    pub fn correlation_at(&self, r: usize) -> Vec<f64> {
        let n = self.n();
        self.correlations
            .iter()
            .map(|c| {
                let pairs = n.saturating_sub(r);
                (0..pairs).map(|i| c[(i, i + r)]).sum::<f64>() / pairs.max(1) as f64
            })
            .collect()
    }

    /// Arrival time at each distance after a global quench: first crossing
    /// of `threshold` by the distance-averaged connected correlation.
    pub fn global_arrivals(&self, r_max: usize, threshold: f64) -> Vec<Option<f64>> {
        (1..=r_max).map(|r| first_reach(&self.times, &self.correlation_at(r), threshold)).collect()
    }
}

/// Least-squares fit of `t = a·r^b` in log space over the distances with
/// an arrival. Returns `(a, b)`.
pub fn light_cone_exponent(arrivals: &[Option<f64>]) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = arrivals
        .iter()
        .enumerate()
        .filter_map(|(k, t)| t.filter(|&t| t > 0.0).map(|t| (((k + 1) as f64).ln(), t.ln())))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Undefined("light-cone fit needs two arrivals"));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let b = sxy / sxx;
    Ok(((my - b * mx).exp(), b))
}
