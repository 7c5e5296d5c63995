//! Field ramps for adiabatic state preparation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    first_coupled_gap, lowest_eigenpairs, Axis, HamiltonianSpec, Propagator, Schedule, SpinState,
};
use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;
use crate::observables::Distribution;

/// Ramps decaying by `e^{−6}` over `t_f` are shifted so they end at zero.
const EXP_FOLDS: f64 = 6.0;
/// Grid size for the gap table behind a local adiabatic ramp.
pub const GAP_POINTS: usize = 400;
const GAP_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RampKind {
    Linear,
    Exponential,
    LocalAdiabatic,
}

/// First coupled gap sampled on an ascending field grid `0..=B0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapTable {
    pub fields: Vec<f64>,
    pub gaps: Vec<f64>,
}

impl GapTable {
    /// Samples `points` fields evenly on `[0, b0]` for `base + B Σσ^axis`.
    pub fn compute(base: &HamiltonianSpec<f64>, axis: Axis, b0: f64, points: usize) -> Result<Self> {
        if !(b0 > 0.0) || points < 2 {
            return Err(Error::Validation("gap table needs B0 > 0 and at least two points".into()));
        }
        let fields: Vec<f64> = (0..points).map(|k| b0 * k as f64 / (points - 1) as f64).collect();
        let gaps = fields
            .par_iter()
            .map(|&b| {
                let spec = base.clone().uniform_field(axis, b);
                first_coupled_gap(&spec, 0.0, axis).map(|g| g.gap)
            })
            .collect::<Result<Vec<_>>>()?;
        let table = Self { fields, gaps };
        table.check()?;
        Ok(table)
    }

    pub fn from_samples(fields: Vec<f64>, gaps: Vec<f64>) -> Result<Self> {
        let table = Self { fields, gaps };
        MonotoneCubic::new(table.fields.clone(), table.gaps.clone())?;
        table.check()?;
        Ok(table)
    }

    fn check(&self) -> Result<()> {
        if let Some((k, &g)) = self.gaps.iter().enumerate().find(|(_, &g)| !(g > GAP_FLOOR)) {
            return Err(Error::Divergence { field: self.fields[k], gap: g });
        }
        Ok(())
    }

    pub fn b0(&self) -> f64 {
        self.fields[self.fields.len() - 1]
    }

    /// Minimum gap and the field where it occurs.
    pub fn minimum(&self) -> (f64, f64) {
        let k = (0..self.gaps.len())
            .min_by(|&a, &b| self.gaps[a].total_cmp(&self.gaps[b]))
            .unwrap_or(0);
        (self.fields[k], self.gaps[k])
    }

    fn interpolant(&self) -> Result<MonotoneCubic<f64>> {
        MonotoneCubic::new(self.fields.clone(), self.gaps.clone())
    }

    /// `∫_0^{B0} dB / Δ²(B)` by classical fourth-order stepping on the grid.
    pub fn inverse_square_integral(&self) -> Result<f64> {
        Ok(*self.local_times(1.0)?.last().unwrap_or(&0.0))
    }

    /// Elapsed time when a ramp with constant adiabaticity `gamma`,
    /// starting at B0, passes each grid field (descending order).
    fn local_times(&self, gamma: f64) -> Result<Vec<f64>> {
        let gap = self.interpolant()?;
        let rate = |b: f64| -> f64 {
            let d = gap.eval(b);
            gamma / (d * d)
        };
        let n = self.fields.len();
        let mut t = vec![0.0; n];
        for k in 1..n {
            let hi = self.fields[n - k];
            let lo = self.fields[n - k - 1];
            let h = hi - lo;
            // dt/dB depends on B only, so the four stages collapse onto
            // three abscissae
            let k1 = rate(hi);
            let k23 = rate(hi - 0.5 * h);
            let k4 = rate(lo);
            t[k] = t[k - 1] + h * (k1 + 4.0 * k23 + k4) / 6.0;
        }
        Ok(t)
    }
}

/// Total ramp times that keep the adiabaticity `Δ²/|dB/dt|` at or above
/// `gamma` everywhere on the path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RampTimes {
    pub linear: f64,
    pub exponential: f64,
    pub local: f64,
}

pub fn equal_adiabaticity_times(table: &GapTable, gamma: f64) -> Result<RampTimes> {
    let b0 = table.b0();
    let min_sq = table.gaps.iter().map(|g| g * g).fold(f64::INFINITY, f64::min);
    let worst = table
        .fields
        .iter()
        .zip(&table.gaps)
        .map(|(b, g)| b / (g * g))
        .fold(0.0, f64::max);
    Ok(RampTimes {
        linear: gamma * b0 / min_sq,
        exponential: EXP_FOLDS * gamma * worst,
        local: gamma * table.inverse_square_integral()?,
    })
}

/// How a local adiabatic ramp is pinned down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalTarget {
    Gamma(f64),
    TotalTime(f64),
}

/// A field ramp from `B0` to zero over `t_f`.
#[derive(Debug, Clone, PartialEq)]
pub struct RampProfile {
    pub kind: RampKind,
    pub b0: f64,
    pub t_f: f64,
    pub tau: Option<f64>,
    pub gamma: Option<f64>,
    /// `B(t)` samples, ascending in time.
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    schedule: Schedule<f64>,
}

const SAMPLE_POINTS: usize = 401;

impl RampProfile {
    fn check(b0: f64, t_f: f64) -> Result<()> {
        if !(b0 > 0.0) || !(t_f > 0.0) || !b0.is_finite() || !t_f.is_finite() {
            return Err(Error::Validation("ramp needs finite B0 > 0 and t_f > 0".into()));
        }
        Ok(())
    }

    fn sampled(kind: RampKind, b0: f64, t_f: f64, tau: Option<f64>, gamma: Option<f64>, schedule: Schedule<f64>) -> Self {
        let times: Vec<f64> = (0..SAMPLE_POINTS).map(|k| t_f * k as f64 / (SAMPLE_POINTS - 1) as f64).collect();
        let values = times.iter().map(|&t| b0 * schedule.eval(t)).collect();
        Self { kind, b0, t_f, tau, gamma, times, values, schedule }
    }

    /// `B0 (1 − t/t_f)`.
    pub fn linear(b0: f64, t_f: f64) -> Result<Self> {
        Self::check(b0, t_f)?;
        let s = Schedule::PiecewiseLinear { times: vec![0.0, t_f], values: vec![1.0, 0.0] };
        Ok(Self::sampled(RampKind::Linear, b0, t_f, None, None, s))
    }

    /// `B0 e^{−t/τ}` with `t_f = 6τ`, shifted and rescaled so that the
    /// ramp starts at B0 and ends at exactly zero.
    pub fn exponential(b0: f64, t_f: f64) -> Result<Self> {
        Self::check(b0, t_f)?;
        let tau = t_f / EXP_FOLDS;
        let s = Schedule::Exponential { tau, floor: (-EXP_FOLDS).exp() };
        Ok(Self::sampled(RampKind::Exponential, b0, t_f, Some(tau), None, s))
    }

    /// Ramp solving `dB/dt = −Δ²(B)/γ` from the table's top field to zero.
    pub fn local_adiabatic(table: &GapTable, target: LocalTarget) -> Result<Self> {
        let b0 = table.b0();
        let integral = table.inverse_square_integral()?;
        let gamma = match target {
            LocalTarget::Gamma(g) if g > 0.0 && g.is_finite() => g,
            LocalTarget::TotalTime(t) if t > 0.0 && t.is_finite() => t / integral,
            _ => return Err(Error::Validation("adiabaticity and ramp time must be positive".into())),
        };
        let times = table.local_times(gamma)?;
        let t_f = times[times.len() - 1];
        let values: Vec<f64> = table.fields.iter().rev().map(|b| b / b0).collect();
        let schedule = Schedule::Tabulated { times: times.clone(), values: values.clone() };
        let values = values.iter().map(|v| v * b0).collect();
        Ok(Self { kind: RampKind::LocalAdiabatic, b0, t_f, tau: None, gamma: Some(gamma), times, values, schedule })
    }

    /// Builds any ramp kind; local adiabatic ramps need a gap table.
    pub fn build(kind: RampKind, b0: f64, t_f: f64, table: Option<&GapTable>) -> Result<Self> {
        match kind {
            RampKind::Linear => Self::linear(b0, t_f),
            RampKind::Exponential => Self::exponential(b0, t_f),
            RampKind::LocalAdiabatic => {
                let table = table.ok_or_else(|| Error::Validation("local adiabatic ramp needs a gap table".into()))?;
                if (table.b0() - b0).abs() > 1e-12 * b0 {
                    return Err(Error::Validation("gap table does not end at B0".into()));
                }
                Self::local_adiabatic(table, LocalTarget::TotalTime(t_f))
            }
        }
    }

    /// Dimensionless shape `B(t)/B0`.
    pub fn schedule(&self) -> &Schedule<f64> {
        &self.schedule
    }

    pub fn field_at(&self, t: f64) -> f64 {
        self.b0 * self.schedule.eval(t)
    }
}

/// Per-time populations of the target ground manifold and end-of-ramp
/// Ising-axis statistics.
#[derive(Debug, Clone)]
pub struct AdiabaticResult {
    pub times: Vec<f64>,
    pub ground_probability: Vec<f64>,
    pub field: Vec<f64>,
    pub final_state: SpinState<f64>,
    /// Ising-axis outcome probabilities at the end of the ramp.
    pub final_distribution: Distribution<f64>,
    pub ground_degeneracy: usize,
}

/// Lowest eigenvectors of `spec` that are degenerate with its ground
/// level.
pub fn ground_manifold(spec: &HamiltonianSpec<f64>) -> Result<Vec<SpinState<f64>>> {
    let op = spec.operator(0.0)?;
    let dim = op.dim();
    let tol = 1e-9 * op.norm_bound().max(1.0);
    let mut k = dim.min(4);
    loop {
        let pairs = lowest_eigenpairs(&op, k)?;
        let e0 = pairs[0].value;
        let m = pairs.iter().take_while(|p| p.value - e0 <= tol).count();
        if m < k || k == dim {
            return pairs
                .into_iter()
                .take(m)
                .map(|p| SpinState::from_amplitudes(spec.n, p.vector))
                .collect();
        }
        k = (2 * k).min(dim);
    }
}

/// Ramps `base + B(t) Σσ^axis` from B0 to zero, starting in the field
/// term's ground state (every spin down along `axis`), and records the
/// population of the ground manifold of `base` at `record_times`.
pub fn run_adiabatic(
    base: &HamiltonianSpec<f64>,
    axis: Axis,
    ramp: &RampProfile,
    record_times: &[f64],
    tol: f64,
) -> Result<AdiabaticResult> {
    if record_times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Validation("record times must be strictly increasing".into()));
    }
    if record_times.iter().any(|&t| t < 0.0 || t > ramp.t_f * (1.0 + 1e-12)) {
        return Err(Error::Validation("record times must lie within the ramp".into()));
    }
    let n = base.n;
    let spec = base
        .clone()
        .field_scheduled(axis, vec![ramp.b0; n], ramp.schedule().clone());
    let target = ground_manifold(base)?;
    let prop = Propagator::new(&spec, tol)?;
    let mut psi = SpinState::<f64>::polarized(n, axis, false).into_amplitudes();
    let mut now = 0.0;
    let mut ground_probability = Vec::with_capacity(record_times.len());
    for &t in record_times {
        let t = t.min(ramp.t_f);
        prop.run(&mut psi, now, t)?;
        now = t;
        let s = SpinState::from_amplitudes(n, psi.clone())?;
        ground_probability.push(target.iter().map(|g| g.fidelity(&s)).sum());
    }
    prop.run(&mut psi, now, ramp.t_f)?;
    let final_state = SpinState::from_amplitudes(n, psi)?;
    let ising_axis = base.couplings.first().map(|c| c.axis).unwrap_or(Axis::X);
    Ok(AdiabaticResult {
        times: record_times.to_vec(),
        ground_probability,
        field: record_times.iter().map(|&t| ramp.field_at(t)).collect(),
        final_distribution: Distribution::from_state(&final_state, ising_axis),
        final_state,
        ground_degeneracy: target.len(),
    })
}
