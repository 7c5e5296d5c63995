//! Modulated-field spectroscopy of many-body gaps.

use rayon::prelude::*;

use crate::dynamics::{ground_state, Axis, HamiltonianSpec, Propagator, Schedule};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SpectroscopyScan {
    pub omegas: Vec<f64>,
    /// `1 − P(ground)` after the probe.
    pub depletion: Vec<f64>,
    pub probe_time: f64,
    pub warnings: Vec<String>,
}

impl SpectroscopyScan {
    /// Modulation frequency with the strongest response.
    pub fn peak(&self) -> (f64, f64) {
        let k = (0..self.depletion.len())
            .max_by(|&a, &b| self.depletion[a].total_cmp(&self.depletion[b]))
            .unwrap_or(0);
        (self.omegas[k], self.depletion[k])
    }
}

/// Prepares the ground state of `base + B0 Σσ^axis`, drives the field as
/// `B0 + Bp sin(ωt)` for the probe time (default `3/Bp`) and reports the
/// ground-state depletion for every `ω`.
pub fn spectroscopy_scan(
    base: &HamiltonianSpec<f64>,
    axis: Axis,
    b0: f64,
    bp: f64,
    omegas: &[f64],
    probe_time: Option<f64>,
    tol: f64,
) -> Result<SpectroscopyScan> {
    let probe_time = match probe_time {
        Some(t) if t > 0.0 => t,
        Some(_) => return Err(Error::Validation("probe time must be positive".into())),
        None if bp > 0.0 => 3.0 / bp,
        None => return Err(Error::Validation("default probe time 3/Bp needs Bp > 0".into())),
    };
    let mut warnings = Vec::new();
    let scale = base.couplings.iter().map(|c| c.j.max_abs()).fold(0.0, f64::max);
    if scale > 0.0 && bp.abs() > 0.1 * scale {
        warnings.push(format!("probe amplitude {bp} is not small against the coupling scale {scale}"));
    }
    let n = base.n;
    let (_, g) = ground_state(&base.clone().uniform_field(axis, b0), 0.0)?;
    let depletion = omegas
        .par_iter()
        .map(|&omega| {
            let spec = base.clone().field_scheduled(
                axis,
                vec![1.0; n],
                Schedule::Sinusoidal { offset: b0, amplitude: bp, omega, phase: 0.0 },
            );
            let prop = Propagator::new(&spec, tol)?;
            let mut psi = g.amplitudes().to_vec();
            prop.run(&mut psi, 0.0, probe_time)?;
            let overlap: f64 = g.amplitudes().iter().zip(&psi).map(|(a, b)| a.conj() * b).sum::<num_complex::Complex64>().norm_sqr();
            Ok(1.0 - overlap)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectroscopyScan { omegas: omegas.to_vec(), depletion, probe_time, warnings })
}

/// Peak response frequency for each static field `B0`: an estimate of
/// the first coupled gap along the ramp.
pub fn gap_valley(
    base: &HamiltonianSpec<f64>,
    axis: Axis,
    fields: &[f64],
    bp: f64,
    omegas: &[f64],
    probe_time: Option<f64>,
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    fields
        .iter()
        .map(|&b0| {
            let scan = spectroscopy_scan(base, axis, b0, bp, omegas, probe_time, tol)?;
            Ok((b0, scan.peak().0))
        })
        .collect()
}
