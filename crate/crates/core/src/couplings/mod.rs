//! Phonon-mediated Ising couplings: forward evaluation, power-law fits,
//! inverse design and error budgets.

mod design;

pub use design::{design_couplings, DesignBounds, DesignOptions, DesignResult};

use nalgebra::DMatrix;

use crate::crystal::{lamb_dicke_matrix, IonCrystal, HBAR};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Symmetric coupling matrix with zero diagonal, rad/ms.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix<T: Real> {
    j: DMatrix<T>,
}

impl<T: Real> CouplingMatrix<T> {
    /// Validates symmetry (to a relative 1e-12) and a zero diagonal, then
    /// stores the exactly symmetrised matrix.
    pub fn new(j: DMatrix<T>) -> Result<Self> {
        let n = j.nrows();
        if j.ncols() != n {
            return Err(Error::Dimension { expected: n, got: j.ncols() });
        }
        let scale = j.amax().max(T::TINY);
        let tol = scale * T::lit(1e-12).max(T::EPS * T::lit(8.0));
        for i in 0..n {
            if j[(i, i)].abs() > tol {
                return Err(Error::Validation(format!("coupling diagonal J[{i}][{i}] must be zero")));
            }
            for k in i + 1..n {
                if (j[(i, k)] - j[(k, i)]).abs() > tol {
                    return Err(Error::Validation(format!("coupling matrix not symmetric at ({i}, {k})")));
                }
            }
        }
        Ok(Self::symmetrised(j))
    }

    fn symmetrised(mut j: DMatrix<T>) -> Self {
        let n = j.nrows();
        let half = T::lit(0.5);
        for i in 0..n {
            j[(i, i)] = T::zero();
            for k in i + 1..n {
                let v = half * (j[(i, k)] + j[(k, i)]);
                j[(i, k)] = v;
                j[(k, i)] = v;
            }
        }
        Self { j }
    }

    pub fn zeros(n: usize) -> Self {
        Self { j: DMatrix::zeros(n, n) }
    }

    /// `J_ij = J0 / |i − j|^alpha`.
    pub fn power_law(n: usize, j0: T, alpha: T) -> Self {
        Self::from_distance(n, |r| j0 / T::from_usize_lossy(r).powf(alpha))
    }

    /// Couplings depending only on `|i − j|`.
    pub fn from_distance(n: usize, f: impl Fn(usize) -> T) -> Self {
        let mut j = DMatrix::zeros(n, n);
        for a in 0..n {
            for b in a + 1..n {
                let v = f(b - a);
                j[(a, b)] = v;
                j[(b, a)] = v;
            }
        }
        Self { j }
    }

    pub fn n(&self) -> usize {
        self.j.nrows()
    }

    pub fn get(&self, i: usize, k: usize) -> T {
        self.j[(i, k)]
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.j
    }

    /// Largest |J_ij|.
    pub fn max_abs(&self) -> T {
        self.j.amax()
    }

    pub fn scaled(&self, c: T) -> Self {
        Self { j: &self.j * c }
    }

    pub fn frobenius_distance(&self, other: &Self) -> T {
        (&self.j - &other.j).norm()
    }

    /// Upper-triangle entries `(i, j, J_ij)`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| (i + 1..n).map(move |k| (i, k, self.j[(i, k)])))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamSpec<T> {
    /// Per-ion Rabi frequencies, rad/ms.
    pub rabi: Vec<T>,
    /// Beatnote detuning from the carrier, rad/ms.
    pub mu: T,
    /// Wavevector difference, rad/m.
    pub delta_k: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tone<T> {
    pub mu: T,
    pub rabi: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiToneSpec<T> {
    pub tones: Vec<Tone<T>>,
    pub delta_k: T,
}

/// Recoil frequency `ħδk²/2M` in rad/ms.
pub fn recoil_frequency<T: Real>(delta_k: T, mass: T) -> T {
    T::lit(HBAR) * delta_k * delta_k / (T::lit(2.0) * mass) / T::lit(1e3)
}

fn check_resonance<T: Real>(crystal: &IonCrystal<T>, mu: T) -> Result<()> {
    for (m, &w) in crystal.mode_freqs.iter().enumerate() {
        if (mu - w).abs() <= T::lit(1e-9) * w.abs() {
            return Err(Error::Resonance { mode: m, omega: w.as_f64(), mu: mu.as_f64() });
        }
    }
    Ok(())
}

// Σ_m b_im b_jm / (2ω_m(μ − ω_m)) for one detuning, as an N×N kernel.
fn mode_kernel<T: Real>(crystal: &IonCrystal<T>, mu: T) -> Result<DMatrix<T>> {
    check_resonance(crystal, mu)?;
    let b = &crystal.mode_matrix;
    let weights: Vec<T> = crystal
        .mode_freqs
        .iter()
        .map(|&w| T::one() / (T::lit(2.0) * w * (mu - w)))
        .collect();
    let n = crystal.n_ions();
    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut s = T::zero();
            for (m, &wt) in weights.iter().enumerate() {
                s += b[(i, m)] * b[(j, m)] * wt;
            }
            k[(i, j)] = s;
            k[(j, i)] = s;
        }
    }
    Ok(k)
}

fn accumulate_tone<T: Real>(
    out: &mut DMatrix<T>,
    kernel: &DMatrix<T>,
    rabi: &[T],
    recoil: T,
) {
    let n = out.nrows();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out[(i, j)] += rabi[i] * rabi[j] * recoil * kernel[(i, j)];
            }
        }
    }
}

fn check_rabi<T: Real>(rabi: &[T], n: usize) -> Result<()> {
    if rabi.len() != n {
        return Err(Error::Dimension { expected: n, got: rabi.len() });
    }
    if rabi.iter().any(|&r| r < T::zero() || !r.is_finite()) {
        return Err(Error::Validation("Rabi frequencies must be finite and non-negative".into()));
    }
    Ok(())
}

/// Single-beatnote Ising couplings.
pub fn ising_couplings<T: Real>(
    crystal: &IonCrystal<T>,
    beam: &BeamSpec<T>,
    mass: T,
) -> Result<CouplingMatrix<T>> {
    let n = crystal.n_ions();
    check_rabi(&beam.rabi, n)?;
    let kernel = mode_kernel(crystal, beam.mu)?;
    let mut j = DMatrix::zeros(n, n);
    accumulate_tone(&mut j, &kernel, &beam.rabi, recoil_frequency(beam.delta_k, mass));
    Ok(CouplingMatrix::symmetrised(j))
}

/// Couplings from several simultaneous beatnotes.
pub fn multi_tone_couplings<T: Real>(
    crystal: &IonCrystal<T>,
    spec: &MultiToneSpec<T>,
    mass: T,
) -> Result<CouplingMatrix<T>> {
    let n = crystal.n_ions();
    let recoil = recoil_frequency(spec.delta_k, mass);
    let mut j = DMatrix::zeros(n, n);
    for tone in &spec.tones {
        check_rabi(&tone.rabi, n)?;
        let kernel = mode_kernel(crystal, tone.mu)?;
        accumulate_tone(&mut j, &kernel, &tone.rabi, recoil);
    }
    Ok(CouplingMatrix::symmetrised(j))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit<T> {
    /// Nearest-neighbour amplitude, carrying the overall sign of J.
    pub j0: T,
    pub alpha: T,
    /// RMS residual of the regression in natural-log space.
    pub rms_residual: T,
    /// Number of zero off-diagonal pairs left out of the fit.
    pub excluded: usize,
}

/// Least-squares fit of `log|J|` against `log r`, with |J_ij| first averaged
/// over pairs at equal distance `r = |i − j|`.
pub fn fit_power_law<T: Real>(coupling: &CouplingMatrix<T>) -> Result<PowerLawFit<T>> {
    let n = coupling.n();
    if n < 3 {
        return Err(Error::Validation("power-law fit needs at least 3 ions".into()));
    }
    let mut excluded = 0;
    let mut signed_total = T::zero();
    let mut points: Vec<(T, T)> = Vec::new();
    for r in 1..n {
        let mut sum = T::zero();
        let mut count = 0usize;
        for i in 0..n - r {
            let v = coupling.get(i, i + r);
            signed_total += v;
            if v == T::zero() {
                excluded += 1;
            } else {
                sum += v.abs();
                count += 1;
            }
        }
        if count > 0 {
            let mean = sum / T::from_usize_lossy(count);
            points.push((T::from_usize_lossy(r).ln(), mean.ln()));
        }
    }
    if points.len() < 2 {
        return Err(Error::Undefined("power-law fit needs two non-zero distance classes"));
    }
    let m = T::from_usize_lossy(points.len());
    let mx = points.iter().fold(T::zero(), |s, p| s + p.0) / m;
    let my = points.iter().fold(T::zero(), |s, p| s + p.1) / m;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for &(x, y) in &points {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss = points.iter().fold(T::zero(), |s, &(x, y)| {
        let e = y - (intercept + slope * x);
        s + e * e
    });
    let sign = if signed_total < T::zero() { -T::one() } else { T::one() };
    Ok(PowerLawFit {
        j0: sign * intercept.exp(),
        alpha: -slope,
        rms_residual: (ss / m).sqrt(),
        excluded,
    })
}

/// Motional error `ε = Σ_{i,m} |α_im(τ)|²` left after an interaction of
/// duration `tau` (ms).
pub fn spin_motion_error<T: Real>(
    crystal: &IonCrystal<T>,
    beam: &BeamSpec<T>,
    mass: T,
    tau: T,
) -> Result<T> {
    let n = crystal.n_ions();
    check_rabi(&beam.rabi, n)?;
    check_resonance(crystal, beam.mu)?;
    let eta = lamb_dicke_matrix(crystal, beam.delta_k, mass)?;
    let two = T::lit(2.0);
    let mut eps = T::zero();
    for (m, &w) in crystal.mode_freqs.iter().enumerate() {
        let delta = beam.mu - w;
        // |1 − e^{−iδτ}|² = 2 − 2cos δτ
        let loop_gap = two - two * (delta * tau).cos();
        for i in 0..n {
            let amp = eta[(i, m)] * beam.rabi[i] / (two * delta);
            eps += amp * amp * loop_gap;
        }
    }
    Ok(eps)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionEstimate<T> {
    pub rate: T,
    /// False when the detuning does not dominate the linewidth by at least
    /// a factor of 10.
    pub far_detuned: bool,
}

/// Raman spontaneous-emission rate `Γ = γΩ/(4Δ)`.
pub fn spontaneous_emission_rate<T: Real>(gamma: T, omega_rabi: T, delta: T) -> Result<EmissionEstimate<T>> {
    if delta == T::zero() {
        return Err(Error::Division("spontaneous_emission_rate: zero detuning"));
    }
    Ok(EmissionEstimate {
        rate: gamma * omega_rabi / (T::lit(4.0) * delta),
        far_detuned: delta.abs() >= T::lit(10.0) * gamma.abs(),
    })
}
