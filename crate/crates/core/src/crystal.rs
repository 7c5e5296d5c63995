//! Linear ion crystals: axial equilibrium and transverse normal modes.
//!
//! Lengths are measured in the scale `ℓ = (e²/4πε₀Mω_z²)^{1/3}` and angular
//! frequencies in rad/ms. In these units the axial potential energy of the
//! chain is `Σ ½(x² + q·x⁴) + Σ_{i<j} 1/|x_i − x_j|`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const HBAR: f64 = 1.054_571_817e-34;
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Mass of ¹⁷¹Yb⁺ in kg.
pub const YB171_MASS: f64 = 170.936_331_5 * ATOMIC_MASS_UNIT;

const MAX_NEWTON_ITERATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct TrapSpec<T> {
    pub n_ions: usize,
    /// Axial COM frequency, rad/ms.
    pub omega_z: T,
    /// Transverse COM frequency, rad/ms.
    pub omega_x: T,
    /// Dimensionless quartic axial coefficient.
    pub quartic_coeff: T,
    /// Ion mass, kg.
    pub ion_mass: T,
    /// Ion charge, C.
    pub charge: T,
}

impl<T: Real> TrapSpec<T> {
    /// Harmonic trap holding singly ionised ¹⁷¹Yb.
    pub fn ytterbium(n_ions: usize, omega_z: T, omega_x: T) -> Self {
        Self {
            n_ions,
            omega_z,
            omega_x,
            quartic_coeff: T::zero(),
            ion_mass: T::lit(YB171_MASS),
            charge: T::lit(ELEMENTARY_CHARGE),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_ions == 0 {
            return Err(Error::Validation("n_ions must be at least 1".into()));
        }
        if !(self.omega_z > T::zero()) {
            return Err(Error::Validation("omega_z must be positive".into()));
        }
        if !(self.omega_x > self.omega_z) {
            return Err(Error::Validation(
                "omega_x must exceed omega_z for a linear chain".into(),
            ));
        }
        if self.quartic_coeff < T::zero() {
            return Err(Error::Validation("quartic_coeff must be non-negative".into()));
        }
        if !(self.ion_mass > T::zero()) || !(self.charge > T::zero()) {
            return Err(Error::Validation("ion mass and charge must be positive".into()));
        }
        Ok(())
    }

    /// The length unit ℓ in metres.
    pub fn length_scale(&self) -> T {
        let omega_si = self.omega_z * T::lit(1e3);
        let e2 = self.charge * self.charge;
        let num = e2 / (T::lit(4.0) * T::PI() * T::lit(EPSILON_0));
        (num / (self.ion_mass * omega_si * omega_si)).powf(T::lit(1.0 / 3.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IonCrystal<T: Real> {
    /// Axial positions in units of ℓ, increasing.
    pub positions: Vec<T>,
    /// Transverse mode angular frequencies (rad/ms), descending.
    pub mode_freqs: Vec<T>,
    /// `b[(i, m)]`: participation of ion `i` in mode `m`.
    pub mode_matrix: DMatrix<T>,
}

impl<T: Real> IonCrystal<T> {
    pub fn new(trap: &TrapSpec<T>) -> Result<Self> {
        let positions = equilibrium_positions(trap)?;
        let (mode_freqs, mode_matrix) = transverse_modes(trap, &positions)?;
        Ok(Self { positions, mode_freqs, mode_matrix })
    }

    pub fn n_ions(&self) -> usize {
        self.positions.len()
    }

    /// Spread between the highest and lowest mode frequency.
    pub fn bandwidth(&self) -> T {
        let n = self.mode_freqs.len();
        self.mode_freqs[0] - self.mode_freqs[n - 1]
    }
}

/// Gradient of the scaled axial potential.
pub fn potential_gradient<T: Real>(x: &[T], quartic: T) -> Vec<T> {
    let n = x.len();
    let two = T::lit(2.0);
    (0..n)
        .map(|i| {
            let mut g = x[i] + two * quartic * x[i] * x[i] * x[i];
            for j in 0..n {
                if j != i {
                    let d = x[i] - x[j];
                    g -= d.signum() / (d * d);
                }
            }
            g
        })
        .collect()
}

fn potential<T: Real>(x: &[T], quartic: T) -> T {
    let half = T::lit(0.5);
    let mut v = T::zero();
    for (i, &xi) in x.iter().enumerate() {
        v += half * (xi * xi + quartic * xi * xi * xi * xi);
        for &xj in &x[i + 1..] {
            v += T::one() / (xj - xi).abs();
        }
    }
    v
}

fn axial_hessian<T: Real>(x: &[T], quartic: T) -> DMatrix<T> {
    let n = x.len();
    let two = T::lit(2.0);
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut diag = T::one() + T::lit(6.0) * quartic * x[i] * x[i];
        for j in 0..n {
            if j != i {
                let c = two / (x[i] - x[j]).abs().powi(3);
                diag += c;
                h[(i, j)] = -c;
            }
        }
        h[(i, i)] = diag;
    }
    h
}

fn max_abs<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, &g| m.max(g.abs()))
}

fn is_ordered<T: Real>(x: &[T]) -> bool {
    x.windows(2).all(|w| w[1] > w[0])
}

/// Gradient tolerance: 1e-10 in double precision, relaxed to the
/// representable level for narrower types.
pub fn gradient_tolerance<T: Real>() -> T {
    T::lit(1e-10).max(T::EPS * T::lit(1e3))
}

/// Axial equilibrium by damped Newton iteration from a uniform chain.
pub fn equilibrium_positions<T: Real>(trap: &TrapSpec<T>) -> Result<Vec<T>> {
    trap.validate()?;
    let n = trap.n_ions;
    if n == 1 {
        return Ok(vec![T::zero()]);
    }
    let q = trap.quartic_coeff;
    let spacing = T::lit(2.0 * (n as f64).powf(-0.56));
    let mid = T::lit((n as f64 - 1.0) / 2.0);
    let mut x: Vec<T> = (0..n).map(|i| (T::from_usize_lossy(i) - mid) * spacing).collect();
    let tol = gradient_tolerance::<T>();

    let mut grad = potential_gradient(&x, q);
    for _ in 0..MAX_NEWTON_ITERATIONS {
        if max_abs(&grad) < tol {
            symmetrize(&mut x, q);
            return Ok(x);
        }
        let h = axial_hessian(&x, q);
        let g = DVector::from_column_slice(&grad);
        let mut dir = match h.clone().cholesky() {
            Some(ch) => -ch.solve(&g),
            None => -g.clone(),
        };
        if dir.dot(&g) >= T::zero() {
            dir = -g.clone();
        }
        let v0 = potential(&x, q);
        let mut step = T::one();
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<T> = x.iter().zip(dir.iter()).map(|(&a, &d)| a + step * d).collect();
            if is_ordered(&trial) {
                let v1 = potential(&trial, q);
                let g1 = potential_gradient(&trial, q);
                // near the minimum the energy change is below rounding, accept on gradient
                if v1 <= v0 || max_abs(&g1) < max_abs(&grad) {
                    x = trial;
                    grad = g1;
                    accepted = true;
                    break;
                }
            }
            step *= T::lit(0.5);
        }
        if !accepted {
            break;
        }
    }
    let residual = max_abs(&grad);
    if residual < tol {
        symmetrize(&mut x, q);
        return Ok(x);
    }
    Err(Error::Solver { iterations: MAX_NEWTON_ITERATIONS, residual: residual.as_f64() })
}

// The potential is even, so the minimum is mirror symmetric; remove the
// last-bit asymmetry left by the iteration.
fn symmetrize<T: Real>(x: &mut [T], q: T) {
    let n = x.len();
    let half = T::lit(0.5);
    let sym: Vec<T> = (0..n).map(|i| half * (x[i] - x[n - 1 - i])).collect();
    if max_abs(&potential_gradient(&sym, q)) <= max_abs(&potential_gradient(x, q)) {
        x.copy_from_slice(&sym);
    }
}

/// Transverse Hessian in units of ω_z².
pub fn transverse_hessian<T: Real>(trap: &TrapSpec<T>, positions: &[T]) -> DMatrix<T> {
    let n = positions.len();
    let ratio = trap.omega_x / trap.omega_z;
    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut diag = ratio * ratio;
        for j in 0..n {
            if j != i {
                let c = T::one() / (positions[i] - positions[j]).abs().powi(3);
                diag -= c;
                k[(i, j)] = c;
            }
        }
        k[(i, i)] = diag;
    }
    k
}

/// Transverse mode frequencies (descending) and the mode matrix.
pub fn transverse_modes<T: Real>(
    trap: &TrapSpec<T>,
    positions: &[T],
) -> Result<(Vec<T>, DMatrix<T>)> {
    trap.validate()?;
    let n = positions.len();
    if n != trap.n_ions {
        return Err(Error::Dimension { expected: trap.n_ions, got: n });
    }
    let eig = transverse_hessian(trap, positions).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut freqs = Vec::with_capacity(n);
    let mut modes = DMatrix::zeros(n, n);
    for (m, &k) in order.iter().enumerate() {
        let lambda = eig.eigenvalues[k];
        if lambda <= T::zero() {
            return Err(Error::Instability { eigenvalue: lambda.as_f64() });
        }
        freqs.push(trap.omega_z * lambda.sqrt());
        let mut col = eig.eigenvectors.column(k).into_owned();
        fix_sign(&mut col);
        modes.set_column(m, &col);
    }
    Ok((freqs, modes))
}

/// Makes the first significant component positive.
pub(crate) fn fix_sign<T: Real>(v: &mut DVector<T>) {
    let scale = v.amax();
    let thresh = scale * T::lit(1e-6);
    if let Some(&first) = v.iter().find(|c| c.abs() > thresh) {
        if first < T::zero() {
            v.neg_mut();
        }
    }
}

/// Lamb-Dicke matrix `η_im = b_im δk √(ħ/2Mω_m)`; δk in rad/m, mass in kg.
pub fn lamb_dicke_matrix<T: Real>(crystal: &IonCrystal<T>, delta_k: T, mass: T) -> Result<DMatrix<T>> {
    if !(delta_k > T::zero()) {
        return Err(Error::Validation("delta_k must be positive".into()));
    }
    let n = crystal.n_ions();
    let mut eta = DMatrix::zeros(n, crystal.mode_freqs.len());
    for (m, &w) in crystal.mode_freqs.iter().enumerate() {
        if w == T::zero() {
            return Err(Error::Division("lamb_dicke_matrix: zero mode frequency"));
        }
        let w_si = w * T::lit(1e3);
        let spread = (T::lit(HBAR) / (T::lit(2.0) * mass * w_si)).sqrt();
        for i in 0..n {
            eta[(i, m)] = crystal.mode_matrix[(i, m)] * delta_k * spread;
        }
    }
    Ok(eta)
}
