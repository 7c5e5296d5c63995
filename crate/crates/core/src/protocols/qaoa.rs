//! Single-layer and multi-layer QAOA on the long-range transverse Ising
//! model, evaluated exactly or from sampled shots.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::couplings::CouplingMatrix;
use crate::dynamics::{lowest_eigenpairs, measure, pauli, Axis, HamiltonianSpec, SpinState};
use crate::error::{Error, Result};
use crate::observables::Distribution;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    pub betas: Vec<f64>,
    pub gammas: Vec<f64>,
}

impl QaoaParams {
    pub fn p(&self) -> usize {
        self.betas.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.betas.is_empty() || self.betas.len() != self.gammas.len() {
            return Err(Error::Validation("QAOA needs p ≥ 1 matching betas and gammas".into()));
        }
        if self.betas.iter().chain(&self.gammas).any(|v| !v.is_finite()) {
            return Err(Error::Validation("QAOA angles must be finite".into()));
        }
        Ok(())
    }

    fn flat(&self) -> Vec<f64> {
        self.betas.iter().chain(&self.gammas).copied().collect()
    }

    fn from_flat(x: &[f64]) -> Self {
        let p = x.len() / 2;
        Self { betas: x[..p].to_vec(), gammas: x[p..].to_vec() }
    }
}

/// How energies are estimated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Estimator {
    Exact,
    /// Separate x- and y-basis shot records per energy evaluation.
    Shots { shots: u64, seed: u64 },
}

/// `H = H_A + H_B` with `H_A = Σ J_ij σ_x σ_x` and `H_B = B Σσ_y`.
///
/// States are held in the σ_x product basis, where `H_A` is diagonal and
/// σ_y keeps the same 2×2 form as in the σ_z basis.
#[derive(Debug, Clone)]
pub struct QaoaProblem {
    n: usize,
    b: f64,
    ising: Vec<f64>,
    start: SpinState<f64>,
    pub e_ground: f64,
    pub e_max: f64,
}

impl QaoaProblem {
    pub fn new(j: &CouplingMatrix<f64>, b: f64) -> Result<Self> {
        let n = j.n();
        if n == 0 || n > 24 {
            return Err(Error::Validation("QAOA supports 1..=24 sites".into()));
        }
        let pairs: Vec<_> = j.pairs().collect();
        let ising: Vec<f64> = (0..1usize << n)
            .map(|s| pairs.iter().map(|&(a, c, v)| if (s >> a & 1) == (s >> c & 1) { v } else { -v }).sum())
            .collect();
        let spec = HamiltonianSpec::new(n).coupling(Axis::X, j.clone()).uniform_field(Axis::Y, b);
        let e_ground = lowest_eigenpairs(&spec.operator(0.0)?, 1)?[0].value;
        let e_max = -lowest_eigenpairs(&spec.scaled(-1.0).operator(0.0)?, 1)?[0].value;
        if !(e_max > e_ground) {
            return Err(Error::Undefined("flat spectrum: performance ratio undefined"));
        }
        // the mixer ground state, every spin down along y, in the x basis
        let y_down = SpinState::<f64>::polarized(n, Axis::Y, false);
        let start = SpinState::from_amplitudes(n, y_down.in_basis(Axis::X))?;
        Ok(Self { n, b, ising, start, e_ground, e_max })
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    /// `Π_k e^{−iβ_k H_B} e^{−iγ_k H_A} |ψ0⟩`, in the x basis.
    pub fn state(&self, params: &QaoaParams) -> Result<SpinState<f64>> {
        params.validate()?;
        let mut s = self.start.clone();
        let y = pauli::<f64>(Axis::Y);
        for (beta, gamma) in params.betas.iter().zip(&params.gammas) {
            for (a, e) in s.amplitudes_mut().iter_mut().zip(&self.ising) {
                *a *= Complex64::from_polar(1.0, -gamma * e);
            }
            let th = beta * self.b;
            let (c, sn) = (th.cos(), th.sin());
            let i_s = Complex64::new(0.0, -sn);
            let rot = [
                [Complex64::new(c, 0.0) + i_s * y[0][0], i_s * y[0][1]],
                [i_s * y[1][0], Complex64::new(c, 0.0) + i_s * y[1][1]],
            ];
            for k in 0..self.n {
                s.apply_site(k, rot);
            }
        }
        Ok(s)
    }

    fn ising_energy(&self, probs: &[f64]) -> f64 {
        probs.iter().zip(&self.ising).map(|(p, e)| p * e).sum()
    }

    pub fn energy(&self, params: &QaoaParams, est: Estimator) -> Result<f64> {
        let s = self.state(params)?;
        match est {
            Estimator::Exact => {
                let ea = self.ising_energy(&s.probabilities());
                let eb: f64 = s.site_expectations(Axis::Y).iter().sum();
                Ok(ea + self.b * eb)
            }
            Estimator::Shots { shots, seed } => {
                // the held basis plays the role of z: measuring "z" here
                // measures σ_x, measuring y measures σ_y
                let x = Distribution::<f64>::from_shots(&measure(&s, Axis::Z, shots, seed)?)?;
                let y = Distribution::<f64>::from_shots(&measure(&s, Axis::Y, shots, seed ^ 0x9e37_79b9_7f4a_7c15)?)?;
                let ea = self.ising_energy(&x.probs);
                let eb: f64 = y
                    .probs
                    .iter()
                    .enumerate()
                    .map(|(b, p)| p * (2.0 * b.count_ones() as f64 - self.n as f64))
                    .sum();
                Ok(ea + self.b * eb)
            }
        }
    }

    /// `η = (E − E_max)/(E_gs − E_max)`.
    pub fn eta_of(&self, energy: f64) -> f64 {
        (energy - self.e_max) / (self.e_ground - self.e_max)
    }

    pub fn eta(&self, params: &QaoaParams, est: Estimator) -> Result<f64> {
        Ok(self.eta_of(self.energy(params, est)?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub beta_points: usize,
    pub gamma_points: usize,
    /// Largest `β·B`; `β` spans `[0, beta_span/B)`.
    pub beta_span: f64,
    /// Largest `γ·J_max`.
    pub gamma_span: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            beta_points: 41,
            gamma_points: 41,
            beta_span: std::f64::consts::PI,
            gamma_span: std::f64::consts::FRAC_PI_2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentSpec {
    /// Starting angles; the midpoint of the grid box when absent.
    pub initial: Option<QaoaParams>,
    /// Initial step length along the normalized gradient, rad.
    pub step: f64,
    /// Finite-difference offset, rad.
    pub delta: f64,
    pub max_iterations: usize,
    pub min_step: f64,
}

impl Default for DescentSpec {
    fn default() -> Self {
        Self { initial: None, step: 0.2, delta: 0.05, max_iterations: 15, min_step: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Optimizer {
    Grid(GridSpec),
    GradientDescent(DescentSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaOutcome {
    pub params: QaoaParams,
    pub eta: f64,
    /// Accepted iterates with their η, starting point first.
    pub trajectory: Vec<(QaoaParams, f64)>,
    pub iterations: usize,
    pub evaluations: usize,
    /// False when descent stopped on the iteration cap or with a step
    /// that still improved.
    pub converged: bool,
}

fn grid_axes(problem: &QaoaProblem, j_max: f64, g: &GridSpec) -> (Vec<f64>, Vec<f64>) {
    let bscale = if problem.b != 0.0 { problem.b.abs() } else { 1.0 };
    let jscale = if j_max > 0.0 { j_max } else { 1.0 };
    let betas = (0..g.beta_points).map(|k| g.beta_span / bscale * k as f64 / g.beta_points as f64).collect();
    let gammas = (0..g.gamma_points)
        .map(|k| g.gamma_span / jscale * k as f64 / (g.gamma_points.max(2) - 1) as f64)
        .collect();
    (betas, gammas)
}

/// Optimizes the angles with a grid search or finite-difference ascent.
pub fn qaoa_run(j: &CouplingMatrix<f64>, b: f64, p: usize, optimizer: &Optimizer, est: Estimator) -> Result<QaoaOutcome> {
    if p == 0 {
        return Err(Error::Validation("QAOA needs p ≥ 1".into()));
    }
    let problem = QaoaProblem::new(j, b)?;
    let j_max = j.max_abs();
    match optimizer {
        Optimizer::Grid(g) => grid_search(&problem, j_max, p, g, est),
        Optimizer::GradientDescent(d) => {
            let start = match &d.initial {
                Some(x) if x.p() == p => x.clone(),
                Some(_) => return Err(Error::Validation("initial angles do not match p".into())),
                None => {
                    let (bs, gs) = grid_axes(&problem, j_max, &GridSpec::default());
                    let mid_b = 0.5 * (bs[0] + GridSpec::default().beta_span / b.abs().max(f64::MIN_POSITIVE));
                    let mid_g = 0.5 * (gs[0] + gs[gs.len() - 1]);
                    QaoaParams { betas: vec![mid_b; p], gammas: vec![mid_g; p] }
                }
            };
            descend(&problem, start, d, est)
        }
    }
}

fn grid_search(problem: &QaoaProblem, j_max: f64, p: usize, g: &GridSpec, est: Estimator) -> Result<QaoaOutcome> {
    if g.beta_points == 0 || g.gamma_points == 0 {
        return Err(Error::Validation("grid needs points on both axes".into()));
    }
    let (betas, gammas) = grid_axes(problem, j_max, g);
    let per_layer = betas.len() * gammas.len();
    let total = (per_layer as f64).powi(p as i32);
    if total > 4e6 {
        return Err(Error::Validation(format!("grid of {total} points is too large")));
    }
    let mut best: Option<(QaoaParams, f64)> = None;
    let mut evaluations = 0;
    for flat in 0..total as usize {
        let mut idx = flat;
        let mut params = QaoaParams { betas: Vec::with_capacity(p), gammas: Vec::with_capacity(p) };
        for _ in 0..p {
            let cell = idx % per_layer;
            idx /= per_layer;
            params.betas.push(betas[cell / gammas.len()]);
            params.gammas.push(gammas[cell % gammas.len()]);
        }
        let eta = problem.eta(&params, est)?;
        evaluations += 1;
        if best.as_ref().map_or(true, |(_, e)| eta > *e) {
            best = Some((params, eta));
        }
    }
    let (params, eta) = best.ok_or(Error::Undefined("empty grid"))?;
    Ok(QaoaOutcome { trajectory: vec![(params.clone(), eta)], params, eta, iterations: 0, evaluations, converged: true })
}

/// Greedy ascent: central differences on every angle, a step of fixed
/// length along the normalized gradient, halved until η improves.
fn descend(problem: &QaoaProblem, start: QaoaParams, d: &DescentSpec, est: Estimator) -> Result<QaoaOutcome> {
    if !(d.step > 0.0) || !(d.delta > 0.0) {
        return Err(Error::Validation("step and finite-difference offset must be positive".into()));
    }
    let mut evaluations = 0;
    let mut eval = |x: &[f64]| -> Result<f64> {
        evaluations += 1;
        problem.eta(&QaoaParams::from_flat(x), est)
    };
    let mut x = start.flat();
    let mut f = eval(&x)?;
    let mut trajectory = vec![(start, f)];
    let mut step = d.step;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < d.max_iterations {
        iterations += 1;
        let mut grad = vec![0.0; x.len()];
        for k in 0..x.len() {
            let mut hi = x.clone();
            hi[k] += d.delta;
            let mut lo = x.clone();
            lo[k] -= d.delta;
            grad[k] = (eval(&hi)? - eval(&lo)?) / (2.0 * d.delta);
        }
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if norm == 0.0 {
            converged = true;
            break;
        }
        let mut moved = false;
        while step >= d.min_step {
            let y: Vec<f64> = x.iter().zip(&grad).map(|(a, g)| a + step * g / norm).collect();
            let fy = eval(&y)?;
            if fy > f {
                x = y;
                f = fy;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            converged = true;
            break;
        }
        trajectory.push((QaoaParams::from_flat(&x), f));
    }
    Ok(QaoaOutcome { params: QaoaParams::from_flat(&x), eta: f, trajectory, iterations, evaluations, converged })
}
