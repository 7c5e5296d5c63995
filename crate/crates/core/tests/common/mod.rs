//! Dense reference implementations shared by the integration tests. They
//! build operators from explicit Kronecker products and never touch the
//! library's matrix-free kernels.
#![allow(dead_code)]

use nalgebra::DMatrix;
use ionspin_core::couplings::CouplingMatrix;
use ionspin_core::dynamics::{Axis, HamiltonianSpec, SpinState};
use ionspin_core::rng::stream_rng;
use num_complex::Complex64 as Z;
use rand::Rng;

pub fn pauli(axis: char) -> DMatrix<Z> {
    let o = Z::new(1.0, 0.0);
    let i = Z::new(0.0, 1.0);
    let z = Z::new(0.0, 0.0);
    // ordering (|↓⟩, |↑⟩): σ_z = diag(−1, 1); σ_y|↓⟩ = −i|↑⟩
    match axis {
        'x' => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        'y' => DMatrix::from_row_slice(2, 2, &[z, i, -i, z]),
        'z' => DMatrix::from_row_slice(2, 2, &[-o, z, z, o]),
        _ => DMatrix::identity(2, 2),
    }
}

/// Operator acting with `ops[k]` on site k+1; site 1 is the least
/// significant factor.
pub fn kron_chain(ops: &[DMatrix<Z>]) -> DMatrix<Z> {
    let mut m = DMatrix::from_element(1, 1, Z::new(1.0, 0.0));
    for op in ops {
        m = op.kronecker(&m);
    }
    m
}

pub fn site_op(n: usize, site: usize, axis: char) -> DMatrix<Z> {
    let ops: Vec<DMatrix<Z>> = (0..n).map(|k| if k == site { pauli(axis) } else { pauli('1') }).collect();
    kron_chain(&ops)
}

pub fn pair_op(n: usize, i: usize, j: usize, axis: char) -> DMatrix<Z> {
    let ops: Vec<DMatrix<Z>> =
        (0..n).map(|k| if k == i || k == j { pauli(axis) } else { pauli('1') }).collect();
    kron_chain(&ops)
}

/// Σ_{i<j} J_ij σ^a_i σ^a_j + Σ_i h_i σ^b_i for lists of terms.
pub fn dense_hamiltonian(
    n: usize,
    couplings: &[(char, Vec<Vec<f64>>)],
    fields: &[(char, Vec<f64>)],
) -> DMatrix<Z> {
    let dim = 1 << n;
    let mut h = DMatrix::from_element(dim, dim, Z::new(0.0, 0.0));
    for (axis, j) in couplings {
        for a in 0..n {
            for b in a + 1..n {
                if j[a][b] != 0.0 {
                    h += pair_op(n, a, b, *axis) * Z::new(j[a][b], 0.0);
                }
            }
        }
    }
    for (axis, amp) in fields {
        for a in 0..n {
            if amp[a] != 0.0 {
                h += site_op(n, a, *axis) * Z::new(amp[a], 0.0);
            }
        }
    }
    h
}

/// e^{−iHt}ψ via Hermitian eigendecomposition.
pub fn dense_evolve(h: &DMatrix<Z>, psi: &[Z], t: f64) -> Vec<Z> {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let dim = psi.len();
    let mut out = vec![Z::new(0.0, 0.0); dim];
    for k in 0..dim {
        let c: Z = (0..dim).map(|r| v[(r, k)].conj() * psi[r]).sum();
        let c = c * Z::new(0.0, -eig.eigenvalues[k] * t).exp();
        for r in 0..dim {
            out[r] += c * v[(r, k)];
        }
    }
    out
}

pub fn dense_eigenvalues(h: &DMatrix<Z>) -> Vec<f64> {
    let mut e: Vec<f64> = h.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(|a, b| a.partial_cmp(b).unwrap());
    e
}

pub fn fidelity(a: &[Z], b: &[Z]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Z>().norm_sqr()
}

pub fn axis_char(a: Axis) -> char {
    match a {
        Axis::X => 'x',
        Axis::Y => 'y',
        Axis::Z => 'z',
    }
}

pub fn random_j(n: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut j = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let v = rng.gen_range(-1.0..1.0);
            j[a][b] = v;
            j[b][a] = v;
        }
    }
    j
}

/// Random spec plus its dense twin.
pub fn random_pair(n: usize, seed: u64) -> (HamiltonianSpec<f64>, nalgebra::DMatrix<Z>) {
    let mut rng = stream_rng(seed, 7);
    let mut spec = HamiltonianSpec::new(n);
    let mut cs = Vec::new();
    let mut fs = Vec::new();
    for axis in Axis::ALL {
        if rng.gen_bool(0.7) {
            let j = random_j(n, &mut rng);
            spec = spec.coupling(axis, CouplingMatrix::new(nalgebra::DMatrix::from_fn(n, n, |a, b| j[a][b])).unwrap());
            cs.push((axis_char(axis), j));
        }
        if rng.gen_bool(0.7) {
            let h: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            spec = spec.field(axis, h.clone());
            fs.push((axis_char(axis), h));
        }
    }
    let dense = dense_hamiltonian(n, &cs, &fs);
    (spec, dense)
}

pub fn random_state(n: usize, seed: u64) -> SpinState<f64> {
    let mut rng = stream_rng(seed, 99);
    let amps = (0..1usize << n).map(|_| Z::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let mut s = SpinState::from_amplitudes(n, amps).unwrap();
    s.normalize();
    s
}

// Plain gradient flow on the scaled potential, from a wide uniform chain.
pub fn relaxed_positions(n: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n).map(|i| i as f64 - (n as f64 - 1.0) / 2.0).collect();
    for _ in 0..200_000 {
        let g: Vec<f64> = (0..n)
            .map(|i| {
                x[i] - (0..n).filter(|&j| j != i).map(|j| (x[i] - x[j]).signum() / (x[i] - x[j]).powi(2)).sum::<f64>()
            })
            .collect();
        if g.iter().all(|v| v.abs() < 1e-13) {
            break;
        }
        for i in 0..n {
            x[i] -= 0.02 * g[i];
        }
    }
    x
}

// Transverse frequencies (descending) from the dense mode Hessian built by hand.
pub fn oracle_modes(x: &[f64], omega_z: f64, omega_x: f64) -> (Vec<f64>, DMatrix<f64>) {
    let n = x.len();
    let k = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            (omega_x / omega_z).powi(2) - (0..n).filter(|&m| m != i).map(|m| 1.0 / (x[i] - x[m]).abs().powi(3)).sum::<f64>()
        } else {
            1.0 / (x[i] - x[j]).abs().powi(3)
        }
    });
    let eig = k.symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let freqs = idx.iter().map(|&m| omega_z * eig.eigenvalues[m].sqrt()).collect();
    let vecs = DMatrix::from_fn(n, n, |i, m| eig.eigenvectors[(i, idx[m])]);
    (freqs, vecs)
}
