mod common;

use approx::assert_abs_diff_eq;
use ionspin_core::couplings::CouplingMatrix;
use ionspin_core::dynamics::{
    apply_hamiltonian, eigenpairs, evolve, first_coupled_gap, floquet_run, measure, trotter_evolve, Axis,
    FloquetSequence, HamiltonianSpec, Schedule, SpinState,
};

#[test]
fn matvec_matches_kronecker_oracle() {
    for seed in 0..10 {
        let n = 2 + (seed as usize % 5);
        let (spec, dense) = common::random_pair(n, seed);
        let psi = common::random_state(n, seed);
        let got = apply_hamiltonian(&spec, 0.0, &psi).unwrap();
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        let want = &dense * v;
        for (a, b) in got.amplitudes().iter().zip(want.iter()) {
            assert!((a - b).norm() < 1e-12, "seed {seed}: {a} vs {b}");
        }
    }
}

#[test]
fn field_along_z_on_all_down() {
    let spec = HamiltonianSpec::new(4).uniform_field(Axis::Z, 0.7);
    let psi = SpinState::polarized(4, Axis::Z, false);
    let out = apply_hamiltonian(&spec, 0.0, &psi).unwrap();
    assert_abs_diff_eq!(out.amplitudes()[0].re, -4.0 * 0.7, epsilon = 1e-14);
}

#[test]
fn xx_flips_both_spins() {
    let j = CouplingMatrix::power_law(2, 1.3, 1.0);
    let spec = HamiltonianSpec::new(2).coupling(Axis::X, j);
    let out = apply_hamiltonian(&spec, 0.0, &SpinState::basis(2, 0)).unwrap();
    assert_abs_diff_eq!(out.amplitudes()[3].re, 1.3, epsilon = 1e-14);
    assert_abs_diff_eq!(out.amplitudes()[0].norm(), 0.0, epsilon = 1e-14);
}

#[test]
fn single_spin_precession() {
    let b: f64 = 0.9;
    let spec = HamiltonianSpec::new(1).uniform_field(Axis::Y, b);
    for &t in &[0.1, 0.7, 2.3] {
        let s = evolve(&SpinState::polarized(1, Axis::Z, false), &spec, 0.0, t, 1e-12).unwrap();
        let sz = s.site_expectations(Axis::Z)[0];
        assert_abs_diff_eq!(sz, -(2.0 * b * t).cos(), epsilon = 1e-10);
    }
}

#[test]
fn two_spin_ising_oscillation() {
    let j: f64 = 0.8;
    let spec = HamiltonianSpec::new(2).coupling(Axis::X, CouplingMatrix::power_law(2, j, 1.0));
    for &t in &[0.3, 1.1] {
        let s = evolve(&SpinState::basis(2, 0), &spec, 0.0, t, 1e-12).unwrap();
        assert_abs_diff_eq!(s.probabilities()[0], (j * t).cos().powi(2), epsilon = 1e-10);
    }
}

#[test]
fn evolve_matches_dense_and_preserves_norm_and_energy() {
    for seed in 0..12 {
        let n = 3 + (seed as usize % 5);
        let (spec, dense) = common::random_pair(n, 100 + seed);
        let psi = common::random_state(n, seed);
        let t = 1.7;
        let got = evolve(&psi, &spec, 0.0, t, 1e-11).unwrap();
        let want = common::dense_evolve(&dense, psi.amplitudes(), t);
        assert!(1.0 - common::fidelity(got.amplitudes(), &want) < 1e-10);
        assert!((got.norm() - 1.0).abs() < 1e-9);
        let op = spec.operator(0.0).unwrap();
        let e0 = op.expectation(psi.amplitudes());
        let e1 = op.expectation(got.amplitudes());
        assert!((e0 - e1).abs() < 1e-8 * op.norm_bound());
    }
}

#[test]
fn backward_evolution_inverts_forward() {
    let (spec, _) = common::random_pair(6, 5);
    let psi = common::random_state(6, 5);
    let fwd = evolve(&psi, &spec, 0.0, 2.0, 1e-12).unwrap();
    let back = evolve(&fwd, &spec, 2.0, 0.0, 1e-12).unwrap();
    assert!(1.0 - psi.fidelity(&back) < 1e-10);
}

#[test]
fn scheduled_field_matches_piecewise_constant_limit() {
    // B(t) linear from 1 to 0 over t_f; reference integrates with many
    // frozen dense slices
    let n = 3;
    let j = CouplingMatrix::power_law(n, 1.0, 1.0);
    let tf = 2.0;
    let sched = Schedule::PiecewiseLinear { times: vec![0.0, tf], values: vec![1.0, 0.0] };
    let spec = HamiltonianSpec::new(n)
        .coupling(Axis::X, j.clone())
        .field_scheduled(Axis::Y, vec![1.0; n], sched);
    let psi = SpinState::polarized(n, Axis::Y, false);
    let got = evolve(&psi, &spec, 0.0, tf, 1e-10).unwrap();
    let jm: Vec<Vec<f64>> = (0..n).map(|a| (0..n).map(|b| j.get(a, b)).collect()).collect();
    let slices = 4000;
    let dt = tf / slices as f64;
    let mut v = psi.amplitudes().to_vec();
    for k in 0..slices {
        let b = 1.0 - (k as f64 + 0.5) * dt / tf;
        let h = common::dense_hamiltonian(n, &[('x', jm.clone())], &[('y', vec![b; n])]);
        v = common::dense_evolve(&h, &v, dt);
    }
    assert!(1.0 - common::fidelity(got.amplitudes(), &v) < 1e-8);
}

#[test]
fn xy_model_conserves_total_sz() {
    let n = 6;
    let j = CouplingMatrix::power_law(n, 1.0, 1.2);
    let spec = HamiltonianSpec::new(n)
        .coupling(Axis::X, j.clone())
        .coupling(Axis::Y, j)
        .field(Axis::Z, vec![0.3, -0.2, 0.5, 0.1, -0.4, 0.0]);
    let psi = SpinState::neel(n, Axis::Z, false);
    let s = evolve(&psi, &spec, 0.0, 3.0, 1e-11).unwrap();
    let total: f64 = s.site_expectations(Axis::Z).iter().sum();
    assert_abs_diff_eq!(total, 0.0, epsilon = 1e-9);
}

#[test]
fn transverse_ising_parity_conserved() {
    // Π σ_y commutes with Σ J σxσx + B Σ σy
    let n = 5;
    let spec = HamiltonianSpec::new(n)
        .coupling(Axis::X, CouplingMatrix::power_law(n, 1.0, 1.0))
        .uniform_field(Axis::Y, 0.7);
    let psi = common::random_state(n, 3);
    let parity = |s: &SpinState<f64>| -> f64 {
        let mut p = s.clone();
        for k in 0..n {
            p.apply_site(k, ionspin_core::dynamics::pauli(Axis::Y));
        }
        s.inner(&p).re
    };
    let out = evolve(&psi, &spec, 0.0, 2.5, 1e-12).unwrap();
    assert_abs_diff_eq!(parity(&psi), parity(&out), epsilon = 1e-9);
}

#[test]
fn commuting_trotter_is_exact() {
    let n = 5;
    let a = HamiltonianSpec::new(n).coupling(Axis::Z, CouplingMatrix::power_law(n, 1.0, 1.0));
    let b = HamiltonianSpec::new(n).field(Axis::Z, vec![0.1, 0.2, 0.3, 0.4, 0.5]);
    let psi = common::random_state(n, 1);
    let exact = evolve(&psi, &a.clone().plus(&b), 0.0, 1.3, 1e-13).unwrap();
    let trot = trotter_evolve(&psi, &[a.clone(), b], 1.3, 3, 1e-13).unwrap();
    assert!(1.0 - exact.fidelity(&trot) < 1e-12);
    let single = trotter_evolve(&psi, &[a.clone()], 1.3, 7, 1e-13).unwrap();
    let direct = evolve(&psi, &a, 0.0, 1.3, 1e-13).unwrap();
    assert!(1.0 - single.fidelity(&direct) < 1e-12);
}

#[test]
fn perfect_pi_pulse_alternates_magnetization() {
    let n = 3;
    let g = 1.0;
    let pulse = HamiltonianSpec::new(n).uniform_field(Axis::X, g);
    // 2gt = π
    let seq = FloquetSequence { steps: vec![(pulse, std::f64::consts::PI / (2.0 * g))], n_periods: 6 };
    let states = floquet_run(&SpinState::polarized(n, Axis::Z, false), &seq, 1e-12).unwrap();
    for (k, s) in states.iter().enumerate() {
        let m: f64 = s.site_expectations(Axis::Z).iter().sum::<f64>() / n as f64;
        let want = if k % 2 == 0 { 1.0 } else { -1.0 };
        assert_abs_diff_eq!(m, want, epsilon = 1e-10);
    }
}

#[test]
fn floquet_period_is_composition_of_evolves() {
    let n = 4;
    let (a, _) = common::random_pair(n, 11);
    let (b, _) = common::random_pair(n, 12);
    let psi = common::random_state(n, 2);
    let seq = FloquetSequence { steps: vec![(a.clone(), 0.4), (b.clone(), 0.9)], n_periods: 1 };
    let got = floquet_run(&psi, &seq, 1e-12).unwrap().remove(0);
    let mid = evolve(&psi, &a, 0.0, 0.4, 1e-12).unwrap();
    let want = evolve(&mid, &b, 0.0, 0.9, 1e-12).unwrap();
    assert!(1.0 - got.fidelity(&want) < 1e-11);
}

#[test]
fn eigenpairs_match_dense_spectrum() {
    for seed in 0..6 {
        let n = 3 + seed as usize % 6;
        let (spec, dense) = common::random_pair(n, 300 + seed);
        let want = common::dense_eigenvalues(&dense);
        let k = (1 << n).min(12);
        let got = eigenpairs(&spec, 0.0, k).unwrap();
        let op = spec.operator(0.0).unwrap();
        for (p, w) in got.iter().zip(&want) {
            assert!((p.value - w).abs() < 1e-9, "n={n}: {} vs {w}", p.value);
            let hv = op.apply(&p.vector);
            let r: f64 = hv.iter().zip(&p.vector).map(|(a, b)| (a - b * p.value).norm_sqr()).sum::<f64>().sqrt();
            assert!(r < 1e-8);
        }
    }
}

#[test]
fn lanczos_path_matches_dense_for_larger_space() {
    // dimension above the dense cutoff
    let n = 10;
    let (spec, dense) = common::random_pair(n, 77);
    let want = common::dense_eigenvalues(&dense);
    let got = eigenpairs(&spec, 0.0, 5).unwrap();
    for (p, w) in got.iter().zip(&want) {
        assert!((p.value - w).abs() < 1e-8, "{} vs {w}", p.value);
    }
}

#[test]
fn uniform_z_field_ground_energy() {
    let spec = HamiltonianSpec::new(5).uniform_field(Axis::Z, 0.4);
    let p = eigenpairs(&spec, 0.0, 1).unwrap();
    assert_abs_diff_eq!(p[0].value, -5.0 * 0.4, epsilon = 1e-12);
}

#[test]
fn paramagnetic_coupled_state_is_lowest_two_flip_level() {
    // the ramp operator conserves spin-flip parity, so single flips stay
    // dark and the first bright level holds two flips
    let n = 5;
    let b: f64 = 20.0;
    let spec = HamiltonianSpec::new(n)
        .coupling(Axis::X, CouplingMatrix::power_law(n, 0.01, 1.0))
        .uniform_field(Axis::Y, b);
    let g = first_coupled_gap(&spec, 0.0, Axis::Y).unwrap();
    assert!((g.gap - 4.0 * b).abs() / (4.0 * b) < 1e-3, "gap {}", g.gap);
    assert_eq!(g.index, n + 1);
}

#[test]
fn measurement_statistics() {
    let s = SpinState::<f64>::basis(4, 0b1010);
    let t = measure(&s, Axis::Z, 500, 3).unwrap();
    assert_eq!(t.count(0b1010), 500);
    assert_eq!(t.shots, 500);

    let y = SpinState::<f64>::polarized(1, Axis::Y, false);
    let shots = 20_000u64;
    let t = measure(&y, Axis::X, shots, 9).unwrap();
    let up = t.count(1) as f64;
    let exp = shots as f64 / 2.0;
    let chi2 = 2.0 * (up - exp).powi(2) / exp;
    // χ² with one degree of freedom, 99.9% quantile
    assert!(chi2 < 10.83, "chi2 {chi2}");

    let psi = common::random_state(4, 8);
    let exact = psi.probabilities_in(Axis::X);
    let shots = 200_000u64;
    let t = measure(&psi, Axis::X, shots, 1).unwrap();
    let mut cdf_e = 0.0;
    let mut cdf_s = 0.0;
    let mut ks: f64 = 0.0;
    for (k, p) in exact.iter().enumerate() {
        cdf_e += p;
        cdf_s += t.count(k) as f64 / shots as f64;
        ks = ks.max((cdf_e - cdf_s).abs());
    }
    // Dvoretzky–Kiefer–Wolfowitz bound at 1e-6 failure probability
    let eps = ((2.0f64 / 1e-6).ln() / (2.0 * shots as f64)).sqrt();
    assert!(ks < eps);
    assert_eq!(measure(&psi, Axis::X, 100, 4).unwrap(), measure(&psi, Axis::X, 100, 4).unwrap());
}

#[test]
fn dump_round_trip() {
    let psi = common::random_state(3, 4);
    let mut buf = Vec::new();
    psi.write_dump(&mut buf).unwrap();
    assert_eq!(buf.len(), 8 + 16 * 8);
    let back = SpinState::<f64>::read_dump(&buf[..]).unwrap();
    assert_eq!(back, psi);
}
