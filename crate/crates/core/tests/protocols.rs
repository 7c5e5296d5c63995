mod common;

use std::collections::BTreeMap;

use approx::assert_abs_diff_eq;
use common::{dense_evolve, dense_hamiltonian, fidelity, pair_op, pauli, site_op};
use ionspin_core::couplings::CouplingMatrix;
use ionspin_core::observables::ShotTable;
use ionspin_core::protocols::{
    benchmark_chain, benchmark_pair, centre_site, classical_staircase, disorder_offsets, dqpt_hamiltonian, dqpt_run,
    dtc_run, equal_adiabaticity_times, fit_three_spin, ground_manifold, light_cone_exponent, mbl_run, most_prevalent,
    quench_run, required_shots, run_adiabatic, spectroscopy_scan, DtcParams, Estimator, GapTable, InitialKind,
    LocalTarget, MblParams, QaoaParams, QaoaProblem, QuenchKind, RampKind, RampProfile,
};
use ionspin_core::{Axis, Error, HamiltonianSpec};
use nalgebra::DMatrix;
use num_complex::Complex64 as Z;
use proptest::prelude::*;

/// Single-site eigenvector of σ^axis with eigenvalue ±1.
fn site_vector(axis: char, up: bool) -> [Z; 2] {
    let eig = pauli(axis).symmetric_eigen();
    let want = if up { 1.0 } else { -1.0 };
    let k = (0..2).find(|&k| (eig.eigenvalues[k] - want).abs() < 1e-9).unwrap();
    [eig.eigenvectors[(0, k)], eig.eigenvectors[(1, k)]]
}

/// Product state with site k up along `axis` when bit k of `pattern` is set.
fn product(n: usize, axis: char, pattern: usize) -> Vec<Z> {
    let vs: Vec<[Z; 2]> = (0..n).map(|k| site_vector(axis, pattern >> k & 1 == 1)).collect();
    (0..1usize << n).map(|idx| (0..n).map(|k| vs[k][idx >> k & 1]).product()).collect()
}

fn expect(op: &DMatrix<Z>, psi: &[Z]) -> f64 {
    let v = nalgebra::DVector::from_column_slice(psi);
    (v.adjoint() * op * &v)[(0, 0)].re
}

fn table(j: &[Vec<f64>]) -> CouplingMatrix<f64> {
    let n = j.len();
    CouplingMatrix::new(DMatrix::from_fn(n, n, |a, b| j[a][b])).unwrap()
}

fn power_law_rows(n: usize, j0: f64, alpha: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|a| (0..n).map(|b| if a == b { 0.0 } else { j0 / ((a as f64 - b as f64).abs()).powf(alpha) }).collect())
        .collect()
}

/// Dense eigenbasis: sorted energies and the matching eigenvector columns.
fn dense_spectrum(h: &DMatrix<Z>) -> (Vec<f64>, Vec<Vec<Z>>) {
    let eig = h.clone().symmetric_eigen();
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = idx.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = idx.iter().map(|&k| eig.eigenvectors.column(k).iter().copied().collect()).collect();
    (vals, vecs)
}

/// Gap to the first level reached from the ground manifold by `probe`.
fn dense_coupled_gap(h: &DMatrix<Z>, probe: &DMatrix<Z>) -> f64 {
    let (e, v) = dense_spectrum(h);
    let ground: Vec<usize> = (0..e.len()).take_while(|&k| e[k] - e[0] < 1e-9).collect();
    let mut k = ground.len();
    while k < e.len() {
        let start = k;
        while k < e.len() && e[k] - e[start] < 1e-9 {
            k += 1;
        }
        let mut w = 0.0;
        for g in &ground {
            let pg = probe * nalgebra::DVector::from_column_slice(&v[*g]);
            for m in start..k {
                w += v[m].iter().zip(pg.iter()).map(|(a, b)| a.conj() * b).sum::<Z>().norm_sqr();
            }
        }
        if w.sqrt() > 1e-8 {
            return e[start] - e[0];
        }
    }
    panic!("nothing couples to the ground state");
}

fn total(n: usize, axis: char) -> DMatrix<Z> {
    (0..n).map(|k| site_op(n, k, axis)).fold(DMatrix::zeros(1 << n, 1 << n), |a, b| a + b)
}

// ---------------------------------------------------------------- prevalence

#[test]
fn required_shots_formula() {
    assert_abs_diff_eq!(required_shots(0.6, 0.4), 13.0, epsilon = 1e-12);
    assert_abs_diff_eq!(required_shots(1.0, 0.0), 1.0, epsilon = 1e-15);
    assert!(required_shots(0.3, 0.3).is_infinite());
}

#[test]
fn most_prevalent_breaks_ties_low() {
    let counts = BTreeMap::from([(3, 5), (1, 5), (0, 2)]);
    let t = ShotTable::from_counts(2, Axis::X, counts).unwrap();
    let p = most_prevalent(&t).unwrap();
    assert_eq!(p.outcome, 1);
    assert_eq!(p.bitstring, "10");
    assert!(p.tie);
    assert!(p.required_shots.is_infinite());
    assert_abs_diff_eq!(p.probability, 5.0 / 12.0, epsilon = 1e-15);

    let t = ShotTable::from_counts(3, Axis::X, BTreeMap::from([(6, 70), (2, 30)])).unwrap();
    let p = most_prevalent(&t).unwrap();
    assert_eq!((p.outcome, p.bitstring.as_str(), p.tie), (6, "011", false));
    assert_abs_diff_eq!(p.margin, 0.4, epsilon = 1e-12);
    assert_abs_diff_eq!(p.required_shots, (0.49 + 0.09) / 0.16, epsilon = 1e-12);

    assert!(matches!(most_prevalent(&ShotTable::new(2, Axis::X)), Err(Error::Undefined(_))));
}

// ---------------------------------------------------------------- staircase

/// Ground magnetization by enumeration; `None` on a tie.
fn brute_ground(j: &[Vec<f64>], b: f64) -> Option<i64> {
    let n = j.len();
    let mut levels: Vec<(f64, i64)> = (0..1usize << n)
        .map(|c| {
            let s = |k: usize| if c >> k & 1 == 1 { 1.0 } else { -1.0 };
            let mut e = 0.0;
            for a in 0..n {
                for q in a + 1..n {
                    e += j[a][q] * s(a) * s(q);
                }
            }
            let m: f64 = (0..n).map(s).sum();
            (e + b * m, m as i64)
        })
        .collect();
    levels.sort_by(|a, b| a.0.total_cmp(&b.0));
    let e0 = levels[0].0;
    let ms: Vec<i64> = levels.iter().take_while(|l| l.0 - e0 < 1e-10).map(|l| l.1).collect();
    ms.iter().all(|&m| m == ms[0]).then(|| ms[0])
}

#[test]
fn two_spin_staircase() {
    let j = CouplingMatrix::power_law(2, 0.7, 0.0);
    let s = classical_staircase(&j, 2.0, 64).unwrap();
    assert_eq!(s.plateaus, vec![0, -2]);
    assert_eq!(s.crossings.len(), 1);
    assert_abs_diff_eq!(s.crossings[0].field, 0.7, epsilon = 1e-12);
    assert_eq!((s.crossings[0].magnetization_below, s.crossings[0].magnetization_above), (0, -2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn staircase_matches_enumeration(n in 2usize..7, raw in prop::collection::vec(0.05..1.0f64, 21)) {
        let mut j = vec![vec![0.0; n]; n];
        let mut it = raw.iter();
        for a in 0..n {
            for b in a + 1..n {
                let v = *it.next().unwrap();
                j[a][b] = v;
                j[b][a] = v;
            }
        }
        let b_max = 2.0 * raw.iter().sum::<f64>();
        let s = classical_staircase(&table(&j), b_max, 400).unwrap();
        prop_assert_eq!(*s.plateaus.last().unwrap(), -(n as i64));
        prop_assert_eq!(s.plateaus.len(), s.crossings.len() + 1);
        for (k, c) in s.crossings.iter().enumerate() {
            prop_assert!(c.magnetization_below > c.magnetization_above);
            prop_assert_eq!(c.magnetization_below, s.plateaus[k]);
            prop_assert_eq!(c.magnetization_above, s.plateaus[k + 1]);
            if k > 0 {
                prop_assert!(c.field > s.crossings[k - 1].field);
            }
            let d = 1e-7 * (1.0 + c.field);
            if c.field > d {
                prop_assert_eq!(brute_ground(&j, c.field - d), Some(c.magnetization_below));
            }
            prop_assert_eq!(brute_ground(&j, c.field + d), Some(c.magnetization_above));
        }
        // no plateau is skipped between consecutive crossings
        for w in s.crossings.windows(2) {
            let mid = 0.5 * (w[0].field + w[1].field);
            prop_assert_eq!(brute_ground(&j, mid), Some(w[0].magnetization_above));
        }
    }
}

// ---------------------------------------------------------------- ramps

#[test]
fn ramp_shapes() {
    let lin = RampProfile::linear(3.0, 8.0).unwrap();
    assert_abs_diff_eq!(lin.field_at(0.0), 3.0, epsilon = 1e-15);
    assert_abs_diff_eq!(lin.field_at(2.0), 2.25, epsilon = 1e-14);
    assert_abs_diff_eq!(lin.field_at(8.0), 0.0, epsilon = 1e-15);
    assert_eq!(lin.times.len(), lin.values.len());

    let exp = RampProfile::exponential(3.0, 12.0).unwrap();
    assert_eq!(exp.tau, Some(2.0));
    let floor = (-6.0f64).exp();
    for &t in &[0.0, 0.7, 3.0, 9.5, 12.0] {
        let want = 3.0 * ((-t / 2.0f64).exp() - floor) / (1.0 - floor);
        assert_abs_diff_eq!(exp.field_at(t), want, epsilon = 1e-12);
    }
    assert!(exp.values.windows(2).all(|w| w[1] < w[0]));

    assert!(matches!(RampProfile::linear(0.0, 1.0), Err(Error::Validation(_))));
    assert!(matches!(RampProfile::exponential(1.0, f64::NAN), Err(Error::Validation(_))));
    assert!(matches!(RampProfile::build(RampKind::LocalAdiabatic, 1.0, 1.0, None), Err(Error::Validation(_))));
}

fn linear_gap_table(a: f64, c: f64, b0: f64, points: usize) -> GapTable {
    let fields: Vec<f64> = (0..points).map(|k| b0 * k as f64 / (points - 1) as f64).collect();
    let gaps = fields.iter().map(|b| a + c * b).collect();
    GapTable::from_samples(fields, gaps).unwrap()
}

#[test]
fn constant_gap_times() {
    let t = GapTable::from_samples(vec![0.0, 1.0, 2.0, 4.0], vec![0.5; 4]).unwrap();
    assert_eq!(t.b0(), 4.0);
    assert_abs_diff_eq!(t.inverse_square_integral().unwrap(), 16.0, epsilon = 1e-12);
    let r = equal_adiabaticity_times(&t, 3.0).unwrap();
    assert_abs_diff_eq!(r.linear, 48.0, epsilon = 1e-12);
    assert_abs_diff_eq!(r.local, 48.0, epsilon = 1e-10);
    assert_abs_diff_eq!(r.exponential, 6.0 * 48.0, epsilon = 1e-10);
}

#[test]
fn local_ramp_on_a_linear_gap() {
    let (a, c, b0) = (0.3, 0.8, 2.0);
    let t = linear_gap_table(a, c, b0, 201);
    let integral = (1.0 / a - 1.0 / (a + c * b0)) / c;
    assert_abs_diff_eq!(t.inverse_square_integral().unwrap(), integral, epsilon = 1e-7 * integral);
    assert_eq!(t.minimum(), (0.0, 0.3));

    let gamma = 5.0;
    let p = RampProfile::local_adiabatic(&t, LocalTarget::Gamma(gamma)).unwrap();
    assert_abs_diff_eq!(p.t_f, gamma * integral, epsilon = 1e-6);
    for (&time, &b) in p.times.iter().zip(&p.values) {
        let want = gamma / c * (1.0 / (a + c * b) - 1.0 / (a + c * b0));
        assert_abs_diff_eq!(time, want, epsilon = 1e-6);
    }
    let p = RampProfile::local_adiabatic(&t, LocalTarget::TotalTime(40.0)).unwrap();
    assert_abs_diff_eq!(p.t_f, 40.0, epsilon = 1e-9);
    assert_abs_diff_eq!(p.gamma.unwrap(), 40.0 / integral, epsilon = 1e-6);
    assert_abs_diff_eq!(p.field_at(0.0), b0, epsilon = 1e-12);
    assert_abs_diff_eq!(p.field_at(40.0), 0.0, epsilon = 1e-12);
    let built = RampProfile::build(RampKind::LocalAdiabatic, b0, 40.0, Some(&t)).unwrap();
    assert_eq!(built, p);
    assert!(RampProfile::build(RampKind::LocalAdiabatic, 3.0, 40.0, Some(&t)).is_err());
}

#[test]
fn closed_gaps_are_divergent() {
    let r = GapTable::from_samples(vec![0.0, 1.0, 2.0], vec![0.0, 0.5, 1.0]);
    assert!(matches!(r, Err(Error::Divergence { field, .. }) if field == 0.0), "{r:?}");
}

#[test]
fn gap_table_matches_dense_spectrum() {
    let n = 4;
    let rows = power_law_rows(n, 1.0, 1.0);
    let base = HamiltonianSpec::new(n).coupling(Axis::X, table(&rows));
    let t = GapTable::compute(&base, Axis::Y, 3.0, 7).unwrap();
    let probe = total(n, 'y');
    for (&b, &g) in t.fields.iter().zip(&t.gaps) {
        let h = dense_hamiltonian(n, &[('x', rows.clone())], &[('y', vec![b; n])]);
        assert_abs_diff_eq!(g, dense_coupled_gap(&h, &probe), epsilon = 1e-8);
    }
}

#[test]
fn ground_manifold_degeneracy() {
    let n = 4;
    let ising = HamiltonianSpec::new(n).coupling(Axis::X, CouplingMatrix::power_law(n, 1.0, 1.0));
    assert_eq!(ground_manifold(&ising).unwrap().len(), 2);
    // a longitudinal field splits the ferromagnetic pair
    let ferro = HamiltonianSpec::new(n).coupling(Axis::X, CouplingMatrix::power_law(n, -1.0, 1.0));
    assert_eq!(ground_manifold(&ferro).unwrap().len(), 2);
    let tilted = ferro.uniform_field(Axis::X, 0.1);
    let g = ground_manifold(&tilted).unwrap();
    assert_eq!(g.len(), 1);
    let h = dense_hamiltonian(n, &[('x', power_law_rows(n, -1.0, 1.0))], &[('x', vec![0.1; n])]);
    let (_, v) = dense_spectrum(&h);
    assert_abs_diff_eq!(fidelity(g[0].amplitudes(), &v[0]), 1.0, epsilon = 1e-10);
}

#[test]
fn adiabatic_run_matches_stepped_dense_evolution() {
    let n = 3;
    let rows = power_law_rows(n, 1.0, 1.0);
    let base = HamiltonianSpec::new(n).coupling(Axis::X, table(&rows));
    let ramp = RampProfile::linear(3.0, 4.0).unwrap();
    let record = [1.0, 2.5, 4.0];
    let r = run_adiabatic(&base, Axis::Y, &ramp, &record, 1e-10).unwrap();
    assert_eq!(r.ground_degeneracy, 2);

    let (e, v) = dense_spectrum(&dense_hamiltonian(n, &[('x', rows.clone())], &[]));
    let ground: Vec<&Vec<Z>> = (0..e.len()).filter(|&k| e[k] - e[0] < 1e-9).map(|k| &v[k]).collect();
    assert_eq!(ground.len(), 2);
    // midpoint-frozen dense propagation
    let steps = 4000;
    let dt = ramp.t_f / steps as f64;
    let mut psi = product(n, 'y', 0);
    let mut want = Vec::new();
    for s in 0..steps {
        let b = 3.0 * (1.0 - (s as f64 + 0.5) * dt / ramp.t_f);
        psi = dense_evolve(&dense_hamiltonian(n, &[('x', rows.clone())], &[('y', vec![b; n])]), &psi, dt);
        let now = (s + 1) as f64 * dt;
        if record.iter().any(|&t| (t - now).abs() < 1e-9) {
            want.push(ground.iter().map(|g| fidelity(g, &psi)).sum::<f64>());
        }
    }
    for (got, want) in r.ground_probability.iter().zip(&want) {
        assert_abs_diff_eq!(*got, *want, epsilon = 1e-5);
    }
    assert_abs_diff_eq!(fidelity(r.final_state.amplitudes(), &psi), 1.0, epsilon = 1e-5);
    assert_abs_diff_eq!(r.field[1], 3.0 * (1.0 - 2.5 / 4.0), epsilon = 1e-12);
    assert_abs_diff_eq!(r.final_distribution.probs.iter().sum::<f64>(), 1.0, epsilon = 1e-10);

    assert!(run_adiabatic(&base, Axis::Y, &ramp, &[2.0, 1.0], 1e-10).is_err());
    assert!(run_adiabatic(&base, Axis::Y, &ramp, &[5.0], 1e-10).is_err());
}

// ---------------------------------------------------------------- quenches

#[test]
fn centre_sites() {
    assert_eq!(centre_site(1), 0);
    assert_eq!(centre_site(5), 2);
    assert_eq!(centre_site(6), 2);
}

#[test]
fn light_cone_fit_recovers_power_law() {
    let arrivals: Vec<Option<f64>> =
        (1..=6).map(|r| if r == 4 { None } else { Some(0.3 * (r as f64).powf(1.7)) }).collect();
    let (a, b) = light_cone_exponent(&arrivals).unwrap();
    assert_abs_diff_eq!(a, 0.3, epsilon = 1e-12);
    assert_abs_diff_eq!(b, 1.7, epsilon = 1e-12);
    assert!(matches!(light_cone_exponent(&[Some(1.0), None, None]), Err(Error::Undefined(_))));
}

#[test]
fn local_quench_matches_dense_evolution() {
    let n = 5;
    let rows = power_law_rows(n, 1.0, 1.2);
    let spec = HamiltonianSpec::new(n).coupling(Axis::X, table(&rows)).uniform_field(Axis::Z, 0.6);
    let h = dense_hamiltonian(n, &[('x', rows)], &[('z', vec![0.6; n])]);
    let times = [0.0, 0.4, 1.1];
    let r = quench_run(QuenchKind::Local, &spec, None, &times, Axis::X, 1e-11).unwrap();
    let psi0 = product(n, 'x', 1 << centre_site(n));
    for (k, &t) in times.iter().enumerate() {
        let psi = dense_evolve(&h, &psi0, t);
        let m: Vec<f64> = (0..n).map(|i| expect(&site_op(n, i, 'x'), &psi)).collect();
        for i in 0..n {
            assert_abs_diff_eq!(r.magnetization[k][i], m[i], epsilon = 1e-8);
            for j in i + 1..n {
                let c = expect(&pair_op(n, i, j, 'x'), &psi) - m[i] * m[j];
                assert_abs_diff_eq!(r.correlations[k][(i, j)], c, epsilon = 1e-8);
            }
        }
    }
    // the flipped spin starts up, the rest down
    assert_abs_diff_eq!(r.magnetization[0][2], 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(r.magnetization[0][0], -1.0, epsilon = 1e-12);
    assert!(quench_run(QuenchKind::Global, &spec, None, &[1.0, 0.5], Axis::X, 1e-10).is_err());
}

// ---------------------------------------------------------------- disorder

#[test]
fn disorder_offsets_are_bounded_and_seeded() {
    let a = disorder_offsets(50, 3.0, 9);
    assert!(a.iter().all(|v| (-1.5..1.5).contains(v)));
    assert_eq!(a, disorder_offsets(50, 3.0, 9));
    assert_ne!(a, disorder_offsets(50, 3.0, 10));
    assert!(disorder_offsets(8, 0.0, 9).iter().all(|&v| v == 0.0));
}

#[test]
fn single_realization_matches_dense_evolution() {
    let n = 4;
    let mut p = MblParams::new(n, 1.0, 1.0, 0.8, 2.0, 5);
    p.realizations = 1;
    p.times = (0..=10).map(|k| 0.3 * k as f64).collect();
    p.plateau = (1.5, 3.0);
    let r = mbl_run(&p, 1e-11).unwrap();
    let seed = r.seeds[0];
    let d = disorder_offsets(n, 2.0, seed);
    let h = dense_hamiltonian(n, &[('x', power_law_rows(n, 1.0, 1.0))], &[('z', vec![0.4; n]), ('z', d)]);
    // Néel with site 1 down
    let psi0 = product(n, 'z', 0b1010);
    let mut plateau = Vec::new();
    for (k, &t) in p.times.iter().enumerate() {
        let psi = dense_evolve(&h, &psi0, t);
        let sz: Vec<f64> = (0..n).map(|i| expect(&site_op(n, i, 'z'), &psi)).collect();
        for i in 0..n {
            assert_abs_diff_eq!(r.magnetization[k][i], sz[i], epsilon = 1e-8);
        }
        let overlap: f64 = sz.iter().enumerate().map(|(i, v)| if i % 2 == 0 { -v } else { *v }).sum();
        let dist = 0.5 - overlap / (2.0 * n as f64);
        assert_abs_diff_eq!(r.hamming.mean[k], dist, epsilon = 1e-8);
        if t >= 1.5 - 1e-12 {
            plateau.push(dist);
        }
    }
    assert_abs_diff_eq!(r.hamming.mean[0], 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(r.plateau_mean, plateau.iter().sum::<f64>() / plateau.len() as f64, epsilon = 1e-8);
}

#[test]
fn perfect_kicks_double_the_period() {
    let p = DtcParams::new(6, 0.0, 0.5, 2.0, 40, 3);
    let r = dtc_run(&p, 1e-11).unwrap();
    for (k, m) in r.magnetization.iter().enumerate() {
        let want = if k % 2 == 0 { 1.0 } else { -1.0 };
        assert_abs_diff_eq!(*m, want, epsilon = 1e-8);
    }
    assert!((r.peak_frequency - 0.5).abs() <= r.spectrum.native_bin);
    assert!(r.subharmonic_weight > 0.9);
    assert_eq!(r.disorder, disorder_offsets(6, 2.0, 3));

    let mut bad = p.clone();
    bad.n_periods = 1;
    assert!(matches!(dtc_run(&bad, 1e-10), Err(Error::Validation(_))));
}

// ---------------------------------------------------------------- qaoa

#[test]
fn qaoa_energy_matches_dense_circuit() {
    let n = 3;
    let rows = power_law_rows(n, 1.0, 0.8);
    let (b, betas, gammas) = (0.7, [0.4, 1.1], [0.3, 0.9]);
    let problem = QaoaProblem::new(&table(&rows), b).unwrap();
    let params = QaoaParams { betas: betas.to_vec(), gammas: gammas.to_vec() };

    let ha = dense_hamiltonian(n, &[('x', rows.clone())], &[]);
    let hb = dense_hamiltonian(n, &[], &[('y', vec![b; n])]);
    let mut psi = product(n, 'y', 0);
    for (beta, gamma) in betas.iter().zip(&gammas) {
        psi = dense_evolve(&ha, &psi, *gamma);
        psi = dense_evolve(&hb, &psi, *beta);
    }
    let h = &ha + &hb;
    let energy = expect(&h, &psi);
    assert_abs_diff_eq!(problem.energy(&params, Estimator::Exact).unwrap(), energy, epsilon = 1e-10);
    let (e, _) = dense_spectrum(&h);
    assert_abs_diff_eq!(problem.e_ground, e[0], epsilon = 1e-9);
    assert_abs_diff_eq!(problem.e_max, e[e.len() - 1], epsilon = 1e-9);
    let eta = problem.eta(&params, Estimator::Exact).unwrap();
    assert_abs_diff_eq!(eta, (energy - e[e.len() - 1]) / (e[0] - e[e.len() - 1]), epsilon = 1e-9);

    let shots = Estimator::Shots { shots: 20_000, seed: 4 };
    let sampled = problem.energy(&params, shots).unwrap();
    assert!((sampled - energy).abs() < 0.1, "{sampled} vs {energy}");
    assert_eq!(sampled, problem.energy(&params, shots).unwrap());

    let bad = QaoaParams { betas: vec![0.1], gammas: vec![] };
    assert!(matches!(problem.energy(&bad, Estimator::Exact), Err(Error::Validation(_))));
}

// ---------------------------------------------------------------- benchmarks

#[test]
fn pair_benchmark_recovers_couplings() {
    let j = CouplingMatrix::power_law(4, 0.9, 1.0);
    let times: Vec<f64> = (0..200).map(|k| 0.05 * k as f64).collect();
    let e = benchmark_pair(&j, 0, 2, &times, 1e-11).unwrap();
    assert_abs_diff_eq!(e.exact, 0.45, epsilon = 1e-15);
    assert!(e.error < 1e-6, "{e:?}");

    let neg = CouplingMatrix::power_law(3, -0.6, 0.0);
    let e = benchmark_pair(&neg, 1, 2, &times, 1e-11).unwrap();
    assert!((e.estimate + 0.6).abs() < 1e-6, "{e:?}");
    assert!(benchmark_pair(&j, 1, 1, &times, 1e-10).is_err());
    assert!(benchmark_pair(&j, 0, 1, &times[..5], 1e-10).is_err());
}

#[test]
fn three_spin_fit_recovers_couplings() {
    let (j1, j2) = (1.0, 0.3);
    let j = table(&[vec![0.0, j1, j2], vec![j1, 0.0, j1], vec![j2, j1, 0.0]]);
    let times: Vec<f64> = (0..400).map(|k| 0.05 * k as f64).collect();
    let chain = benchmark_chain(&j, &times, 3, 1e-11).unwrap();
    // return probability from the dense propagator
    let h = dense_hamiltonian(3, &[('x', vec![vec![0.0, j1, j2], vec![j1, 0.0, j1], vec![j2, j1, 0.0]])], &[]);
    let psi0 = product(3, 'z', 0);
    for (&t, &p) in times.iter().zip(&chain.population).step_by(37) {
        assert_abs_diff_eq!(p, dense_evolve(&h, &psi0, t)[0].norm_sqr(), epsilon = 1e-8);
    }
    let (f1, f2) = fit_three_spin(&chain.times, &chain.population, &chain.peaks).unwrap();
    assert!((f1 - j1).abs() < 1e-4 && (f2 - j2).abs() < 1e-4, "{f1} {f2} from {:?}", chain.peaks);
}

// ---------------------------------------------------------------- dqpt

#[test]
fn dqpt_series_match_dense_evolution() {
    let n = 4;
    let spec = dqpt_hamiltonian(n, 1.0, 1.5, 0.9);
    let times: Vec<f64> = (0..=12).map(|k| 0.25 * k as f64).collect();
    let r = dqpt_run(&spec, InitialKind::XOrdered, &times, 1e-11).unwrap();
    let rows = power_law_rows(n, -1.0, 1.5);
    let h = dense_hamiltonian(n, &[('x', rows)], &[('z', vec![0.9; n])]);
    let down = product(n, 'x', 0);
    let up = product(n, 'x', (1 << n) - 1);
    let mx_op = total(n, 'x');
    for (k, &t) in times.iter().enumerate() {
        let psi = dense_evolve(&h, &down, t);
        let rate = -(fidelity(&down, &psi) + fidelity(&up, &psi)).ln() / n as f64;
        assert_abs_diff_eq!(r.rate[k], rate, epsilon = 1e-7);
        assert_abs_diff_eq!(r.magnetization_x[k], expect(&mx_op, &psi) / n as f64, epsilon = 1e-8);
    }
    assert_abs_diff_eq!(r.rate[0], 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(r.c2[0], 1.0, epsilon = 1e-12);
    assert!(dqpt_run(&spec, InitialKind::XOrdered, &[0.0, 0.0], 1e-10).is_err());
}

// ---------------------------------------------------------------- spectroscopy

#[test]
fn modulation_peaks_at_the_coupled_gap() {
    let n = 3;
    let rows = power_law_rows(n, 1.0, 1.0);
    let base = HamiltonianSpec::new(n).coupling(Axis::X, table(&rows));
    let b0 = 1.2;
    let h = dense_hamiltonian(n, &[('x', rows)], &[('y', vec![b0; n])]);
    let gap = dense_coupled_gap(&h, &total(n, 'y'));
    let omegas: Vec<f64> = (0..41).map(|k| gap * (0.6 + 0.02 * k as f64)).collect();
    let scan = spectroscopy_scan(&base, Axis::Y, b0, 0.02, &omegas, None, 1e-10).unwrap();
    assert_abs_diff_eq!(scan.probe_time, 150.0, epsilon = 1e-12);
    let (peak, depth) = scan.peak();
    assert!((peak - gap).abs() <= 0.02 * gap + 1e-12, "peak {peak} gap {gap}");
    assert!(depth > 10.0 * scan.depletion[0]);
    assert!(scan.warnings.is_empty());
    assert!(matches!(
        spectroscopy_scan(&base, Axis::Y, b0, 0.0, &omegas, None, 1e-10),
        Err(Error::Validation(_))
    ));
    assert!(spectroscopy_scan(&base, Axis::Y, b0, 0.02, &omegas, Some(-1.0), 1e-10).is_err());
}
