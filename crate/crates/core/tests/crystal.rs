mod common;

use approx::assert_abs_diff_eq;
use ionspin_core::crystal::{
    equilibrium_positions, lamb_dicke_matrix, potential_gradient, transverse_modes, IonCrystal, TrapSpec, ATOMIC_MASS_UNIT,
    YB171_MASS,
};
use ionspin_core::Error;
use nalgebra::DMatrix;
use proptest::prelude::*;

const TAU: f64 = 2.0 * std::f64::consts::PI;

fn trap(n: usize, axial_khz: f64, transverse_khz: f64) -> TrapSpec<f64> {
    TrapSpec::ytterbium(n, TAU * axial_khz, TAU * transverse_khz)
}

#[test]
fn two_and_three_ion_positions() {
    let x = equilibrium_positions(&trap(2, 300.0, 5000.0)).unwrap();
    assert_abs_diff_eq!(x[1], 0.25f64.cbrt(), epsilon = 1e-12);
    assert_abs_diff_eq!(x[0], -x[1], epsilon = 1e-15);
    let x = equilibrium_positions(&trap(3, 300.0, 5000.0)).unwrap();
    assert_abs_diff_eq!(x[1], 0.0, epsilon = 1e-14);
    assert_abs_diff_eq!(x[2], 1.25f64.cbrt(), epsilon = 1e-12);
}

#[test]
fn positions_match_gradient_flow() {
    for n in [4, 5, 7, 10] {
        let x = equilibrium_positions(&trap(n, 300.0, 5000.0)).unwrap();
        let want = common::relaxed_positions(n);
        for (a, b) in x.iter().zip(&want) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-9);
        }
    }
}

#[test]
fn single_ion_sits_at_the_centre() {
    let c = IonCrystal::new(&trap(1, 300.0, 5000.0)).unwrap();
    assert_eq!(c.positions, vec![0.0]);
    assert_abs_diff_eq!(c.mode_freqs[0], TAU * 5000.0, epsilon = 1e-9);
}

#[test]
fn quartic_term_compresses_the_chain() {
    let mut t = trap(6, 300.0, 5000.0);
    let harmonic = equilibrium_positions(&t).unwrap();
    t.quartic_coeff = 0.2;
    let quartic = equilibrium_positions(&t).unwrap();
    assert!(quartic[5] < harmonic[5]);
    let g = potential_gradient(&quartic, 0.2);
    assert!(g.iter().all(|v| v.abs() < 1e-10));
}

#[test]
fn three_ion_mode_frequencies() {
    let (wz, wx) = (TAU * 300.0, TAU * 3000.0);
    let c = IonCrystal::new(&TrapSpec::ytterbium(3, wz, wx)).unwrap();
    // axial Hessian eigenvalues 1, 3, 29/5 shift the transverse ones by (λ − 1)/2
    assert_abs_diff_eq!(c.mode_freqs[0], wx, epsilon = 1e-9);
    assert_abs_diff_eq!(c.mode_freqs[1], (wx * wx - wz * wz).sqrt(), epsilon = 1e-9);
    assert_abs_diff_eq!(c.mode_freqs[2], (wx * wx - 2.4 * wz * wz).sqrt(), epsilon = 1e-9);
    let s = 1.0 / 3f64.sqrt();
    for i in 0..3 {
        assert_abs_diff_eq!(c.mode_matrix[(i, 0)], s, epsilon = 1e-12);
    }
    // tilt mode: antisymmetric, first component positive
    assert_abs_diff_eq!(c.mode_matrix[(0, 1)], 0.5f64.sqrt(), epsilon = 1e-12);
    assert_abs_diff_eq!(c.mode_matrix[(1, 1)], 0.0, epsilon = 1e-12);
}

#[test]
fn modes_match_dense_oracle() {
    for n in [2, 5, 9] {
        let t = trap(n, 250.0, 4500.0);
        let c = IonCrystal::new(&t).unwrap();
        let (freqs, vecs) = common::oracle_modes(&common::relaxed_positions(n), t.omega_z, t.omega_x);
        for m in 0..n {
            assert_abs_diff_eq!(c.mode_freqs[m], freqs[m], epsilon = 1e-6);
            let dot: f64 = (0..n).map(|i| c.mode_matrix[(i, m)] * vecs[(i, m)]).sum();
            assert_abs_diff_eq!(dot.abs(), 1.0, epsilon = 1e-8);
        }
    }
}

#[test]
fn length_scale_in_metres() {
    let t = trap(5, 1000.0, 5000.0);
    let (e, eps0) = (1.602_176_634e-19, 8.854_187_812_8e-12);
    let m = 170.936_331_5 * 1.660_539_066_60e-27;
    let w = TAU * 1e6;
    let want = (e * e / (4.0 * std::f64::consts::PI * eps0 * m * w * w)).cbrt();
    assert_abs_diff_eq!(t.length_scale(), want, epsilon = 1e-18);
    assert!((t.length_scale() - 2.74e-6).abs() < 0.01e-6);
    assert_abs_diff_eq!(YB171_MASS / ATOMIC_MASS_UNIT, 170.936_331_5, epsilon = 1e-9);
}

#[test]
fn lamb_dicke_parameters() {
    let c = IonCrystal::new(&trap(3, 300.0, 5000.0)).unwrap();
    let dk = 2.0f64.sqrt() * TAU / 355e-9;
    let eta = lamb_dicke_matrix(&c, dk, YB171_MASS).unwrap();
    let hbar = 1.054_571_817e-34;
    for m in 0..3 {
        let x0 = (hbar / (2.0 * YB171_MASS * c.mode_freqs[m] * 1e3)).sqrt();
        for i in 0..3 {
            assert_abs_diff_eq!(eta[(i, m)], c.mode_matrix[(i, m)] * dk * x0, epsilon = 1e-15);
        }
    }
    // COM Lamb-Dicke parameter of a single ion at 5 MHz is about 0.061
    assert!((eta[(0, 0)] * 3f64.sqrt() - 0.061).abs() < 0.001);
    assert!(matches!(lamb_dicke_matrix(&c, 0.0, YB171_MASS), Err(Error::Validation(_))));
}

#[test]
fn invalid_traps_are_rejected() {
    assert!(matches!(IonCrystal::new(&trap(0, 300.0, 5000.0)), Err(Error::Validation(_))));
    assert!(matches!(IonCrystal::new(&trap(3, 300.0, 200.0)), Err(Error::Validation(_))));
    assert!(matches!(IonCrystal::new(&trap(3, -1.0, 200.0)), Err(Error::Validation(_))));
    let mut t = trap(3, 300.0, 5000.0);
    t.quartic_coeff = -1.0;
    assert!(IonCrystal::new(&t).is_err());
    let x = equilibrium_positions(&trap(3, 300.0, 5000.0)).unwrap();
    assert!(matches!(transverse_modes(&trap(4, 300.0, 5000.0), &x), Err(Error::Dimension { .. })));
}

#[test]
fn weak_transverse_confinement_is_unstable() {
    // ten ions need ω_x/ω_z well above 1 to stay linear
    let r = IonCrystal::new(&trap(10, 1000.0, 1200.0));
    assert!(matches!(r, Err(Error::Instability { .. })), "{r:?}");
}

#[test]
fn single_precision_agrees() {
    let t32 = TrapSpec::<f32>::ytterbium(6, (TAU * 300.0) as f32, (TAU * 5000.0) as f32);
    let c32 = IonCrystal::new(&t32).unwrap();
    let c64 = IonCrystal::new(&trap(6, 300.0, 5000.0)).unwrap();
    for (a, b) in c32.positions.iter().zip(&c64.positions) {
        assert!((*a as f64 - b).abs() < 1e-4);
    }
    for (a, b) in c32.mode_freqs.iter().zip(&c64.mode_freqs) {
        assert!((*a as f64 - b).abs() / b < 1e-5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn equilibrium_invariants(n in 2usize..14, axial in 100.0..1000.0f64, ratio in 8.0..30.0f64) {
        let t = trap(n, axial, axial * ratio);
        let c = IonCrystal::new(&t).unwrap();
        let x = &c.positions;
        prop_assert!(x.windows(2).all(|w| w[1] > w[0]));
        for i in 0..n {
            prop_assert!((x[i] + x[n - 1 - i]).abs() < 1e-10);
        }
        // force balance checked with a hand-written gradient
        for i in 0..n {
            let coulomb: f64 = (0..n).filter(|&j| j != i).map(|j| (x[i] - x[j]).signum() / (x[i] - x[j]).powi(2)).sum();
            prop_assert!((x[i] - coulomb).abs() < 1e-9);
        }
        // modes: descending, COM at the trap frequency, orthonormal
        prop_assert!(c.mode_freqs.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!((c.mode_freqs[0] - t.omega_x).abs() < 1e-8 * t.omega_x);
        let b = &c.mode_matrix;
        let gram = b.transpose() * b;
        prop_assert!((gram - DMatrix::identity(n, n)).amax() < 1e-10);
        for m in 0..n {
            let first = (0..n).map(|i| b[(i, m)]).find(|v| v.abs() > 1e-6).unwrap();
            prop_assert!(first > 0.0);
        }
        prop_assert!(c.bandwidth() > 0.0);
    }
}
