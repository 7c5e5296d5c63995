//! Complete simulated experiments built on the dynamics and observables.

pub mod bench;
pub mod dqpt;
pub mod dtc;
pub mod mbl;
pub mod prevalence;
pub mod qaoa;
pub mod quench;
pub mod ramp;
pub mod spectroscopy;
pub mod staircase;

pub use bench::{benchmark_chain, benchmark_pair, fit_three_spin, ChainBenchmark, PairEstimate};
pub use dqpt::{c2_dip, c2_sweep, dqpt_hamiltonian, dqpt_run, DqptResult, InitialKind, KINK_FACTOR};
pub use dtc::{dtc_run, dtc_sequence, DtcParams, DtcResult};
pub use mbl::{disorder_offsets, mbl_hamiltonian, mbl_run, MblParams, MblResult};
pub use prevalence::{most_prevalent, required_shots, Prevalence};
pub use qaoa::{qaoa_run, DescentSpec, Estimator, GridSpec, Optimizer, QaoaOutcome, QaoaParams, QaoaProblem};
pub use quench::{centre_site, light_cone_exponent, quench_run, QuenchKind, QuenchResult, CORRELATION_THRESHOLD};
pub use ramp::{
    equal_adiabaticity_times, ground_manifold, run_adiabatic, AdiabaticResult, GapTable, LocalTarget, RampKind,
    RampProfile, RampTimes, GAP_POINTS,
};
pub use spectroscopy::{gap_valley, spectroscopy_scan, SpectroscopyScan};
pub use staircase::{classical_staircase, LevelCrossing, Staircase};
