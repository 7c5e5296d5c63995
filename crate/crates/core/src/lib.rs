//! Desk-scale model of trapped-ion quantum spin simulators.
//!
//! The pipeline runs from trap parameters ([`crystal`]) to phonon-mediated
//! Ising couplings ([`couplings`]), exact many-body spin dynamics
//! ([`dynamics`]), the diagnostics computed from states and shot records
//! ([`observables`]) and complete experiment protocols ([`protocols`]).
//!
//! Angular frequencies are in rad/ms and times in ms throughout. The
//! numerical kernels are generic over [`Real`]; `f64` aliases are provided
//! at the crate root and the protocols work in double precision.

pub mod couplings;
pub mod crystal;
pub mod dynamics;
pub mod error;
pub mod interp;
pub mod observables;
pub mod optimize;
pub mod protocols;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type TrapSpec = crystal::TrapSpec<f64>;
pub type IonCrystal = crystal::IonCrystal<f64>;
pub type CouplingMatrix = couplings::CouplingMatrix<f64>;
pub type BeamSpec = couplings::BeamSpec<f64>;
pub type MultiToneSpec = couplings::MultiToneSpec<f64>;
pub type SpinState = dynamics::SpinState<f64>;
pub type HamiltonianSpec = dynamics::HamiltonianSpec<f64>;
pub type Schedule = dynamics::Schedule<f64>;
pub type FloquetSequence = dynamics::FloquetSequence<f64>;
pub type ShotTable = observables::ShotTable;
pub type Distribution = observables::Distribution<f64>;

pub use dynamics::Axis;

/// Crate version embedded in run metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
