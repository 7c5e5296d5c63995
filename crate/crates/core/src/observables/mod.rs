//! Diagnostics computed from spin states and shot records.

mod correlation;
mod fourier;
mod order;
mod series;
mod shots;

pub use correlation::{connected_correlation, otoc, SiteOp};
pub use fourier::{fourier_spectrum, Spectrum, Window};
pub use order::{
    binder_cumulant, correlations_and_structure, domain_statistics, magnetization_mx, moments,
    paramagnet_binder, paramagnet_magnetization, two_body_c2, DomainStats,
};
pub use series::{
    apply_decay, center_of_excitation, detect_kinks, disorder_mean, hamming_distance, rate_function,
    zero_crossings, MeanStderr,
};
pub use shots::{Distribution, ShotTable};
