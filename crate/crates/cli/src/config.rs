//! Run configuration: a JSON envelope plus one parameter schema per
//! experiment. Frequencies are read in kHz and converted to rad/ms, times
//! are in ms.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use ionspin_core::couplings::{BeamSpec, CouplingMatrix};
use ionspin_core::crystal::{TrapSpec, ATOMIC_MASS_UNIT, ELEMENTARY_CHARGE};
use ionspin_core::dynamics::{Axis, HamiltonianSpec, SpinState};
use ionspin_core::protocols::{InitialKind, QuenchKind, RampKind};
use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

pub fn khz(f: f64) -> f64 {
    2.0 * PI * f
}

/// A schema violation, with the JSON path of the offending key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "config: {}", self.message)
        } else {
            write!(f, "config at `{}`: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Crystal,
    Couplings,
    Design,
    Evolve,
    Ramp,
    Spectroscopy,
    Quench,
    Mbl,
    Dtc,
    Dqpt,
    Otoc,
    Qaoa,
    Bench,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Crystal => "crystal",
            Experiment::Couplings => "couplings",
            Experiment::Design => "design",
            Experiment::Evolve => "evolve",
            Experiment::Ramp => "ramp",
            Experiment::Spectroscopy => "spectroscopy",
            Experiment::Quench => "quench",
            Experiment::Mbl => "mbl",
            Experiment::Dtc => "dtc",
            Experiment::Dqpt => "dqpt",
            Experiment::Otoc => "otoc",
            Experiment::Qaoa => "qaoa",
            Experiment::Bench => "bench",
        }
    }
}

fn default_format() -> u32 {
    FORMAT_VERSION
}

fn default_tolerance() -> f64 {
    1e-9
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    #[serde(default = "default_format")]
    format_version: u32,
    experiment: Experiment,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    shots: Option<u64>,
    #[serde(default = "default_tolerance")]
    tolerance: f64,
    #[serde(default)]
    output: Option<PathBuf>,
    #[serde(default)]
    params: serde_json::Value,
}

/// Fully resolved configuration, echoed into every `result.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub format_version: u32,
    pub experiment: Experiment,
    pub seed: u64,
    /// `None` runs on exact probabilities.
    pub shots: Option<u64>,
    /// Local error bound of the propagators.
    pub tolerance: f64,
    pub output: Option<PathBuf>,
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Params {
    Crystal(CrystalParams),
    Couplings(CouplingsParams),
    Design(DesignParams),
    Evolve(EvolveParams),
    Ramp(RampParams),
    Spectroscopy(SpectroscopyParams),
    Quench(QuenchParams),
    Mbl(MblConfig),
    Dtc(DtcConfig),
    Dqpt(DqptParams),
    Otoc(OtocParams),
    Qaoa(QaoaConfig),
    Bench(BenchParams),
}

fn decode<T: DeserializeOwned>(value: serde_json::Value, prefix: &str) -> Result<T, ConfigError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = if inner == "." { prefix.to_string() } else { format!("{prefix}.{inner}") };
        ConfigError::new(path, e.inner().to_string())
    })
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let env: Envelope = serde_path_to_error::deserialize(de)
        .map_err(|e| ConfigError::new(e.path().to_string(), e.inner().to_string()))?;
    if env.format_version != FORMAT_VERSION {
        return Err(ConfigError::new(
            "format_version",
            format!("unsupported format version {} (expected {FORMAT_VERSION})", env.format_version),
        ));
    }
    if !(env.tolerance > 0.0 && env.tolerance < 1.0) {
        return Err(ConfigError::new("tolerance", "must lie in (0, 1)"));
    }
    if env.shots == Some(0) {
        return Err(ConfigError::new("shots", "must be at least 1"));
    }
    let raw = match env.params {
        serde_json::Value::Null => serde_json::Value::Object(Default::default()),
        v => v,
    };
    let p = "params";
    let params = match env.experiment {
        Experiment::Crystal => Params::Crystal(decode(raw, p)?),
        Experiment::Couplings => Params::Couplings(decode(raw, p)?),
        Experiment::Design => Params::Design(decode(raw, p)?),
        Experiment::Evolve => Params::Evolve(decode(raw, p)?),
        Experiment::Ramp => Params::Ramp(decode(raw, p)?),
        Experiment::Spectroscopy => Params::Spectroscopy(decode(raw, p)?),
        Experiment::Quench => Params::Quench(decode(raw, p)?),
        Experiment::Mbl => Params::Mbl(decode(raw, p)?),
        Experiment::Dtc => Params::Dtc(decode(raw, p)?),
        Experiment::Dqpt => Params::Dqpt(decode(raw, p)?),
        Experiment::Otoc => Params::Otoc(decode(raw, p)?),
        Experiment::Qaoa => Params::Qaoa(decode(raw, p)?),
        Experiment::Bench => Params::Bench(decode(raw, p)?),
    };
    let cfg = RunConfig {
        format_version: env.format_version,
        experiment: env.experiment,
        seed: env.seed,
        shots: env.shots,
        tolerance: env.tolerance,
        output: env.output,
        params,
    };
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    fn validate(&self) -> Result<(), ConfigError> {
        match &self.params {
            Params::Crystal(c) => c.trap.validate("params.trap"),
            Params::Couplings(c) => {
                c.trap.validate("params.trap")?;
                c.beam.validate("params.beam", c.trap.n_ions)
            }
            Params::Design(d) => {
                d.trap.validate("params.trap")?;
                d.target.validate("params.target")?;
                positive(d.max_rabi_khz, "params.max_rabi_khz")
            }
            Params::Evolve(e) => {
                let n = sites_of(&e.interactions, &e.fields, "params")?;
                e.initial.validate("params.initial", n)?;
                e.times.validate("params.times")
            }
            Params::Ramp(r) => {
                r.couplings.validate("params.couplings")?;
                match r.kind {
                    RampKind::LocalAdiabatic if r.t_f_ms.is_none() && r.gamma.is_none() => {
                        Err(ConfigError::new("params", "local adiabatic ramp needs `t_f_ms` or `gamma`"))
                    }
                    RampKind::Linear | RampKind::Exponential if r.t_f_ms.is_none() => {
                        Err(ConfigError::new("params.t_f_ms", "required for linear and exponential ramps"))
                    }
                    _ => Ok(()),
                }?;
                if !(r.final_field_khz >= 0.0) || r.b0_khz.map_or(false, |b| !(b > r.final_field_khz)) {
            return Err(ConfigError::new("params.final_field_khz", "must lie in [0, b0_khz)"));
        }
        if r.records < 2 {
                    return Err(ConfigError::new("params.records", "must be at least 2"));
                }
                Ok(())
            }
            Params::Spectroscopy(s) => {
                s.couplings.validate("params.couplings")?;
                s.omega_khz.validate("params.omega_khz")
            }
            Params::Quench(q) => {
                let n = sites_of(&q.interactions, &q.fields, "params")?;
                if let Some(i) = &q.initial {
                    i.validate("params.initial", n)?;
                }
                q.times.validate("params.times")
            }
            Params::Mbl(m) => {
                if m.n < 2 || m.n > 20 {
                    return Err(ConfigError::new("params.n", "must be in 2..=20"));
                }
                positive(m.j0_khz, "params.j0_khz")?;
                if m.realizations == 0 {
                    return Err(ConfigError::new("params.realizations", "must be at least 1"));
                }
                Ok(())
            }
            Params::Dtc(d) => {
                if d.n == 0 || d.n > 20 {
                    return Err(ConfigError::new("params.n", "must be in 1..=20"));
                }
                if d.n_periods < 4 {
                    return Err(ConfigError::new("params.n_periods", "must be at least 4"));
                }
                Ok(())
            }
            Params::Dqpt(d) => {
                if d.n < 2 || d.n > 20 {
                    return Err(ConfigError::new("params.n", "must be in 2..=20"));
                }
                d.times.validate("params.times")
            }
            Params::Otoc(o) => {
                let n = sites_of(&o.interactions, &o.fields, "params")?;
                o.initial.validate("params.initial", n)?;
                if o.w.site >= n || o.v.site >= n {
                    return Err(ConfigError::new("params", "operator sites must be below the chain length"));
                }
                o.taus.validate("params.taus")
            }
            Params::Qaoa(q) => {
                q.couplings.validate("params.couplings")?;
                if q.p == 0 {
                    return Err(ConfigError::new("params.p", "must be at least 1"));
                }
                Ok(())
            }
            Params::Bench(b) => {
                b.couplings.validate("params.couplings")?;
                b.times.validate("params.times")
            }
        }
    }
}

fn positive(v: f64, path: &str) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::new(path, "must be positive and finite"))
    }
}

// ---------------------------------------------------------------- shared

/// A scalar applied to every site, or one value per site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerSite {
    Uniform(f64),
    Sites(Vec<f64>),
}

impl PerSite {
    pub fn expand(&self, n: usize, path: &str) -> Result<Vec<f64>, ConfigError> {
        match self {
            PerSite::Uniform(v) => Ok(vec![*v; n]),
            PerSite::Sites(v) if v.len() == n => Ok(v.clone()),
            PerSite::Sites(v) => Err(ConfigError::new(path, format!("expected {n} values, got {}", v.len()))),
        }
    }
}

fn default_mass() -> f64 {
    170.936_331_5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapConfig {
    pub n_ions: usize,
    pub axial_khz: f64,
    pub transverse_khz: f64,
    #[serde(default)]
    pub quartic: f64,
    #[serde(default = "default_mass")]
    pub mass_amu: f64,
}

impl TrapConfig {
    fn validate(&self, path: &str) -> Result<(), ConfigError> {
        if self.n_ions == 0 {
            return Err(ConfigError::new(format!("{path}.n_ions"), "must be at least 1"));
        }
        positive(self.axial_khz, &format!("{path}.axial_khz"))?;
        positive(self.transverse_khz, &format!("{path}.transverse_khz"))?;
        positive(self.mass_amu, &format!("{path}.mass_amu"))
    }

    pub fn spec(&self) -> TrapSpec<f64> {
        TrapSpec {
            n_ions: self.n_ions,
            omega_z: khz(self.axial_khz),
            omega_x: khz(self.transverse_khz),
            quartic_coeff: self.quartic,
            ion_mass: self.mass_amu * ATOMIC_MASS_UNIT,
            charge: ELEMENTARY_CHARGE,
        }
    }
}

/// Wavevector difference of two 355 nm beams crossing at 90°, rad/m.
pub fn default_delta_k() -> f64 {
    2f64.sqrt() * 2.0 * PI / 355e-9
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamConfig {
    pub rabi_khz: PerSite,
    /// Beatnote detuning from the carrier.
    pub detuning_khz: f64,
    #[serde(default = "default_delta_k")]
    pub delta_k: f64,
}

impl BeamConfig {
    fn validate(&self, path: &str, n: usize) -> Result<(), ConfigError> {
        self.rabi_khz.expand(n, &format!("{path}.rabi_khz"))?;
        positive(self.detuning_khz, &format!("{path}.detuning_khz"))?;
        positive(self.delta_k, &format!("{path}.delta_k"))
    }

    pub fn spec(&self, n: usize) -> Result<BeamSpec<f64>, ConfigError> {
        let rabi = self.rabi_khz.expand(n, "params.beam.rabi_khz")?.into_iter().map(khz).collect();
        Ok(BeamSpec { rabi, mu: khz(self.detuning_khz), delta_k: self.delta_k })
    }
}

/// Where an Ising coupling matrix comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CouplingSource {
    /// `J_ij = j0/|i − j|^α`; the sign of `j0` sets AFM (+) or FM (−).
    PowerLaw { n: usize, j0_khz: f64, alpha: f64 },
    /// Explicit symmetric matrix, zero diagonal.
    Matrix { j_khz: Vec<Vec<f64>> },
    /// Couplings from a trapped-ion crystal and a single beatnote.
    Ions { trap: TrapConfig, beam: BeamConfig },
}

impl CouplingSource {
    fn validate(&self, path: &str) -> Result<(), ConfigError> {
        match self {
            CouplingSource::PowerLaw { n, j0_khz, alpha } => {
                if *n == 0 || *n > 24 {
                    return Err(ConfigError::new(format!("{path}.power_law.n"), "must be in 1..=24"));
                }
                if !j0_khz.is_finite() || !alpha.is_finite() {
                    return Err(ConfigError::new(format!("{path}.power_law"), "j0_khz and alpha must be finite"));
                }
                Ok(())
            }
            CouplingSource::Matrix { j_khz } => {
                let n = j_khz.len();
                if n == 0 || j_khz.iter().any(|r| r.len() != n) {
                    return Err(ConfigError::new(format!("{path}.matrix.j_khz"), "must be a non-empty square matrix"));
                }
                Ok(())
            }
            CouplingSource::Ions { trap, beam } => {
                trap.validate(&format!("{path}.ions.trap"))?;
                beam.validate(&format!("{path}.ions.beam"), trap.n_ions)
            }
        }
    }

    pub fn n(&self) -> usize {
        match self {
            CouplingSource::PowerLaw { n, .. } => *n,
            CouplingSource::Matrix { j_khz } => j_khz.len(),
            CouplingSource::Ions { trap, .. } => trap.n_ions,
        }
    }

    /// Couplings in rad/ms.
    pub fn matrix(&self) -> anyhow::Result<CouplingMatrix<f64>> {
        Ok(match self {
            CouplingSource::PowerLaw { n, j0_khz, alpha } => CouplingMatrix::power_law(*n, khz(*j0_khz), *alpha),
            CouplingSource::Matrix { j_khz } => {
                let n = j_khz.len();
                CouplingMatrix::new(DMatrix::from_fn(n, n, |i, k| khz(j_khz[i][k])))?
            }
            CouplingSource::Ions { trap, beam } => {
                let spec = trap.spec();
                let crystal = ionspin_core::crystal::IonCrystal::new(&spec)?;
                ionspin_core::couplings::ising_couplings(&crystal, &beam.spec(trap.n_ions)?, spec.ion_mass)?
            }
        })
    }
}

fn default_x() -> Axis {
    Axis::X
}

fn default_y() -> Axis {
    Axis::Y
}

fn default_z() -> Axis {
    Axis::Z
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Interaction {
    #[serde(default = "default_x")]
    pub axis: Axis,
    pub couplings: CouplingSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub axis: Axis,
    pub khz: PerSite,
}

fn sites_of(interactions: &[Interaction], fields: &[FieldConfig], path: &str) -> Result<usize, ConfigError> {
    let first = interactions.first().ok_or_else(|| ConfigError::new(format!("{path}.interactions"), "need at least one term"))?;
    let n = first.couplings.n();
    for (k, i) in interactions.iter().enumerate() {
        let p = format!("{path}.interactions[{k}].couplings");
        i.couplings.validate(&p)?;
        if i.couplings.n() != n {
            return Err(ConfigError::new(p, format!("chain length {} differs from {n}", i.couplings.n())));
        }
    }
    for (k, f) in fields.iter().enumerate() {
        f.khz.expand(n, &format!("{path}.fields[{k}].khz"))?;
    }
    if n > 24 {
        return Err(ConfigError::new(format!("{path}.interactions"), "at most 24 spins"));
    }
    Ok(n)
}

/// Assembles `Σ_terms J σσ + Σ_fields B σ` in rad/ms.
pub fn build_hamiltonian(interactions: &[Interaction], fields: &[FieldConfig]) -> anyhow::Result<HamiltonianSpec<f64>> {
    let n = sites_of(interactions, fields, "params")?;
    let mut spec = HamiltonianSpec::new(n);
    for i in interactions {
        spec = spec.coupling(i.axis, i.couplings.matrix()?);
    }
    for (k, f) in fields.iter().enumerate() {
        let amps = f.khz.expand(n, &format!("params.fields[{k}].khz"))?.into_iter().map(khz).collect();
        spec = spec.field(f.axis, amps);
    }
    Ok(spec)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialConfig {
    /// Every spin up or down along `axis`.
    Polarized { axis: Axis, up: bool },
    /// Alternating pattern along `axis`.
    Neel { axis: Axis, first_up: bool },
    /// Product state along `axis`; site 1 first, `1` for up.
    Bits { axis: Axis, bits: String },
}

impl InitialConfig {
    fn validate(&self, path: &str, n: usize) -> Result<(), ConfigError> {
        if let InitialConfig::Bits { bits, .. } = self {
            if bits.len() != n || bits.chars().any(|c| c != '0' && c != '1') {
                return Err(ConfigError::new(format!("{path}.bits.bits"), format!("need {n} characters of 0/1")));
            }
        }
        Ok(())
    }

    pub fn state(&self, n: usize) -> SpinState<f64> {
        match self {
            InitialConfig::Polarized { axis, up } => SpinState::polarized(n, *axis, *up),
            InitialConfig::Neel { axis, first_up } => SpinState::neel(n, *axis, *first_up),
            InitialConfig::Bits { axis, bits } => {
                let pattern = bits.chars().enumerate().filter(|(_, c)| *c == '1').fold(0usize, |p, (k, _)| p | 1 << k);
                SpinState::configuration(n, *axis, pattern)
            }
        }
    }
}

/// `steps + 1` equally spaced points from `start` to `stop`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    #[serde(default)]
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Grid {
    fn validate(&self, path: &str) -> Result<(), ConfigError> {
        if self.steps == 0 || !(self.stop > self.start) || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(ConfigError::new(path, "need steps ≥ 1 and finite stop > start"));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        (0..=self.steps)
            .map(|k| self.start + (self.stop - self.start) * k as f64 / self.steps as f64)
            .collect()
    }
}

// ----------------------------------------------------------- experiments

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystalParams {
    pub trap: TrapConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingsParams {
    pub trap: TrapConfig,
    pub beam: BeamConfig,
    /// Optional detunings (above the carrier) for a power-law fit sweep.
    #[serde(default)]
    pub sweep_detunings_khz: Option<Vec<f64>>,
}

fn default_restarts() -> usize {
    4
}

fn default_evaluations() -> usize {
    20_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignParams {
    pub trap: TrapConfig,
    pub target: CouplingSource,
    pub n_tones: usize,
    pub max_rabi_khz: f64,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_evaluations")]
    pub max_evaluations: usize,
    #[serde(default = "default_delta_k")]
    pub delta_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveParams {
    pub interactions: Vec<Interaction>,
    #[serde(default)]
    pub fields: Vec<FieldConfig>,
    pub initial: InitialConfig,
    /// Sample times, ms.
    pub times: Grid,
    #[serde(default = "default_z")]
    pub measure_axis: Axis,
}

fn default_records() -> usize {
    41
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RampParams {
    pub couplings: CouplingSource,
    #[serde(default = "default_x")]
    pub ising_axis: Axis,
    #[serde(default = "default_y")]
    pub transverse_axis: Axis,
    pub kind: RampKind,
    /// Initial field; five times the largest coupling when absent.
    #[serde(default)]
    pub b0_khz: Option<f64>,
    /// Field left on at the end of the ramp.
    #[serde(default)]
    pub final_field_khz: f64,
    #[serde(default)]
    pub t_f_ms: Option<f64>,
    /// Adiabaticity of a local adiabatic ramp (alternative to `t_f_ms`).
    #[serde(default)]
    pub gamma: Option<f64>,
    /// Number of equally spaced record times, including both ends.
    #[serde(default = "default_records")]
    pub records: usize,
    /// Applies `e^{−t/t_d}` to the recorded ground-state probability.
    #[serde(default)]
    pub decoherence_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectroscopyParams {
    pub couplings: CouplingSource,
    #[serde(default = "default_x")]
    pub ising_axis: Axis,
    #[serde(default = "default_y")]
    pub transverse_axis: Axis,
    pub b0_khz: f64,
    pub bp_khz: f64,
    /// Modulation frequencies.
    pub omega_khz: Grid,
    #[serde(default)]
    pub probe_ms: Option<f64>,
}

fn default_threshold() -> f64 {
    ionspin_core::protocols::CORRELATION_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuenchParams {
    pub kind: QuenchKind,
    pub interactions: Vec<Interaction>,
    #[serde(default)]
    pub fields: Vec<FieldConfig>,
    /// Overrides the default start (all down, or the centre spin flipped).
    #[serde(default)]
    pub initial: Option<InitialConfig>,
    pub times: Grid,
    #[serde(default = "default_z")]
    pub axis: Axis,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

fn default_mbl_alpha() -> f64 {
    1.13
}

fn default_realizations() -> usize {
    30
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MblConfig {
    pub n: usize,
    pub j0_khz: f64,
    #[serde(default = "default_mbl_alpha")]
    pub alpha: f64,
    pub b_khz: f64,
    pub w_khz: f64,
    #[serde(default = "default_z")]
    pub disorder_axis: Axis,
    #[serde(default = "default_realizations")]
    pub realizations: usize,
    /// Sample times in ms; `J0 t ∈ [0, 10]` when absent.
    #[serde(default)]
    pub times: Option<Grid>,
    /// Averaging window in ms; `[5, 10]/J0` when absent.
    #[serde(default)]
    pub plateau_ms: Option<(f64, f64)>,
}

fn default_dtc_alpha() -> f64 {
    1.5
}

fn default_periods() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DtcConfig {
    pub n: usize,
    pub epsilon: f64,
    pub j0_khz: f64,
    #[serde(default = "default_dtc_alpha")]
    pub alpha: f64,
    pub w_khz: f64,
    /// Kick field; defaults to `J0` (or 1 rad/ms without interactions).
    #[serde(default)]
    pub kick_khz: Option<f64>,
    /// Defaults to `1/J0` (or 1 ms without interactions).
    #[serde(default)]
    pub interaction_ms: Option<f64>,
    #[serde(default)]
    pub disorder_ms: Option<f64>,
    #[serde(default = "default_periods")]
    pub n_periods: usize,
}

fn default_dqpt_alpha() -> f64 {
    6.0
}

fn default_kink_factor() -> f64 {
    ionspin_core::protocols::KINK_FACTOR
}

fn default_dqpt_initial() -> InitialKind {
    InitialKind::XOrdered
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct C2SweepConfig {
    pub sizes: Vec<usize>,
    pub fields_khz: Grid,
    pub window_ms: (f64, f64),
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DqptParams {
    pub n: usize,
    pub j0_khz: f64,
    #[serde(default = "default_dqpt_alpha")]
    pub alpha: f64,
    pub b_khz: f64,
    #[serde(default = "default_dqpt_initial")]
    pub initial: InitialKind,
    pub times: Grid,
    #[serde(default = "default_kink_factor")]
    pub kink_factor: f64,
    #[serde(default)]
    pub c2_sweep: Option<C2SweepConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteOpConfig {
    pub site: usize,
    pub axis: Axis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OtocParams {
    pub interactions: Vec<Interaction>,
    #[serde(default)]
    pub fields: Vec<FieldConfig>,
    pub initial: InitialConfig,
    pub w: SiteOpConfig,
    pub v: SiteOpConfig,
    pub taus: Grid,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum OptimizerConfig {
    Grid {
        #[serde(default = "default_grid_points")]
        beta_points: usize,
        #[serde(default = "default_grid_points")]
        gamma_points: usize,
    },
    GradientDescent {
        #[serde(default = "default_step")]
        step: f64,
        #[serde(default = "default_delta")]
        delta: f64,
        #[serde(default = "default_iterations")]
        max_iterations: usize,
        /// Starting `(betas, gammas)`, ms; grid midpoint when absent.
        #[serde(default)]
        initial: Option<(Vec<f64>, Vec<f64>)>,
    },
}

fn default_grid_points() -> usize {
    41
}

fn default_step() -> f64 {
    0.2
}

fn default_delta() -> f64 {
    0.05
}

fn default_iterations() -> usize {
    15
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QaoaConfig {
    pub couplings: CouplingSource,
    pub b_khz: f64,
    #[serde(default = "one")]
    pub p: usize,
    pub optimizer: OptimizerConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BenchMode {
    /// Isolate one pair (0-based sites) and fit its oscillation.
    Pair { i: usize, j: usize },
    /// Every pair in turn.
    AllPairs,
    /// Return-probability spectrum of the whole chain.
    Chain {
        #[serde(default = "default_peaks")]
        peaks: usize,
    },
}

fn default_peaks() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchParams {
    pub couplings: CouplingSource,
    pub mode: BenchMode,
    pub times: Grid,
}
