//! One function per experiment, each turning a resolved configuration into
//! a [`RunOutput`]. Frequencies are reported in kHz and times in ms.

use std::f64::consts::PI;

use anyhow::{bail, Result};
use ionspin_core::couplings::{
    design_couplings, fit_power_law, ising_couplings, multi_tone_couplings, CouplingMatrix, DesignBounds, DesignOptions,
};
use ionspin_core::crystal::IonCrystal;
use ionspin_core::dynamics::{measure, Axis, HamiltonianSpec, Propagator, SpinState};
use ionspin_core::observables::{binder_cumulant, magnetization_mx, apply_decay, detect_kinks, otoc, Distribution, ShotTable, SiteOp};
use ionspin_core::protocols::{
    benchmark_chain, benchmark_pair, c2_dip, c2_sweep, centre_site, dqpt_hamiltonian, dqpt_run, dtc_run, fit_three_spin,
    light_cone_exponent, mbl_run, most_prevalent, qaoa_run, quench_run, run_adiabatic, spectroscopy_scan, DescentSpec,
    DtcParams, Estimator, GapTable, GridSpec, LocalTarget, MblParams, Optimizer, QaoaParams, QaoaProblem, QuenchKind,
    RampKind, RampProfile, GAP_POINTS,
};
use ionspin_core::rng::derive_seed;

use crate::config::*;
use crate::output::{Cell, RunOutput, Table};

fn to_khz(w: f64) -> f64 {
    w / (2.0 * PI)
}

/// Runs the configured experiment.
pub fn execute(cfg: &RunConfig) -> Result<RunOutput> {
    match &cfg.params {
        Params::Crystal(p) => crystal(p),
        Params::Couplings(p) => couplings(p),
        Params::Design(p) => design(p, cfg.seed),
        Params::Evolve(p) => evolve(p, cfg),
        Params::Ramp(p) => ramp(p, cfg),
        Params::Spectroscopy(p) => spectroscopy(p, cfg.tolerance),
        Params::Quench(p) => quench(p, cfg.tolerance),
        Params::Mbl(p) => mbl(p, cfg),
        Params::Dtc(p) => dtc(p, cfg),
        Params::Dqpt(p) => dqpt(p, cfg.tolerance),
        Params::Otoc(p) => otoc_run(p, cfg.tolerance),
        Params::Qaoa(p) => qaoa(p, cfg),
        Params::Bench(p) => bench(p, cfg.tolerance),
    }
}

fn histogram(table: &ShotTable) -> Table {
    let mut t = Table::new("histogram", &["bitstring", "count", "frequency"]);
    for (bits, count) in table.rows() {
        t.push(vec![bits.into(), Cell::Int(count as i64), (count as f64 / table.shots as f64).into()]);
    }
    t
}

fn coupling_table(name: &str, j: &CouplingMatrix<f64>) -> Table {
    let mut t = Table::new(name, &["i", "j", "j_khz"]);
    for (i, k, v) in j.pairs() {
        t.push(vec![i.into(), k.into(), to_khz(v).into()]);
    }
    t
}

fn site_header(first: &str, prefix: &str, n: usize) -> Vec<String> {
    std::iter::once(first.to_string()).chain((1..=n).map(|i| format!("{prefix}{i}"))).collect()
}

fn crystal(p: &CrystalParams) -> Result<RunOutput> {
    let spec = p.trap.spec();
    let c = IonCrystal::new(&spec)?;
    let mut out = RunOutput::default();
    let mut pos = Table::new("positions", &["ion_index", "position"]);
    for (i, &z) in c.positions.iter().enumerate() {
        pos.push(vec![i.into(), z.into()]);
    }
    let n = c.n_ions();
    let mut modes = Table {
        name: "modes".into(),
        header: std::iter::once("mode".to_string())
            .chain(std::iter::once("freq_khz".to_string()))
            .chain((0..n).map(|i| format!("b_{i}")))
            .collect(),
        rows: Vec::new(),
    };
    for (m, &w) in c.mode_freqs.iter().enumerate() {
        let mut row = vec![Cell::from(m), to_khz(w).into()];
        row.extend(c.mode_matrix.column(m).iter().map(|&b| Cell::Float(b)));
        modes.push(row);
    }
    out.scalar("length_scale_m", spec.length_scale());
    out.scalar("bandwidth_khz", to_khz(c.bandwidth()));
    out.scalar("com_khz", to_khz(c.mode_freqs.iter().copied().fold(f64::MIN, f64::max)));
    out.data(
        "modes",
        c.mode_freqs
            .iter()
            .enumerate()
            .map(|(m, &w)| serde_json::json!({ "freq_khz": to_khz(w), "eigenvector": c.mode_matrix.column(m).iter().collect::<Vec<_>>() }))
            .collect::<Vec<_>>(),
    );
    out.tables = vec![pos, modes];
    Ok(out)
}

fn couplings(p: &CouplingsParams) -> Result<RunOutput> {
    let spec = p.trap.spec();
    let c = IonCrystal::new(&spec)?;
    let j = ising_couplings(&c, &p.beam.spec(p.trap.n_ions)?, spec.ion_mass)?;
    let mut out = RunOutput::default();
    out.scalar("j_max_khz", to_khz(j.max_abs()));
    if p.trap.n_ions >= 3 {
        let fit = fit_power_law(&j)?;
        out.scalar("fit_j0_khz", to_khz(fit.j0));
        out.scalar("fit_alpha", fit.alpha);
        out.scalar("fit_rms_residual", fit.rms_residual);
    }
    out.tables.push(coupling_table("couplings", &j));
    if let Some(sweep) = &p.sweep_detunings_khz {
        let mut t = Table::new("sweep", &["detuning_khz", "j0_khz", "alpha", "rms_residual"]);
        for &mu in sweep {
            let mut beam = p.beam.clone();
            beam.detuning_khz = mu;
            let j = ising_couplings(&c, &beam.spec(p.trap.n_ions)?, spec.ion_mass)?;
            let fit = fit_power_law(&j)?;
            t.push(vec![mu.into(), to_khz(fit.j0).into(), fit.alpha.into(), fit.rms_residual.into()]);
        }
        out.tables.push(t);
    }
    Ok(out)
}

fn design(p: &DesignParams, seed: u64) -> Result<RunOutput> {
    let spec = p.trap.spec();
    let c = IonCrystal::new(&spec)?;
    let target = p.target.matrix()?;
    let bounds = DesignBounds { max_rabi: khz(p.max_rabi_khz), windows: None };
    let opts = DesignOptions {
        delta_k: p.delta_k,
        mass: spec.ion_mass,
        restarts: p.restarts,
        seed,
        max_evaluations: p.max_evaluations,
    };
    let r = design_couplings(&target, &c, p.n_tones, &bounds, &opts)?;
    let achieved = multi_tone_couplings(&c, &r.spec, spec.ion_mass)?;
    let mut out = RunOutput::default();
    out.scalar("residual", r.residual);
    out.flag("converged", r.converged);
    if let Some(k) = r.restart {
        out.scalar("winning_restart", k as f64);
    }
    out.seeds = (0..p.restarts as u64).map(|k| derive_seed(seed, k)).collect();
    let mut tones = Table::new("tones", &["tone", "detuning_khz", "ion", "rabi_khz"]);
    for (k, tone) in r.spec.tones.iter().enumerate() {
        for (i, &w) in tone.rabi.iter().enumerate() {
            tones.push(vec![k.into(), to_khz(tone.mu).into(), i.into(), to_khz(w).into()]);
        }
    }
    let mut cmp = Table::new("couplings", &["i", "j", "target_khz", "achieved_khz"]);
    for (i, k, v) in target.pairs() {
        cmp.push(vec![i.into(), k.into(), to_khz(v).into(), to_khz(achieved.get(i, k)).into()]);
    }
    out.tables = vec![tones, cmp];
    Ok(out)
}

// ⟨σ_i⟩ from sampled outcomes.
fn sampled_expectations(table: &ShotTable) -> Vec<f64> {
    let n = table.n_sites;
    let mut m = vec![0.0; n];
    for (&b, &c) in &table.counts {
        for (i, mi) in m.iter_mut().enumerate() {
            *mi += if b >> i & 1 == 1 { c as f64 } else { -(c as f64) };
        }
    }
    m.iter().map(|v| v / table.shots as f64).collect()
}

fn evolve(p: &EvolveParams, cfg: &RunConfig) -> Result<RunOutput> {
    let spec = build_hamiltonian(&p.interactions, &p.fields)?;
    let n = spec.n;
    let prop = Propagator::new(&spec, cfg.tolerance)?;
    let times = p.times.points();
    let mut psi = p.initial.state(n).into_amplitudes();
    let mut header = site_header("t_ms", "m_", n);
    header.push("m_mean".into());
    let mut series = Table { name: "series".into(), header, rows: Vec::new() };
    let mut out = RunOutput::default();
    let mut now = 0.0;
    let mut last = None;
    for (k, &t) in times.iter().enumerate() {
        prop.run(&mut psi, now, t)?;
        now = t;
        let state = SpinState::from_amplitudes(n, psi.clone())?;
        let m = match cfg.shots {
            Some(shots) => {
                let seed = derive_seed(cfg.seed, k as u64);
                out.seeds.push(seed);
                let table = measure(&state, p.measure_axis, shots, seed)?;
                let m = sampled_expectations(&table);
                last = Some(table);
                m
            }
            None => state.site_expectations(p.measure_axis),
        };
        let mean = m.iter().sum::<f64>() / n as f64;
        let mut row = vec![Cell::Float(t)];
        row.extend(m.into_iter().map(Cell::Float));
        row.push(mean.into());
        series.push(row);
    }
    out.label("measure_axis", p.measure_axis.to_string());
    out.tables.push(series);
    if let Some(table) = last {
        shot_summary(&mut out, &table)?;
        out.tables.push(histogram(&table));
    }
    Ok(out)
}

fn shot_summary(out: &mut RunOutput, table: &ShotTable) -> Result<()> {
    let prev = most_prevalent(table)?;
    out.label("most_prevalent", prev.bitstring.clone());
    out.scalar("most_prevalent_probability", prev.probability);
    out.scalar("required_shots", prev.required_shots);
    out.flag("prevalence_tie", prev.tie);
    Ok(())
}

fn ramp(p: &RampParams, cfg: &RunConfig) -> Result<RunOutput> {
    let j = p.couplings.matrix()?;
    let n = j.n();
    let b_final = khz(p.final_field_khz);
    let mut base = HamiltonianSpec::new(n).coupling(p.ising_axis, j.clone());
    if b_final > 0.0 {
        base = base.uniform_field(p.transverse_axis, b_final);
    }
    let b_start = p.b0_khz.map(khz).unwrap_or(5.0 * j.max_abs());
    if !(b_start > b_final) {
        bail!(ConfigError::new("params.final_field_khz", "must stay below the initial field"));
    }
    // the schedule carries the part of the field that is ramped away
    let b0 = b_start - b_final;
    let mut out = RunOutput::default();
    let table = if p.kind == RampKind::LocalAdiabatic {
        let t = GapTable::compute(&base, p.transverse_axis, b0, GAP_POINTS)?;
        let (b_c, gap) = t.minimum();
        out.scalar("critical_field_khz", to_khz(b_c + b_final));
        out.scalar("minimum_gap_khz", to_khz(gap));
        Some(t)
    } else {
        None
    };
    let profile = match (p.kind, &table, p.t_f_ms, p.gamma) {
        (RampKind::LocalAdiabatic, Some(t), None, Some(g)) => RampProfile::local_adiabatic(t, LocalTarget::Gamma(g))?,
        (kind, t, Some(t_f), _) => RampProfile::build(kind, b0, t_f, t.as_ref())?,
        _ => bail!(ConfigError::new("params", "ramp needs `t_f_ms` (or `gamma` for local adiabatic ramps)")),
    };
    let record: Vec<f64> = (0..p.records).map(|k| profile.t_f * k as f64 / (p.records - 1) as f64).collect();
    let r = run_adiabatic(&base, p.transverse_axis, &profile, &record, cfg.tolerance)?;
    let decay = |t: f64, v: f64| p.decoherence_ms.map_or(v, |td| apply_decay(v, t, td));
    let mut series = Table::new("series", &["t_ms", "field_khz", "ground_probability"]);
    for ((&t, &b), &g) in r.times.iter().zip(&r.field).zip(&r.ground_probability) {
        series.push(vec![t.into(), to_khz(b + b_final).into(), decay(t, g).into()]);
    }
    let mut shape = Table::new("profile", &["t_ms", "field_khz"]);
    for (&t, &b) in profile.times.iter().zip(&profile.values) {
        shape.push(vec![t.into(), to_khz(b + b_final).into()]);
    }
    let last = *r.ground_probability.last().unwrap_or(&0.0);
    out.scalar("t_f_ms", profile.t_f);
    out.scalar("b0_khz", to_khz(b_start));
    out.scalar("final_field_khz", p.final_field_khz);
    if let Some(g) = profile.gamma {
        out.scalar("gamma", g);
    }
    out.scalar("ground_probability", decay(profile.t_f, last));
    out.scalar("ground_degeneracy", r.ground_degeneracy as f64);
    let dist = match cfg.shots {
        Some(shots) => {
            let seed = derive_seed(cfg.seed, 0);
            out.seeds.push(seed);
            let table = measure(&r.final_state, p.ising_axis, shots, seed)?;
            shot_summary(&mut out, &table)?;
            out.tables.push(histogram(&table));
            Distribution::from_shots(&table)?
        }
        None => r.final_distribution.clone(),
    };
    if p.ising_axis == Axis::X && n >= 2 {
        // order parameters are defined for the x axis only
        let (m, m_rescaled) = magnetization_mx(&dist)?;
        out.scalar("magnetization", m);
        out.scalar("magnetization_rescaled", m_rescaled);
        if let Ok((g, g_rescaled)) = binder_cumulant(&dist) {
            out.scalar("binder", g);
            out.scalar("binder_rescaled", g_rescaled);
        }
    }
    out.label("kind", format!("{:?}", p.kind));
    out.tables.insert(0, series);
    out.tables.push(shape);
    if let Some(t) = table {
        let mut gaps = Table::new("gaps", &["field_khz", "gap_khz"]);
        for (&b, &g) in t.fields.iter().zip(&t.gaps) {
            gaps.push(vec![to_khz(b + b_final).into(), to_khz(g).into()]);
        }
        out.tables.push(gaps);
    }
    Ok(out)
}

fn spectroscopy(p: &SpectroscopyParams, tol: f64) -> Result<RunOutput> {
    let j = p.couplings.matrix()?;
    let base = HamiltonianSpec::new(j.n()).coupling(p.ising_axis, j);
    let omegas: Vec<f64> = p.omega_khz.points().into_iter().map(khz).collect();
    let s = spectroscopy_scan(&base, p.transverse_axis, khz(p.b0_khz), khz(p.bp_khz), &omegas, p.probe_ms, tol)?;
    let mut out = RunOutput::default();
    let mut series = Table::new("series", &["omega_khz", "depletion"]);
    for (&w, &d) in s.omegas.iter().zip(&s.depletion) {
        series.push(vec![to_khz(w).into(), d.into()]);
    }
    let (w, d) = s.peak();
    out.scalar("peak_omega_khz", to_khz(w));
    out.scalar("peak_depletion", d);
    out.scalar("probe_ms", s.probe_time);
    out.warnings = s.warnings;
    out.tables.push(series);
    Ok(out)
}

fn quench(p: &QuenchParams, tol: f64) -> Result<RunOutput> {
    let spec = build_hamiltonian(&p.interactions, &p.fields)?;
    let n = spec.n;
    let initial = p.initial.as_ref().map(|i| i.state(n));
    let times = p.times.points();
    let r = quench_run(p.kind.clone(), &spec, initial.as_ref(), &times, p.axis, tol)?;
    let mut out = RunOutput::default();
    let mut series = Table { name: "series".into(), header: site_header("t_ms", "m_", n), rows: Vec::new() };
    for (t, m) in r.times.iter().zip(&r.magnetization) {
        let mut row = vec![Cell::Float(*t)];
        row.extend(m.iter().map(|&v| Cell::Float(v)));
        series.push(row);
    }
    let r_max = n - 1;
    let mut corr = Table::new("correlations", &["t_ms", "r", "correlation"]);
    for r_dist in 1..=r_max {
        for (t, c) in r.times.iter().zip(r.correlation_at(r_dist)) {
            corr.push(vec![(*t).into(), r_dist.into(), c.into()]);
        }
    }
    let arrivals = match p.kind {
        QuenchKind::Local => {
            let c = centre_site(n);
            r.local_arrivals(c, c.min(n - 1 - c).max(1))
        }
        QuenchKind::Global => r.global_arrivals(r_max, p.threshold),
    };
    let mut arr = Table::new("arrivals", &["r", "t_ms"]);
    for (k, a) in arrivals.iter().enumerate() {
        arr.push(vec![(k + 1).into(), a.map_or(Cell::Text(String::new()), Cell::Float)]);
    }
    match light_cone_exponent(&arrivals) {
        Ok((a, b)) => {
            out.scalar("arrival_prefactor_ms", a);
            out.scalar("arrival_exponent", b);
        }
        Err(e) => out.warnings.push(format!("light-cone fit unavailable: {e}")),
    }
    out.label("axis", p.axis.to_string());
    out.tables = vec![series, corr, arr];
    Ok(out)
}

fn mbl(p: &MblConfig, cfg: &RunConfig) -> Result<RunOutput> {
    let j0 = khz(p.j0_khz);
    let mut params = MblParams::new(p.n, j0, p.alpha, khz(p.b_khz), khz(p.w_khz), cfg.seed);
    params.disorder_axis = p.disorder_axis;
    params.realizations = p.realizations;
    if let Some(g) = &p.times {
        params.times = g.points();
    }
    if let Some(w) = p.plateau_ms {
        params.plateau = w;
    }
    let r = mbl_run(&params, cfg.tolerance)?;
    let mut out = RunOutput::default();
    let mut series = Table::new("series", &["t_ms", "hamming", "stderr"]);
    for ((&t, &m), &s) in r.times.iter().zip(&r.hamming.mean).zip(&r.hamming.stderr) {
        series.push(vec![t.into(), m.into(), s.into()]);
    }
    out.scalar("plateau_mean", r.plateau_mean);
    out.scalar("plateau_stderr", r.plateau_stderr);
    out.scalar("realizations", r.hamming.realizations as f64);
    out.seeds = r.seeds;
    out.tables.push(series);
    Ok(out)
}

fn dtc(p: &DtcConfig, cfg: &RunConfig) -> Result<RunOutput> {
    let j0 = khz(p.j0_khz);
    let scale = if j0 != 0.0 { j0.abs() } else { 1.0 };
    let mut params = DtcParams::new(p.n, p.epsilon, j0, khz(p.w_khz), p.n_periods, cfg.seed);
    params.alpha = p.alpha;
    params.kick_field = p.kick_khz.map(khz).unwrap_or(scale);
    params.interaction_time = p.interaction_ms.unwrap_or(1.0 / scale);
    params.disorder_time = p.disorder_ms.unwrap_or(params.interaction_time);
    let r = dtc_run(&params, cfg.tolerance)?;
    let mut out = RunOutput::default();
    let mut series = Table::new("series", &["period", "magnetization"]);
    for (k, &m) in r.magnetization.iter().enumerate() {
        series.push(vec![(k + 1).into(), m.into()]);
    }
    let mut spec = Table::new("spectrum", &["frequency", "amplitude"]);
    for (&f, &a) in r.spectrum.freqs.iter().zip(&r.spectrum.amps) {
        spec.push(vec![f.into(), a.into()]);
    }
    out.scalar("peak_frequency", r.peak_frequency);
    out.scalar("subharmonic_height", r.subharmonic_height);
    out.scalar("subharmonic_weight", r.subharmonic_weight);
    let kick_ms = PI * (1.0 - p.epsilon) / (2.0 * params.kick_field);
    out.scalar("period_ms", kick_ms + params.interaction_time + params.disorder_time);
    out.seeds = vec![cfg.seed];
    out.data("disorder_khz", r.disorder.iter().map(|&d| to_khz(d)).collect::<Vec<_>>());
    out.tables = vec![series, spec];
    Ok(out)
}

fn dqpt(p: &DqptParams, tol: f64) -> Result<RunOutput> {
    let spec = dqpt_hamiltonian(p.n, khz(p.j0_khz), p.alpha, khz(p.b_khz));
    let times = p.times.points();
    let r = dqpt_run(&spec, p.initial, &times, tol)?;
    let kinks = detect_kinks(&r.rate, p.kink_factor);
    let mut out = RunOutput::default();
    let mut series = Table::new("series", &["t_ms", "rate", "magnetization_x", "c2"]);
    for k in 0..r.times.len() {
        series.push(vec![r.times[k].into(), r.rate[k].into(), r.magnetization_x[k].into(), r.c2[k].into()]);
    }
    let mut events = Table::new("events", &["kind", "index", "t_ms"]);
    for &k in &kinks {
        events.push(vec!["kink".into(), k.into(), r.times[k].into()]);
    }
    for &k in &r.crossings {
        events.push(vec!["crossing".into(), k.into(), r.times[k].into()]);
    }
    out.scalar("kinks", kinks.len() as f64);
    out.scalar("crossings", r.crossings.len() as f64);
    let matched = kinks.len() == r.crossings.len() && kinks.iter().zip(&r.crossings).all(|(a, b)| a.abs_diff(*b) <= 1);
    out.flag("kinks_match_crossings", matched);
    out.tables = vec![series, events];
    if let Some(sweep) = &p.c2_sweep {
        let fields_khz = sweep.fields_khz.points();
        let fields: Vec<f64> = fields_khz.iter().copied().map(khz).collect();
        let mut t = Table::new("c2", &["n", "field_khz", "c2"]);
        for &n in &sweep.sizes {
            let c2 = c2_sweep(n, khz(p.j0_khz), p.alpha, &fields, sweep.window_ms, sweep.samples, tol)?;
            for (&b, &c) in fields_khz.iter().zip(&c2) {
                t.push(vec![n.into(), b.into(), c.into()]);
            }
            if let Some((b, depth)) = c2_dip(&fields, &c2) {
                out.scalar(&format!("c2_dip_field_khz_n{n}"), to_khz(b));
                out.scalar(&format!("c2_dip_depth_n{n}"), depth);
            }
        }
        out.tables.push(t);
    }
    Ok(out)
}

fn otoc_run(p: &OtocParams, tol: f64) -> Result<RunOutput> {
    let spec = build_hamiltonian(&p.interactions, &p.fields)?;
    let state = p.initial.state(spec.n);
    let w = SiteOp::pauli(p.w.site, p.w.axis);
    let v = SiteOp::pauli(p.v.site, p.v.axis);
    let mut series = Table::new("series", &["tau_ms", "re", "im"]);
    for tau in p.taus.points() {
        let f = otoc(&state, &w, &v, &spec, tau, tol)?;
        series.push(vec![tau.into(), f.re.into(), f.im.into()]);
    }
    let mut out = RunOutput::default();
    out.tables.push(series);
    Ok(out)
}

fn qaoa(p: &QaoaConfig, cfg: &RunConfig) -> Result<RunOutput> {
    let j = p.couplings.matrix()?;
    let b = khz(p.b_khz);
    let optimizer = match &p.optimizer {
        OptimizerConfig::Grid { beta_points, gamma_points } => {
            Optimizer::Grid(GridSpec { beta_points: *beta_points, gamma_points: *gamma_points, ..GridSpec::default() })
        }
        OptimizerConfig::GradientDescent { step, delta, max_iterations, initial } => Optimizer::GradientDescent(DescentSpec {
            initial: initial.clone().map(|(betas, gammas)| QaoaParams { betas, gammas }),
            step: *step,
            delta: *delta,
            max_iterations: *max_iterations,
            ..DescentSpec::default()
        }),
    };
    let estimator = match cfg.shots {
        Some(shots) => Estimator::Shots { shots, seed: cfg.seed },
        None => Estimator::Exact,
    };
    let r = qaoa_run(&j, b, p.p, &optimizer, estimator)?;
    let problem = QaoaProblem::new(&j, b)?;
    let mut out = RunOutput::default();
    let mut header = vec!["step".to_string()];
    header.extend((1..=p.p).map(|k| format!("beta_{k}_ms")));
    header.extend((1..=p.p).map(|k| format!("gamma_{k}_ms")));
    header.push("eta".into());
    let mut series = Table { name: "series".into(), header, rows: Vec::new() };
    for (k, (params, eta)) in r.trajectory.iter().enumerate() {
        let mut row = vec![Cell::from(k)];
        row.extend(params.betas.iter().chain(&params.gammas).map(|&v| Cell::Float(v)));
        row.push((*eta).into());
        series.push(row);
    }
    out.scalar("eta", r.eta);
    out.scalar("iterations", r.iterations as f64);
    out.scalar("evaluations", r.evaluations as f64);
    out.scalar("ground_energy_khz", to_khz(problem.e_ground));
    out.scalar("max_energy_khz", to_khz(problem.e_max));
    out.flag("converged", r.converged);
    out.data("betas_ms", &r.params.betas);
    out.data("gammas_ms", &r.params.gammas);
    out.tables.push(series);
    if let Estimator::Shots { shots, seed } = estimator {
        // the state is held in the x basis, so z outcomes read out σ_x
        let state = problem.state(&r.params)?;
        let final_seed = derive_seed(seed, u64::MAX);
        out.seeds = vec![seed, seed ^ 0x9e37_79b9_7f4a_7c15, final_seed];
        let table = measure(&state, Axis::Z, shots, final_seed)?;
        shot_summary(&mut out, &table)?;
        out.label("histogram_axis", "x");
        out.tables.push(histogram(&table));
    }
    Ok(out)
}

fn bench(p: &BenchParams, tol: f64) -> Result<RunOutput> {
    let j = p.couplings.matrix()?;
    let n = j.n();
    let times = p.times.points();
    let mut out = RunOutput::default();
    let pairs: Vec<(usize, usize)> = match &p.mode {
        BenchMode::Pair { i, j: k } => {
            if *i >= n || *k >= n || i == k {
                bail!(ConfigError::new("params.mode.pair", format!("need two distinct sites below {n}")));
            }
            vec![(*i, *k)]
        }
        BenchMode::AllPairs => (0..n).flat_map(|i| (i + 1..n).map(move |k| (i, k))).collect(),
        BenchMode::Chain { peaks } => {
            let r = benchmark_chain(&j, &times, *peaks, tol)?;
            let mut series = Table::new("series", &["t_ms", "return_probability"]);
            for (&t, &v) in r.times.iter().zip(&r.population) {
                series.push(vec![t.into(), v.into()]);
            }
            let mut spec = Table::new("spectrum", &["freq_khz", "amplitude"]);
            for (&f, &a) in r.spectrum.freqs.iter().zip(&r.spectrum.amps) {
                spec.push(vec![f.into(), a.into()]);
            }
            for (k, &w) in r.peaks.iter().enumerate() {
                out.scalar(&format!("peak_{}_khz", k + 1), to_khz(w));
            }
            if n == 3 {
                let (j1, j2) = fit_three_spin(&r.times, &r.population, &r.peaks)?;
                out.scalar("fit_nearest_khz", to_khz(j1));
                out.scalar("fit_next_nearest_khz", to_khz(j2));
            }
            out.tables = vec![series, spec];
            return Ok(out);
        }
    };
    let mut t = Table::new("series", &["i", "j", "estimate_khz", "exact_khz", "error"]);
    let mut worst: f64 = 0.0;
    for (i, k) in pairs {
        let e = benchmark_pair(&j, i, k, &times, tol)?;
        worst = worst.max(e.error);
        t.push(vec![i.into(), k.into(), to_khz(e.estimate).into(), to_khz(e.exact).into(), e.error.into()]);
    }
    out.scalar("worst_relative_error", worst);
    out.tables.push(t);
    Ok(out)
}
