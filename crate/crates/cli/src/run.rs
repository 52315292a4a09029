//! One function per command. Each returns a [`ResultBundle`] whose table
//! columns are fixed:
//!
//! | command        | columns                                                        |
//! |----------------|----------------------------------------------------------------|
//! | band           | k, epsilon, gap, n_x, n_y, n_z                                 |
//! | winding        | k, n_x, n_y, n_z                                               |
//! | phase-diagram  | theta1, theta2, f_exact, f_model, winding, min_gap, errors     |
//! | walk           | step, x, probability                                           |
//! | lz-scan        | theta1, p_model, p_exact                                       |
//! | revival        | theta, m, traversals, steps, deviation, bound, predicted_phase |
//! | cqed-wigner    | re, im, w                                                      |
//! | phases         | m, k, epsilon, gap                                             |

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use qwalk::angle::distance;
use qwalk::cqed::{
    disentangle_reference, fit_fringes, fringe_phase, reduced_cavity, run_cqed_walk, wigner, CavityConfig, GridSpec,
    Level,
};
use qwalk::phases::{self, BandSign, PhaseDiagramOptions, PhaseGrid};
use qwalk::spectral::{self, bloch_unitary, diagonalize, gap_of};
use qwalk::walk::{localized_state, overlap_fidelity, run_walk};
use qwalk::{Frame, Protocol, SpinState, WalkParams, C64};

use crate::config::{Command, ExperimentConfig, Value};
use crate::error::{Classify, CliError};
use crate::output::{Cell, ResultBundle, Table};

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultBundle, CliError> {
    let mut bundle = ResultBundle::new(cfg.command, cfg.seed, cfg.params.clone());
    match cfg.command {
        Command::Band => band(cfg, &mut bundle)?,
        Command::Winding => winding(cfg, &mut bundle)?,
        Command::PhaseDiagram => phase_diagram(cfg, &mut bundle)?,
        Command::Walk => walk(cfg, &mut bundle)?,
        Command::LzScan => lz_scan(cfg, &mut bundle)?,
        Command::Revival => revival(cfg, &mut bundle)?,
        Command::CqedWigner => cqed_wigner(cfg, &mut bundle)?,
        Command::Phases => phases(cfg, &mut bundle)?,
    }
    Ok(bundle)
}

fn real(cfg: &ExperimentConfig, key: &str) -> f64 {
    cfg.real(key).unwrap_or_else(|| panic!("`{key}` is validated by the schema"))
}

fn count(cfg: &ExperimentConfig, key: &str) -> usize {
    cfg.count(key).unwrap_or_else(|| panic!("`{key}` is validated by the schema"))
}

fn positive(cfg: &ExperimentConfig, key: &str) -> Result<usize, CliError> {
    match count(cfg, key) {
        0 => Err(CliError::Validation(format!("parameter `{key}` must be positive"))),
        n => Ok(n),
    }
}

fn frame(cfg: &ExperimentConfig) -> Frame {
    match cfg.text("frame") {
        Some("symmetric") => Frame::Symmetric,
        _ => Frame::Standard,
    }
}

/// Walk parameters from theta1/theta2/protocol/frame with `steps` steps.
fn walk_params(cfg: &ExperimentConfig, steps: usize) -> Result<WalkParams, CliError> {
    let theta1 = real(cfg, "theta1");
    let params = match (cfg.text("protocol"), cfg.real("theta2")) {
        (Some("single-step"), None) => WalkParams::single_step(theta1, steps),
        (Some("single-step"), Some(_)) => {
            return Err(CliError::Validation("parameter `theta2` is not used by protocol single-step".into()))
        }
        (_, Some(theta2)) => WalkParams::split_step(theta1, theta2, steps),
        (_, None) => {
            return Err(CliError::Validation(format!(
                "missing required parameter `theta2` for `{}` with protocol split-step (pass --theta2)",
                cfg.command.name()
            )))
        }
    };
    Ok(params.with_frame(frame(cfg)))
}

fn point_label(p: &WalkParams) -> String {
    match p.protocol {
        Protocol::SingleStep => format!("theta1 = {}", p.theta1),
        Protocol::SplitStep => format!("theta1 = {}, theta2 = {}", p.theta1, p.theta2),
    }
}

fn band(cfg: &ExperimentConfig, out: &mut ResultBundle) -> Result<(), CliError> {
    let params = walk_params(cfg, 1)?;
    let ctx = format!("band at {}", point_label(&params));
    let band = spectral::band_structure(params.coins(), count(cfg, "nk")).map_err(|e| e.classify(&ctx))?;
    let mut table = Table::new(&["k", "epsilon", "gap", "n_x", "n_y", "n_z"]);
    for i in 0..band.len() {
        let n = band.n_plus[i];
        let eps = band.epsilon[i];
        table.push(vec![band.k_grid[i].into(), eps.into(), gap_of(eps).into(), n[0].into(), n[1].into(), n[2].into()]);
    }
    let (min_gap, k_at) = band.min_gap_location();
    out.table = table;
    out.scalar("n_k", band.len());
    out.scalar("min_gap", min_gap);
    out.scalar("min_gap_k", k_at);
    out.scalar("mean_quasienergy", band.epsilon.iter().sum::<f64>() / band.len() as f64);
    Ok(())
}

fn winding(cfg: &ExperimentConfig, out: &mut ResultBundle) -> Result<(), CliError> {
    let params = walk_params(cfg, 1)?;
    let ctx = format!("winding at {}", point_label(&params));
    let band = spectral::band_structure(params.coins(), count(cfg, "nk")).map_err(|e| e.classify(&ctx))?;
    let w = spectral::winding_number(&band).map_err(|e| e.classify(&ctx))?;
    let axis = spectral::chiral_axis(&band).map_err(|e| e.classify(&ctx))?;
    let mut table = Table::new(&["k", "n_x", "n_y", "n_z"]);
    for (k, n) in band.k_grid.iter().zip(&band.n_plus) {
        table.push(vec![(*k).into(), n[0].into(), n[1].into(), n[2].into()]);
    }
    out.table = table;
    out.scalar("winding", w);
    out.scalar("chiral_axis", axis.axis.to_vec());
    out.scalar("axis_residual", axis.residual);
    out.scalar("min_gap", band.min_gap());
    Ok(())
}

fn phase_diagram(cfg: &ExperimentConfig, out: &mut ResultBundle) -> Result<(), CliError> {
    let n = positive(cfg, "n")?;
    let grid_n = positive(cfg, "grid")?;
    let range = (real(cfg, "theta_min"), real(cfg, "theta_max"));
    if range.0 >= range.1 {
        return Err(CliError::Validation("`theta_min` must be below `theta_max`".into()));
    }
    let grid = PhaseGrid { theta1_range: range, theta2_range: range, n1: grid_n, n2: grid_n };
    let opts = PhaseDiagramOptions {
        traversals: positive(cfg, "traversals")?,
        frame: frame(cfg),
        n_k_topology: count(cfg, "nk"),
        n_k_mean: count(cfg, "nk_mean"),
        ..PhaseDiagramOptions::new(n)
    };
    if opts.n_k_topology < 512 || opts.n_k_mean < 256 {
        return Err(CliError::Validation("`nk` must be at least 512 and `nk_mean` at least 256".into()));
    }
    let points = phases::phase_diagram(&grid, &opts);
    let mut table = Table::new(&["theta1", "theta2", "f_exact", "f_model", "winding", "min_gap", "errors"]);
    let mut failed = 0usize;
    for p in &points {
        failed += usize::from(!p.errors.is_empty());
        table.push(vec![
            p.theta1.into(),
            p.theta2.into(),
            p.f_exact.into(),
            p.f_model.into(),
            p.winding.map_or(Cell::Empty, Cell::Int),
            p.min_gap.into(),
            Cell::Text(p.errors.join("; ")),
        ]);
    }
    out.table = table;
    out.scalar("points", points.len());
    out.scalar("points_with_errors", failed);
    out.scalar("grid_axis", (0..grid_n).map(|i| grid.theta1(i)).collect::<Vec<_>>());
    Ok(())
}

fn walk(cfg: &ExperimentConfig, out: &mut ResultBundle) -> Result<(), CliError> {
    let n = positive(cfg, "n")?;
    let mut params = walk_params(cfg, n)?.with_traversals(positive(cfg, "traversals")?);
    match cfg.real("kick") {
        Some(kick) => params = params.with_kick(kick),
        None => out.param("kick", Value::Real(params.kick)),
    }
    let lattice = cfg.count("lattice").unwrap_or_else(|| params.required_lattice_size());
    out.param("lattice", Value::Count(lattice as u64));
    let spin = match cfg.text("spin") {
        Some("down") => SpinState::down(),
        _ => SpinState::up(),
    };
    let ctx = format!("walk at {}", point_label(&params));
    let init = localized_state(lattice / 2, spin, lattice).map_err(|e| e.classify(&ctx))?;
    let traj = run_walk(&init, &params).map_err(|e| e.classify(&ctx))?;

    let mut table = Table::new(&["step", "x", "probability"]);
    for snap in &traj.snapshots {
        for (site, p) in snap.distribution.iter().enumerate() {
            table.push(vec![snap.step.into(), init.offset(site).into(), (*p).into()]);
        }
    }
    let last = traj.snapshots.last().expect("step 0 is always recorded");
    out.table = table;
    out.scalar("steps", params.total_steps());
    out.scalar("fidelity", overlap_fidelity(&init, &traj.final_state).map_err(|e| e.classify(&ctx))?);
    out.scalar("norm", traj.final_state.norm_sqr());
    out.scalar("final_spin_up", last.spin_populations[0]);
    out.scalar("final_spin_down", last.spin_populations[1]);
    out.scalar("support_radius", traj.final_state.support_radius());
    Ok(())
}

fn lz_scan(cfg: &ExperimentConfig, out: &mut ResultBundle) -> Result<(), CliError> {
    let n = positive(cfg, "n")?;
    let points = positive(cfg, "points")?;
    let (lo, hi) = (real(cfg, "theta_min"), real(cfg, "theta_max"));
    let k0 = real(cfg, "k0");
    let thetas: Vec<f64> =
        (0..points).map(|i| if points == 1 { lo } else { lo + (hi - lo) * i as f64 / (points - 1) as f64 }).collect();
    let results = thetas
        .par_iter()
        .map(|&theta| {
            phases::lz_probability(k0, &WalkParams::single_step(theta, n))
                .map_err(|e| e.classify(&format!("lz at theta1 = {theta}")))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(&["theta1", "p_model", "p_exact"]);
    for (theta, r) in thetas.iter().zip(&results) {
        table.push(vec![(*theta).into(), r.p_model.into(), r.p_exact.into()]);
    }
    let max_increase = results.windows(2).map(|w| w[1].p_model - w[0].p_model).fold(f64::NEG_INFINITY, f64::max);
    let max_diff = results.iter().map(|r| (r.p_model - r.p_exact).abs()).fold(0.0, f64::max);
    out.table = table;
    out.scalar("points", points);
    out.scalar("max_model_increase", max_increase);
    out.scalar("max_abs_difference", max_diff);
    Ok(())
}

fn revival(cfg: &ExperimentConfig, out: &mut ResultBundle) -> Result<(), CliError> {
    let theta = real(cfg, "theta");
    let m = positive(cfg, "m")?;
    let traversals = cfg.count("traversals").unwrap_or(if m % 2 == 0 { 1 } else { 2 });
    out.param("traversals", Value::Count(traversals as u64));
    let check = phases::revival_deviation(theta, m, traversals, count(cfg, "nk"))
        .map_err(|e| e.classify(&format!("revival at theta = {theta}, m = {m}")))?;
    let mut table = Table::new(&["theta", "m", "traversals", "steps", "deviation", "bound", "predicted_phase"]);
    table.push(vec![
        theta.into(),
        m.into(),
        traversals.into(),
        check.steps.into(),
        check.deviation.into(),
        check.bound.into(),
        check.predicted_phase.into(),
    ]);
    out.table = table;
    out.scalar("deviation", check.deviation);
    out.scalar("bound", check.bound);
    out.scalar("predicted_phase", check.predicted_phase);
    out.scalar("steps", check.steps);
    out.scalar("within_bound", check.deviation <= check.bound + 1e-8);
    Ok(())
}

fn cqed_wigner(cfg: &ExperimentConfig, out: &mut ResultBundle) -> Result<(), CliError> {
    let n = positive(cfg, "n")?;
    let params = walk_params(cfg, n)?.with_traversals(positive(cfg, "traversals")?);
    let alpha = C64::new(real(cfg, "alpha"), real(cfg, "alpha_im"));
    let sites = cfg.count("sites").unwrap_or(n);
    out.param("sites", Value::Count(sites as u64));
    let ctx = format!("cqed-wigner at {}", point_label(&params));
    let cavity = match cfg.count("cutoff") {
        Some(cutoff) => CavityConfig::new(alpha, sites, cutoff),
        None => CavityConfig::with_default_cutoff(alpha, sites),
    }
    .map_err(|e| e.classify(&ctx))?;
    out.param("cutoff", Value::Count(cavity.fock_cutoff as u64));
    let half_width = cfg.real("half_width").unwrap_or(alpha.norm() + 3.0);
    out.param("half_width", Value::Real(half_width));
    let spacing = real(cfg, "spacing");
    if !(half_width > 0.0 && spacing > 0.0 && spacing < half_width) {
        return Err(CliError::Validation("need 0 < spacing < half_width".into()));
    }

    let mut state = run_cqed_walk(&params, &cavity, true).map_err(|e| e.classify(&ctx))?;
    if cfg.flag("disentangle") == Some(true) {
        state = disentangle_reference(&state);
    }
    let project_g = cfg.text("mode") == Some("project-g");
    let rho = reduced_cavity(&state, project_g).map_err(|e| e.classify(&ctx))?;
    let spec = GridSpec::centered(half_width, spacing);
    let wg = wigner(&rho, spec).map_err(|e| e.classify(&ctx))?;

    let mut table = Table::new(&["re", "im", "w"]);
    for j in 0..spec.n_im {
        for i in 0..spec.n_re {
            table.push(vec![spec.re(i).into(), spec.im(j).into(), wg.value(i, j).into()]);
        }
    }
    out.table = table;
    match fringe_phase(&wg, &cavity) {
        Ok(phase) => {
            out.scalar("fringe_phase", phase);
            out.scalar("fringe_error", serde_json::Value::Null);
        }
        Err(e) => {
            out.scalar("fringe_phase", serde_json::Value::Null);
            out.scalar("fringe_error", e.to_string());
        }
    }
    if let Ok(fit) = fit_fringes(&wg, cavity.alpha) {
        out.scalar("fringe_amplitude", fit.amplitude);
    }
    out.scalar("integral", wg.integral());
    out.scalar("max_abs", wg.max_abs());
    out.scalar(
        "populations",
        json!({
            "g": state.level_population(Level::G),
            "e": state.level_population(Level::E),
            "f": state.level_population(Level::F),
        }),
    );
    Ok(())
}

fn phases(cfg: &ExperimentConfig, out: &mut ResultBundle) -> Result<(), CliError> {
    let n = positive(cfg, "n")?;
    let mut params = walk_params(cfg, n)?.with_traversals(positive(cfg, "traversals")?);
    match cfg.real("kick") {
        Some(kick) => params = params.with_kick(kick),
        None => out.param("kick", Value::Real(params.kick)),
    }
    let k0 = real(cfg, "k0");
    let ctx = format!("phases at {}, k0 = {k0}", point_label(&params));
    let d = phases::decompose(k0, &params).map_err(|e| e.classify(&ctx))?;

    let coins = params.coins();
    let mut table = Table::new(&["m", "k", "epsilon", "gap"]);
    for (m, k) in phases::momentum_path(k0, &params).into_iter().enumerate() {
        let eps = diagonalize(&bloch_unitary(k, coins)).epsilon;
        table.push(vec![m.into(), k.into(), eps.into(), gap_of(eps).into()]);
    }

    // The geometric phase must not depend on the eigenvector phases chosen
    // at each sample.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let trials = count(cfg, "gauge_trials");
    let mut gauge_dev: f64 = 0.0;
    for _ in 0..trials {
        let gauges: Vec<f64> = (0..=params.total_steps()).map(|_| rng.gen_range(-PI..PI)).collect();
        let g = phases::geometric_phase_with_gauge(k0, &params, BandSign::Plus, |m| gauges[m])
            .map_err(|e| e.classify(&ctx))?;
        gauge_dev = gauge_dev.max(distance(g.value, d.phi_geo));
    }

    let v_plus = diagonalize(&bloch_unitary(k0, coins)).v_plus;
    let exact = phases::exact_k_evolution(k0, v_plus, &params);

    out.table = table;
    out.scalar("phi_dyn_plus", d.phi_dyn_plus);
    out.scalar("phi_geo", d.phi_geo);
    out.scalar("phi_total", d.phi_total);
    out.scalar("closed", params.is_full_zone());
    out.scalar("near_gap_closure", d.near_gap_closure);
    out.scalar("exact_phase", exact.refocused_phase);
    out.scalar("exact_fidelity", exact.overlap.norm_sqr());
    out.scalar("gauge_trials", trials);
    out.scalar("gauge_max_deviation", gauge_dev);
    Ok(())
}
