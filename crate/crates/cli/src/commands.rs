//! The four subcommands, exit codes included, separated from argument
//! parsing so they can be driven directly from tests.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kmiter::problems::{
    elliptic_solution_at, hyperbolic_solution_at, parabolic_forward, resonance_check,
    RESONANCE_TOL_DEFAULT,
};
use kmiter::spectral::{inverse_transform, SpectralField};
use kmiter::{
    convergence_rate_table, diagnostics_for_params, gamma_admissible, iterate_closed_form,
    iterate_via_solves, manufacture_data, run_experiment, ExperimentConfig, IterationKind,
    IterationProblem,
};

use crate::config::ConfigFile;
use crate::error::{CliError, EXIT_FLAGGED, EXIT_OK};
use crate::gridio::write_grid;
use crate::report::write_report_csv;

/// What a subcommand hands back to `main`: text for stdout and the process
/// exit code (0 or 5; hard failures travel as `CliError`).
#[derive(Debug)]
pub struct CmdOutcome {
    pub exit_code: i32,
    pub text: String,
}

impl CmdOutcome {
    fn ok(text: String) -> Self {
        Self {
            exit_code: EXIT_OK,
            text,
        }
    }
}

fn load(config_path: &Path) -> Result<ExperimentConfig, CliError> {
    ConfigFile::load(config_path)?.to_experiment()
}

/// For parabolic configs, check gamma up front so the rejection message
/// carries both bounds, not just the binding one.
fn gamma_gate(config: &ExperimentConfig) -> Result<(), CliError> {
    if config.method != IterationKind::Parabolic {
        return Ok(());
    }
    let basis = config.build_basis()?;
    let report = gamma_admissible(config.gamma, &basis, config.t_end, config.a2)?;
    if report.admissible {
        return Ok(());
    }
    let mut msg = format!(
        "gamma = {:?} inadmissible: non-expansiveness requires 0 < gamma < {:?}",
        report.gamma, report.non_expansive_bound
    );
    match report.injectivity_bound {
        Some(b) => {
            let _ = write!(msg, "; injectivity additionally requires gamma < {b:?}");
        }
        None => msg.push_str("; injectivity bound undefined at these constants"),
    }
    Err(CliError::parameter(msg))
}

/// Evaluate the forward solution of the configured problem at time `t` and
/// dump the grid to `out`.
pub fn cmd_forward(config_path: &Path, t: f64, out: &Path) -> Result<CmdOutcome, CliError> {
    let config = load(config_path)?;
    if !t.is_finite() || t < 0.0 {
        return Err(CliError::config(format!("need t >= 0, got {t}")));
    }
    gamma_gate(&config)?;
    let (problem, truth) = manufacture_data(&config)?;
    let field = match &problem {
        IterationProblem::Parabolic { a2, .. } => parabolic_forward(&truth, t, *a2),
        IterationProblem::Elliptic { data, .. } => elliptic_solution_at(data, t)?,
        IterationProblem::Hyperbolic { data } => {
            if t > data.t_end {
                return Err(CliError::config(format!(
                    "hyperbolic solution is defined on [0, {}], got t = {t}",
                    data.t_end
                )));
            }
            hyperbolic_solution_at(data, t)?
        }
    };
    let grid = inverse_transform(&field);
    if let Some(parent) = out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    write_grid(out, &grid)?;
    Ok(CmdOutcome::ok(format!(
        "wrote {} ({}x{} grid, t = {t})",
        out.display(),
        grid.domain().nx(),
        grid.domain().ny()
    )))
}

/// Run the configured reconstruction and write `report.csv`,
/// `reconstruction.grid` and `error.grid` into `out_dir` (plus per-checkpoint
/// error grids when `dump_checkpoints` is set).
pub fn cmd_reconstruct(
    config_path: &Path,
    out_dir: &Path,
    dump_checkpoints: bool,
) -> Result<CmdOutcome, CliError> {
    let config = load(config_path)?;
    gamma_gate(&config)?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", out_dir.display())))?;

    let report = run_experiment(&config)?;
    write_report_csv(&out_dir.join("report.csv"), &report)?;
    write_grid(&out_dir.join("reconstruction.grid"), &report.reconstruction)?;
    write_grid(&out_dir.join("error.grid"), &report.error_field)?;

    let mut text = String::new();
    for r in &report.records {
        let _ = writeln!(
            text,
            "step {:>8}: rel error {} %, increment {:.3e}, {:.2} ms",
            r.step,
            r.rel_error_percent
                .map(|e| format!("{e:.4}"))
                .unwrap_or_else(|| "undefined (zero truth)".into()),
            r.increment_norm,
            r.wall_ms
        );
    }
    if report.records.len() >= 2 {
        let ratios = convergence_rate_table(&report)?;
        let _ = writeln!(
            text,
            "checkpoint error ratios: {}",
            ratios
                .iter()
                .map(|r| r.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into()))
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    for (step, d) in &report.cross_check {
        let _ = writeln!(text, "cross-check k = {step}: sub-solve vs closed form {d:.3e}");
    }

    if dump_checkpoints {
        let (problem, truth) = manufacture_data(&config)?;
        let it = problem.build()?;
        let phi0 = SpectralField::zero(it.basis());
        let truth_grid = inverse_transform(&truth);
        for &step in &config.checkpoints {
            let iterate = iterate_closed_form(&it, &phi0, step)?;
            let err = inverse_transform(&iterate).abs_diff(&truth_grid)?;
            write_grid(&out_dir.join(format!("error_{step}.grid")), &err)?;
        }
    }

    let _ = writeln!(text, "report written to {}", out_dir.display());
    Ok(CmdOutcome::ok(text))
}

/// Print operator diagnostics, resonance margins and gamma bounds; exit 0
/// when everything needed for convergence holds, 5 when a flag is raised.
pub fn cmd_check(config_path: &Path) -> Result<CmdOutcome, CliError> {
    let config = load(config_path)?;
    let basis = config.build_basis()?;
    let mut text = String::new();
    let mut flagged = false;

    let _ = writeln!(
        text,
        "method: {}; {} modes; spectrum [{:.6}, {:.6}]; T = {:?}",
        config.method,
        basis.len(),
        basis.lambda_min(),
        basis.lambda_max(),
        config.t_end
    );

    let d = diagnostics_for_params(
        config.method,
        &basis,
        config.t_end,
        config.gamma,
        config.a2,
    )?;
    let _ = writeln!(
        text,
        "multipliers: min {:.6e}, max |m| {:.6e}",
        d.min_multiplier, d.max_abs_multiplier
    );
    let _ = writeln!(
        text,
        "non-expansive: {}",
        if d.non_expansive { "yes" } else { "NO" }
    );
    let _ = writeln!(text, "positive: {}", if d.positive { "yes" } else { "no" });
    let _ = writeln!(
        text,
        "quadratic contraction inequality: {}",
        if d.mazya_inequality_ok { "holds" } else { "violated (negative multiplier)" }
    );
    if !d.non_expansive {
        flagged = true;
    }
    if d.eigenvalue_one_modes.is_empty() {
        let _ = writeln!(text, "eigenvalue-1 modes: none");
    } else {
        flagged = true;
        for &i in &d.eigenvalue_one_modes {
            let (k, m) = basis.mode_of(i);
            let _ = writeln!(
                text,
                "eigenvalue-1 mode: ({k},{m}) lambda = {:.6} — iteration stalls there",
                basis.eigenvalues()[i]
            );
        }
    }
    if !d.zero_multiplier_modes.is_empty() {
        for &i in &d.zero_multiplier_modes {
            let (k, m) = basis.mode_of(i);
            let _ = writeln!(
                text,
                "zero-multiplier mode: ({k},{m}) lambda = {:.6} (one-step kernel; injectivity fails)",
                basis.eigenvalues()[i]
            );
        }
    }

    if config.method == IterationKind::Hyperbolic {
        let rep = resonance_check(&basis, config.t_end, RESONANCE_TOL_DEFAULT)?;
        let (k, m) = rep.min_margin_mode;
        let _ = writeln!(
            text,
            "resonance margin: min |sin(lambda T)| = {:.6e} at mode ({k},{m})",
            rep.min_margin
        );
        if !rep.is_clear() {
            flagged = true;
            for &i in &rep.flagged {
                let (k, m) = basis.mode_of(i);
                let _ = writeln!(
                    text,
                    "resonant mode: ({k},{m}) lambda = {:.6}, distance to k*pi/T set {:.3e}",
                    basis.eigenvalues()[i],
                    rep.distances[i]
                );
            }
        }
    }

    if config.method == IterationKind::Parabolic {
        let rep = gamma_admissible(config.gamma, &basis, config.t_end, config.a2)?;
        let _ = writeln!(
            text,
            "gamma = {:?}; non-expansiveness bound {:.6e} ({})",
            rep.gamma,
            rep.non_expansive_bound,
            if rep.non_expansive_ok { "ok" } else { "VIOLATED" }
        );
        match (rep.injectivity_bound, rep.injectivity_ok) {
            (Some(bound), Some(ok)) => {
                let _ = writeln!(
                    text,
                    "injectivity bound {:.6e} ({})",
                    bound,
                    if ok { "ok" } else { "not satisfied" }
                );
            }
            _ => {
                let _ = writeln!(text, "injectivity bound undefined at these constants");
            }
        }
        if !rep.admissible {
            flagged = true;
        }
    }

    let _ = writeln!(text, "status: {}", if flagged { "FLAGGED" } else { "OK" });
    Ok(CmdOutcome {
        exit_code: if flagged { EXIT_FLAGGED } else { EXIT_OK },
        text,
    })
}

/// Run the sub-solve and closed-form routes side by side at the given step
/// counts and report the worst relative discrepancy per k. Passes at 1e-10.
pub fn cmd_equivalence(config_path: &Path, ks: &[u64]) -> Result<CmdOutcome, CliError> {
    let config = load(config_path)?;
    gamma_gate(&config)?;
    if ks.is_empty() {
        return Err(CliError::config("no step counts given (use --k)"));
    }
    if let Some(&k) = ks.iter().find(|&&k| k > 1000) {
        return Err(CliError::config(format!(
            "k = {k} too large: the sub-solve path is O(k), capped at 1000"
        )));
    }
    let (problem, _) = manufacture_data(&config)?;
    let it = problem.build()?;

    // Seeded band-limited initial guess; the equivalence must hold for any.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed);
    let coeffs: Vec<f64> = (0..it.basis().len())
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();
    let phi0 = SpectralField::from_coeffs(it.basis(), coeffs)?;
    equivalence_outcome(&it, &problem, &phi0, ks)
}

/// The comparison behind `cmd_equivalence`, with the affine operator passed
/// in so tests can run a deliberately corrupted one as a negative control.
pub fn equivalence_outcome(
    it: &kmiter::AffineIteration,
    problem: &IterationProblem,
    phi0: &SpectralField,
    ks: &[u64],
) -> Result<CmdOutcome, CliError> {
    let mut text = String::new();
    let mut pass = true;
    let _ = writeln!(text, "{:>6} {:>14} {}", "k", "discrepancy", "verdict");
    for &k in ks {
        let closed = iterate_closed_form(it, phi0, k)?;
        let via = iterate_via_solves(problem, phi0, k)?;
        let scale = closed.l2_norm().max(via.l2_norm());
        let d = if scale == 0.0 {
            0.0
        } else {
            via.sub(&closed)?.l2_norm() / scale
        };
        let ok = d <= 1e-10;
        pass &= ok;
        let _ = writeln!(
            text,
            "{k:>6} {d:>14.3e} {}",
            if ok { "pass" } else { "FAIL" }
        );
    }
    let _ = writeln!(text, "equivalence: {}", if pass { "pass" } else { "FAIL" });
    Ok(CmdOutcome {
        exit_code: if pass { EXIT_OK } else { EXIT_FLAGGED },
        text,
    })
}
