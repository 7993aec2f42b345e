//! Reconstruction-experiment driver: manufacture consistent (or noisy) data
//! from a known ground truth, run an iteration with checkpoints, and report
//! relative errors, increment norms and error-field grids.
//!
//! Data are always manufactured through the *forward* (well-posed) maps, so
//! the ill-posed problem is consistent by construction and the iteration's
//! limit is the known truth — which is what makes the relative-error
//! columns meaningful. Noise, when requested, perturbs the data after
//! manufacture and is the one deliberately inconsistent ingredient.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::iteration::{
    increment_norm, iterate_closed_form, iterate_via_solves, IterationKind, IterationProblem,
};
use crate::problems::{
    elliptic_solution_dt_at, hyperbolic_ivp, parabolic_forward, resonance_check,
    CauchyDataElliptic, DirichletDataHyperbolic, FinalDataParabolic, RESONANCE_TOL_DEFAULT,
};
use crate::spectral::{
    build_basis, forward_transform, inverse_transform, GridField, RectDomain, SpectralBasis,
    SpectralField,
};

/// Largest step at which the literal sub-solve path is run for
/// cross-validation (it is O(k)).
pub const CROSS_VALIDATE_MAX_STEP: u64 = 1000;

/// Analytic ground-truth profiles, all projected onto the retained modes so
/// the manufactured problem is exactly band-limited.
#[derive(Debug, Clone, PartialEq)]
pub enum GroundTruth {
    Zero,
    /// One eigenmode with the given amplitude.
    SingleMode { k: usize, m: usize, amplitude: f64 },
    /// Explicit coefficient list `(k, m, amplitude)`.
    Modes(Vec<(usize, usize, f64)>),
    /// Gaussian bump `amp * exp(-((x-cx)^2 + (y-cy)^2) / (2 w^2))`,
    /// sampled and projected (smooth profile).
    Bump {
        center_x: f64,
        center_y: f64,
        width: f64,
        amplitude: f64,
    },
    /// Indicator of `[x0,x1] x [y0,y1]` times `amplitude`, sampled and
    /// projected (rough profile with slowly decaying modes).
    BoxProfile {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        amplitude: f64,
    },
}

impl GroundTruth {
    pub fn realize(&self, basis: &std::sync::Arc<SpectralBasis>) -> Result<SpectralField> {
        match self {
            GroundTruth::Zero => Ok(SpectralField::zero(basis)),
            GroundTruth::SingleMode { k, m, amplitude } => {
                if *k < 1 || *k > basis.kmax() || *m < 1 || *m > basis.kmax() {
                    return Err(Error::InvalidParameter(format!(
                        "mode ({k},{m}) outside 1..={}",
                        basis.kmax()
                    )));
                }
                Ok(SpectralField::single_mode(basis, *k, *m, *amplitude))
            }
            GroundTruth::Modes(entries) => {
                let mut f = SpectralField::zero(basis);
                for &(k, m, amplitude) in entries {
                    if k < 1 || k > basis.kmax() || m < 1 || m > basis.kmax() {
                        return Err(Error::InvalidParameter(format!(
                            "mode ({k},{m}) outside 1..={}",
                            basis.kmax()
                        )));
                    }
                    f.set_coeff(k, m, amplitude);
                }
                Ok(f)
            }
            GroundTruth::Bump {
                center_x,
                center_y,
                width,
                amplitude,
            } => {
                if width.is_nan() || *width <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "bump width must be positive, got {width}"
                    )));
                }
                let (cx, cy, w, a) = (*center_x, *center_y, *width, *amplitude);
                let grid = GridField::from_fn(basis.domain().clone(), |x, y| {
                    a * (-((x - cx).powi(2) + (y - cy).powi(2)) / (2.0 * w * w)).exp()
                });
                forward_transform(&grid, basis)
            }
            GroundTruth::BoxProfile { x0, x1, y0, y1, amplitude } => {
                if !(x0 < x1 && y0 < y1) {
                    return Err(Error::InvalidParameter(
                        "box profile needs x0 < x1 and y0 < y1".into(),
                    ));
                }
                let (x0, x1, y0, y1, a) = (*x0, *x1, *y0, *y1, *amplitude);
                let grid = GridField::from_fn(basis.domain().clone(), |x, y| {
                    if x >= x0 && x <= x1 && y >= y0 && y <= y1 {
                        a
                    } else {
                        0.0
                    }
                });
                forward_transform(&grid, basis)
            }
        }
    }
}

/// Full description of one reconstruction experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub lx: f64,
    pub ly: f64,
    pub nx: usize,
    pub ny: usize,
    pub kmax: usize,
    pub method: IterationKind,
    pub t_end: f64,
    pub a2: f64,
    /// Relaxation parameter; read only by the parabolic method.
    pub gamma: f64,
    pub ground_truth: GroundTruth,
    /// Second trace (the time derivative at 0) used to manufacture
    /// elliptic/hyperbolic data; defaults to zero. For the hyperbolic
    /// method this *is* the reconstruction target.
    pub ground_truth_derivative: Option<GroundTruth>,
    /// Relative amplitude of the additive per-mode data perturbation.
    pub noise_level: f64,
    pub checkpoints: Vec<u64>,
    pub seed: u64,
    /// Re-run checkpoints up to [`CROSS_VALIDATE_MAX_STEP`] through the
    /// literal sub-solve path and record the discrepancy.
    pub cross_validate: bool,
}

impl ExperimentConfig {
    /// Reference constants: unit square, `a^2 = 2`, `T = 0.625`,
    /// `gamma = 2`, parabolic method, decade checkpoints to one million.
    pub fn reference_parabolic(truth: GroundTruth) -> Self {
        Self {
            lx: 1.0,
            ly: 1.0,
            nx: 33,
            ny: 33,
            kmax: 8,
            method: IterationKind::Parabolic,
            t_end: 0.625,
            a2: 2.0,
            gamma: 2.0,
            ground_truth: truth,
            ground_truth_derivative: None,
            noise_level: 0.0,
            checkpoints: vec![10, 1_000, 10_000, 100_000, 1_000_000],
            seed: 0,
            cross_validate: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.noise_level >= 0.0 && self.noise_level.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "noise level must be >= 0, got {}",
                self.noise_level
            )));
        }
        if self.checkpoints.is_empty() {
            return Err(Error::InvalidParameter("no checkpoints requested".into()));
        }
        if !self.checkpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(
                "checkpoints must be strictly increasing".into(),
            ));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "final time must be positive and finite, got {}",
                self.t_end
            )));
        }
        Ok(())
    }

    pub fn build_basis(&self) -> Result<std::sync::Arc<SpectralBasis>> {
        build_basis(
            RectDomain::new(self.lx, self.ly, self.nx, self.ny)?,
            self.kmax,
            self.a2,
        )
    }
}

/// Add seeded per-mode noise: `c_i += level * rms(c) * u_i`,
/// `u_i ~ U(-1, 1)`. A zero field stays exactly zero.
fn perturb(field: &mut SpectralField, level: f64, rng: &mut ChaCha8Rng) {
    if level == 0.0 {
        return;
    }
    let n = field.coeffs().len();
    let rms = (field.coeffs().iter().map(|c| c * c).sum::<f64>() / n as f64).sqrt();
    if rms == 0.0 {
        return;
    }
    for c in field.coeffs_mut() {
        *c += level * rms * rng.gen_range(-1.0..1.0);
    }
}

/// Manufacture a consistent problem from the configured ground truth and
/// return it with the trace the iteration should converge to:
///
/// * parabolic: truth is `u(0)`, data `f = heat(truth, T)`;
/// * elliptic: truth is `u'(T)` of the solution grown from
///   `(u(0), u'(0)) = (ground_truth, ground_truth_derivative)`, data that pair;
/// * hyperbolic: truth is `u'(0) = ground_truth_derivative`, data
///   `(u(0), u(T))` from the forward IVP.
///
/// Noise (if any) is added to the data after the truth is fixed, so a noisy
/// run measures reconstruction against the clean target.
pub fn manufacture_data(
    config: &ExperimentConfig,
) -> Result<(IterationProblem, SpectralField)> {
    config.validate()?;
    let basis = config.build_basis()?;
    let truth0 = config.ground_truth.realize(&basis)?;
    let dtruth0 = config
        .ground_truth_derivative
        .clone()
        .unwrap_or(GroundTruth::Zero)
        .realize(&basis)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    match config.method {
        IterationKind::Parabolic => {
            let mut f = parabolic_forward(&truth0, config.t_end, config.a2);
            perturb(&mut f, config.noise_level, &mut rng);
            let data = FinalDataParabolic::new(f, config.t_end)?;
            Ok((
                IterationProblem::Parabolic {
                    data,
                    gamma: config.gamma,
                    a2: config.a2,
                },
                truth0,
            ))
        }
        IterationKind::Elliptic => {
            let clean = CauchyDataElliptic::new(truth0.clone(), dtruth0.clone())?;
            let truth = elliptic_solution_dt_at(&clean, config.t_end)?;
            let mut f = truth0;
            let mut g = dtruth0;
            perturb(&mut f, config.noise_level, &mut rng);
            perturb(&mut g, config.noise_level, &mut rng);
            let data = CauchyDataElliptic::new(f, g)?;
            Ok((
                IterationProblem::Elliptic {
                    data,
                    t_end: config.t_end,
                },
                truth,
            ))
        }
        IterationKind::Hyperbolic => {
            // Resonant modes cannot be reconstructed; reject configs whose
            // truth puts data there.
            let report = resonance_check(&basis, config.t_end, RESONANCE_TOL_DEFAULT)?;
            for &idx in &report.flagged {
                if truth0.coeffs()[idx] != 0.0 || dtruth0.coeffs()[idx] != 0.0 {
                    let (k, m) = basis.mode_of(idx);
                    return Err(Error::Resonance {
                        k,
                        m,
                        lambda: basis.eigenvalues()[idx],
                        margin: report.sin_margins[idx],
                        tol: RESONANCE_TOL_DEFAULT,
                    });
                }
            }
            let (u_t, _) = hyperbolic_ivp(&truth0, &dtruth0, config.t_end, false);
            let mut f = truth0;
            let mut g = u_t;
            perturb(&mut f, config.noise_level, &mut rng);
            perturb(&mut g, config.noise_level, &mut rng);
            let data = DirichletDataHyperbolic::new(f, g, config.t_end)?;
            Ok((IterationProblem::Hyperbolic { data }, dtruth0))
        }
    }
}

/// One row of the report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointRecord {
    pub step: u64,
    /// `100 * ||phi_k - truth|| / ||truth||`; `None` when the truth is zero.
    pub rel_error_percent: Option<f64>,
    pub increment_norm: f64,
    pub wall_ms: f64,
}

/// Everything a run produces: per-checkpoint records, the final
/// reconstruction and the pointwise error field on the grid.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub truth_norm: f64,
    pub records: Vec<CheckpointRecord>,
    pub reconstruction: GridField,
    pub error_field: GridField,
    /// `(step, relative discrepancy)` of closed form vs sub-solve path,
    /// when cross-validation was requested.
    pub cross_check: Vec<(u64, f64)>,
}

/// Run the configured experiment: manufacture, iterate with closed-form
/// checkpoints (O(modes) per checkpoint regardless of step count), record
/// errors and timings, and synthesize the final fields.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunReport> {
    let (problem, truth) = manufacture_data(config)?;
    let it = problem.build()?;
    let phi0 = SpectralField::zero(it.basis());
    let truth_norm = truth.l2_norm();

    let mut records = Vec::with_capacity(config.checkpoints.len());
    let mut cross_check = Vec::new();
    let mut last = phi0.clone();
    for &step in &config.checkpoints {
        let clock = Instant::now();
        let iterate = iterate_closed_form(&it, &phi0, step)?;
        let inc = if step == 0 {
            0.0
        } else {
            increment_norm(&it, &phi0, step)?
        };
        let wall_ms = clock.elapsed().as_secs_f64() * 1e3;
        let rel_error_percent = iterate.rel_l2_error(&truth)?.map(|e| 100.0 * e);
        if config.cross_validate && step <= CROSS_VALIDATE_MAX_STEP {
            let via = iterate_via_solves(&problem, &phi0, step)?;
            let denom = iterate.l2_norm().max(1e-300);
            cross_check.push((step, via.sub(&iterate)?.l2_norm() / denom));
        }
        records.push(CheckpointRecord {
            step,
            rel_error_percent,
            increment_norm: inc,
            wall_ms,
        });
        last = iterate;
    }

    let reconstruction = inverse_transform(&last);
    let error_field = reconstruction.abs_diff(&inverse_transform(&truth))?;
    Ok(RunReport {
        config: config.clone(),
        truth_norm,
        records,
        reconstruction,
        error_field,
        cross_check,
    })
}

/// Ratios of successive checkpoint errors (the per-decade slowdown).
/// `None` entries mark undefined ratios (zero truth or a vanished error).
pub fn convergence_rate_table(report: &RunReport) -> Result<Vec<Option<f64>>> {
    if report.records.len() < 2 {
        return Err(Error::InvalidParameter(
            "need at least 2 checkpoints for rate ratios".into(),
        ));
    }
    Ok(report
        .records
        .windows(2)
        .map(|w| match (w[0].rel_error_percent, w[1].rel_error_percent) {
            (Some(prev), Some(next)) if prev > 0.0 => Some(next / prev),
            _ => None,
        })
        .collect())
}
