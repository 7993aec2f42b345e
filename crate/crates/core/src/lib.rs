//! Iterative regularization of ill-posed PDE reconstruction problems on a
//! rectangle, after Kozlov and Maz'ya.
//!
//! Three classical ill-posed problems are covered, each a reconstruction of
//! a boundary/initial trace from data that over- or under-determines it:
//!
//! * the elliptic Cauchy problem (`u'' = A^2 u`, both `u(0)` and `u'(0)`
//!   given, `u'(T)` sought),
//! * the hyperbolic Dirichlet problem (`u'' = -A^2 u`, `u(0)` and `u(T)`
//!   given, `u'(0)` sought),
//! * the backward heat problem (`u' = -A^2 u`, `u(T)` given, `u(0)` sought).
//!
//! Each method repeatedly solves a *well-posed* mixed boundary or initial
//! value problem and feeds a trace of the solution back in. In the
//! eigenbasis of `A = (-Laplacian)^(1/2)` every such sweep is the same
//! diagonal affine map `phi -> m(lambda) phi + h(lambda)`, so iterates,
//! fixed points and convergence rates all have closed forms — which is what
//! makes honest testing of the iteration possible.
//!
//! Crate layout mirrors that split: [`spectral`] holds the eigenbasis and
//! transforms, [`sobolev`] the spectrally weighted norms, [`problems`] the
//! well-posed sub-solvers and explicit solution formulas, [`iteration`] the
//! affine iterations with their diagnostics, and [`harness`] the
//! reconstruction-experiment driver.

pub mod error;
pub mod harness;
pub mod iteration;
pub mod problems;
pub mod sobolev;
pub mod spectral;

pub use error::{Error, Result};
pub use harness::{
    convergence_rate_table, manufacture_data, run_experiment, CheckpointRecord, ExperimentConfig,
    GroundTruth, RunReport, CROSS_VALIDATE_MAX_STEP,
};
pub use iteration::{
    build_elliptic, build_hyperbolic, build_parabolic, diagnostics_for_params,
    fixed_point_projection, gamma_admissible, increment_norm, iterate_closed_form,
    iterate_via_solves, operator_diagnostics, powers_of_ten_up_to, AffineIteration, GammaReport,
    IterationKind, IterationProblem, IterationTrace, OperatorDiagnostics, TraceCheckpoint,
};
pub use problems::{
    elliptic_mixed_v, elliptic_mixed_v_dt, elliptic_mixed_w, elliptic_mixed_w_dt,
    elliptic_solution_at, elliptic_solution_dt_at, hyperbolic_ivp, hyperbolic_solution_at,
    parabolic_backward_oracle, parabolic_forward, resonance_check, CauchyDataElliptic,
    DirichletDataHyperbolic, FinalDataParabolic, ResonanceReport, RESONANCE_TOL_DEFAULT,
};
pub use sobolev::{hs_norm, spacetime_l2_norm, spacetime_sup_norm, SobolevIndex, TimeGrid};
pub use spectral::{
    build_basis, forward_transform, inverse_transform, parseval_factor, GridField, RectDomain,
    SpectralBasis, SpectralField,
};
