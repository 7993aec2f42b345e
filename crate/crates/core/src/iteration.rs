//! The three alternating iterations as diagonal affine operators.
//!
//! One sweep of each method (two mixed elliptic solves / two hyperbolic
//! IVPs / one heat solve plus update) acts on the current trace guess as
//! `phi -> m(lambda) phi + h(lambda)` per mode, with
//!
//! * elliptic:   `m = tanh^2(lambda T)`,
//! * hyperbolic: `m = cos^2(lambda T)`,
//! * parabolic:  `m = 1 - gamma exp(-lambda^2 T / a^2)`.
//!
//! [`iterate_via_solves`] runs the literal sub-solve composition;
//! [`iterate_closed_form`] evaluates the k-th power of the affine map by
//! the geometric sum, which makes million-step runs O(modes). The two must
//! agree — that equivalence is the central oracle for this module.
//!
//! Numerical note: the contraction factors approach 1 so fast that
//! `1 - m` is not representable from `m` itself (elliptic `1 - m =
//! sech^2(lambda T)` drops below machine epsilon at `lambda T ~ 19`). Each
//! iteration therefore stores the complement `1 - m` computed in closed
//! form alongside `m`, and all convergence-rate arithmetic goes through it
//! (`m^k = exp(k ln1p(-(1-m)))` and friends).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::problems::{
    elliptic_mixed_v, elliptic_mixed_w_dt, hyperbolic_ivp, parabolic_exponent, parabolic_forward,
    CauchyDataElliptic, DirichletDataHyperbolic, FinalDataParabolic, RESONANCE_TOL_DEFAULT,
};
use crate::spectral::{SpectralBasis, SpectralField};

/// Multipliers within this distance of 1 (measured through `1 - m`) are
/// reported as eigenvalue-1 modes for the hyperbolic method. Matches the
/// default resonance margin: `1 - cos^2 = sin^2 < tol^2`.
const EIGENVALUE_ONE_TOL: f64 = RESONANCE_TOL_DEFAULT * RESONANCE_TOL_DEFAULT;

/// Multipliers at most this large in magnitude count as a zeroed mode
/// (kernel of the linear part).
const MULTIPLIER_ZERO_TOL: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationKind {
    Elliptic,
    Hyperbolic,
    Parabolic,
}

impl std::fmt::Display for IterationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IterationKind::Elliptic => write!(f, "elliptic"),
            IterationKind::Hyperbolic => write!(f, "hyperbolic"),
            IterationKind::Parabolic => write!(f, "parabolic"),
        }
    }
}

/// Diagonal affine map `phi -> m(lambda) phi + h(lambda)` encoding one sweep
/// of a method.
#[derive(Debug, Clone)]
pub struct AffineIteration {
    kind: IterationKind,
    multiplier: Vec<f64>,
    one_minus_multiplier: Vec<f64>,
    offset: SpectralField,
    t_end: f64,
    gamma: f64,
}

impl AffineIteration {
    pub fn kind(&self) -> IterationKind {
        self.kind
    }

    /// Linear part `m(lambda)` per mode, in mode order.
    pub fn multiplier(&self) -> &[f64] {
        &self.multiplier
    }

    /// Stable complement `1 - m(lambda)` per mode, computed in closed form
    /// (not by subtraction from `m`).
    pub fn one_minus_multiplier(&self) -> &[f64] {
        &self.one_minus_multiplier
    }

    /// Affine part `h` (a field: `h_{f,g}` or `h_f`).
    pub fn offset(&self) -> &SpectralField {
        &self.offset
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Relaxation parameter; 0 for the elliptic and hyperbolic methods.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn basis(&self) -> &Arc<SpectralBasis> {
        self.offset.basis()
    }

    /// Test hook (negative control): shift one multiplier off its true
    /// value, keeping `m + (1-m) = 1` consistent.
    #[doc(hidden)]
    pub fn perturb_multiplier_for_validation(&mut self, mode_index: usize, delta: f64) {
        self.multiplier[mode_index] += delta;
        self.one_minus_multiplier[mode_index] -= delta;
    }
}

/// Per-mode scalars of one sweep: multiplier, its stable complement, and the
/// weights `h = wf * f_hat + wg * g_hat` of the affine part.
struct ModeScalars {
    m: f64,
    omm: f64,
    wf: f64,
    wg: f64,
}

fn elliptic_scalars(lambda: f64, t_end: f64) -> ModeScalars {
    let e2 = (-2.0 * lambda * t_end).exp();
    let sech = 2.0 * (-lambda * t_end).exp() / (1.0 + e2);
    let tanh = (1.0 - e2) / (1.0 + e2);
    ModeScalars {
        m: tanh * tanh,
        omm: sech * sech,
        wf: lambda * tanh * sech,
        wg: sech,
    }
}

fn hyperbolic_scalars(lambda: f64, t_end: f64) -> ModeScalars {
    let s = (lambda * t_end).sin();
    let c = (lambda * t_end).cos();
    ModeScalars {
        m: c * c,
        omm: s * s,
        wf: -lambda * c * s,
        wg: lambda * s,
    }
}

fn parabolic_scalars(lambda: f64, t_end: f64, gamma: f64, a2: f64) -> ModeScalars {
    let decay = (-parabolic_exponent(lambda, t_end, a2)).exp();
    let omm = gamma * decay;
    ModeScalars {
        m: 1.0 - omm,
        omm,
        wf: gamma,
        wg: 0.0,
    }
}

fn scalars_for(
    kind: IterationKind,
    lambda: f64,
    t_end: f64,
    gamma: f64,
    a2: f64,
) -> ModeScalars {
    match kind {
        IterationKind::Elliptic => elliptic_scalars(lambda, t_end),
        IterationKind::Hyperbolic => hyperbolic_scalars(lambda, t_end),
        IterationKind::Parabolic => parabolic_scalars(lambda, t_end, gamma, a2),
    }
}

/// Elliptic sweep operator for Cauchy data `(f, g)` over `[0, T]`:
/// `m = tanh^2(lambda T)`,
/// `h = lambda tanh(lambda T) sech(lambda T) f_hat + sech(lambda T) g_hat`.
///
/// The fixed point per mode is `h/(1-m) = lambda sinh(lambda T) f_hat +
/// cosh(lambda T) g_hat`, the time derivative of the explicit solution at
/// `T` — both the sub-solve composition and that consistency requirement
/// pin the offset to `sinh(lambda T)` (a constant-in-t map).
pub fn build_elliptic(data: &CauchyDataElliptic, t_end: f64) -> Result<AffineIteration> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "final time must be positive and finite, got {t_end}"
        )));
    }
    let basis = data.basis().clone();
    let n = basis.len();
    let mut multiplier = Vec::with_capacity(n);
    let mut omm = Vec::with_capacity(n);
    let mut offset = SpectralField::zero(&basis);
    for i in 0..n {
        let s = elliptic_scalars(basis.eigenvalues()[i], t_end);
        multiplier.push(s.m);
        omm.push(s.omm);
        offset.coeffs_mut()[i] = s.wf * data.f.coeffs()[i] + s.wg * data.g.coeffs()[i];
    }
    Ok(AffineIteration {
        kind: IterationKind::Elliptic,
        multiplier,
        one_minus_multiplier: omm,
        offset,
        t_end,
        gamma: 0.0,
    })
}

/// Hyperbolic sweep operator for Dirichlet data `(f, g)`:
/// `m = cos^2(lambda T)`,
/// `h = -lambda cos(lambda T) sin(lambda T) f_hat + lambda sin(lambda T) g_hat`.
///
/// The factor `lambda` on the `g` term is forced by both the sub-solve
/// derivation (derivative trace of the reversed IVP) and fixed-point
/// consistency with the explicit solution's `u'(0)`.
///
/// Exactly resonant modes (`sin(lambda T) = 0`) are representable — the
/// iteration simply stalls there — but nonzero data on such a mode makes
/// the problem inconsistent and is rejected.
pub fn build_hyperbolic(data: &DirichletDataHyperbolic) -> Result<AffineIteration> {
    let basis = data.basis().clone();
    let n = basis.len();
    let mut multiplier = Vec::with_capacity(n);
    let mut omm = Vec::with_capacity(n);
    let mut offset = SpectralField::zero(&basis);
    for i in 0..n {
        let lambda = basis.eigenvalues()[i];
        let s = hyperbolic_scalars(lambda, data.t_end);
        if s.omm == 0.0 && (data.f.coeffs()[i] != 0.0 || data.g.coeffs()[i] != 0.0) {
            let (k, m) = basis.mode_of(i);
            return Err(Error::ResonantData { k, m, lambda });
        }
        multiplier.push(s.m);
        omm.push(s.omm);
        offset.coeffs_mut()[i] = s.wf * data.f.coeffs()[i] + s.wg * data.g.coeffs()[i];
    }
    Ok(AffineIteration {
        kind: IterationKind::Hyperbolic,
        multiplier,
        one_minus_multiplier: omm,
        offset,
        t_end: data.t_end,
        gamma: 0.0,
    })
}

/// Parabolic sweep operator for final data `f`:
/// `m = 1 - gamma exp(-lambda^2 T / a^2)`, `h = gamma f_hat`.
///
/// Requires `gamma` admissible (positive and under the non-expansiveness
/// bound `2 exp(lambda_min^2 T / a^2)`); the fixed point per mode is
/// `exp(lambda^2 T / a^2) f_hat`, the direct backward inversion.
pub fn build_parabolic(
    data: &FinalDataParabolic,
    gamma: f64,
    a2: f64,
) -> Result<AffineIteration> {
    let basis = data.basis().clone();
    let report = gamma_admissible(gamma, &basis, data.t_end, a2)?;
    if !report.admissible {
        return Err(Error::GammaInadmissible {
            gamma,
            bound: report.non_expansive_bound,
        });
    }
    let n = basis.len();
    let mut multiplier = Vec::with_capacity(n);
    let mut omm = Vec::with_capacity(n);
    let mut offset = SpectralField::zero(&basis);
    for i in 0..n {
        let s = parabolic_scalars(basis.eigenvalues()[i], data.t_end, gamma, a2);
        multiplier.push(s.m);
        omm.push(s.omm);
        offset.coeffs_mut()[i] = s.wf * data.f.coeffs()[i];
    }
    Ok(AffineIteration {
        kind: IterationKind::Parabolic,
        multiplier,
        one_minus_multiplier: omm,
        offset,
        t_end: data.t_end,
        gamma,
    })
}

/// Admissibility report for the parabolic relaxation parameter.
#[derive(Debug, Clone)]
pub struct GammaReport {
    pub gamma: f64,
    /// Bottom of the spectrum, `lambda_min`.
    pub lambda_bar: f64,
    /// Non-expansiveness bound `2 exp(lambda_bar^2 T / a^2)`.
    pub non_expansive_bound: f64,
    /// `0 < gamma <` the bound above.
    pub non_expansive_ok: bool,
    /// `(lambda_bar^2 - (a^2/T) ln 2)^(1/2)` when the radicand is positive.
    pub lambda_tilde: Option<f64>,
    /// Injectivity bound `2 exp(lambda_tilde^2 T / a^2)`, when defined.
    pub injectivity_bound: Option<f64>,
    /// Whether `gamma` also satisfies the injectivity bound.
    pub injectivity_ok: Option<bool>,
    /// Positive and non-expansive; what the builders enforce.
    pub admissible: bool,
}

/// Check `gamma` against the non-expansiveness bound
/// `gamma < 2 exp(lambda_min^2 T / a^2)` and, when defined, the stricter
/// injectivity bound through `lambda_tilde`. Reports both; only the first
/// gates admissibility.
pub fn gamma_admissible(
    gamma: f64,
    basis: &SpectralBasis,
    t_end: f64,
    a2: f64,
) -> Result<GammaReport> {
    if !(t_end > 0.0 && t_end.is_finite()) || !(a2 > 0.0 && a2.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need T > 0 and a2 > 0, got T = {t_end}, a2 = {a2}"
        )));
    }
    if !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "gamma must be finite, got {gamma}"
        )));
    }
    let lambda_bar = basis.lambda_min();
    let non_expansive_bound = 2.0 * parabolic_exponent(lambda_bar, t_end, a2).exp();
    let positive = gamma > 0.0;
    let non_expansive_ok = positive && gamma < non_expansive_bound;

    let radicand = lambda_bar * lambda_bar - a2 / t_end * std::f64::consts::LN_2;
    let (lambda_tilde, injectivity_bound, injectivity_ok) = if radicand > 0.0 {
        let lt = radicand.sqrt();
        let bound = 2.0 * parabolic_exponent(lt, t_end, a2).exp();
        (Some(lt), Some(bound), Some(positive && gamma < bound))
    } else {
        (None, None, None)
    };

    Ok(GammaReport {
        gamma,
        lambda_bar,
        non_expansive_bound,
        non_expansive_ok,
        lambda_tilde,
        injectivity_bound,
        injectivity_ok,
        admissible: non_expansive_ok,
    })
}

/// `m^k` from the pair `(m, 1-m)`, accurate when `m` hugs 1 or -1.
fn multiplier_power(m: f64, omm: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if omm == 0.0 {
        return 1.0; // m = 1 to the last bit
    }
    if m >= 0.0 {
        (k as f64 * (-omm).ln_1p()).exp()
    } else {
        // |m| = omm - 1 exactly for omm in (1, 2] (complement is exact there).
        let mag = (k as f64 * (omm - 2.0).ln_1p()).exp();
        if k.is_multiple_of(2) {
            mag
        } else {
            -mag
        }
    }
}

/// Geometric sum `1 + m + ... + m^{k-1} = (1 - m^k)/(1 - m)`, with the
/// `m = 1` limit `k` on degenerate modes.
fn geometric_sum(m: f64, omm: f64, k: u64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    if omm == 0.0 {
        return k as f64;
    }
    if m >= 0.0 {
        -(k as f64 * (-omm).ln_1p()).exp_m1() / omm
    } else {
        (1.0 - multiplier_power(m, omm, k)) / omm
    }
}

fn check_phi0(it: &AffineIteration, phi0: &SpectralField) -> Result<()> {
    if !it.basis().compatible(phi0.basis()) {
        return Err(Error::DomainMismatch(
            "initial guess built over a different basis than the iteration".into(),
        ));
    }
    Ok(())
}

/// k-th iterate by the closed form: per mode
/// `m^k phi0 + (1 - m^k)/(1 - m) h` (with `phi0 + k h` on `m = 1` modes).
/// Cost is O(modes) regardless of `k`.
pub fn iterate_closed_form(
    it: &AffineIteration,
    phi0: &SpectralField,
    k: u64,
) -> Result<SpectralField> {
    check_phi0(it, phi0)?;
    if k == 0 {
        return Ok(phi0.clone());
    }
    let mut out = SpectralField::zero(it.basis());
    for i in 0..it.multiplier.len() {
        let m = it.multiplier[i];
        let omm = it.one_minus_multiplier[i];
        out.coeffs_mut()[i] = multiplier_power(m, omm, k) * phi0.coeffs()[i]
            + geometric_sum(m, omm, k) * it.offset.coeffs()[i];
    }
    Ok(out)
}

/// Norm of the k-th increment `||phi_k - phi_{k-1}||`, `k >= 1`: per mode
/// `m^{k-1} (h - (1-m) phi0)` exactly (the geometric decay of Lemma-style
/// asymptotic regularity).
pub fn increment_norm(it: &AffineIteration, phi0: &SpectralField, k: u64) -> Result<f64> {
    check_phi0(it, phi0)?;
    assert!(k >= 1, "increment is defined for k >= 1");
    let mut acc = 0.0;
    for i in 0..it.multiplier.len() {
        let m = it.multiplier[i];
        let omm = it.one_minus_multiplier[i];
        let d = multiplier_power(m, omm, k - 1)
            * (it.offset.coeffs()[i] - omm * phi0.coeffs()[i]);
        acc += d * d;
    }
    Ok(acc.sqrt())
}

/// A reconstruction problem paired with everything a sweep needs, so the
/// literal sub-solve path and the closed form can be run side by side.
#[derive(Debug, Clone)]
pub enum IterationProblem {
    Elliptic { data: CauchyDataElliptic, t_end: f64 },
    Hyperbolic { data: DirichletDataHyperbolic },
    Parabolic { data: FinalDataParabolic, gamma: f64, a2: f64 },
}

impl IterationProblem {
    pub fn kind(&self) -> IterationKind {
        match self {
            IterationProblem::Elliptic { .. } => IterationKind::Elliptic,
            IterationProblem::Hyperbolic { .. } => IterationKind::Hyperbolic,
            IterationProblem::Parabolic { .. } => IterationKind::Parabolic,
        }
    }

    pub fn basis(&self) -> &Arc<SpectralBasis> {
        match self {
            IterationProblem::Elliptic { data, .. } => data.basis(),
            IterationProblem::Hyperbolic { data } => data.basis(),
            IterationProblem::Parabolic { data, .. } => data.basis(),
        }
    }

    /// The sweep as an affine operator (closed-form route).
    pub fn build(&self) -> Result<AffineIteration> {
        match self {
            IterationProblem::Elliptic { data, t_end } => build_elliptic(data, *t_end),
            IterationProblem::Hyperbolic { data } => build_hyperbolic(data),
            IterationProblem::Parabolic { data, gamma, a2 } => {
                build_parabolic(data, *gamma, *a2)
            }
        }
    }
}

/// k-th iterate by literally composing the well-posed sub-solvers k times:
///
/// * elliptic: solve `v` (mixed: `v(0) = f`, `v'(T) = phi`), then `w`
///   (mixed: `w'(0) = g`, `w(T) = v(T)`), next guess `w'(T)`;
/// * hyperbolic: forward IVP from `(f, phi)`, reversed IVP from
///   `(g, v'(T))`, next guess `w'(0)`;
/// * parabolic: heat solve from `phi`, next guess
///   `phi - gamma (v(T) - f)`.
///
/// O(k * modes); the reference implementation the closed form is tested
/// against.
pub fn iterate_via_solves(
    problem: &IterationProblem,
    phi0: &SpectralField,
    k: u64,
) -> Result<SpectralField> {
    if !problem.basis().compatible(phi0.basis()) {
        return Err(Error::DomainMismatch(
            "initial guess built over a different basis than the problem data".into(),
        ));
    }
    let mut phi = phi0.clone();
    match problem {
        IterationProblem::Elliptic { data, t_end } => {
            for _ in 0..k {
                let v_t = elliptic_mixed_v(&data.f, &phi, *t_end, *t_end);
                phi = elliptic_mixed_w_dt(&data.g, &v_t, *t_end, *t_end);
            }
        }
        IterationProblem::Hyperbolic { data } => {
            for _ in 0..k {
                let (_, dv_t) = hyperbolic_ivp(&data.f, &phi, data.t_end, false);
                let (_, dw_0) = hyperbolic_ivp(&data.g, &dv_t, data.t_end, true);
                phi = dw_0;
            }
        }
        IterationProblem::Parabolic { data, gamma, a2 } => {
            for _ in 0..k {
                let v_t = parabolic_forward(&phi, data.t_end, *a2);
                let residual = v_t.sub(&data.f)?;
                phi = phi.add_scaled(&residual, -gamma)?;
            }
        }
    }
    Ok(phi)
}

/// Limit of the iteration: the affine extension of the projector onto
/// `ker(I - T_l)`.
///
/// Per mode: `h/(1-m)` where `m < 1`; where `m = 1` with `h = 0` the mode of
/// `phi0` is kept (the projector acts as the identity there); `m = 1` with
/// `h != 0` means linear divergence and is an error naming the eigenvalue,
/// as is overflow of `h/(1-m)`.
pub fn fixed_point_projection(
    it: &AffineIteration,
    phi0: &SpectralField,
) -> Result<SpectralField> {
    check_phi0(it, phi0)?;
    let mut out = SpectralField::zero(it.basis());
    for i in 0..it.multiplier.len() {
        let omm = it.one_minus_multiplier[i];
        let h = it.offset.coeffs()[i];
        let lambda = it.basis().eigenvalues()[i];
        let v = if omm == 0.0 {
            if h == 0.0 {
                phi0.coeffs()[i]
            } else {
                return Err(Error::DivergentMode { lambda, offset: h });
            }
        } else {
            let v = h / omm;
            if !v.is_finite() {
                return Err(Error::Overflow {
                    lambda,
                    t: it.t_end,
                });
            }
            v
        };
        out.coeffs_mut()[i] = v;
    }
    Ok(out)
}

/// Operator-property report for the linear part of a sweep.
#[derive(Debug, Clone)]
pub struct OperatorDiagnostics {
    pub kind: IterationKind,
    pub max_abs_multiplier: f64,
    pub min_multiplier: f64,
    /// `max |m| <= 1`.
    pub non_expansive: bool,
    /// `min m > 0` (claimed for the elliptic and hyperbolic operators).
    pub positive: bool,
    /// Modes with `m = 1` (flat indices): `1 - m = 0` to the last bit, or —
    /// hyperbolic only — `sin^2(lambda T)` under the resonance margin.
    /// Eigenvalue 1 contradicts the convergence hypotheses; these are the
    /// resonant modes.
    pub eigenvalue_one_modes: Vec<usize>,
    /// Modes with `|m| <= 1e-16` — the kernel of the linear part
    /// (hyperbolic `lambda T` near `pi/2 + k pi`; injectivity fails there).
    pub zero_multiplier_modes: Vec<usize>,
    /// `(1-m)^2 <= 1 - m^2` per mode (equivalent to `m >= 0` when
    /// `|m| <= 1`); the inequality behind non-expansiveness + asymptotic
    /// regularity for the elliptic/hyperbolic operators.
    pub mazya_inequality_ok: bool,
    pub mazya_violations: Vec<usize>,
}

impl OperatorDiagnostics {
    /// No eigenvalue-1 modes and non-expansive.
    pub fn convergence_hypotheses_hold(&self) -> bool {
        self.non_expansive && self.eigenvalue_one_modes.is_empty()
    }
}

/// Inspect the multipliers of a built iteration.
pub fn operator_diagnostics(it: &AffineIteration) -> OperatorDiagnostics {
    diagnostics_from_profile(it.kind(), &it.multiplier, &it.one_minus_multiplier)
}

/// Diagnostics straight from method parameters, without data (the
/// multiplier profile does not depend on `f`, `g`). `gamma`/`a2` are only
/// read for the parabolic kind.
pub fn diagnostics_for_params(
    kind: IterationKind,
    basis: &SpectralBasis,
    t_end: f64,
    gamma: f64,
    a2: f64,
) -> Result<OperatorDiagnostics> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "final time must be positive and finite, got {t_end}"
        )));
    }
    let mut multiplier = Vec::with_capacity(basis.len());
    let mut omm = Vec::with_capacity(basis.len());
    for &lambda in basis.eigenvalues() {
        let s = scalars_for(kind, lambda, t_end, gamma, a2);
        multiplier.push(s.m);
        omm.push(s.omm);
    }
    Ok(diagnostics_from_profile(kind, &multiplier, &omm))
}

fn diagnostics_from_profile(
    kind: IterationKind,
    multiplier: &[f64],
    omm: &[f64],
) -> OperatorDiagnostics {
    let mut max_abs: f64 = 0.0;
    let mut min_m = f64::INFINITY;
    let mut eigenvalue_one_modes = Vec::new();
    let mut zero_multiplier_modes = Vec::new();
    let mut mazya_violations = Vec::new();
    for i in 0..multiplier.len() {
        let m = multiplier[i];
        let o = omm[i];
        max_abs = max_abs.max(m.abs());
        min_m = min_m.min(m);
        let resonant = o == 0.0 || (kind == IterationKind::Hyperbolic && o <= EIGENVALUE_ONE_TOL);
        if resonant {
            eigenvalue_one_modes.push(i);
        }
        if m.abs() <= MULTIPLIER_ZERO_TOL {
            zero_multiplier_modes.push(i);
        }
        // (1-m)^2 <= (1-m)(1+m) checked through the stable complement.
        if o * o > o * (1.0 + m) {
            mazya_violations.push(i);
        }
    }
    OperatorDiagnostics {
        kind,
        max_abs_multiplier: max_abs,
        min_multiplier: min_m,
        non_expansive: max_abs <= 1.0,
        positive: min_m > 0.0,
        eigenvalue_one_modes,
        zero_multiplier_modes,
        mazya_inequality_ok: mazya_violations.is_empty(),
        mazya_violations,
    }
}

/// Checkpointed run: the iterate, its distance to a reference (when given)
/// and the increment norm at each requested step.
#[derive(Debug, Clone)]
pub struct TraceCheckpoint {
    pub step: u64,
    pub iterate: SpectralField,
    /// `||phi_k - reference|| / ||reference||`; `None` without a reference
    /// or when the reference is zero.
    pub rel_error: Option<f64>,
    /// `||phi_k - phi_{k-1}||`; 0 at step 0.
    pub increment_norm: f64,
}

#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub checkpoints: Vec<TraceCheckpoint>,
}

impl IterationTrace {
    /// Evaluate the iteration at the given strictly increasing steps.
    pub fn run(
        it: &AffineIteration,
        phi0: &SpectralField,
        steps: &[u64],
        reference: Option<&SpectralField>,
    ) -> Result<Self> {
        if !steps.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(
                "checkpoint steps must be strictly increasing".into(),
            ));
        }
        let mut checkpoints = Vec::with_capacity(steps.len());
        for &step in steps {
            let iterate = iterate_closed_form(it, phi0, step)?;
            let rel_error = match reference {
                Some(r) => iterate.rel_l2_error(r)?,
                None => None,
            };
            let inc = if step == 0 {
                0.0
            } else {
                increment_norm(it, phi0, step)?
            };
            checkpoints.push(TraceCheckpoint {
                step,
                iterate,
                rel_error,
                increment_norm: inc,
            });
        }
        Ok(Self { checkpoints })
    }
}

/// Default checkpoint schedule: powers of ten up to `cap` inclusive.
pub fn powers_of_ten_up_to(cap: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 10u64;
    while k <= cap {
        out.push(k);
        k = k.saturating_mul(10);
    }
    out
}
