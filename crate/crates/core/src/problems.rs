//! Forward solvers and explicit solution formulas for the three problems.
//!
//! Everything here is a per-mode scalar evaluation: the well-posed mixed
//! elliptic BVPs and hyperbolic/parabolic IVPs used inside the iterations,
//! and the explicit (ill-posed) solution formulas they converge to. The
//! ill-posed directions amplify like `e^{lambda T}` or `e^{lambda^2 T}`, so
//! their evaluators return an error naming the offending eigenvalue instead
//! of silently producing `inf` — overflow is the ill-posedness made
//! tangible, not an implementation detail.
//!
//! Hyperbolic-cosine ratios are evaluated in rewritten exponential form:
//! `cosh(lambda a)/cosh(lambda b)` as
//! `exp(-lambda (b-a)) * (1+e^{-2 lambda a})/(1+e^{-2 lambda b})`, which is
//! finite for any `lambda` and exact at the boundary conditions. A naive
//! `cosh` overflows near `lambda T = 710`.

use crate::error::{Error, Result};
use crate::spectral::{SpectralBasis, SpectralField};

/// Default margin below which `|sin(lambda T)|` counts as resonant.
///
/// The per-mode convergence factor of the hyperbolic iteration is
/// `cos^2(lambda T) = 1 - sin^2(lambda T)`, so this margin directly bounds
/// the attainable convergence as well as the solvability of the Dirichlet
/// problem.
pub const RESONANCE_TOL_DEFAULT: f64 = 1e-8;

/// Cauchy data for the elliptic problem: `u(0) = f`, `u'(0) = g`
/// (`f` in `H^{1/2}`, `g` in `H^{-1/2}` in the continuous setting; with a
/// truncated spectrum every field is in every `H^s`, so the regularity split
/// is documentation rather than a type constraint).
#[derive(Debug, Clone)]
pub struct CauchyDataElliptic {
    pub f: SpectralField,
    pub g: SpectralField,
}

impl CauchyDataElliptic {
    pub fn new(f: SpectralField, g: SpectralField) -> Result<Self> {
        if !f.basis().compatible(g.basis()) {
            return Err(Error::DomainMismatch(
                "Cauchy data (f, g) must share a basis".into(),
            ));
        }
        Ok(Self { f, g })
    }

    pub fn basis(&self) -> &std::sync::Arc<SpectralBasis> {
        self.f.basis()
    }
}

/// Dirichlet data for the hyperbolic problem: `u(0) = f`, `u(T) = g`.
#[derive(Debug, Clone)]
pub struct DirichletDataHyperbolic {
    pub f: SpectralField,
    pub g: SpectralField,
    pub t_end: f64,
}

impl DirichletDataHyperbolic {
    pub fn new(f: SpectralField, g: SpectralField, t_end: f64) -> Result<Self> {
        if !f.basis().compatible(g.basis()) {
            return Err(Error::DomainMismatch(
                "Dirichlet data (f, g) must share a basis".into(),
            ));
        }
        check_time(t_end)?;
        Ok(Self { f, g, t_end })
    }

    pub fn basis(&self) -> &std::sync::Arc<SpectralBasis> {
        self.f.basis()
    }
}

/// Final data for the backward heat problem: `u(T) = f`.
#[derive(Debug, Clone)]
pub struct FinalDataParabolic {
    pub f: SpectralField,
    pub t_end: f64,
}

impl FinalDataParabolic {
    pub fn new(f: SpectralField, t_end: f64) -> Result<Self> {
        check_time(t_end)?;
        Ok(Self { f, t_end })
    }

    pub fn basis(&self) -> &std::sync::Arc<SpectralBasis> {
        self.f.basis()
    }
}

fn check_time(t_end: f64) -> Result<()> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "final time must be positive and finite, got {t_end}"
        )));
    }
    Ok(())
}

/// `cosh(lambda a) / cosh(lambda b)` for `0 <= a <= b`, overflow-free.
fn cosh_ratio(lambda: f64, a: f64, b: f64) -> f64 {
    debug_assert!(a >= 0.0 && a <= b);
    (-lambda * (b - a)).exp() * (1.0 + (-2.0 * lambda * a).exp())
        / (1.0 + (-2.0 * lambda * b).exp())
}

/// `sinh(lambda a) / cosh(lambda b)` for `0 <= a <= b`, overflow-free.
fn sinh_over_cosh(lambda: f64, a: f64, b: f64) -> f64 {
    debug_assert!(a >= 0.0 && a <= b);
    (-lambda * (b - a)).exp() * (1.0 - (-2.0 * lambda * a).exp())
        / (1.0 + (-2.0 * lambda * b).exp())
}

fn per_mode<F: Fn(f64, f64, f64) -> f64>(
    a: &SpectralField,
    b: &SpectralField,
    f: F,
) -> SpectralField {
    let mut out = a.clone();
    for (i, c) in out.coeffs_mut().iter_mut().enumerate() {
        let lambda = a.basis().eigenvalues()[i];
        *c = f(lambda, a.coeffs()[i], b.coeffs()[i]);
    }
    out
}

/// Explicit solution of the elliptic Cauchy problem at time `t`:
/// `u(t) = cosh(A t) f + sinh(A t) A^{-1} g`, evaluated per mode.
///
/// This is the ill-posed direction — the data get amplified by
/// `e^{lambda t}` — so overflow at some mode is reported with that mode's
/// eigenvalue and the requested `t`.
pub fn elliptic_solution_at(data: &CauchyDataElliptic, t: f64) -> Result<SpectralField> {
    assert!(t >= 0.0 && t.is_finite(), "need 0 <= t, got {t}");
    elliptic_combination(data, t, false)
}

/// Spectral time derivative of the elliptic solution:
/// `u'(t) = A sinh(A t) f + cosh(A t) g` per mode.
pub fn elliptic_solution_dt_at(data: &CauchyDataElliptic, t: f64) -> Result<SpectralField> {
    assert!(t >= 0.0 && t.is_finite(), "need 0 <= t, got {t}");
    elliptic_combination(data, t, true)
}

fn elliptic_combination(
    data: &CauchyDataElliptic,
    t: f64,
    derivative: bool,
) -> Result<SpectralField> {
    let mut out = SpectralField::zero(data.basis());
    let eigenvalues = data.basis().eigenvalues().to_vec();
    for (i, &lambda) in eigenvalues.iter().enumerate() {
        let fc = data.f.coeffs()[i];
        let gc = data.g.coeffs()[i];
        // Skip zero data to avoid inf * 0 on overflowing modes that carry
        // no information anyway.
        let mut v = 0.0;
        if derivative {
            if fc != 0.0 {
                v += lambda * (lambda * t).sinh() * fc;
            }
            if gc != 0.0 {
                v += (lambda * t).cosh() * gc;
            }
        } else {
            if fc != 0.0 {
                v += (lambda * t).cosh() * fc;
            }
            if gc != 0.0 {
                v += (lambda * t).sinh() / lambda * gc;
            }
        }
        if !v.is_finite() {
            return Err(Error::Overflow { lambda, t });
        }
        out.coeffs_mut()[i] = v;
    }
    Ok(out)
}

/// First mixed elliptic BVP of the sweep: `v'' = A^2 v`, `v(0) = f`,
/// `v'(T) = phi`. Well-posed for every mode (the `cosh(lambda T)`
/// denominators never vanish); evaluated in overflow-stable ratio form.
///
/// Per mode: `v(t) = cosh(lambda (T-t))/cosh(lambda T) f
///                 + sinh(lambda t)/(lambda cosh(lambda T)) phi`.
pub fn elliptic_mixed_v(
    f: &SpectralField,
    phi: &SpectralField,
    t_end: f64,
    t: f64,
) -> SpectralField {
    assert!(t >= 0.0 && t <= t_end, "need 0 <= t <= T");
    per_mode(f, phi, |lambda, fc, pc| {
        cosh_ratio(lambda, t_end - t, t_end) * fc + sinh_over_cosh(lambda, t, t_end) / lambda * pc
    })
}

/// Spectral `v'(t)` of [`elliptic_mixed_v`]:
/// `-lambda sinh(lambda (T-t))/cosh(lambda T) f
///  + cosh(lambda t)/cosh(lambda T) phi`.
pub fn elliptic_mixed_v_dt(
    f: &SpectralField,
    phi: &SpectralField,
    t_end: f64,
    t: f64,
) -> SpectralField {
    assert!(t >= 0.0 && t <= t_end, "need 0 <= t <= T");
    per_mode(f, phi, |lambda, fc, pc| {
        -lambda * sinh_over_cosh(lambda, t_end - t, t_end) * fc
            + cosh_ratio(lambda, t, t_end) * pc
    })
}

/// Second mixed elliptic BVP of the sweep: `w'' = A^2 w`, `w'(0) = g`,
/// `w(T) = v_T`.
///
/// Per mode: `w(t) = cosh(lambda t)/cosh(lambda T) v_T
///                 - sinh(lambda (T-t))/(lambda cosh(lambda T)) g`
/// (an overflow-stable rewriting of
/// `(sinh(lambda t) - tanh(lambda T) cosh(lambda t))/lambda * g`).
pub fn elliptic_mixed_w(
    g: &SpectralField,
    v_t: &SpectralField,
    t_end: f64,
    t: f64,
) -> SpectralField {
    assert!(t >= 0.0 && t <= t_end, "need 0 <= t <= T");
    per_mode(v_t, g, |lambda, vc, gc| {
        cosh_ratio(lambda, t, t_end) * vc - sinh_over_cosh(lambda, t_end - t, t_end) / lambda * gc
    })
}

/// Spectral `w'(t)` of [`elliptic_mixed_w`]:
/// `lambda sinh(lambda t)/cosh(lambda T) v_T
///  + cosh(lambda (T-t))/cosh(lambda T) g`.
pub fn elliptic_mixed_w_dt(
    g: &SpectralField,
    v_t: &SpectralField,
    t_end: f64,
    t: f64,
) -> SpectralField {
    assert!(t >= 0.0 && t <= t_end, "need 0 <= t <= T");
    per_mode(v_t, g, |lambda, vc, gc| {
        lambda * sinh_over_cosh(lambda, t, t_end) * vc + cosh_ratio(lambda, t_end - t, t_end) * gc
    })
}

/// Hyperbolic IVP `v'' = -A^2 v` from data `(f, phi) = (value, derivative)`.
///
/// Forward (`reversed = false`): data at time 0, returns
/// `(v(t), v'(t)) = (cos(lambda t) f + sin(lambda t)/lambda phi,
///                   -lambda sin(lambda t) f + cos(lambda t) phi)`.
///
/// Reversed (`reversed = true`): data at a reference time, returns value and
/// original-time derivative at `t` *before* it, i.e.
/// `(cos(lambda t) f - sin(lambda t)/lambda phi,
///   lambda sin(lambda t) f + cos(lambda t) phi)`.
///
/// Always well-posed; per-mode energy `lambda^2 v^2 + (v')^2` is conserved.
pub fn hyperbolic_ivp(
    f: &SpectralField,
    phi: &SpectralField,
    t: f64,
    reversed: bool,
) -> (SpectralField, SpectralField) {
    assert!(t >= 0.0 && t.is_finite(), "need 0 <= t, got {t}");
    let sign = if reversed { -1.0 } else { 1.0 };
    let value = per_mode(f, phi, |lambda, fc, pc| {
        (lambda * t).cos() * fc + sign * (lambda * t).sin() / lambda * pc
    });
    let derivative = per_mode(f, phi, |lambda, fc, pc| {
        -sign * lambda * (lambda * t).sin() * fc + (lambda * t).cos() * pc
    });
    (value, derivative)
}

/// Explicit solution of the hyperbolic Dirichlet problem at time `t`:
/// `u(t) = sin(A(T-t)) sin(AT)^{-1} f + sin(At) sin(AT)^{-1} g`.
///
/// Errors on any mode with `|sin(lambda T)|` below the resonance tolerance;
/// there the Dirichlet problem loses unique solvability.
pub fn hyperbolic_solution_at(data: &DirichletDataHyperbolic, t: f64) -> Result<SpectralField> {
    assert!(
        t >= 0.0 && t <= data.t_end,
        "need 0 <= t <= T = {}, got {t}",
        data.t_end
    );
    let basis = data.basis().clone();
    let t_end = data.t_end;
    let mut out = SpectralField::zero(&basis);
    for (i, &lambda) in basis.eigenvalues().iter().enumerate() {
        let st = (lambda * t_end).sin();
        if st.abs() < RESONANCE_TOL_DEFAULT {
            let (k, m) = basis.mode_of(i);
            return Err(Error::Resonance {
                k,
                m,
                lambda,
                margin: st.abs(),
                tol: RESONANCE_TOL_DEFAULT,
            });
        }
        out.coeffs_mut()[i] = (lambda * (t_end - t)).sin() / st * data.f.coeffs()[i]
            + (lambda * t).sin() / st * data.g.coeffs()[i];
    }
    Ok(out)
}

/// Margin report for the resonant set `M = {k pi / T}` of the hyperbolic
/// problem.
#[derive(Debug, Clone)]
pub struct ResonanceReport {
    /// `|sin(lambda T)|` per mode, in mode order.
    pub sin_margins: Vec<f64>,
    /// Distance from each eigenvalue to the nearest point of `M`.
    pub distances: Vec<f64>,
    /// Flat indices of modes with `|sin(lambda T)| < tol`.
    pub flagged: Vec<usize>,
    /// Smallest `|sin(lambda T)|` over all modes.
    pub min_margin: f64,
    /// Mode `(k, m)` attaining `min_margin`.
    pub min_margin_mode: (usize, usize),
}

impl ResonanceReport {
    pub fn is_clear(&self) -> bool {
        self.flagged.is_empty()
    }
}

/// Scan the spectrum for near-resonance: reports `|sin(lambda T)|` and the
/// distance to `M = {k pi/T, k >= 1}` per mode, flagging modes under `tol`.
pub fn resonance_check(basis: &SpectralBasis, t_end: f64, tol: f64) -> Result<ResonanceReport> {
    check_time(t_end)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "resonance tolerance must be positive, got {tol}"
        )));
    }
    let mut sin_margins = Vec::with_capacity(basis.len());
    let mut distances = Vec::with_capacity(basis.len());
    let mut flagged = Vec::new();
    let mut min_margin = f64::INFINITY;
    let mut min_idx = 0;
    for (i, &lambda) in basis.eigenvalues().iter().enumerate() {
        let margin = (lambda * t_end).sin().abs();
        let nearest = (lambda * t_end / std::f64::consts::PI).round().max(1.0);
        let dist = (lambda - nearest * std::f64::consts::PI / t_end).abs();
        if margin < min_margin {
            min_margin = margin;
            min_idx = i;
        }
        if margin < tol {
            flagged.push(i);
        }
        sin_margins.push(margin);
        distances.push(dist);
    }
    Ok(ResonanceReport {
        sin_margins,
        distances,
        flagged,
        min_margin,
        min_margin_mode: basis.mode_of(min_idx),
    })
}

/// Heat semigroup: solves `a^2 v' - Laplacian v = 0` forward from `v(0)`,
/// i.e. multiplies mode `lambda` by `exp(-lambda^2 t / a^2)`. A contraction
/// for every `t >= 0`.
pub fn parabolic_forward(phi0: &SpectralField, t: f64, a2: f64) -> SpectralField {
    assert!(t >= 0.0 && t.is_finite(), "need t >= 0, got {t}");
    assert!(a2 > 0.0 && a2.is_finite(), "need a2 > 0, got {a2}");
    let mut out = phi0.clone();
    for (i, c) in out.coeffs_mut().iter_mut().enumerate() {
        let lambda = phi0.basis().eigenvalues()[i];
        *c *= (-parabolic_exponent(lambda, t, a2)).exp();
    }
    out
}

/// Severely ill-posed direct inversion of the heat semigroup:
/// `u(0) = exp(A^2 T / a^2) f` per mode. Usable only on band-limited
/// consistent data; the per-mode amplification `exp(lambda^2 T/a^2)` is what
/// "severely ill-posed" means, and overflow is reported with the eigenvalue.
pub fn parabolic_backward_oracle(data: &FinalDataParabolic, a2: f64) -> Result<SpectralField> {
    assert!(a2 > 0.0 && a2.is_finite(), "need a2 > 0, got {a2}");
    let mut out = SpectralField::zero(data.basis());
    let eigenvalues = data.basis().eigenvalues().to_vec();
    for (i, &lambda) in eigenvalues.iter().enumerate() {
        let fc = data.f.coeffs()[i];
        let v = if fc == 0.0 {
            0.0
        } else {
            parabolic_exponent(lambda, data.t_end, a2).exp() * fc
        };
        if !v.is_finite() {
            return Err(Error::Overflow {
                lambda,
                t: data.t_end,
            });
        }
        out.coeffs_mut()[i] = v;
    }
    Ok(out)
}

/// Shared exponent `lambda^2 t / a^2` so that forward decay and backward
/// amplification are exact reciprocals of each other.
pub(crate) fn parabolic_exponent(lambda: f64, t: f64, a2: f64) -> f64 {
    lambda * lambda * t / a2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{build_basis, RectDomain, SpectralBasis, SpectralField};
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn basis(kmax: usize) -> Arc<SpectralBasis> {
        build_basis(RectDomain::unit_square(33).unwrap(), kmax, 1.0).unwrap()
    }

    fn ramp(basis: &Arc<SpectralBasis>, scale: f64) -> SpectralField {
        let coeffs = (0..basis.len())
            .map(|i| scale * (0.4 + (i as f64 * 0.7).sin()))
            .collect();
        SpectralField::from_coeffs(basis, coeffs).unwrap()
    }

    #[test]
    fn elliptic_solution_boundary_and_formula() {
        let b = basis(3);
        let f = ramp(&b, 1.0);
        let g = ramp(&b, 0.3);
        let data = CauchyDataElliptic::new(f.clone(), g.clone()).unwrap();

        // t = 0 returns f exactly.
        let u0 = elliptic_solution_at(&data, 0.0).unwrap();
        assert_eq!(u0.coeffs(), f.coeffs());

        // f = 0, single-mode g: u(t) = sinh(lambda t)/lambda.
        let lam = b.eigenvalue(1, 1);
        let data = CauchyDataElliptic::new(
            SpectralField::zero(&b),
            SpectralField::single_mode(&b, 1, 1, 1.0),
        )
        .unwrap();
        let u = elliptic_solution_at(&data, 0.2).unwrap();
        assert!((u.coeff(1, 1) - (lam * 0.2).sinh() / lam).abs() < 1e-14);

        // Decaying branch: f_hat = 1, g_hat = -lambda gives e^{-lambda t}.
        let data = CauchyDataElliptic::new(
            SpectralField::single_mode(&b, 1, 1, 1.0),
            SpectralField::single_mode(&b, 1, 1, -lam),
        )
        .unwrap();
        let u = elliptic_solution_at(&data, 0.5).unwrap();
        assert!((u.coeff(1, 1) - (-lam * 0.5).exp()).abs() < 1e-13);
    }

    #[test]
    fn elliptic_solution_overflow_reports_mode() {
        let b = basis(4);
        let data = CauchyDataElliptic::new(
            SpectralField::single_mode(&b, 4, 4, 1.0),
            SpectralField::zero(&b),
        )
        .unwrap();
        // lambda_{4,4} ~ 17.77; t = 50 puts cosh far past the f64 range
        // (overflow needs lambda t > ~710).
        let err = elliptic_solution_at(&data, 50.0).unwrap_err();
        match err {
            Error::Overflow { lambda, t } => {
                assert!((lambda - b.eigenvalue(4, 4)).abs() < 1e-12);
                assert_eq!(t, 50.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        // Zero data on the overflowing modes must not trip the guard.
        let tame = CauchyDataElliptic::new(SpectralField::zero(&b), SpectralField::zero(&b)).unwrap();
        let u = elliptic_solution_at(&tame, 50.0).unwrap();
        assert_eq!(u.l2_norm(), 0.0);
    }

    #[test]
    fn mixed_v_satisfies_both_conditions() {
        let b = basis(4);
        let f = ramp(&b, 1.0);
        let phi = ramp(&b, -0.6);
        let t_end = 0.625;

        let v0 = elliptic_mixed_v(&f, &phi, t_end, 0.0);
        assert_eq!(v0.coeffs(), f.coeffs());

        let vt = elliptic_mixed_v_dt(&f, &phi, t_end, t_end);
        assert_eq!(vt.coeffs(), phi.coeffs());

        // f = 0, phi_hat = 1: v(T) = tanh(lambda T)/lambda.
        let lam = b.eigenvalue(2, 1);
        let v = elliptic_mixed_v(
            &SpectralField::zero(&b),
            &SpectralField::single_mode(&b, 2, 1, 1.0),
            t_end,
            t_end,
        );
        assert!((v.coeff(2, 1) - (lam * t_end).tanh() / lam).abs() < 1e-15);
    }

    #[test]
    fn mixed_w_satisfies_both_conditions() {
        let b = basis(4);
        let g = ramp(&b, 0.8);
        let vt = ramp(&b, -1.1);
        let t_end = 0.625;

        let w_dt0 = elliptic_mixed_w_dt(&g, &vt, t_end, 0.0);
        assert_eq!(w_dt0.coeffs(), g.coeffs());

        let w_end = elliptic_mixed_w(&g, &vt, t_end, t_end);
        assert_eq!(w_end.coeffs(), vt.coeffs());

        // g = 0, v_T = single mode: w'(T) = lambda tanh(lambda T).
        let lam = b.eigenvalue(1, 2);
        let w_dt = elliptic_mixed_w_dt(
            &SpectralField::zero(&b),
            &SpectralField::single_mode(&b, 1, 2, 1.0),
            t_end,
            t_end,
        );
        assert!((w_dt.coeff(1, 2) - lam * (lam * t_end).tanh()).abs() < 1e-14);
    }

    #[test]
    fn mixed_solves_stable_at_huge_lambda_t() {
        // lambda T ~ 2.2e3 would overflow naive cosh; the ratio forms stay finite.
        let b = basis(4);
        let f = ramp(&b, 1.0);
        let phi = ramp(&b, 1.0);
        let t_end = 500.0;
        let v = elliptic_mixed_v(&f, &phi, t_end, 250.0);
        assert!(v.coeffs().iter().all(|c| c.is_finite()));
        let w = elliptic_mixed_w(&phi, &f, t_end, 499.0);
        assert!(w.coeffs().iter().all(|c| c.is_finite()));
    }

    #[test]
    fn hyperbolic_ivp_trig_cases() {
        let b = basis(3);
        let f = ramp(&b, 1.0);
        let phi = ramp(&b, 0.5);

        for reversed in [false, true] {
            let (v, dv) = hyperbolic_ivp(&f, &phi, 0.0, reversed);
            assert_eq!(v.coeffs(), f.coeffs());
            assert_eq!(dv.coeffs(), phi.coeffs());
        }

        // Quarter period: value 0, derivative -lambda.
        let lam = b.eigenvalue(1, 1);
        let t = PI / 2.0 / lam;
        let (v, dv) = hyperbolic_ivp(
            &SpectralField::single_mode(&b, 1, 1, 1.0),
            &SpectralField::zero(&b),
            t,
            false,
        );
        assert!(v.coeff(1, 1).abs() < 1e-14);
        assert!((dv.coeff(1, 1) + lam).abs() < 1e-13);
    }

    #[test]
    fn hyperbolic_energy_conserved_per_mode() {
        let b = basis(4);
        let f = ramp(&b, 1.0);
        let phi = ramp(&b, -0.4);
        for &t in &[0.1, 0.625, 3.7, 20.0] {
            for reversed in [false, true] {
                let (v, dv) = hyperbolic_ivp(&f, &phi, t, reversed);
                for i in 0..b.len() {
                    let lam = b.eigenvalues()[i];
                    let e0 = lam * lam * f.coeffs()[i].powi(2) + phi.coeffs()[i].powi(2);
                    let et = lam * lam * v.coeffs()[i].powi(2) + dv.coeffs()[i].powi(2);
                    assert!(
                        (et - e0).abs() <= 1e-12 * e0.max(1.0),
                        "energy drift at mode {i}, t {t}"
                    );
                }
            }
        }
    }

    #[test]
    fn hyperbolic_solution_boundary_and_midpoint() {
        let b = basis(3);
        let f = ramp(&b, 1.0);
        let g = ramp(&b, -0.7);
        // T chosen well away from resonance for kmax = 3.
        let data = DirichletDataHyperbolic::new(f.clone(), g.clone(), 0.1).unwrap();
        let u0 = hyperbolic_solution_at(&data, 0.0).unwrap();
        assert_eq!(u0.coeffs(), f.coeffs());
        let ut = hyperbolic_solution_at(&data, 0.1).unwrap();
        assert_eq!(ut.coeffs(), g.coeffs());

        // Single mode with lambda T = pi/2, evaluated at T/2:
        // u = sin(pi/4)/sin(pi/2) = sqrt(2)/2. (kmax = 1: any mode with
        // double that eigenvalue would sit exactly at resonance.)
        let b1 = basis(1);
        let lam = b1.eigenvalue(1, 1);
        let t_end = PI / 2.0 / lam;
        let data = DirichletDataHyperbolic::new(
            SpectralField::single_mode(&b1, 1, 1, 1.0),
            SpectralField::zero(&b1),
            t_end,
        )
        .unwrap();
        let u = hyperbolic_solution_at(&data, t_end / 2.0).unwrap();
        assert!((u.coeff(1, 1) - 0.7071067811865475).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_solution_rejects_resonance() {
        let b = basis(2);
        let lam = b.eigenvalue(1, 1);
        let t_end = PI / lam; // lambda T = pi exactly resonant
        let data = DirichletDataHyperbolic::new(
            SpectralField::single_mode(&b, 1, 1, 1.0),
            SpectralField::zero(&b),
            t_end,
        )
        .unwrap();
        match hyperbolic_solution_at(&data, t_end / 3.0).unwrap_err() {
            Error::Resonance { k: 1, m: 1, margin, .. } => assert!(margin < 1e-14),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn resonance_report_cases() {
        // Single eigenvalue lambda = pi, T = 1: margin ~ 0, flagged.
        let b = build_basis(RectDomain::new(2.0f64.sqrt(), 2.0f64.sqrt(), 9, 9).unwrap(), 1, 1.0)
            .unwrap();
        assert!((b.eigenvalue(1, 1) - PI).abs() < 1e-12);
        let rep = resonance_check(&b, 1.0, 1e-8).unwrap();
        assert!(rep.min_margin < 1e-12);
        assert_eq!(rep.flagged, vec![0]);
        assert!(rep.distances[0] < 1e-12);

        // lambda = pi/2, T = 1: |sin| = 1, clear.
        let side = 2.0 * 2.0f64.sqrt();
        let b = build_basis(RectDomain::new(side, side, 9, 9).unwrap(), 1, 1.0).unwrap();
        assert!((b.eigenvalue(1, 1) - PI / 2.0).abs() < 1e-12);
        let rep = resonance_check(&b, 1.0, 1e-8).unwrap();
        assert!((rep.min_margin - 1.0).abs() < 1e-12);
        assert!(rep.is_clear());

        // Regression anchor: unit square, kmax = 4, T = 0.625.
        let b = build_basis(RectDomain::unit_square(17).unwrap(), 4, 1.0).unwrap();
        let rep = resonance_check(&b, 0.625, 1e-8).unwrap();
        assert!((rep.min_margin - 0.07399993692710129).abs() < 1e-12);
        assert_eq!(rep.min_margin_mode, (1, 3));
        assert!(rep.is_clear());
    }

    #[test]
    fn parabolic_forward_decay_and_monotonicity() {
        let b = build_basis(RectDomain::unit_square(17).unwrap(), 4, 2.0).unwrap();
        let phi = ramp(&b, 1.0);

        let u0 = parabolic_forward(&phi, 0.0, 2.0);
        assert_eq!(u0.coeffs(), phi.coeffs());

        // Single mode, constants a2 = 2, T = 0.625: factor exp(-0.625 pi^2).
        let single = SpectralField::single_mode(&b, 1, 1, 1.0);
        let u = parabolic_forward(&single, 0.625, 2.0);
        assert!((u.coeff(1, 1) - 0.0020943694473832936).abs() < 1e-17);

        let mut prev = phi.l2_norm();
        for &t in &[0.01, 0.1, 0.5, 2.0] {
            let n = parabolic_forward(&phi, t, 2.0).l2_norm();
            assert!(n <= prev);
            prev = n;
        }
    }

    #[test]
    fn parabolic_backward_oracle_round_trip_and_overflow() {
        let b = build_basis(RectDomain::unit_square(17).unwrap(), 8, 2.0).unwrap();
        let phi = ramp(&b, 1.0);
        let forward = parabolic_forward(&phi, 0.625, 2.0);
        let data = FinalDataParabolic::new(forward, 0.625).unwrap();
        let back = parabolic_backward_oracle(&data, 2.0).unwrap();
        for i in 0..b.len() {
            let rel = (back.coeffs()[i] - phi.coeffs()[i]).abs() / phi.coeffs()[i].abs();
            assert!(rel <= 1e-9, "mode {i}: rel {rel}");
        }

        // Amplification anchor at lambda = pi sqrt(2): exp(0.625 pi^2).
        let single = FinalDataParabolic::new(SpectralField::single_mode(&b, 1, 1, 1.0), 0.625)
            .unwrap();
        let amp = parabolic_backward_oracle(&single, 2.0).unwrap();
        assert!((amp.coeff(1, 1) - 477.4706779882607).abs() < 1e-10);

        // Overflow reported with the eigenvalue; zero modes do not trip it.
        let bad = FinalDataParabolic::new(SpectralField::single_mode(&b, 8, 8, 1.0), 50.0).unwrap();
        match parabolic_backward_oracle(&bad, 1.0).unwrap_err() {
            Error::Overflow { lambda, .. } => {
                assert!((lambda - b.eigenvalue(8, 8)).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sub_solvers_bounded_independent_of_kmax() {
        // Fixed data pattern on the low modes; enlarging the basis must not
        // grow the outputs.
        let t_end = 0.625;
        let mut norms_v = Vec::new();
        let mut norms_ivp = Vec::new();
        let mut norms_heat = Vec::new();
        for &kmax in &[4usize, 8, 16] {
            let b = build_basis(RectDomain::unit_square(33).unwrap(), kmax, 2.0).unwrap();
            let mut f = SpectralField::zero(&b);
            let mut phi = SpectralField::zero(&b);
            for k in 1..=4 {
                for m in 1..=4 {
                    f.set_coeff(k, m, 1.0 / (k + m) as f64);
                    phi.set_coeff(k, m, 0.5);
                }
            }
            norms_v.push(elliptic_mixed_v(&f, &phi, t_end, 0.31).l2_norm());
            norms_ivp.push(hyperbolic_ivp(&f, &phi, 0.31, false).0.l2_norm());
            norms_heat.push(parabolic_forward(&f, 0.31, 2.0).l2_norm());
        }
        for series in [&norms_v, &norms_ivp, &norms_heat] {
            for w in series.windows(2) {
                assert!((w[1] - w[0]).abs() <= 1e-12 * w[0].abs());
            }
        }
        // Parabolic is a contraction outright.
        let b = build_basis(RectDomain::unit_square(33).unwrap(), 8, 2.0).unwrap();
        let f = ramp(&b, 1.0);
        assert!(parabolic_forward(&f, 0.625, 2.0).l2_norm() <= f.l2_norm());
    }

    #[test]
    fn zero_data_gives_zero_solution() {
        // Uniqueness seen through linearity: zero data -> zero trajectory.
        let b = basis(4);
        let zero = SpectralField::zero(&b);
        let data = CauchyDataElliptic::new(zero.clone(), zero.clone()).unwrap();
        for &t in &[0.0, 0.3, 0.625] {
            assert_eq!(elliptic_solution_at(&data, t).unwrap().l2_norm(), 0.0);
        }
        let pdata = FinalDataParabolic::new(zero.clone(), 0.625).unwrap();
        assert_eq!(parabolic_backward_oracle(&pdata, 2.0).unwrap().l2_norm(), 0.0);
    }
}
