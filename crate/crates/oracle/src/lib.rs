//! Brute-force reference implementations for validating the spectral
//! closed forms, used only from test code.
//!
//! Every operator in the library is diagonal over the mode index; the
//! oracle keeps a *dense* matrix anyway (to catch indexing bugs) and runs
//! iterations as literal loops (to catch algebra bugs in the geometric-sum
//! shortcuts). Deliberately slow and obvious; not part of the shipped
//! library surface.

use kmiter::spectral::{SpectralBasis, SpectralField};
use kmiter::{AffineIteration, Error, Result};

/// Dense n x n real matrix over the mode index.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    n: usize,
    entries: Vec<f64>,
}

impl DenseOperator {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.entries[row * self.n + col] = value;
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        for r in 0..self.n {
            for c in r + 1..self.n {
                if (self.get(r, c) - self.get(c, r)).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Dense matrix-vector product against a field's coefficients.
    pub fn apply(&self, field: &SpectralField) -> Result<SpectralField> {
        if field.coeffs().len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "operator is {}x{} but field has {} coefficients",
                self.n,
                self.n,
                field.coeffs().len()
            )));
        }
        let mut coeffs = vec![0.0; self.n];
        for (r, out) in coeffs.iter_mut().enumerate() {
            let mut acc = 0.0;
            for c in 0..self.n {
                acc += self.get(r, c) * field.coeffs()[c];
            }
            *out = acc;
        }
        SpectralField::from_coeffs(field.basis(), coeffs)
    }
}

/// Dense realization of the functional calculus: `diag(f(lambda))` over the
/// mode index. Rejects non-finite entries like the library path does.
pub fn dense_functional_calculus<F: Fn(f64) -> f64>(
    basis: &SpectralBasis,
    f: F,
) -> Result<DenseOperator> {
    let n = basis.len();
    let mut op = DenseOperator::zeros(n);
    for (i, &lambda) in basis.eigenvalues().iter().enumerate() {
        let v = f(lambda);
        if !v.is_finite() {
            return Err(Error::NonFiniteEval { lambda, value: v });
        }
        op.set(i, i, v);
    }
    Ok(op)
}

/// Literal k-fold application of the affine recurrence
/// `phi <- m phi + h`, one mode at a time. Validates the geometric-sum
/// algebra of the closed form, including degenerate `m = 1` modes.
pub fn loop_recurrence(
    it: &AffineIteration,
    phi0: &SpectralField,
    k: u64,
) -> Result<SpectralField> {
    if phi0.coeffs().len() != it.multiplier().len() {
        return Err(Error::InvalidParameter(
            "initial guess does not match the iteration's mode count".into(),
        ));
    }
    let mut coeffs = phi0.coeffs().to_vec();
    for _ in 0..k {
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = it.multiplier()[i] * *c + it.offset().coeffs()[i];
        }
    }
    SpectralField::from_coeffs(phi0.basis(), coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kmiter::spectral::{build_basis, RectDomain};
    use kmiter::{build_parabolic, iterate_closed_form, GroundTruth};
    use kmiter::problems::FinalDataParabolic;
    use std::sync::Arc;

    fn basis() -> Arc<SpectralBasis> {
        build_basis(RectDomain::unit_square(17).unwrap(), 4, 2.0).unwrap()
    }

    #[test]
    fn identity_function_gives_identity_matrix() {
        let b = basis();
        let op = dense_functional_calculus(&b, |_| 1.0).unwrap();
        for r in 0..op.n() {
            for c in 0..op.n() {
                assert_eq!(op.get(r, c), if r == c { 1.0 } else { 0.0 });
            }
        }
        assert!(op.is_symmetric(0.0));
    }

    #[test]
    fn dense_apply_matches_spectral_apply() {
        let b = basis();
        let op = dense_functional_calculus(&b, |l| (1.0 + l).ln()).unwrap();
        for trial in 0..100 {
            // Cheap deterministic pseudo-random coefficients.
            let coeffs: Vec<f64> = (0..b.len())
                .map(|i| ((i * 31 + trial * 7) as f64 * 0.618).sin())
                .collect();
            let f = SpectralField::from_coeffs(&b, coeffs).unwrap();
            let dense = op.apply(&f).unwrap();
            let fast = f.apply(|l| (1.0 + l).ln()).unwrap();
            for i in 0..b.len() {
                let d = (dense.coeffs()[i] - fast.coeffs()[i]).abs();
                assert!(d <= 1e-13 * fast.coeffs()[i].abs().max(1.0));
            }
        }
    }

    #[test]
    fn non_finite_rejected() {
        let b = basis();
        assert!(matches!(
            dense_functional_calculus(&b, |l| (l * l * 1e6).exp()),
            Err(Error::NonFiniteEval { .. })
        ));
    }

    #[test]
    fn loop_recurrence_basics() {
        let b = basis();
        let truth = GroundTruth::Modes(vec![(1, 1, 1.0), (2, 3, -0.5)])
            .realize(&b)
            .unwrap();
        let data = FinalDataParabolic::new(truth, 0.625).unwrap();
        let it = build_parabolic(&data, 2.0, 2.0).unwrap();
        let phi0 = GroundTruth::SingleMode {
            k: 2,
            m: 2,
            amplitude: 0.3,
        }
        .realize(&b)
        .unwrap();

        let zero_steps = loop_recurrence(&it, &phi0, 0).unwrap();
        assert_eq!(zero_steps.coeffs(), phi0.coeffs());

        let looped = loop_recurrence(&it, &phi0, 1000).unwrap();
        let closed = iterate_closed_form(&it, &phi0, 1000).unwrap();
        for i in 0..b.len() {
            let scale = looped.coeffs()[i].abs().max(1.0);
            assert!((looped.coeffs()[i] - closed.coeffs()[i]).abs() <= 1e-11 * scale);
        }
    }
}
