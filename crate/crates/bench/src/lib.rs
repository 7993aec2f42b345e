//! Shared setup for the benchmark targets.

use std::sync::Arc;

use kmiter::spectral::{build_basis, RectDomain, SpectralBasis, SpectralField};
use kmiter::{ExperimentConfig, GroundTruth};

pub fn reference_basis(n: usize, kmax: usize) -> Arc<SpectralBasis> {
    build_basis(RectDomain::unit_square(n).unwrap(), kmax, 2.0).unwrap()
}

/// Deterministic band-limited field with O(1) coefficients.
pub fn dense_field(basis: &Arc<SpectralBasis>) -> SpectralField {
    let coeffs = (0..basis.len())
        .map(|i| (0.7 + i as f64 * 0.61).sin())
        .collect();
    SpectralField::from_coeffs(basis, coeffs).unwrap()
}

/// The reference reconstruction setup with decade checkpoints to 10^6.
pub fn reference_experiment() -> ExperimentConfig {
    ExperimentConfig::reference_parabolic(GroundTruth::Bump {
        center_x: 0.5,
        center_y: 0.5,
        width: 0.15,
        amplitude: 1.0,
    })
}
