//! Shared helpers for the integration tests.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kmiter::spectral::{build_basis, RectDomain, SpectralBasis, SpectralField};

pub fn unit_basis(n: usize, kmax: usize, a2: f64) -> Arc<SpectralBasis> {
    build_basis(RectDomain::unit_square(n).unwrap(), kmax, a2).unwrap()
}

/// Band-limited field with coefficients drawn uniformly from [-1, 1].
pub fn random_field(basis: &Arc<SpectralBasis>, rng: &mut ChaCha8Rng) -> SpectralField {
    let coeffs = (0..basis.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    SpectralField::from_coeffs(basis, coeffs).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Relative l2 distance with a floor for near-zero pairs.
pub fn rel_l2(a: &SpectralField, b: &SpectralField) -> f64 {
    let diff = a.sub(b).unwrap().l2_norm();
    let scale = a.l2_norm().max(b.l2_norm());
    if scale == 0.0 {
        0.0
    } else {
        diff / scale
    }
}
