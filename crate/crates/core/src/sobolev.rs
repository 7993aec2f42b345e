//! Spectrally weighted Sobolev norms and space-time norms.
//!
//! The scale `H^s` is realized by the weight `(1 + lambda^2)^s` on the
//! coefficients: `||phi||_s = (sum (1+lambda^2)^s c^2)^(1/2)`. With a
//! truncated spectrum the same finite sum serves every `s`, negative
//! included — no completion machinery is needed (or possible) at finite
//! mode count. `s = 0` recovers the plain coefficient l2 norm.

use crate::error::{Error, Result};
use crate::spectral::SpectralField;

/// Index `s` of the Hilbert scale `H^s`; any finite real, negative allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevIndex(f64);

impl SobolevIndex {
    pub fn new(s: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Sobolev index must be finite, got {s}"
            )));
        }
        Ok(Self(s))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

impl From<f64> for SobolevIndex {
    /// Panics on non-finite `s`; use [`SobolevIndex::new`] to handle that case.
    fn from(s: f64) -> Self {
        Self::new(s).expect("finite Sobolev index")
    }
}

/// Uniform samples of `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t_end: f64,
    nodes: Vec<f64>,
}

impl TimeGrid {
    pub fn new(t_end: f64, nt: usize) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "final time must be positive and finite, got {t_end}"
            )));
        }
        if nt < 2 {
            return Err(Error::InvalidParameter(format!(
                "time grid needs at least 2 nodes, got {nt}"
            )));
        }
        let mut nodes: Vec<f64> = (0..nt)
            .map(|i| t_end * i as f64 / (nt - 1) as f64)
            .collect();
        nodes[0] = 0.0;
        nodes[nt - 1] = t_end;
        Ok(Self { t_end, nodes })
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn nt(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Spacing between consecutive nodes.
    pub fn dt(&self) -> f64 {
        self.t_end / (self.nodes.len() - 1) as f64
    }
}

/// `H^s` norm of a field: `(sum (1+lambda^2)^s c^2)^(1/2)`.
pub fn hs_norm(field: &SpectralField, s: SobolevIndex) -> f64 {
    if s.value() == 0.0 {
        return field.l2_norm();
    }
    field
        .coeffs()
        .iter()
        .zip(field.basis().eigenvalues())
        .map(|(c, &lambda)| (1.0 + lambda * lambda).powf(s.value()) * c * c)
        .sum::<f64>()
        .sqrt()
}

fn check_trajectory(trajectory: &[SpectralField], tgrid: &TimeGrid) -> Result<()> {
    if trajectory.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    if trajectory.len() != tgrid.nt() {
        return Err(Error::TrajectoryLength {
            got: trajectory.len(),
            expected: tgrid.nt(),
        });
    }
    Ok(())
}

/// `L2(0,T; H^s)` norm: trapezoidal quadrature of `||u(t)||_s^2` over the
/// time grid, square-rooted. The trajectory must be sampled on the grid
/// nodes.
pub fn spacetime_l2_norm(
    trajectory: &[SpectralField],
    s: SobolevIndex,
    tgrid: &TimeGrid,
) -> Result<f64> {
    check_trajectory(trajectory, tgrid)?;
    let dt = tgrid.dt();
    let n = trajectory.len();
    let mut acc = 0.0;
    for (i, u) in trajectory.iter().enumerate() {
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let norm = hs_norm(u, s);
        acc += w * norm * norm;
    }
    Ok((dt * acc).sqrt())
}

/// `sup_{t in [0,T]} ||u(t)||_s`, taken over the sampled nodes.
pub fn spacetime_sup_norm(
    trajectory: &[SpectralField],
    s: SobolevIndex,
    tgrid: &TimeGrid,
) -> Result<f64> {
    check_trajectory(trajectory, tgrid)?;
    Ok(trajectory
        .iter()
        .map(|u| hs_norm(u, s))
        .fold(0.0, f64::max))
}
