//! Sine eigenbasis of `A = (-Laplacian)^(1/2)` on a rectangle with
//! homogeneous Dirichlet conditions, plus the grid <-> spectral transforms
//! and the functional calculus `f(A)`.
//!
//! On `[0,lx] x [0,ly]` the eigenfunctions are `sin(k*pi*x/lx) * sin(m*pi*y/ly)`
//! with eigenvalues `lambda_{k,m} = pi * sqrt((k/lx)^2 + (m/ly)^2)` (eigenvalues
//! of `A`, not of `A^2`). Everything downstream — Sobolev norms, forward
//! solvers, the fixed-point iterations — is a per-mode scalar computation in
//! this basis, so the transforms here are the only place the grid exists.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Rectangle `[0,lx] x [0,ly]` sampled on `nx x ny` uniform nodes
/// (boundary included).
#[derive(Debug, Clone, PartialEq)]
pub struct RectDomain {
    lx: f64,
    ly: f64,
    nx: usize,
    ny: usize,
}

impl RectDomain {
    pub fn new(lx: f64, ly: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(lx > 0.0 && lx.is_finite()) || !(ly > 0.0 && ly.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "side lengths must be positive and finite, got lx = {lx}, ly = {ly}"
            )));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 grid points per axis, got nx = {nx}, ny = {ny}"
            )));
        }
        Ok(Self { lx, ly, nx, ny })
    }

    /// Unit square on an `n x n` grid.
    pub fn unit_square(n: usize) -> Result<Self> {
        Self::new(1.0, 1.0, n, n)
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Grid spacing along x: `lx / (nx - 1)`.
    pub fn hx(&self) -> f64 {
        self.lx / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        self.ly / (self.ny - 1) as f64
    }

    /// x-coordinate of column `i`, with exact endpoints.
    pub fn x(&self, i: usize) -> f64 {
        if i == self.nx - 1 {
            self.lx
        } else {
            self.lx * i as f64 / (self.nx - 1) as f64
        }
    }

    pub fn y(&self, j: usize) -> f64 {
        if j == self.ny - 1 {
            self.ly
        } else {
            self.ly * j as f64 / (self.ny - 1) as f64
        }
    }
}

/// Discrete spectrum of `A` restricted to the first `kmax` sine modes per
/// axis, with the sampled sine tables used by the transforms.
///
/// Mode `(k,m)` (1-based) lives at flat index `(k-1)*kmax + (m-1)`. The
/// spectrum is stored in that mode order; [`SpectralBasis::sorted_modes`]
/// gives the traversal by nondecreasing eigenvalue.
#[derive(Debug)]
pub struct SpectralBasis {
    domain: RectDomain,
    kmax: usize,
    eigenvalues: Vec<f64>,
    sorted: Vec<usize>,
    diffusion_coeff: f64,
    // sin(k*pi*i/(nx-1)) tables, row k-1, column i; likewise for y.
    sin_x: Vec<f64>,
    sin_y: Vec<f64>,
}

impl PartialEq for SpectralBasis {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain
            && self.kmax == other.kmax
            && self.diffusion_coeff == other.diffusion_coeff
    }
}

/// Build the basis: eigenvalues by the closed formula, sine tables for the
/// grid, and the sorted traversal order.
///
/// `a2` is the diffusion coefficient of the parabolic problem
/// (`a^2 du/dt - Laplacian u = 0`); it scales time evolution only, the
/// spectrum of `A` itself is independent of it.
pub fn build_basis(domain: RectDomain, kmax: usize, a2: f64) -> Result<Arc<SpectralBasis>> {
    let max_kmax = domain.nx.min(domain.ny) - 1;
    if kmax < 1 || kmax > max_kmax {
        return Err(Error::KmaxOutOfRange {
            kmax,
            max_kmax,
            nx: domain.nx,
            ny: domain.ny,
        });
    }
    if !(a2 > 0.0 && a2.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "diffusion coefficient must be positive and finite, got a2 = {a2}"
        )));
    }

    let mut eigenvalues = Vec::with_capacity(kmax * kmax);
    for k in 1..=kmax {
        for m in 1..=kmax {
            let fx = k as f64 / domain.lx;
            let fy = m as f64 / domain.ly;
            eigenvalues.push(std::f64::consts::PI * (fx * fx + fy * fy).sqrt());
        }
    }
    let mut sorted: Vec<usize> = (0..eigenvalues.len()).collect();
    sorted.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));

    let nx1 = (domain.nx - 1) as f64;
    let ny1 = (domain.ny - 1) as f64;
    let mut sin_x = vec![0.0; kmax * domain.nx];
    for k in 1..=kmax {
        for i in 0..domain.nx {
            sin_x[(k - 1) * domain.nx + i] = (k as f64 * std::f64::consts::PI * i as f64 / nx1).sin();
        }
    }
    let mut sin_y = vec![0.0; kmax * domain.ny];
    for m in 1..=kmax {
        for j in 0..domain.ny {
            sin_y[(m - 1) * domain.ny + j] = (m as f64 * std::f64::consts::PI * j as f64 / ny1).sin();
        }
    }

    Ok(Arc::new(SpectralBasis {
        domain,
        kmax,
        eigenvalues,
        sorted,
        diffusion_coeff: a2,
        sin_x,
        sin_y,
    }))
}

impl SpectralBasis {
    pub fn domain(&self) -> &RectDomain {
        &self.domain
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    /// Number of retained modes, `kmax^2`.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn diffusion_coeff(&self) -> f64 {
        self.diffusion_coeff
    }

    /// Eigenvalues in mode order (index `(k-1)*kmax + (m-1)`).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Flat index of mode `(k,m)`, both 1-based.
    pub fn mode_index(&self, k: usize, m: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.kmax && m >= 1 && m <= self.kmax);
        (k - 1) * self.kmax + (m - 1)
    }

    /// Inverse of [`mode_index`](Self::mode_index): `(k,m)` of a flat index.
    pub fn mode_of(&self, index: usize) -> (usize, usize) {
        (index / self.kmax + 1, index % self.kmax + 1)
    }

    pub fn eigenvalue(&self, k: usize, m: usize) -> f64 {
        self.eigenvalues[self.mode_index(k, m)]
    }

    /// Flat indices ordered by nondecreasing eigenvalue.
    pub fn sorted_modes(&self) -> &[usize] {
        &self.sorted
    }

    /// Bottom of the spectrum, `min sigma(A) > 0`.
    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[self.sorted[0]]
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[*self.sorted.last().unwrap()]
    }

    /// True if the two bases index the same spectrum (same domain, mode
    /// count and diffusion coefficient).
    pub fn compatible(&self, other: &SpectralBasis) -> bool {
        std::ptr::eq(self, other) || self == other
    }

    fn sx(&self, k: usize, i: usize) -> f64 {
        self.sin_x[(k - 1) * self.domain.nx + i]
    }

    fn sy(&self, m: usize, j: usize) -> f64 {
        self.sin_y[(m - 1) * self.domain.ny + j]
    }
}

/// Function of space represented by its coefficients on the retained
/// eigenmodes; the representation in which all functional calculus is exact.
#[derive(Debug, Clone)]
pub struct SpectralField {
    basis: Arc<SpectralBasis>,
    coeffs: Vec<f64>,
}

impl SpectralField {
    /// The zero field.
    pub fn zero(basis: &Arc<SpectralBasis>) -> Self {
        Self {
            basis: Arc::clone(basis),
            coeffs: vec![0.0; basis.len()],
        }
    }

    /// Field from a full coefficient vector in mode order.
    pub fn from_coeffs(basis: &Arc<SpectralBasis>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                basis.len(),
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "coefficients must be finite, got {c}"
            )));
        }
        Ok(Self {
            basis: Arc::clone(basis),
            coeffs,
        })
    }

    /// Field with a single nonzero mode.
    pub fn single_mode(basis: &Arc<SpectralBasis>, k: usize, m: usize, amplitude: f64) -> Self {
        let mut f = Self::zero(basis);
        f.coeffs[basis.mode_index(k, m)] = amplitude;
        f
    }

    pub fn basis(&self) -> &Arc<SpectralBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, k: usize, m: usize) -> f64 {
        self.coeffs[self.basis.mode_index(k, m)]
    }

    pub fn set_coeff(&mut self, k: usize, m: usize, value: f64) {
        let idx = self.basis.mode_index(k, m);
        self.coeffs[idx] = value;
    }

    /// Plain l2 norm of the coefficient vector (the H^0 norm).
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()))
    }

    /// Apply the functional calculus `f(A)`: coefficient of mode `lambda`
    /// is multiplied by `fn(lambda)`. Errors if `fn` is non-finite on any
    /// retained eigenvalue, naming the eigenvalue.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        let mut out = self.clone();
        for (c, &lambda) in out.coeffs.iter_mut().zip(&self.basis.eigenvalues) {
            let v = f(lambda);
            if !v.is_finite() {
                return Err(Error::NonFiniteEval { lambda, value: v });
            }
            *c *= v;
        }
        Ok(out)
    }

    fn check_same_basis(&self, other: &Self) -> Result<()> {
        if !self.basis.compatible(&other.basis) {
            return Err(Error::DomainMismatch(
                "fields built over different bases".into(),
            ));
        }
        Ok(())
    }

    /// `self + scale * other`.
    pub fn add_scaled(&self, other: &Self, scale: f64) -> Result<Self> {
        self.check_same_basis(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + scale * b)
            .collect();
        Ok(Self {
            basis: Arc::clone(&self.basis),
            coeffs,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, -1.0)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            basis: Arc::clone(&self.basis),
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Relative l2 distance to `reference`; `None` when the reference is zero.
    pub fn rel_l2_error(&self, reference: &Self) -> Result<Option<f64>> {
        let denom = reference.l2_norm();
        let diff = self.sub(reference)?.l2_norm();
        if denom == 0.0 {
            Ok(None)
        } else {
            Ok(Some(diff / denom))
        }
    }
}

/// Function of space sampled on the uniform grid; the I/O representation.
/// Values are stored row-major with y as the outer index
/// (`values[j*nx + i]`), boundary entries exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    domain: RectDomain,
    values: Vec<f64>,
}

impl GridField {
    /// Validates the Dirichlet class: boundary entries must be exactly zero.
    pub fn new(domain: RectDomain, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.nx * domain.ny {
            return Err(Error::InvalidParameter(format!(
                "expected {}x{} = {} grid values, got {}",
                domain.nx,
                domain.ny,
                domain.nx * domain.ny,
                values.len()
            )));
        }
        for j in 0..domain.ny {
            for i in 0..domain.nx {
                let on_boundary =
                    i == 0 || j == 0 || i == domain.nx - 1 || j == domain.ny - 1;
                let v = values[j * domain.nx + i];
                if on_boundary && v != 0.0 {
                    return Err(Error::NonzeroBoundary { i, j, value: v });
                }
                if !v.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "grid values must be finite, got {v} at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { domain, values })
    }

    pub fn zero(domain: RectDomain) -> Self {
        let n = domain.nx * domain.ny;
        Self {
            domain,
            values: vec![0.0; n],
        }
    }

    /// Sample `f(x, y)` on the interior nodes; boundary rows/columns are
    /// forced to zero regardless of `f`.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(domain: RectDomain, f: F) -> Self {
        let mut values = vec![0.0; domain.nx * domain.ny];
        for j in 1..domain.ny - 1 {
            for i in 1..domain.nx - 1 {
                values[j * domain.nx + i] = f(domain.x(i), domain.y(j));
            }
        }
        Self { domain, values }
    }

    pub fn domain(&self) -> &RectDomain {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.domain.nx + i]
    }

    /// Discrete L2(Omega) norm by trapezoidal quadrature. Boundary terms
    /// vanish in the Dirichlet class, so this is `sqrt(hx*hy * sum v^2)`.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v * v).sum();
        (self.domain.hx() * self.domain.hy() * s).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    /// Pointwise absolute difference `|self - other|`; still Dirichlet
    /// (boundary stays zero).
    pub fn abs_diff(&self, other: &Self) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(
                "grids built over different domains".into(),
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .collect();
        Ok(Self {
            domain: self.domain.clone(),
            values,
        })
    }
}

/// Normalization factor relating the trapezoidal L2 grid norm to the
/// coefficient l2 norm on band-limited fields:
/// `grid.l2_norm() == parseval_factor(domain) * field.l2_norm()`.
///
/// The eigenfunctions `sin(k pi x/lx) sin(m pi y/ly)` have L2 norm
/// `sqrt(lx*ly)/2`, and the discrete sine transform reproduces that weight
/// exactly on the retained span.
pub fn parseval_factor(domain: &RectDomain) -> f64 {
    (domain.lx * domain.ly).sqrt() / 2.0
}

/// Analysis: double sine expansion of the grid samples.
///
/// Type-I discrete sine analysis with the normalization that makes
/// `inverse(forward(g)) = g` on the span of the retained modes, i.e. the
/// coefficient of mode `(k,m)` of a sampled `sin(k pi x/lx) sin(m pi y/ly)`
/// is exactly 1. Exactness holds for `kmax <= min(nx,ny) - 2`; the mode
/// `k = nx-1` samples to zero on the grid and is annihilated.
pub fn forward_transform(field: &GridField, basis: &Arc<SpectralBasis>) -> Result<SpectralField> {
    if field.domain != basis.domain {
        return Err(Error::DomainMismatch(format!(
            "grid domain {:?} does not match basis domain {:?}",
            field.domain, basis.domain
        )));
    }
    let nx = basis.domain.nx;
    let ny = basis.domain.ny;
    let norm = 4.0 / ((nx - 1) as f64 * (ny - 1) as f64);

    let mut out = SpectralField::zero(basis);
    // Separable analysis: first contract over x per (k, j), then over y.
    let kmax = basis.kmax;
    let mut partial = vec![0.0; kmax * ny];
    for k in 1..=kmax {
        for j in 1..ny - 1 {
            let mut s = 0.0;
            for i in 1..nx - 1 {
                s += field.values[j * nx + i] * basis.sx(k, i);
            }
            partial[(k - 1) * ny + j] = s;
        }
    }
    for k in 1..=kmax {
        for m in 1..=kmax {
            let mut s = 0.0;
            for j in 1..ny - 1 {
                s += partial[(k - 1) * ny + j] * basis.sy(m, j);
            }
            out.coeffs[basis.mode_index(k, m)] = norm * s;
        }
    }
    Ok(out)
}

/// Synthesis: evaluate the retained modes on the grid. Boundary entries are
/// exactly zero by construction.
pub fn inverse_transform(field: &SpectralField) -> GridField {
    let basis = &field.basis;
    let nx = basis.domain.nx;
    let ny = basis.domain.ny;
    let kmax = basis.kmax;

    // Separable synthesis: contract over m per (k, j) first.
    let mut partial = vec![0.0; kmax * ny];
    for k in 1..=kmax {
        for j in 1..ny - 1 {
            let mut s = 0.0;
            for m in 1..=kmax {
                s += field.coeffs[basis.mode_index(k, m)] * basis.sy(m, j);
            }
            partial[(k - 1) * ny + j] = s;
        }
    }
    let mut values = vec![0.0; nx * ny];
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let mut s = 0.0;
            for k in 1..=kmax {
                s += partial[(k - 1) * ny + j] * basis.sx(k, i);
            }
            values[j * nx + i] = s;
        }
    }
    GridField {
        domain: basis.domain.clone(),
        values,
    }
}
