//! Error type shared by all library modules.

use thiserror::Error;

/// Errors reported by basis construction, transforms, solvers and iterations.
///
/// Overflow and resonance variants carry the offending eigenvalue: for the
/// severely ill-posed directions the failure mode of the mathematics *is*
/// floating-point overflow, and callers need to know which mode triggered it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `kmax` does not fit the grid: the sine modes `1..=kmax` must be
    /// resolvable on `nx x ny` uniform nodes.
    #[error("kmax = {kmax} out of range: need 1 <= kmax <= {max_kmax} for a {nx}x{ny} grid")]
    KmaxOutOfRange {
        kmax: usize,
        max_kmax: usize,
        nx: usize,
        ny: usize,
    },

    /// A domain or basis parameter failed validation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two values built over different domains/bases were combined.
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    /// Grid values violate the homogeneous Dirichlet class.
    #[error("boundary values must be zero (Dirichlet class); found {value} at node ({i}, {j})")]
    NonzeroBoundary { i: usize, j: usize, value: f64 },

    /// A scalar function of the spectrum produced a non-finite value.
    #[error("non-finite value f({lambda}) = {value} in functional calculus")]
    NonFiniteEval { lambda: f64, value: f64 },

    /// A solution formula overflowed at some mode; this is the ill-posedness
    /// surfacing, not an internal bug.
    #[error("overflow evaluating solution at eigenvalue {lambda}, t = {t}")]
    Overflow { lambda: f64, t: f64 },

    /// An eigenvalue sits too close to the resonant set {k*pi/T} for the
    /// hyperbolic Dirichlet problem to be solvable at the requested tolerance.
    #[error("near-resonant mode ({k},{m}): |sin(lambda*T)| = {margin:.3e} at lambda = {lambda} is below tolerance {tol:.3e}")]
    Resonance {
        k: usize,
        m: usize,
        lambda: f64,
        margin: f64,
        tol: f64,
    },

    /// Exactly resonant mode carrying nonzero data: the problem has no
    /// solution on that mode.
    #[error("resonant mode ({k},{m}) at lambda = {lambda} carries nonzero data; problem inconsistent")]
    ResonantData { k: usize, m: usize, lambda: f64 },

    /// Relaxation parameter outside the non-expansiveness bound.
    #[error("gamma = {gamma} inadmissible: need 0 < gamma < {bound} (non-expansiveness bound)")]
    GammaInadmissible { gamma: f64, bound: f64 },

    /// Fixed-point projection hit a mode with multiplier 1 and nonzero
    /// offset: the iteration diverges linearly there.
    #[error("divergent mode at lambda = {lambda}: multiplier 1 with nonzero offset {offset}")]
    DivergentMode { lambda: f64, offset: f64 },

    /// A time trajectory does not line up with its time grid.
    #[error("trajectory has {got} snapshots but the time grid has {expected} nodes")]
    TrajectoryLength { got: usize, expected: usize },

    /// Empty trajectory where at least one snapshot is required.
    #[error("empty trajectory")]
    EmptyTrajectory,
}

pub type Result<T> = std::result::Result<T, Error>;
