use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {0} is not strictly inside the unit disc")]
    OutsideDisc(Complex64),

    #[error("unimodular constant {0} has zero or non-finite modulus")]
    BadUnimodular(Complex64),

    #[error("evaluation at {z} is within {distance:e} of a pole")]
    PoleProximity { z: Complex64, distance: f64 },

    #[error("evaluation at {z} is within {distance:e} of a zero")]
    ZeroProximity { z: Complex64, distance: f64 },

    #[error("point {0} is outside the closed unit disc")]
    OutsideClosedDisc(Complex64),

    #[error("a finite Blaschke product needs at least one zero")]
    EmptyZeroSet,

    #[error("polynomial has degree {0}; at least 1 is required")]
    DegreeTooLow(usize),

    #[error("root finder did not converge: worst residual {residual:e} after {sweeps} sweeps")]
    NonConvergence { residual: f64, sweeps: usize },

    #[error("critical point {0} lies on the unit circle to working precision")]
    CircleStraddle(Complex64),

    #[error("points are coincident (pseudo-hyperbolic distance {0:e})")]
    Degenerate(f64),

    #[error("empty input")]
    EmptyInput,

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("contour |z| = {radius} passes within {gap:e} of the fiber")]
    ContourThroughFiber { radius: f64, gap: f64 },

    #[error("winding integral is {residual} away from an integer with {samples} nodes")]
    WindingNotInteger { residual: f64, samples: usize },

    #[error("separation radius {m} does not exceed the largest zero modulus {max_zero}")]
    InvalidAnnulus { m: f64, max_zero: f64 },

    #[error("extra critical point is ambiguous: {0}")]
    ExtractionAmbiguity(String),

    #[error("rotation constant undefined: |B'(gamma0)| = {0:e}")]
    RotationUndefined(f64),

    #[error("|B(z)| = {0} is too close to 1 for the quotient")]
    BoundaryProximity(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
