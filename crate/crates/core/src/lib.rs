//! Numerical toolkit for finite Blaschke products on the unit disc.
//!
//! * [`moebius`]: disc automorphisms `T_{a,gamma}` and rotations.
//! * [`polyroots`]: Aberth–Ehrlich polynomial root finding.
//! * [`blaschke`]: the product type, derivatives, critical points, fibers.
//! * [`hyperbolic`]: geodesics and hyperbolic convex hulls.
//! * [`lab`]: convergence, valence, separation and density experiments.
//! * [`random`]: seeded random products.
//! * [`verify`]: property suites over random products.

// `!(x < y)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blaschke;
pub mod error;
pub mod hyperbolic;
pub mod lab;
pub mod moebius;
pub mod polyroots;
pub mod random;
pub mod verify;

pub use blaschke::{CriticalSet, FiniteBlaschkeProduct};
pub use error::{Error, Result};
pub use hyperbolic::{Geodesic, HullKind, HyperbolicHull};
pub use moebius::DiscAutomorphism;
pub use num_complex::Complex64;
pub use polyroots::{Polynomial, Root, RootSet};
