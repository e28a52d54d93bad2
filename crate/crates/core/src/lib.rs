//! Numerical conformal mapping of multiply connected planar domains onto
//! circular-slit annuli, automorphism groups of circular domains, and
//! parameterized domain families.
//!
//! The crate is organized bottom-up:
//!
//! * [`geometry`]: extended-plane points, circles, sampled boundary curves
//!   and domains.
//! * [`mobius`]: fractional-linear maps and symmetric points.
//! * [`dirichlet`]: boundary-integral Dirichlet solver, harmonic measures
//!   and period matrices.
//! * [`koebe`]: the canonical slit-annulus map, its moduli, evaluation,
//!   inversion and biholomorphisms between equivalent domains.
//! * [`circular_aut`]: automorphism groups of circular domains.
//! * [`families`]: parameterized families, moduli sweeps and the
//!   discontinuity witness.
//! * [`io`]: JSON/CSV/SVG formats shared with the command-line front end.

pub mod circular_aut;
pub mod dirichlet;
pub mod error;
pub mod families;
pub mod geometry;
pub mod io;
pub mod koebe;
pub mod mobius;
pub mod spectral;

pub use error::{Error, ErrorKind, Result};
pub use geometry::{
    circular_to_curves, hausdorff_distance, perpendicular_circle, spherical_distance,
    BoundaryCurve, Circle, CircularDomain, ExtendedPoint, MultiplyConnectedDomain, Orientation,
};
pub use mobius::{MobiusMap, SymmetricPair};
pub use num_complex::Complex64;
