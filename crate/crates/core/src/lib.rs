//! # cp2mub
//!
//! Complex projective trigonometry in CP² and a synthetic construction of a
//! complete system of four mutually unbiased bases in C³.
//!
//! - [`projective`]: points, lines, tangent angles, geodesics and totally
//!   geodesic real planes under the Fubini–Study metric with curvature in
//!   [¼, 1] (diameter π).
//! - [`trig`]: the angle identity `cos α = cos θ cos ψ`, Shirokov's law of
//!   cosines, the tetrahedral right-triangle identity and holonomy around an
//!   equator of a real form, as residuals and randomized suites.
//! - [`construction`]: the four bases built from a point, its polar line, an
//!   equator with an equilateral triple on it, and a regular tetrahedron on
//!   the line through the base point.
//! - [`verification`]: orthonormality, unbiasedness, distance matrices and
//!   transition (complex Hadamard) matrices for any claimed system.
//!
//! All operations are pure; identical inputs produce bit-identical outputs.

#![forbid(unsafe_code)]

pub mod construction;
pub mod cvec;
pub mod error;
pub mod projective;
pub mod sampling;
pub mod trig;
pub mod verification;

pub use construction::{build_system, Basis, GaugeConfig, MubSystem, TETRA_SIDE};
pub use cvec::{inner, CVec3};
pub use error::{Error, Result};
pub use projective::{
    angles_between, antipode_in, fs_distance, geodesic_point, line_through, membership,
    polar_line, real_plane, tangent_toward, AngleTriple, GeodesicArc, GreatCircle, ProjLine,
    ProjPoint, RealPlane, TangentVector,
};
pub use verification::{check_system, VerificationReport};

/// Tolerance for identities that hold to rounding.
pub const EXACT_TOL: f64 = 1e-12;

/// Tolerance for geometric predicates (membership, coincidence, cut locus).
pub const GEOM_TOL: f64 = 1e-9;

/// `1/√3`, the common modulus of cross inner products between unbiased bases.
pub const UNBIASED_MODULUS: f64 = 0.577_350_269_189_625_7;
