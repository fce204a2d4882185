//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure modes of the geometric primitives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    /// A point that must be nonisotropic lies on the absolute.
    #[error("point is isotropic")]
    Isotropic,
    /// A point has the wrong sign of `<p,p>` for the operation.
    #[error("signature violation: {0}")]
    Signature(&'static str),
    /// Two complex geodesics were required to be ultraparallel.
    #[error("complex geodesics are not ultraparallel (tance {0})")]
    NotUltraparallel(f64),
    /// A configuration sits on (or too close to) a degenerate locus.
    #[error("degenerate configuration: {0}")]
    Degenerate(&'static str),
    /// An isometry was expected to stabilize a complex geodesic.
    #[error("isometry does not stabilize the complex geodesic")]
    NotStabilized,
    /// A point was expected on the ideal boundary of a complex geodesic.
    #[error("point is not on the ideal boundary of the complex geodesic")]
    NotOnBoundary,
    /// A numerical identity that must hold failed beyond tolerance.
    #[error("property violation: {0}")]
    Property(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
