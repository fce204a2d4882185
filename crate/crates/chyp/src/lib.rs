//! Computational kernel for the complex hyperbolic plane.
//!
//! The plane is the ball of negative lines in `C^3` with the Hermitian form
//! `-|z1|^2 + |z2|^2 + |z3|^2`. The crate provides the point-level primitives,
//! isometries and their restrictions to complex geodesics, bisectors, triangles of
//! bisectors, the disc-bundle quadrangle family `M(n,l,k,p)`, and the Kähler potential.

pub mod error;
pub mod hermitian;
pub mod isometry;
pub mod bisector;
pub mod triangle;
pub mod potential;
pub mod quadrangle;
pub mod highprec;

pub use error::{GeomError, Result};
pub use hermitian::{PVec, C64};
pub use isometry::Isometry;
