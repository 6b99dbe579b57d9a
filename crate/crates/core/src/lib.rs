//! Capra-convexity of cones and Capra conjugacy on grids.

pub mod cone;
pub mod conjugacy;
pub mod decision;
pub mod error;
pub mod figure;
pub mod hulls;
pub mod linalg;
pub mod norm;
mod par;
pub mod sampling;
pub mod scalar;
pub mod scene;
pub mod vector;

pub use error::{Error, Result};
pub use norm::{capra_coupling, norm, norm_squared, radial_projection, NormKind, SourceNorm, SpherePoint};
pub use scalar::{Field, Mode, Rational, Scalar};
pub use vector::Vector;
