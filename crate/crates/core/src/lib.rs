//! Computations in Hilbert geometries: distances, boundary faces, the
//! extended metric on the closure, shadows, and proximal limit sets of
//! projective groups.

pub mod body;
pub mod dynamics;
pub mod error;
pub mod facts;
pub mod faces;
pub mod hausdorff;
pub mod metric;
pub mod omega_f;
pub mod projective;
pub mod sampling;
pub mod serde_float;
pub mod svg;
pub mod tol;

pub use body::{BodyKind, ConvexBody, Ellipsoid, HPolytope, HullBody, RayMethod};
pub use error::{Error, Result};
pub use faces::{extended_distance, face_of, ClosurePoint, ExtendedDistance, FaceDescriptor, Location};
pub use metric::{boundary_ray, chord, cross_ratio, hilbert_distance, Chord};
pub use projective::{apply_transform, AffineChart, ProjPoint, ProjTransform};
