//! Solvers built around rotation search in SO(3): inscribing boxes into
//! centrally symmetric convex bodies by equalizing the Minkowski gauge on a
//! vertex orbit, and covering diameter-1 sets by a rhombic dodecahedron with
//! unit face distance. Exact analytic oracles on ellipsoids and the finite
//! group representations behind both constructions are included, along with
//! a partition harness that chases the four-piece diameter bound.

pub mod bodies;
pub mod borsuk;
pub mod cli;
pub mod cover;
pub mod groups;
pub mod inscribe;
pub mod mesh;
pub mod oracle;
pub mod rotations;
pub mod templates;

mod descent;
mod simplex;

pub use bodies::{Body, Ellipsoid, GeneralSet, PointCloudBody, SupportFunction};
pub use inscribe::{inscribe_box, solve_knaster, InscribedBox, SolveConfig};
pub use rotations::{Rotation, TangentVector};
pub use templates::BoxTemplate;
