//! Inscribed polytopal approximation of the Euclidean unit ball.
//!
//! The crate builds nets on the sphere, hulls them into simplicial polytopes,
//! and measures how much volume the polytope misses. The missing volume is
//! split facet by facet into *umbrella gaps*: the solid spherical sector over
//! a facet minus the cone from the origin to the facet. Each sector volume is
//! a Gaussian integral over the positive orthant, which is what makes the
//! per-facet quantities computable in any dimension.
//!
//! Modules, bottom-up:
//!
//! * [`geometry`]: sphere points, facet hyperplanes, caps, centroid data.
//! * [`ball`]: log-gamma, ball and cap volumes, orthant Gaussian moments.
//! * [`mc`]: seeded, sharded Monte Carlo estimates with standard errors.
//! * [`cone`]: spherical simplex measure, umbrella gaps and their lower bounds.
//! * [`hull`]: d-dimensional convex hull of sphere points and the polytope document.
//! * [`approx`]: nets, ball–polytope metrics, facet classes and inequality audits.

pub mod approx;
pub mod ball;
pub mod cone;
mod error;
pub mod geometry;
pub mod hull;
mod linalg;
pub mod mc;

pub use approx::{
    AuditCheck, AuditReport, EffectiveCount, FacetClass, FacetLabel, NetConfig, NetTarget,
};
pub use cone::ConeResult;
pub use error::{Error, Result};
pub use geometry::{Cap, FacetStats, Hyperplane, SimplexFacet, SpherePoint};
pub use hull::{Polytope, PolytopeDocument};
pub use mc::McEstimate;

/// Tolerance for unit-norm checks on sphere points.
pub const EPS_UNIT: f64 = 1e-12;
/// Relative tolerance for degeneracy and orientation decisions.
pub const EPS_HULL: f64 = 1e-9;
