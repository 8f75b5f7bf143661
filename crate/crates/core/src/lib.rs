//! Exact and simulated statistics of `X_C = |(C + X) ∩ Z^d|`, the number of lattice points
//! captured by a polytope `C` under a uniform random shift `X ∈ [0,1)^d`.
//!
//! * [`geometry`]: exact rational polytopes (H/V conversions, clipping, Minkowski sums, volume).
//! * [`lattice`]: counting at a shift, genericity, parallelepiped and zonotope constants.
//! * [`stats`]: exact mean, covariance and distribution; Monte Carlo; distribution comparison.
//! * [`constructions`]: the polytope catalog and the slab-piece scaling decomposition.
//! * [`verify`]: pointwise identity checks, counterexample confirmation and the Reeve audit.

pub mod constructions;
pub mod error;
pub mod geometry;
pub mod lattice;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{Body, HalfSpace, Polytope, PolytopeUnion, RMatrix, RVector, Rational};
