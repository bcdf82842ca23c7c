//! Geometry of the Nil model: geodesics, geodesic balls, translation lattices
//! and lattice-like coverings of space by congruent geodesic balls.

pub mod ball;
pub mod covering;
pub mod error;
pub mod fmt;
pub mod geodesic;
pub mod halton;
pub mod lattice;
pub mod nil;
pub mod quadrature;
pub mod solve;

pub use error::{NilError, Result};
pub use nil::{NilIsometry, NilPoint, Translation};
