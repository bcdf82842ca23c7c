//! Lattice-like coverings of Nil by congruent geodesic balls.

mod bounds;
mod circumball;
mod hex;
mod radius;

pub use bounds::{
    bound_f, bound_f1, bound_f2, equidistant_projection, lower_bound_density, minimize_lower_bound,
    minimize_lower_bound_in, LowerBoundConfig, H1, H2,
};
pub use circumball::{circumball, CircumballResult, CIRCUMBALL_TOL};
pub use hex::{hex_density, hex_family_lattice, optimize_hex, HexOptimum};
pub use radius::{covering_density, covering_radius, verify_covering, CoverageCheck, DensityReport, DEFAULT_SAMPLES};

/// Density of the thinnest lattice covering of Euclidean space by balls.
pub const EUCLIDEAN_COVERING_DENSITY: f64 = 5.0 * 2.236_067_977_499_79 * std::f64::consts::PI / 24.0;
