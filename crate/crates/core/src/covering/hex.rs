use serde::{Deserialize, Serialize};

use super::circumball::circumball;
use super::radius::{report, verify_covering, DensityReport, DEFAULT_SAMPLES};
use crate::ball::ball_volume;
use crate::error::{NilError, Result};
use crate::lattice::{fundamental_domain, lattice_from_params, Lattice, LatticeBasis};
use crate::solve::golden_section_min;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Lattice with a regular hexagonal projection whose generators `T1`, `T2`
/// lie on the surface equidistant from `O` and `T3`.
pub fn hex_family_lattice(t11: f64) -> Result<LatticeBasis> {
    if !(t11 > 0.0 && t11.is_finite()) {
        return Err(NilError::Domain(format!("t11 = {t11} must be positive")));
    }
    let a = t11 * t11;
    Ok(LatticeBasis::new(
        [t11, 0.0, SQRT3 * a / 4.0],
        [0.5 * t11, 0.5 * SQRT3 * t11, 3.0 * SQRT3 * a / 8.0],
        1,
    ))
}

fn hex_radius(lattice: &Lattice) -> Result<f64> {
    let d = fundamental_domain(lattice);
    Ok(circumball(&[d.o, d.t1, d.t2, d.t3])?.radius)
}

fn hex_density_value(t11: f64) -> Result<f64> {
    let lattice = lattice_from_params(&hex_family_lattice(t11)?)?;
    let r = hex_radius(&lattice)?;
    let area = 0.5 * SQRT3 * t11 * t11;
    Ok(ball_volume(r)? / (area * area))
}

/// Density of the hexagonal-family lattice, using the circumball of
/// `O T1 T2 T3` as covering radius; the report is sampling-checked.
pub fn hex_density(t11: f64) -> Result<DensityReport> {
    let lattice = lattice_from_params(&hex_family_lattice(t11)?)?;
    let r = hex_radius(&lattice)?;
    let check = verify_covering(&lattice, (r * (1.0 + 1e-6)).min(crate::geodesic::MAX_LENGTH), DEFAULT_SAMPLES)?;
    report(&lattice, r, r, check.covered, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HexOptimum {
    pub t11: f64,
    pub radius: f64,
    pub density: f64,
    pub lattice: LatticeBasis,
    /// Sampling check at `radius · (1 + 1e-4)`.
    pub verified: bool,
}

/// Minimises the hexagonal-family density over `t11 ∈ [0.8, 1.8]`.
pub fn optimize_hex() -> Result<HexOptimum> {
    let objective = |t: f64| hex_density_value(t).unwrap_or(f64::INFINITY);
    let (t11, density) = golden_section_min(objective, 0.8, 1.8, 1e-9);
    let basis = hex_family_lattice(t11)?;
    let lattice = lattice_from_params(&basis)?;
    let radius = hex_radius(&lattice)?;
    let verified = verify_covering(&lattice, radius * (1.0 + 1e-4), DEFAULT_SAMPLES)?.covered;
    Ok(HexOptimum { t11, radius, density, lattice: basis, verified })
}
