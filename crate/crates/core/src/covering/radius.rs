use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::circumball::{circumball, refine_center};
use crate::ball::ball_volume;
use crate::error::{NilError, Result};
use crate::geodesic::{distance, MAX_LENGTH};
use crate::halton::Halton3;
use crate::lattice::{domain_volume, lattice_points_in_shell, parallelepiped_tetrahedra, Lattice, LatticeBasis};
use crate::nil::NilPoint;

pub const DEFAULT_SAMPLES: usize = 20_000;

/// Sampling-based covering check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageCheck {
    pub radius: f64,
    pub covered: bool,
    pub samples: usize,
    /// Samples farther than `radius` from every lattice point.
    pub uncovered: usize,
    /// Point found farthest from the lattice.
    pub witness: NilPoint,
    /// Its distance to the nearest lattice point.
    pub witness_distance: f64,
}

struct Nearest {
    points: Vec<NilPoint>,
}

impl Nearest {
    fn new(lattice: &Lattice) -> Self {
        Nearest { points: lattice_points_in_shell(lattice, 2) }
    }

    /// Distance from `p` to the nearest lattice point. Horizontal distance is
    /// a lower bound for Nil distance, which prunes most candidates.
    fn distance(&self, p: &NilPoint) -> f64 {
        let mut cand: Vec<(f64, usize)> =
            self.points.iter().enumerate().map(|(i, q)| ((q.x - p.x).hypot(q.y - p.y), i)).collect();
        cand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut best = f64::INFINITY;
        for (h, i) in cand {
            if h >= best {
                break;
            }
            if let Ok(d) = distance(&self.points[i], p) {
                best = best.min(d);
            }
        }
        best
    }

    fn closest_four(&self, p: &NilPoint) -> Option<[NilPoint; 4]> {
        let mut all: Vec<(f64, usize)> = self
            .points
            .iter()
            .enumerate()
            .filter_map(|(i, q)| distance(q, p).ok().map(|d| (d, i)))
            .collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        (all.len() >= 4).then(|| [0, 1, 2, 3].map(|k| self.points[all[k].1]))
    }

    /// Climbs `p` towards a local maximum of the nearest-point distance: compass
    /// search, then an exact equidistant solve against the four closest points.
    fn deepen(&self, p: NilPoint, step: f64) -> (NilPoint, f64) {
        let mut best = (p, self.distance(&p));
        let mut h = step;
        while h > 1e-9 {
            let mut moved = false;
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        if dx == 0 && dy == 0 && dz == 0 {
                            continue;
                        }
                        let q = NilPoint::new(
                            best.0.x + h * dx as f64,
                            best.0.y + h * dy as f64,
                            best.0.z + h * dz as f64,
                        );
                        let d = self.distance(&q);
                        if d > best.1 {
                            best = (q, d);
                            moved = true;
                        }
                    }
                }
            }
            if !moved {
                h *= 0.5;
            }
        }
        if let Some(four) = self.closest_four(&best.0) {
            if let Some(c) = refine_center(&four, &best.0, best.1) {
                let d = self.distance(&c.center);
                if d > best.1 {
                    best = (c.center, d);
                }
            }
        }
        best
    }
}

/// Checks that every Halton sample of the parallelepiped `P̃` lies within `r` of
/// a lattice point in the shell `n = 2`. The farthest samples are then pushed
/// to nearby local maxima of the distance to the lattice, so a covering that
/// fails only near a deep hole is still caught.
pub fn verify_covering(lattice: &Lattice, r: f64, samples: usize) -> Result<CoverageCheck> {
    if !(0.0..=MAX_LENGTH).contains(&r) {
        return Err(NilError::Domain(format!("radius {r} outside [0, 2*pi]")));
    }
    if samples == 0 {
        return Err(NilError::Domain("samples must be at least 1".into()));
    }
    let b = lattice.basis;
    let h = b.projected_area();
    let nearest = Nearest::new(lattice);
    let pts: Vec<NilPoint> = Halton3::new(0)
        .take(samples)
        .map(|[u, v, w]| {
            NilPoint::new(
                u * b.t1[0] + v * b.t2[0],
                u * b.t1[1] + v * b.t2[1],
                u * b.t1[2] + v * b.t2[2] + w * h,
            )
        })
        .collect();
    let dists: Vec<f64> = pts.par_iter().map(|p| nearest.distance(p)).collect();
    let uncovered = dists.iter().filter(|&&d| d > r).count();

    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&i, &j| dists[j].total_cmp(&dists[i]).then(i.cmp(&j)));
    let spacing = (domain_volume(lattice) / samples as f64).cbrt();
    let refined: Vec<(NilPoint, f64)> =
        order.iter().take(8).collect::<Vec<_>>().par_iter().map(|&&i| nearest.deepen(pts[i], 0.5 * spacing)).collect();
    let mut witness = (pts[order[0]], dists[order[0]]);
    for cand in refined {
        if cand.1 > witness.1 {
            witness = cand;
        }
    }
    Ok(CoverageCheck {
        radius: r,
        covered: uncovered == 0 && witness.1 <= r,
        samples,
        uncovered,
        witness: witness.0,
        witness_distance: witness.1,
    })
}

fn require_k1(lattice: &Lattice) -> Result<()> {
    if lattice.basis.k == 1 {
        Ok(())
    } else {
        Err(NilError::Domain(format!("covering computations need k = 1, got k = {}", lattice.basis.k)))
    }
}

/// Largest circumradius over the six tetrahedra filling `P̃`.
pub fn covering_radius(lattice: &Lattice) -> Result<f64> {
    require_k1(lattice)?;
    let tets = parallelepiped_tetrahedra(lattice);
    let mut r: f64 = 0.0;
    for t in &tets {
        r = r.max(circumball(t)?.radius);
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub lattice: LatticeBasis,
    pub covering_radius: f64,
    pub ball_volume: f64,
    pub domain_volume: f64,
    pub density: f64,
    /// The sampling check passed at the reported radius.
    pub verified: bool,
    /// Circumradius of the tetrahedra; differs from `covering_radius` only when
    /// the sampling check forced the radius to grow.
    pub circumradius: f64,
    pub adjusted: bool,
}

impl DensityReport {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.density != self.ball_volume / self.domain_volume {
            return Err("density is not ball_volume / domain_volume".into());
        }
        if self.verified && self.density < 1.0 {
            return Err(format!("verified covering with density {} < 1", self.density));
        }
        if !self.adjusted && self.covering_radius != self.circumradius {
            return Err("unadjusted radius differs from the circumradius".into());
        }
        Ok(())
    }
}

pub(crate) fn report(lattice: &Lattice, radius: f64, circumradius: f64, verified: bool, adjusted: bool) -> Result<DensityReport> {
    let ball_volume = ball_volume(radius)?;
    let domain_volume = domain_volume(lattice);
    Ok(DensityReport {
        lattice: lattice.basis,
        covering_radius: radius,
        ball_volume,
        domain_volume,
        density: ball_volume / domain_volume,
        verified,
        circumradius,
        adjusted,
    })
}

/// Covering density of the lattice at its covering radius. If sampling finds
/// the tetrahedral circumradius too small, the radius is grown by bisection
/// until the check passes and the report is flagged as adjusted.
pub fn covering_density(lattice: &Lattice) -> Result<DensityReport> {
    let rc = covering_radius(lattice)?;
    if rc > MAX_LENGTH {
        return Err(NilError::Domain(format!("covering radius {rc} exceeds 2*pi")));
    }
    let at = |r: f64| verify_covering(lattice, r, DEFAULT_SAMPLES).map(|c| c.covered);
    if at((rc * (1.0 + 1e-6)).min(MAX_LENGTH))? {
        return report(lattice, rc, rc, true, false);
    }
    let (mut lo, mut hi) = (rc, rc);
    loop {
        hi = (hi * 1.1).min(MAX_LENGTH);
        if at(hi)? {
            break;
        }
        if hi == MAX_LENGTH {
            return report(lattice, rc, rc, false, false);
        }
        lo = hi;
    }
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        if at(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    report(lattice, hi, rc, true, true)
}
