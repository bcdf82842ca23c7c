use nalgebra::{Vector3, Vector4};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{NilError, Result};
use crate::geodesic::{distance, MAX_LENGTH};
use crate::nil::NilPoint;
use crate::solve::{damped_newton, NewtonOptions};

/// Largest accepted spread of the four centre distances.
pub const CIRCUMBALL_TOL: f64 = 1e-8;

/// Geodesic ball through four points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircumballResult {
    pub center: NilPoint,
    pub radius: f64,
    /// Largest `|d(center, pᵢ) − radius|`.
    pub residual: f64,
}

impl CircumballResult {
    /// Re-measures the four distances and checks them against the radius.
    pub fn validate(&self, points: &[NilPoint; 4]) -> std::result::Result<(), String> {
        for (i, p) in points.iter().enumerate() {
            let d = distance(&self.center, p).map_err(|e| e.to_string())?;
            if (d - self.radius).abs() > CIRCUMBALL_TOL {
                return Err(format!("point {i} at distance {d}, radius {}", self.radius));
            }
        }
        Ok(())
    }
}

fn residuals(points: &[NilPoint; 4], v: &Vector4<f64>) -> Option<Vector4<f64>> {
    let c = NilPoint::new(v[0], v[1], v[2]);
    let mut out = Vector4::zeros();
    for (i, p) in points.iter().enumerate() {
        out[i] = distance(&c, p).ok()? - v[3];
    }
    Some(out)
}

/// Newton solve for the equidistant centre starting from `(center, radius)`.
pub(crate) fn refine_center(points: &[NilPoint; 4], center: &NilPoint, radius: f64) -> Option<CircumballResult> {
    let opts = NewtonOptions { max_iter: 60, ftol: 1e-14, fd_step: 1e-7 };
    let start = Vector4::new(center.x, center.y, center.z, radius);
    let out = damped_newton(|v| residuals(points, v), start, &opts)?;
    let (x, r) = (out.x, out.x[3]);
    (out.residual < CIRCUMBALL_TOL && r > 0.0 && r <= MAX_LENGTH).then(|| CircumballResult {
        center: NilPoint::new(x[0], x[1], x[2]),
        radius: r,
        residual: out.residual,
    })
}

/// Circumscribed geodesic ball of four points, by multistart damped Newton.
/// Among all converged roots the one with the smallest radius is returned.
pub fn circumball(points: &[NilPoint; 4]) -> Result<CircumballResult> {
    if points.iter().any(|p| !p.is_finite()) {
        return Err(NilError::Domain("points must be finite".into()));
    }
    let mut max_pair: f64 = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            if points[i].euclid_dist(&points[j]) < 1e-12 {
                return Err(NilError::Degenerate(format!("points {i} and {j} coincide")));
            }
            if let Ok(d) = distance(&points[i], &points[j]) {
                max_pair = max_pair.max(d);
            }
        }
    }
    let lo = [0, 1, 2].map(|k| points.iter().map(|p| p.to_array()[k]).fold(f64::INFINITY, f64::min));
    let hi = [0, 1, 2].map(|k| points.iter().map(|p| p.to_array()[k]).fold(f64::NEG_INFINITY, f64::max));
    let r_lo = (0.5 * max_pair).max(1e-6);
    let mut starts = Vec::with_capacity(108);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for m in 0..4 {
                    let at = |a: usize, d: usize| lo[d] + (hi[d] - lo[d]) * (0.25 + 0.25 * a as f64);
                    let r = r_lo + (MAX_LENGTH - r_lo) * (m as f64 / 3.0).powi(2);
                    starts.push((NilPoint::new(at(i, 0), at(j, 1), at(k, 2)), r));
                }
            }
        }
    }
    let roots: Vec<Option<CircumballResult>> =
        starts.par_iter().map(|(c, r)| refine_center(points, c, *r)).collect();
    let best = roots.into_iter().flatten().min_by(|a, b| {
        a.radius
            .total_cmp(&b.radius)
            .then(a.center.x.total_cmp(&b.center.x))
            .then(a.center.y.total_cmp(&b.center.y))
            .then(a.center.z.total_cmp(&b.center.z))
    });
    match best {
        Some(b) => Ok(b),
        None => {
            let e = |i: usize| Vector3::from(points[i].to_array()) - Vector3::from(points[0].to_array());
            let vol = e(1).cross(&e(2)).dot(&e(3)).abs();
            let scale = e(1).norm() * e(2).norm() * e(3).norm();
            if vol <= 1e-12 * scale {
                Err(NilError::Degenerate("points are coplanar".into()))
            } else {
                Err(NilError::NoSolution("no circumscribed ball of radius at most 2*pi".into()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optimal_packing_tetrahedron() {
        let pts = [
            NilPoint::ORIGIN,
            NilPoint::new(1.306_338_20, 0.0, 0.738_944_61),
            NilPoint::new(0.653_169_10, 1.131_322_06, 1.108_416_92),
            NilPoint::new(0.0, 0.0, 1.477_889_22),
        ];
        let c = circumball(&pts).unwrap();
        assert!((c.radius - 0.902_939_41).abs() < 1e-5, "{c:?}");
        assert!((c.center.x - 0.459_810_62).abs() < 1e-5);
        assert!((c.center.y - 0.265_471_79).abs() < 1e-5);
        assert!((c.center.z - 0.799_977_99).abs() < 1e-5);
        c.validate(&pts).unwrap();
    }

    #[test]
    fn coincident_points_are_degenerate() {
        let p = NilPoint::new(0.1, 0.2, 0.3);
        let pts = [p, p, NilPoint::ORIGIN, NilPoint::new(1.0, 0.0, 0.0)];
        assert!(matches!(circumball(&pts), Err(NilError::Degenerate(_))));
    }
}
