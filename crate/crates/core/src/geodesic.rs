//! Geodesics from the origin and the Nil distance.
//!
//! The metric is the left-invariant `ds² = dx² + dy² + (dz − x dy)²`. A unit
//! speed geodesic leaving the origin with direction `(α, θ)` has a horizontal
//! projection that runs around a circle with angular speed `w = sin θ`, and in
//! the sheared coordinates `z' = z − xy/2` it rises as `w s + c²(ws − sin ws)/(2w²)`.
//!
//! [`distance`] uses the rotational symmetry of the sheared picture to reduce
//! the inverse problem to one monotone equation in the half turning angle
//! `φ = ws/2 ∈ (0, π)`. [`geodesic_between`] solves the full three-parameter
//! system by multistart damped Newton and serves as an independent route.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{NilError, Result};
use crate::nil::{inverse, m_map, translate, NilPoint};
use crate::solve::{brent_root, damped_newton, NewtonOptions};

/// Longest certified geodesic length.
pub const MAX_LENGTH: f64 = TAU;

/// Initial direction and arc length of a unit-speed geodesic from the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicParams {
    pub alpha: f64,
    pub theta: f64,
    pub s: f64,
}

impl GeodesicParams {
    pub fn new(alpha: f64, theta: f64, s: f64) -> Result<Self> {
        if !(alpha.is_finite() && theta.is_finite() && s.is_finite()) {
            return Err(NilError::Domain("geodesic parameters must be finite".into()));
        }
        if !(-FRAC_PI_2..=FRAC_PI_2).contains(&theta) {
            return Err(NilError::Domain(format!("theta = {theta} outside [-pi/2, pi/2]")));
        }
        if s < 0.0 {
            return Err(NilError::Domain(format!("arc length {s} is negative")));
        }
        Ok(GeodesicParams { alpha, theta, s })
    }

    pub fn endpoint(&self) -> NilPoint {
        geodesic_point(self)
    }
}

/// Inverse-problem solution with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSolveResult {
    pub params: GeodesicParams,
    /// Max-norm mismatch between the geodesic endpoint and the target.
    pub residual: f64,
    /// Number of distinct geodesics of length ≤ 2π found by the multistart.
    pub branch_count: usize,
}

/// `sin v / v`.
pub(crate) fn sinc(v: f64) -> f64 {
    if v.abs() < 1e-4 {
        let v2 = v * v;
        1.0 - v2 / 6.0 + v2 * v2 / 120.0
    } else {
        v.sin() / v
    }
}

/// `(u − sin u) / u²`, odd in `u`.
pub(crate) fn rise_kernel(u: f64) -> f64 {
    if u.abs() < 0.5 {
        // Σ (−1)^(k+1) u^(2k+1) / (2k+3)!
        let u2 = u * u;
        let mut term = u / 6.0;
        let mut sum = term;
        for k in 1..9 {
            let k = k as f64;
            term *= -u2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            sum += term;
        }
        sum
    } else {
        (u - u.sin()) / (u * u)
    }
}

/// Endpoint of the unit-speed geodesic from the origin.
///
/// One closed form covers the helical case, the straight horizontal case
/// `θ = 0` and the vertical fibre `|θ| = π/2`; small `ws` is evaluated by series.
pub fn geodesic_point(g: &GeodesicParams) -> NilPoint {
    let (w, c) = g.theta.sin_cos();
    let s = g.s;
    let u = w * s;
    let rho = c * s * sinc(0.5 * u);
    let (sa, ca) = (g.alpha + 0.5 * u).sin_cos();
    let x = rho * ca;
    let y = rho * sa;
    let zs = u + 0.5 * c * c * s * s * rise_kernel(u);
    NilPoint::new(x, y, zs + 0.5 * x * y)
}

/// Metric norm of the tangent vector `v` based at `p`.
pub fn metric_norm(p: &NilPoint, v: &[f64; 3]) -> f64 {
    let vert = v[2] - p.x * v[1];
    (v[0] * v[0] + v[1] * v[1] + vert * vert).sqrt()
}

/// `(2φ − sin 2φ) / (8 sin² φ)`.
fn turn_term(phi: f64) -> f64 {
    let sc = sinc(phi);
    rise_kernel(2.0 * phi) / (2.0 * sc * sc)
}

/// Minimal geodesic from the origin to `q`, via the rotationally reduced problem.
pub fn geodesic_to(q: &NilPoint) -> Result<GeodesicParams> {
    if !q.is_finite() {
        return Err(NilError::Domain("target point is not finite".into()));
    }
    let zs = m_map(q).z;
    let r = q.x.hypot(q.y);
    let h = zs.abs();
    if r == 0.0 {
        if h > MAX_LENGTH * (1.0 + 1e-14) {
            return Err(NilError::NoSolution(format!(
                "fibre point at height {h} is farther than 2*pi from the origin"
            )));
        }
        let theta = if zs >= 0.0 { FRAC_PI_2 } else { -FRAC_PI_2 };
        return Ok(GeodesicParams { alpha: 0.0, theta, s: h });
    }
    let heading = q.y.atan2(q.x);
    if h == 0.0 {
        if r > MAX_LENGTH * (1.0 + 1e-12) {
            return Err(NilError::NoSolution(format!("horizontal distance {r} exceeds 2*pi")));
        }
        return Ok(GeodesicParams { alpha: heading, theta: 0.0, s: r });
    }
    let r2 = r * r;
    let f = |phi: f64| 2.0 * phi + r2 * turn_term(phi) - h;
    let hi = PI * (1.0 - 1e-15);
    let phi = if f(hi) <= 0.0 {
        hi
    } else {
        brent_root(f, 0.0, hi, 1e-17, 200)
            .ok_or_else(|| NilError::NoSolution("turning-angle equation has no root".into()))?
    };
    let sp = phi.sin();
    let root = (r2 + 4.0 * sp * sp).sqrt();
    let s = root / sinc(phi);
    if s > MAX_LENGTH * (1.0 + 1e-12) {
        return Err(NilError::NoSolution(format!("minimal geodesic length {s} exceeds 2*pi")));
    }
    let lat = (2.0 * sp).atan2(r);
    let (theta, turn) = if zs > 0.0 { (lat, phi) } else { (-lat, -phi) };
    let mut alpha = heading - turn;
    if alpha < -PI {
        alpha += TAU;
    } else if alpha >= PI {
        alpha -= TAU;
    }
    Ok(GeodesicParams { alpha, theta, s })
}

/// Nil distance between two points, certified up to length 2π.
pub fn distance(p1: &NilPoint, p2: &NilPoint) -> Result<f64> {
    geodesic_to(&relative(p1, p2)).map(|g| g.s)
}

/// `p2` seen from `p1` translated to the origin.
pub fn relative(p1: &NilPoint, p2: &NilPoint) -> NilPoint {
    translate(p2, &inverse(&p1.as_translation()))
}

const ALPHA_STARTS: usize = 16;
const THETA_STARTS: usize = 17;
const LENGTH_STARTS: usize = 8;
const ROOT_TOL: f64 = 1e-10;

fn normalize_params(alpha: f64, theta: f64, s: f64) -> Option<GeodesicParams> {
    if !(alpha.is_finite() && theta.is_finite() && s.is_finite()) || s < 0.0 {
        return None;
    }
    let mut t = (theta + PI).rem_euclid(TAU) - PI;
    let mut a = alpha;
    if t > FRAC_PI_2 {
        t = PI - t;
        a += PI;
    } else if t < -FRAC_PI_2 {
        t = -PI - t;
        a += PI;
    }
    let a = (a + PI).rem_euclid(TAU) - PI;
    Some(GeodesicParams { alpha: a, theta: t, s })
}

fn same_geodesic(a: &GeodesicParams, b: &GeodesicParams) -> bool {
    if (a.s - b.s).abs() > 1e-7 || (a.theta - b.theta).abs() > 1e-6 {
        return false;
    }
    if a.theta.cos() < 1e-6 || a.s < 1e-12 {
        return true;
    }
    let d = (a.alpha - b.alpha).rem_euclid(TAU);
    d.min(TAU - d) < 1e-6
}

/// Solves `geodesic_point(g) = p1⁻¹ p2` from a fixed grid of starts and returns
/// the shortest root; ties go to the smallest `|θ|`, then the smallest `α`.
pub fn geodesic_between(p1: &NilPoint, p2: &NilPoint) -> Result<GeodesicSolveResult> {
    let q = relative(p1, p2);
    if !q.is_finite() {
        return Err(NilError::Domain("points must be finite".into()));
    }
    if q.x == 0.0 && q.y == 0.0 && q.z == 0.0 {
        return Ok(GeodesicSolveResult {
            params: GeodesicParams { alpha: 0.0, theta: 0.0, s: 0.0 },
            residual: 0.0,
            branch_count: 1,
        });
    }
    let target = Vector3::new(q.x, q.y, q.z);
    let residual = |v: &Vector3<f64>| {
        let p = geodesic_point(&GeodesicParams { alpha: v[0], theta: v[1], s: v[2] });
        Some(Vector3::new(p.x, p.y, p.z) - target)
    };
    let opts = NewtonOptions { max_iter: 80, ftol: 1e-14, fd_step: 1e-7 };

    let starts: Vec<Vector3<f64>> = (0..ALPHA_STARTS)
        .flat_map(|i| {
            (0..THETA_STARTS).flat_map(move |j| {
                (0..LENGTH_STARTS).map(move |k| {
                    Vector3::new(
                        -PI + TAU * i as f64 / ALPHA_STARTS as f64,
                        -FRAC_PI_2 + PI * j as f64 / (THETA_STARTS - 1) as f64,
                        MAX_LENGTH * (k + 1) as f64 / LENGTH_STARTS as f64,
                    )
                })
            })
        })
        .collect();

    let found: Vec<Option<(GeodesicParams, f64)>> = starts
        .par_iter()
        .map(|x0| {
            let out = damped_newton(residual, *x0, &opts)?;
            if out.residual >= ROOT_TOL {
                return None;
            }
            let g = normalize_params(out.x[0], out.x[1], out.x[2])?;
            (g.s <= MAX_LENGTH * (1.0 + 1e-12)).then_some((g, out.residual))
        })
        .collect();

    let mut roots: Vec<(GeodesicParams, f64)> = Vec::new();
    for (g, res) in found.into_iter().flatten() {
        match roots.iter_mut().find(|(r, _)| same_geodesic(r, &g)) {
            Some(slot) => {
                if res < slot.1 {
                    *slot = (g, res);
                }
            }
            None => roots.push((g, res)),
        }
    }
    let branch_count = roots.len();
    let best_s = roots
        .iter()
        .map(|(g, _)| g.s)
        .fold(f64::INFINITY, f64::min);
    let best = roots
        .into_iter()
        .filter(|(g, _)| g.s <= best_s + ROOT_TOL)
        .min_by(|(a, _), (b, _)| {
            a.theta
                .abs()
                .total_cmp(&b.theta.abs())
                .then(a.alpha.total_cmp(&b.alpha))
        })
        .ok_or_else(|| NilError::NoSolution("no geodesic of length <= 2*pi reaches the target".into()))?;
    Ok(GeodesicSolveResult { params: best.0, residual: best.1, branch_count })
}
