//! Geodesic spheres and balls centred at the origin.
//!
//! The sheared image `m_map(S(R))` of a sphere is a surface of revolution whose
//! meridian is the profile `(X(R, θ), Z(R, θ))`; the sphere itself is recovered
//! by adding the quadratic term `xy/2` back to each point.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{NilError, Result};
use crate::fmt::sig17;
use crate::geodesic::{rise_kernel, sinc};
use crate::nil::{m_map, NilPoint};
use crate::quadrature;
use crate::solve::{brent_root, golden_section_min};

/// Largest radius for which geodesic spheres exist.
pub const MAX_RADIUS: f64 = TAU;
/// Balls are convex in the model exactly up to this radius.
pub const CONVEX_RADIUS: f64 = FRAC_PI_2;
/// Sheared balls are convex exactly up to this radius.
pub const M_IMAGE_CONVEX_RADIUS: f64 = PI;

/// A radius in `(0, 2π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    pub radius: f64,
}

impl BallSpec {
    pub fn new(radius: f64) -> Result<Self> {
        check_radius(radius)?;
        Ok(BallSpec { radius })
    }
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 && r <= MAX_RADIUS {
        Ok(())
    } else {
        Err(NilError::Domain(format!("radius {r} outside (0, 2*pi]")))
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if (-FRAC_PI_2..=FRAC_PI_2).contains(&theta) {
        Ok(())
    } else {
        Err(NilError::Domain(format!("theta = {theta} outside [-pi/2, pi/2]")))
    }
}

/// A point of the meridian curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    /// Distance from the z axis.
    pub x: f64,
    pub z: f64,
}

pub(crate) fn profile(r: f64, theta: f64) -> ProfilePoint {
    let (w, c) = theta.sin_cos();
    let u = w * r;
    ProfilePoint {
        x: c * r * sinc(0.5 * u),
        z: u + 0.5 * c * c * r * r * rise_kernel(u),
    }
}

pub fn sphere_profile(r: f64, theta: f64) -> Result<ProfilePoint> {
    check_radius(r)?;
    check_theta(theta)?;
    Ok(profile(r, theta))
}

/// `(2 sin u − u(1 + cos u)) / u³`, even in `u`.
fn slope_kernel(u: f64) -> f64 {
    if u.abs() < 1.0 {
        let u2 = u * u;
        let mut term = 1.0 / 6.0;
        let mut sum = term;
        for k in 2..14 {
            let k = k as f64;
            term *= -u2 * (2.0 * k - 1.0) / ((2.0 * k - 3.0) * (2.0 * k) * (2.0 * k + 1.0));
            sum += term;
        }
        sum
    } else {
        (2.0 * u.sin() - u * (1.0 + u.cos())) / (u * u * u)
    }
}

/// `dZ/d(sin θ)` of the meridian; positive where the profile still climbs.
pub fn profile_height_rate(r: f64, w: f64) -> f64 {
    let u = r * w;
    0.5 * r * r * r * slope_kernel(u) + 0.5 * r * (1.0 + u.cos())
}

/// `dZ/dθ` of the meridian.
pub fn profile_slope(r: f64, theta: f64) -> f64 {
    let (w, c) = theta.sin_cos();
    c * profile_height_rate(r, w)
}

/// Point of the geodesic sphere of radius `r` at latitude `θ` and longitude `φ`.
pub fn sphere_point(r: f64, theta: f64, phi: f64) -> Result<NilPoint> {
    check_radius(r)?;
    check_theta(theta)?;
    Ok(sphere_point_unchecked(r, theta, phi))
}

fn sphere_point_unchecked(r: f64, theta: f64, phi: f64) -> NilPoint {
    let p = profile(r, theta);
    let (s, c) = phi.sin_cos();
    NilPoint::new(p.x * c, p.x * s, p.z + 0.25 * p.x * p.x * (2.0 * phi).sin())
}

/// Volume of the geodesic ball, by revolving the meridian.
pub fn ball_volume(r: f64) -> Result<f64> {
    if r == 0.0 {
        return Ok(0.0);
    }
    check_radius(r)?;
    let integrand = |theta: f64| {
        let p = profile(r, theta);
        p.x * p.x * profile_slope(r, theta)
    };
    let q = quadrature::integrate(integrand, 0.0, FRAC_PI_2, 1e-15, 1e-13, 400);
    Ok(TAU * q.value)
}

/// Euclidean convexity of the ball in the model.
pub fn is_ball_convex(r: f64) -> bool {
    r > 0.0 && r <= CONVEX_RADIUS
}

/// Euclidean convexity of the sheared ball `m_map(B(r))`.
pub fn is_m_image_convex(r: f64) -> bool {
    r > 0.0 && r <= M_IMAGE_CONVEX_RADIUS
}

/// First latitude in `(0, π/2)` where the meridian stops climbing, if any.
pub fn profile_critical_point(r: f64) -> Option<f64> {
    const STEPS: usize = 4000;
    let rate = |w: f64| profile_height_rate(r, w);
    let mut prev_w = 0.0;
    let mut prev = rate(0.0);
    for i in 1..=STEPS {
        let w = i as f64 / STEPS as f64;
        let cur = rate(w);
        if prev > 0.0 && cur <= 0.0 {
            if i == STEPS && cur == 0.0 {
                return None;
            }
            let root = brent_root(rate, prev_w, w, 1e-15, 200)?;
            return (root < 1.0).then(|| root.asin());
        }
        prev_w = w;
        prev = cur;
    }
    None
}

/// Latitude and height of the highest point of the meridian.
pub fn max_profile_height(r: f64) -> Result<(f64, f64)> {
    check_radius(r)?;
    const STEPS: usize = 400;
    let z = |t: f64| profile(r, t).z;
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for i in 0..=STEPS {
        let v = z(FRAC_PI_2 * i as f64 / STEPS as f64);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    if best_i == STEPS {
        return Ok((FRAC_PI_2, z(FRAC_PI_2)));
    }
    let lo = FRAC_PI_2 * best_i.saturating_sub(1) as f64 / STEPS as f64;
    let hi = FRAC_PI_2 * (best_i + 1).min(STEPS) as f64 / STEPS as f64;
    let (t, neg) = golden_section_min(|t| -z(t), lo, hi, 1e-12);
    Ok((t, -neg))
}

/// Longest vertical chord of the ball, symmetric about the equatorial plane of
/// the sheared image.
pub fn max_vertical_chord(r: f64) -> Result<f64> {
    max_profile_height(r).map(|(_, z)| 2.0 * z)
}

/// Smallest Gaussian curvature found on a `(θ, φ)` grid, poles excluded.
/// Negative values mean the surface is not convex.
pub fn min_gaussian_curvature(r: f64, n_theta: usize, n_phi: usize) -> Result<f64> {
    check_radius(r)?;
    let h = 1e-4;
    let p = |t: f64, f: f64| sphere_point_unchecked(r, t, f).to_array();
    let sub = |a: [f64; 3], b: [f64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let scale = |a: [f64; 3], k: f64| [a[0] * k, a[1] * k, a[2] * k];
    let mut worst = f64::INFINITY;
    for i in 1..n_theta {
        let t = -FRAC_PI_2 + PI * i as f64 / n_theta as f64;
        for j in 0..n_phi {
            let f = -PI + TAU * j as f64 / n_phi as f64;
            let c = p(t, f);
            let (tp, tm, fp, fm) = (p(t + h, f), p(t - h, f), p(t, f + h), p(t, f - h));
            let rt = scale(sub(tp, tm), 0.5 / h);
            let rf = scale(sub(fp, fm), 0.5 / h);
            let two_c = scale(c, 2.0);
            let rtt = scale(sub(sub(tp, two_c), scale(tm, -1.0)), 1.0 / (h * h));
            let rff = scale(sub(sub(fp, two_c), scale(fm, -1.0)), 1.0 / (h * h));
            let rtf = scale(
                sub(sub(p(t + h, f + h), p(t + h, f - h)), sub(p(t - h, f + h), p(t - h, f - h))),
                0.25 / (h * h),
            );
            let n = cross(rt, rf);
            let nn = dot(n, n).sqrt();
            let n = scale(n, 1.0 / nn);
            let (l, m, nf) = (dot(rtt, n), dot(rtf, n), dot(rff, n));
            let (e, ff, g) = (dot(rt, rt), dot(rt, rf), dot(rf, rf));
            worst = worst.min((l * nf - m * m) / (e * g - ff * ff));
        }
    }
    Ok(worst)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Triangulated geodesic sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereMesh {
    pub vertices: Vec<NilPoint>,
    /// Outward-oriented triangles, 0-indexed.
    pub faces: Vec<[usize; 3]>,
    /// `(n_theta, n_phi)`: latitude bands and longitude sectors.
    pub resolution: (usize, usize),
}

/// Structured mesh with `n_theta` latitude bands (so `n_theta − 1` rings) and
/// `n_phi` sectors, closed by fans at both poles. With `m_image` the vertices
/// are sheared by `m_map`.
pub fn sphere_mesh(r: f64, n_theta: usize, n_phi: usize, m_image: bool) -> Result<SphereMesh> {
    check_radius(r)?;
    if n_theta < 4 || n_phi < 4 {
        return Err(NilError::Domain(format!(
            "mesh resolution {n_theta}x{n_phi} below the 4x4 minimum"
        )));
    }
    let rings = n_theta - 1;
    let mut vertices = Vec::with_capacity(rings * n_phi + 2);
    vertices.push(sphere_point_unchecked(r, -FRAC_PI_2, 0.0));
    for i in 1..n_theta {
        let t = -FRAC_PI_2 + PI * i as f64 / n_theta as f64;
        for j in 0..n_phi {
            let f = -PI + TAU * (j + 1) as f64 / n_phi as f64;
            vertices.push(sphere_point_unchecked(r, t, f));
        }
    }
    vertices.push(sphere_point_unchecked(r, FRAC_PI_2, 0.0));
    if m_image {
        for v in &mut vertices {
            *v = m_map(v);
        }
    }
    let south = 0;
    let north = vertices.len() - 1;
    let at = |i: usize, j: usize| 1 + (i - 1) * n_phi + (j % n_phi);
    let mut faces = Vec::with_capacity(2 * n_phi * rings);
    for j in 0..n_phi {
        faces.push([south, at(1, j + 1), at(1, j)]);
    }
    for i in 1..rings {
        for j in 0..n_phi {
            faces.push([at(i, j), at(i, j + 1), at(i + 1, j + 1)]);
            faces.push([at(i, j), at(i + 1, j + 1), at(i + 1, j)]);
        }
    }
    for j in 0..n_phi {
        faces.push([at(rings, j), at(rings, j + 1), north]);
    }
    Ok(SphereMesh { vertices, faces, resolution: (n_theta, n_phi) })
}

impl SphereMesh {
    /// ASCII OBJ: `v x y z` lines then 1-indexed `f i j k` lines.
    pub fn write_obj<W: Write>(&self, mut out: W) -> io::Result<()> {
        for v in &self.vertices {
            writeln!(out, "v {} {} {}", sig17(v.x), sig17(v.y), sig17(v.z))?;
        }
        for f in &self.faces {
            writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
        }
        Ok(())
    }
}

/// Result of the Euclidean supporting-plane test on a sampled sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HullCheck {
    pub vertices: usize,
    /// Vertices whose tangent plane does not support the whole sample.
    pub off_hull: usize,
    /// Largest excursion of a sample point beyond a tangent plane.
    pub worst_excursion: f64,
}

impl HullCheck {
    pub fn all_on_hull(&self) -> bool {
        self.off_hull == 0
    }
}

/// Samples the sphere on the `sphere_mesh` grid and checks that every vertex
/// has a supporting plane (its exact tangent plane) with all other vertices
/// on the inner side. Passing means the sample is in convex position.
pub fn hull_check(r: f64, n_theta: usize, n_phi: usize) -> Result<HullCheck> {
    let mesh = sphere_mesh(r, n_theta, n_phi, false)?;
    let h = 1e-6;
    let normal_at = |t: f64, f: f64| {
        let p = |t: f64, f: f64| sphere_point_unchecked(r, t, f).to_array();
        let (a, b, c, d) = (p(t + h, f), p(t - h, f), p(t, f + h), p(t, f - h));
        let rt = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
        let rf = [c[0] - d[0], c[1] - d[1], c[2] - d[2]];
        let n = cross(rf, rt);
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        [n[0] / len, n[1] / len, n[2] / len]
    };
    let mut normals = Vec::with_capacity(mesh.vertices.len());
    normals.push([0.0, 0.0, -1.0]);
    for i in 1..n_theta {
        let t = -FRAC_PI_2 + PI * i as f64 / n_theta as f64;
        for j in 0..n_phi {
            let f = -PI + TAU * (j + 1) as f64 / n_phi as f64;
            normals.push(normal_at(t, f));
        }
    }
    normals.push([0.0, 0.0, 1.0]);

    let tol = 1e-9 * r;
    let mut off_hull = 0;
    let mut worst = f64::NEG_INFINITY;
    for (v, n) in mesh.vertices.iter().zip(&normals) {
        let reach = mesh
            .vertices
            .iter()
            .map(|w| n[0] * (w.x - v.x) + n[1] * (w.y - v.y) + n[2] * (w.z - v.z))
            .fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max(reach);
        if reach > tol {
            off_hull += 1;
        }
    }
    Ok(HullCheck { vertices: mesh.vertices.len(), off_hull, worst_excursion: worst })
}
