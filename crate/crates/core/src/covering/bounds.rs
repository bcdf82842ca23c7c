use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::ball::{ball_volume, profile};
use crate::error::{NilError, Result};
use crate::lattice::{lattice_from_params, Lattice, LatticeBasis};
use crate::nil::{inverse, m_inverse, translate, NilPoint};
use crate::solve::{brent_root, golden_section_min};

/// Longest vertical chord of balls with radius in `[π, 3π/2]`.
pub const H1: f64 = 13.0 * PI / 4.0;
/// Longest vertical chord of balls with radius in `[3π/2, 2π]`.
pub const H2: f64 = 5.0 * PI;

fn in_range(r: f64, lo: f64, hi: f64, name: &str) -> Result<()> {
    if r >= lo && r <= hi {
        Ok(())
    } else {
        Err(NilError::Domain(format!("{name}: radius {r} outside its interval")))
    }
}

/// `Vol(B(R)) / (2R)²` for `R ∈ [π/2, π]`.
pub fn bound_f(r: f64) -> Result<f64> {
    in_range(r, FRAC_PI_2, PI, "f")?;
    Ok(ball_volume(r)? / (4.0 * r * r))
}

/// `Vol(B(R)) / h1²` for `R ∈ [π, 3π/2]`.
pub fn bound_f1(r: f64) -> Result<f64> {
    in_range(r, PI, 1.5 * PI, "f1")?;
    Ok(ball_volume(r)? / (H1 * H1))
}

/// `Vol(B(R)) / h2²` for `R ∈ [3π/2, 2π]`.
pub fn bound_f2(r: f64) -> Result<f64> {
    in_range(r, 1.5 * PI, TAU, "f2")?;
    Ok(ball_volume(r)? / (H2 * H2))
}

/// Vertical projection of `p` onto the surface `2z − xy = t1¹t2²`, the set of
/// points equidistant from `O` and `τ3(O)`.
pub fn equidistant_projection(p: &NilPoint, lattice: &Lattice) -> NilPoint {
    let a = lattice.basis.projected_area();
    NilPoint::new(p.x, p.y, 0.5 * (a + p.x * p.y))
}

/// Extremal symmetric configuration bounding the density of any lattice
/// covering whose circumscribed balls have radius `rp`.
///
/// Coordinates are in the sheared picture centred at the ball centre: the
/// fibre chord `O′T3′` stands at `h`, and `T1′`, `T2′` lie on the equator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundConfig {
    pub rp: f64,
    /// Profile latitude locating the chord.
    pub chord_theta: f64,
    /// Length of the chord `O′T3′`.
    pub ot3: f64,
    pub h: [f64; 2],
    pub t1p: [f64; 2],
    pub t2p: [f64; 2],
    pub ball_volume: f64,
    pub density: f64,
}

impl LowerBoundConfig {
    pub fn validate(&self) -> std::result::Result<(), String> {
        let d = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
        let scale = self.rp.max(1.0);
        if (d(self.h, self.t1p) - d(self.h, self.t2p)).abs() > 1e-9 * scale {
            return Err("chord foot is not equidistant from T1' and T2'".into());
        }
        for t in [self.t1p, self.t2p] {
            if (t[0].hypot(t[1]) - self.rp).abs() > 1e-9 * scale {
                return Err("triangle vertex off the equatorial circle".into());
            }
        }
        let (u, v) = ([self.t1p[0] - self.h[0], self.t1p[1] - self.h[1]], [self.t2p[0] - self.h[0], self.t2p[1] - self.h[1]]);
        let twice_area = (u[0] * v[1] - u[1] * v[0]).abs();
        if (twice_area - self.ot3).abs() > 1e-9 * scale {
            return Err("chord length does not match the triangle".into());
        }
        if self.density != self.ball_volume / (self.ot3 * self.ot3) {
            return Err("density is not ball_volume / ot3^2".into());
        }
        Ok(())
    }

    /// The lattice realising this configuration: `O`, `τ1`, `τ2`, `τ3` are the
    /// four vertices, carried back to the model with `O′` at the origin.
    pub fn lattice(&self) -> Result<Lattice> {
        let z = 0.5 * self.ot3;
        let model = |x: f64, y: f64, zp: f64| m_inverse(&NilPoint::new(x, y, zp));
        let o = model(self.h[0], self.h[1], -z);
        let back = inverse(&o.as_translation());
        let t1 = translate(&model(self.t1p[0], self.t1p[1], 0.0), &back);
        let t2 = translate(&model(self.t2p[0], self.t2p[1], 0.0), &back);
        lattice_from_params(&LatticeBasis::new(t1.to_array(), t2.to_array(), 1))
    }
}

/// Builds the configuration for `rp ∈ (0, π/2]`.
///
/// `T2′ = (0, rp)` is the tangency point, the chord foot `H′` sits at axis
/// distance `X(rp, θ)` with `|H′T1′| = |H′T2′|`, and `θ` solves
/// `|O′T3′| = 2·Area(H′T1′T2′)`. Of the roots the one with the longest chord is kept.
pub fn lower_bound_density(rp: f64) -> Result<LowerBoundConfig> {
    if !(rp > 0.0 && rp <= FRAC_PI_2) {
        return Err(NilError::Domain(format!("radius {rp} outside (0, pi/2]")));
    }
    let r = rp;
    let layout = |theta: f64| {
        let p = profile(r, theta);
        let rho = p.x;
        let sb = (rho - (rho * rho + 8.0 * r * r).sqrt()) / (4.0 * r);
        let cb = -(1.0 - sb * sb).sqrt();
        let (hx, hy) = (rho * cb, rho * sb);
        let t11 = (1.0 - sb * sb).sqrt() * (rho - 2.0 * r * sb);
        (hx, hy, t11, p.z)
    };
    let mismatch = |theta: f64| {
        let (_, hy, t11, z) = layout(theta);
        t11 * (r - hy) - 2.0 * z
    };
    const STEPS: usize = 2000;
    let mut best: Option<(f64, f64)> = None;
    let mut prev = (1e-6, mismatch(1e-6));
    for i in 1..=STEPS {
        let t = FRAC_PI_2 * i as f64 / STEPS as f64;
        let f = mismatch(t);
        if prev.1.signum() != f.signum() {
            if let Some(root) = brent_root(mismatch, prev.0, t, 1e-15, 200) {
                let z = profile(r, root).z;
                if best.is_none_or(|(_, bz)| z > bz) {
                    best = Some((root, z));
                }
            }
        }
        prev = (t, f);
    }
    let (theta, z) = best.ok_or_else(|| NilError::NoSolution(format!("no consistent configuration for radius {rp}")))?;
    let (hx, hy, t11, _) = layout(theta);
    let ot3 = 2.0 * z;
    let vol = ball_volume(r)?;
    Ok(LowerBoundConfig {
        rp,
        chord_theta: theta,
        ot3,
        h: [hx, hy],
        t1p: [hx + t11, hy],
        t2p: [0.0, r],
        ball_volume: vol,
        density: vol / (ot3 * ot3),
    })
}

/// Minimises the lower-bound density over radii in `[lo, hi] ⊂ (0, π/2]`.
pub fn minimize_lower_bound_in(lo: f64, hi: f64) -> Result<LowerBoundConfig> {
    if !(lo > 0.0 && hi <= FRAC_PI_2 && lo < hi) {
        return Err(NilError::Domain(format!("bracket [{lo}, {hi}] not inside (0, pi/2]")));
    }
    let objective = |r: f64| lower_bound_density(r).map(|c| c.density).unwrap_or(f64::INFINITY);
    let (r, _) = golden_section_min(objective, lo, hi, 1e-10);
    lower_bound_density(r)
}

pub fn minimize_lower_bound() -> Result<LowerBoundConfig> {
    minimize_lower_bound_in(0.05, FRAC_PI_2)
}
