//! The Heisenberg translation group acting on the affine model of Nil.
//!
//! Points are stored as affine coordinates `(x, y, z)`; the homogeneous
//! coordinate is always 1 and never materialised. A translation with
//! parameters `(t1, t2, t3)` sends `(a, b, c)` to `(t1 + a, t2 + b, t3 + b t1 + c)`.
//! Every map here is an exact closed form, so identities hold up to rounding.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A point of Nil in model coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NilPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl NilPoint {
    pub const ORIGIN: NilPoint = NilPoint { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        NilPoint { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// The translation carrying the origin onto this point.
    pub fn as_translation(&self) -> Translation {
        Translation::new(self.x, self.y, self.z)
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Euclidean distance in the model, used for tolerances only.
    pub fn euclid_dist(&self, other: &NilPoint) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2) + (self.z - other.z).powi(2)).sqrt()
    }
}

impl From<[f64; 3]> for NilPoint {
    fn from(a: [f64; 3]) -> Self {
        NilPoint::new(a[0], a[1], a[2])
    }
}

impl fmt::Display for NilPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// A Nil translation, an element of the Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Translation {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

impl Translation {
    pub const IDENTITY: Translation = Translation { t1: 0.0, t2: 0.0, t3: 0.0 };

    pub const fn new(t1: f64, t2: f64, t3: f64) -> Self {
        Translation { t1, t2, t3 }
    }

    /// Fibre translation along the z axis.
    pub const fn fibre(t3: f64) -> Self {
        Translation { t1: 0.0, t2: 0.0, t3 }
    }

    /// Image of the origin.
    pub fn to_point(&self) -> NilPoint {
        NilPoint::new(self.t1, self.t2, self.t3)
    }

    pub fn then(&self, next: &Translation) -> Translation {
        compose(self, next)
    }

    pub fn inverse(&self) -> Translation {
        inverse(self)
    }

    /// Integer power, negative exponents allowed.
    pub fn pow(&self, n: i64) -> Translation {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut acc = Translation::IDENTITY;
        for _ in 0..n.unsigned_abs() {
            acc = compose(&acc, &base);
        }
        acc
    }

    pub fn is_finite(&self) -> bool {
        self.t1.is_finite() && self.t2.is_finite() && self.t3.is_finite()
    }
}

/// Applies `tau` to `p`.
pub fn translate(p: &NilPoint, tau: &Translation) -> NilPoint {
    NilPoint {
        x: tau.t1 + p.x,
        y: tau.t2 + p.y,
        z: tau.t3 + p.y * tau.t1 + p.z,
    }
}

/// The translation "first `a`, then `b`".
pub fn compose(a: &Translation, b: &Translation) -> Translation {
    Translation {
        t1: a.t1 + b.t1,
        t2: a.t2 + b.t2,
        t3: a.t3 + b.t3 + a.t2 * b.t1,
    }
}

pub fn inverse(tau: &Translation) -> Translation {
    Translation {
        t1: -tau.t1,
        t2: -tau.t2,
        t3: -tau.t3 + tau.t1 * tau.t2,
    }
}

/// `τ2⁻¹ τ1⁻¹ τ2 τ1`, applied left to right. Always a fibre translation.
pub fn commutator(tau1: &Translation, tau2: &Translation) -> Translation {
    Translation::fibre(tau1.t1 * tau2.t2 - tau2.t1 * tau1.t2)
}

/// Nil rotation by `omega` about the z axis through the origin.
pub fn rotate_z(p: &NilPoint, omega: f64) -> NilPoint {
    let (s, c) = omega.sin_cos();
    let (s2, c2) = (2.0 * omega).sin_cos();
    NilPoint {
        x: p.x * c - p.y * s,
        y: p.x * s + p.y * c,
        z: p.z - 0.5 * p.x * p.y + 0.25 * (p.x * p.x - p.y * p.y) * s2 + 0.5 * p.x * p.y * c2,
    }
}

/// Linear rotation of the model about the z axis.
pub fn linear_rotation(p: &NilPoint, omega: f64) -> NilPoint {
    let (s, c) = omega.sin_cos();
    NilPoint::new(p.x * c - p.y * s, p.x * s + p.y * c, p.z)
}

/// The quadratic shear `(x, y, z) ↦ (x, y, z − xy/2)`.
pub fn m_map(p: &NilPoint) -> NilPoint {
    NilPoint::new(p.x, p.y, p.z - 0.5 * p.x * p.y)
}

pub fn m_inverse(p: &NilPoint) -> NilPoint {
    NilPoint::new(p.x, p.y, p.z + 0.5 * p.x * p.y)
}

/// `(x, y, z) ↦ (−x, y, −z)`.
pub fn line_reflect_y(p: &NilPoint) -> NilPoint {
    NilPoint::new(-p.x, p.y, -p.z)
}

/// An affine map `p ↦ A p + b` of model coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub linear: [[f64; 3]; 3],
    pub offset: [f64; 3],
}

impl AffineMap {
    pub fn apply(&self, p: &NilPoint) -> NilPoint {
        let v = p.to_array();
        let mut out = self.offset;
        for (row, o) in self.linear.iter().zip(out.iter_mut()) {
            *o += row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
        }
        out.into()
    }
}

/// The translation `tau` conjugated by the quadratic shear, i.e.
/// `m_map ∘ translate(·, tau) ∘ m_inverse`, which is affine.
pub fn conjugated_translation(tau: &Translation) -> AffineMap {
    let (x, y, z) = (tau.t1, tau.t2, tau.t3);
    AffineMap {
        linear: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [-0.5 * y, 0.5 * x, 1.0]],
        offset: [x, y, z - 0.5 * x * y],
    }
}

/// Normalises an angle to `(−π, π]`.
pub fn normalize_angle(omega: f64) -> f64 {
    let mut a = omega.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// One generator of the isometry group used here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Primitive {
    Translation(Translation),
    Rotation { omega: f64 },
    LineReflectionY,
}

impl Primitive {
    pub fn rotation(omega: f64) -> Self {
        Primitive::Rotation { omega: normalize_angle(omega) }
    }

    pub fn apply(&self, p: &NilPoint) -> NilPoint {
        match self {
            Primitive::Translation(t) => translate(p, t),
            Primitive::Rotation { omega } => rotate_z(p, *omega),
            Primitive::LineReflectionY => line_reflect_y(p),
        }
    }
}

/// A word of primitives, applied first to last. No normal form is kept.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct NilIsometry {
    steps: Vec<Primitive>,
}

impl NilIsometry {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn translation(t: Translation) -> Self {
        NilIsometry { steps: vec![Primitive::Translation(t)] }
    }

    pub fn rotation(omega: f64) -> Self {
        NilIsometry { steps: vec![Primitive::rotation(omega)] }
    }

    pub fn line_reflection_y() -> Self {
        NilIsometry { steps: vec![Primitive::LineReflectionY] }
    }

    /// `self` followed by `next`.
    pub fn then(mut self, next: &NilIsometry) -> Self {
        self.steps.extend_from_slice(&next.steps);
        self
    }

    pub fn steps(&self) -> &[Primitive] {
        &self.steps
    }

    pub fn apply(&self, p: &NilPoint) -> NilPoint {
        self.steps.iter().fold(*p, |q, s| s.apply(&q))
    }
}
