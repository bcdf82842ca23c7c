//! Discrete translation groups `L(τ1, τ2, k)` and their point lattices.
//!
//! Lattices are always carried in the normalized frame where `τ1` has no `y`
//! component; the Nil rotation that produced that frame is recorded.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{NilError, Result};
use crate::halton::Halton3;
use crate::nil::{compose, rotate_z, translate, NilPoint, Translation};

/// Generator parameters `τ1 = (t1[0], t1[1], t1[2])`, `τ2 = (t2[0], ...)` and the
/// fibre subdivision `k`, with `τ3^k = [τ1, τ2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeBasis {
    pub t1: [f64; 3],
    pub t2: [f64; 3],
    #[serde(default = "one")]
    pub k: u32,
}

fn one() -> u32 {
    1
}

impl LatticeBasis {
    pub fn new(t1: [f64; 3], t2: [f64; 3], k: u32) -> Self {
        LatticeBasis { t1, t2, k }
    }

    /// `t1¹ t2² − t2¹ t1²`, the fibre component of the commutator.
    pub fn projected_area(&self) -> f64 {
        self.t1[0] * self.t2[1] - self.t2[0] * self.t1[1]
    }

    pub fn tau1(&self) -> Translation {
        Translation::new(self.t1[0], self.t1[1], self.t1[2])
    }

    pub fn tau2(&self) -> Translation {
        Translation::new(self.t2[0], self.t2[1], self.t2[2])
    }
}

/// Parses `t11,t12,t13,t21,t22,t23[,k]`.
impl FromStr for LatticeBasis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 && parts.len() != 7 {
            return Err(format!("expected 6 or 7 comma-separated values, got {}", parts.len()));
        }
        let mut t = [0.0; 6];
        for (dst, src) in t.iter_mut().zip(&parts) {
            *dst = src.parse().map_err(|e| format!("bad number {src:?}: {e}"))?;
        }
        let k = match parts.get(6) {
            Some(k) => k.parse().map_err(|e| format!("bad k {k:?}: {e}"))?,
            None => 1,
        };
        Ok(LatticeBasis::new([t[0], t[1], t[2]], [t[3], t[4], t[5]], k))
    }
}

impl fmt::Display for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.t1;
        let [d, e, g] = self.t2;
        write!(f, "{a},{b},{c},{d},{e},{g},{}", self.k)
    }
}

/// A validated lattice in normalized position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    /// Normalized generators (`t1[1] == 0`, `t1[0] > 0`).
    pub basis: LatticeBasis,
    /// Generators as given.
    pub input: LatticeBasis,
    /// Nil rotation angle taking the input generators to the normalized ones.
    pub rotation: f64,
}

pub fn lattice_from_params(basis: &LatticeBasis) -> Result<Lattice> {
    if basis.k == 0 {
        return Err(NilError::Domain("k must be at least 1".into()));
    }
    if !basis.t1.iter().chain(&basis.t2).all(|v| v.is_finite()) {
        return Err(NilError::Domain("lattice parameters must be finite".into()));
    }
    let area = basis.projected_area();
    let scale = basis.t1[0].hypot(basis.t1[1]) * basis.t2[0].hypot(basis.t2[1]);
    if area == 0.0 || area.abs() <= 1e-14 * scale {
        return Err(NilError::DegenerateLattice(format!(
            "generator projections are parallel (t11*t22 - t21*t12 = {area})"
        )));
    }
    let rotation = -basis.t1[1].atan2(basis.t1[0]);
    let r1 = rotate_z(&basis.tau1().to_point(), rotation);
    let r2 = rotate_z(&basis.tau2().to_point(), rotation);
    let normalized = LatticeBasis::new([r1.x, 0.0, r1.z], [r2.x, r2.y, r2.z], basis.k);
    Ok(Lattice { basis: normalized, input: *basis, rotation })
}

impl Lattice {
    pub fn tau1(&self) -> Translation {
        self.basis.tau1()
    }

    pub fn tau2(&self) -> Translation {
        self.basis.tau2()
    }

    /// Signed height of the fibre generator `τ3`.
    pub fn fibre(&self) -> f64 {
        self.basis.projected_area() / self.basis.k as f64
    }

    pub fn tau3(&self) -> Translation {
        Translation::fibre(self.fibre())
    }

    /// The group element `τ2^b τ1^a τ3^c` (applied left to right).
    pub fn element(&self, a: i64, b: i64, c: i64) -> Translation {
        compose(&compose(&self.tau2().pow(b), &self.tau1().pow(a)), &self.tau3().pow(c))
    }

    /// Group elements with exponents in `[-n, n]`, lexicographic in `(a, b, c)`.
    pub fn shell(&self, n: u32) -> Vec<((i64, i64, i64), Translation)> {
        let n = n as i64;
        let mut out = Vec::with_capacity(((2 * n + 1) as usize).pow(3));
        for a in -n..=n {
            for b in -n..=n {
                for c in -n..=n {
                    out.push(((a, b, c), self.element(a, b, c)));
                }
            }
        }
        out
    }
}

/// The nine vertices of the Nil parallelepiped `F̃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalDomain {
    pub o: NilPoint,
    pub t1: NilPoint,
    pub t2: NilPoint,
    pub t3: NilPoint,
    pub t12: NilPoint,
    pub t21: NilPoint,
    pub t23: NilPoint,
    pub t213: NilPoint,
    pub t13: NilPoint,
}

impl FundamentalDomain {
    pub fn labeled(&self) -> [(&'static str, NilPoint); 9] {
        [
            ("O", self.o),
            ("T1", self.t1),
            ("T2", self.t2),
            ("T3", self.t3),
            ("T12", self.t12),
            ("T21", self.t21),
            ("T23", self.t23),
            ("T213", self.t213),
            ("T13", self.t13),
        ]
    }
}

pub fn fundamental_domain(lattice: &Lattice) -> FundamentalDomain {
    let [t11, _, t13] = lattice.basis.t1;
    let [t21, t22, t23] = lattice.basis.t2;
    let k = lattice.basis.k as f64;
    let d = t11 * t22;
    FundamentalDomain {
        o: NilPoint::ORIGIN,
        t1: NilPoint::new(t11, 0.0, t13),
        t2: NilPoint::new(t21, t22, t23),
        t3: NilPoint::new(0.0, 0.0, d / k),
        t13: NilPoint::new(t11, 0.0, d / k + t13),
        t12: NilPoint::new(t11 + t21, t22, t23 + t13),
        t21: NilPoint::new(t11 + t21, t22, d + t13 + t23),
        t23: NilPoint::new(t21, t22, t23 + d / k),
        t213: NilPoint::new(t11 + t21, t22, (k + 1.0) * d / k + t13 + t23),
    }
}

/// Volume of a fundamental domain: projected area times fibre height.
pub fn domain_volume(lattice: &Lattice) -> f64 {
    let area = lattice.basis.projected_area();
    area * area / lattice.basis.k as f64
}

/// Orbit of the origin under `τ2^b τ1^a τ3^c`, `|a|, |b|, |c| ≤ n`, in
/// lexicographic exponent order with duplicates (to 1e-10) removed.
pub fn lattice_points_in_shell(lattice: &Lattice, n: u32) -> Vec<NilPoint> {
    let mut out: Vec<NilPoint> = Vec::new();
    for (_, g) in lattice.shell(n) {
        let p = g.to_point();
        if !out.iter().any(|q| q.euclid_dist(&p) <= 1e-10) {
            out.push(p);
        }
    }
    out
}

/// Six Euclidean tetrahedra filling the parallelepiped
/// `P̃ = O T1 T12 T2 T3 T13 T21 T23` (k = 1 frame): `O T1 T2 T3` and a fan of
/// five around the diagonal `T1 T23`.
pub fn parallelepiped_tetrahedra(lattice: &Lattice) -> [[NilPoint; 4]; 6] {
    let d = fundamental_domain(lattice);
    let h = Translation::fibre(lattice.basis.projected_area());
    let t3 = h.to_point();
    let t13 = translate(&d.t1, &h);
    let t23 = translate(&d.t2, &h);
    let t21 = translate(&d.t12, &h);
    [
        [d.o, d.t1, d.t2, t3],
        [t3, d.t1, d.t2, t23],
        [d.t12, d.t1, d.t2, t23],
        [d.t12, d.t1, t21, t23],
        [t13, d.t1, t21, t23],
        [t13, d.t1, t3, t23],
    ]
}

/// Barycentric membership test for a fixed tetrahedron.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Tetrahedron {
    origin: Vector3<f64>,
    inv: Matrix3<f64>,
}

impl Tetrahedron {
    pub(crate) fn new(v: &[NilPoint; 4]) -> Option<Self> {
        let o = Vector3::from(v[0].to_array());
        let cols: Vec<Vector3<f64>> = v[1..].iter().map(|p| Vector3::from(p.to_array()) - o).collect();
        let m = Matrix3::from_columns(&cols);
        m.try_inverse().map(|inv| Tetrahedron { origin: o, inv })
    }

    /// Smallest barycentric coordinate: positive inside, zero on the boundary.
    pub(crate) fn depth(&self, p: &NilPoint) -> f64 {
        let l = self.inv * (Vector3::from(p.to_array()) - self.origin);
        l[0].min(l[1]).min(l[2]).min(1.0 - l[0] - l[1] - l[2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TilingReport {
    pub samples: usize,
    /// Samples covered by zero or by several translates of the domain.
    pub violations: usize,
    /// Samples discarded for lying within rounding distance of a boundary.
    pub boundary_skips: usize,
}

/// Checks that quasi-random points near `P̃` lie in exactly one translate of
/// its interior, searching translates in the shell `n = 2`.
pub fn tiling_spot_check(lattice: &Lattice, samples: usize) -> Result<TilingReport> {
    if samples == 0 {
        return Err(NilError::Domain("samples must be at least 1".into()));
    }
    let unit = lattice_from_params(&LatticeBasis { k: 1, ..lattice.basis })?;
    let tets: Vec<Tetrahedron> = parallelepiped_tetrahedra(&unit)
        .iter()
        .map(|t| Tetrahedron::new(t).ok_or_else(|| NilError::DegenerateLattice("flat tetrahedron".into())))
        .collect::<Result<_>>()?;
    let corners: Vec<NilPoint> = parallelepiped_tetrahedra(&unit).iter().flatten().copied().collect();
    let lo = [0, 1, 2].map(|i| corners.iter().map(|p| p.to_array()[i]).fold(f64::INFINITY, f64::min));
    let hi = [0, 1, 2].map(|i| corners.iter().map(|p| p.to_array()[i]).fold(f64::NEG_INFINITY, f64::max));
    let inverses: Vec<Translation> = unit.shell(2).iter().map(|(_, g)| g.inverse()).collect();

    let mut report = TilingReport { samples: 0, violations: 0, boundary_skips: 0 };
    for u in Halton3::with_bases(0, 3) {
        if report.samples == samples {
            break;
        }
        let p = NilPoint::new(
            lo[0] + u[0] * (hi[0] - lo[0]),
            lo[1] + u[1] * (hi[1] - lo[1]),
            lo[2] + u[2] * (hi[2] - lo[2]),
        );
        let mut hits = 0;
        let mut ambiguous = false;
        for g in &inverses {
            let q = translate(&p, g);
            for t in &tets {
                let d = t.depth(&q);
                if d.abs() < 1e-10 {
                    ambiguous = true;
                } else if d > 0.0 {
                    hits += 1;
                }
            }
        }
        if ambiguous {
            report.boundary_skips += 1;
            continue;
        }
        report.samples += 1;
        if hits != 1 {
            report.violations += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn opt_basis() -> LatticeBasis {
        LatticeBasis::new([1.306_338_20, 0.0, 0.738_944_61], [0.653_169_10, 1.131_322_06, 1.108_416_92], 1)
    }

    fn unit() -> Lattice {
        lattice_from_params(&LatticeBasis::new([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1)).unwrap()
    }

    #[test]
    fn construction_examples() {
        let l = lattice_from_params(&opt_basis()).unwrap();
        assert!((l.fibre() - 1.477_889_22).abs() < 1e-7);
        assert_eq!(unit().tau3(), Translation::fibre(1.0));
        let bad = LatticeBasis::new([1.0, 0.0, 0.0], [1.0, 0.0, 0.0], 1);
        assert!(matches!(lattice_from_params(&bad), Err(NilError::DegenerateLattice(_))));
    }

    #[test]
    fn normalization_rotates_t1_onto_xz_plane() {
        let b = LatticeBasis::new([0.6, 0.8, 0.1], [-0.5, 0.9, 0.3], 1);
        let l = lattice_from_params(&b).unwrap();
        assert_eq!(l.basis.t1[1], 0.0);
        assert!((l.basis.t1[0] - 1.0).abs() < 1e-15);
        assert!((l.basis.projected_area() - b.projected_area()).abs() < 1e-14);
    }

    #[test]
    fn domain_examples() {
        let l = lattice_from_params(&opt_basis()).unwrap();
        let d = fundamental_domain(&l);
        assert!((d.t3.z - 1.477_889_22).abs() < 1e-7);
        let u = fundamental_domain(&unit());
        assert_eq!(u.t213, NilPoint::new(1.0, 1.0, 2.0));
        let diff = [d.t13.x - d.t1.x, d.t13.y - d.t1.y, d.t13.z - d.t1.z];
        assert_eq!(diff, [d.t3.x, d.t3.y, d.t3.z]);
        assert!((d.t21.z - d.t12.z - l.basis.t1[0] * l.basis.t2[1]).abs() < 1e-15);
    }

    #[test]
    fn volume_examples() {
        let l = lattice_from_params(&opt_basis()).unwrap();
        assert!((domain_volume(&l) - 2.184_156_56).abs() < 1e-5);
        assert_eq!(domain_volume(&unit()), 1.0);
        let l = lattice_from_params(&LatticeBasis::new([2.0, 0.0, 0.0], [0.0, 3.0, 0.0], 1)).unwrap();
        assert_eq!(domain_volume(&l), 36.0);
    }

    #[test]
    fn shell_examples() {
        assert_eq!(lattice_points_in_shell(&unit(), 0), vec![NilPoint::ORIGIN]);
        assert_eq!(lattice_points_in_shell(&unit(), 1).len(), 27);
        let l = lattice_from_params(&opt_basis()).unwrap();
        let pts = lattice_points_in_shell(&l, 1);
        for (name, v) in fundamental_domain(&l).labeled() {
            assert!(pts.iter().any(|p| p.euclid_dist(&v) < 1e-12), "{name}");
        }
    }

    #[test]
    fn tetrahedra_fill_parallelepiped_volume() {
        let l = lattice_from_params(&opt_basis()).unwrap();
        let vol: f64 = parallelepiped_tetrahedra(&l)
            .iter()
            .map(|t| {
                let e = |i: usize| Vector3::from(t[i].to_array()) - Vector3::from(t[0].to_array());
                e(1).cross(&e(2)).dot(&e(3)).abs() / 6.0
            })
            .sum();
        assert!((vol - domain_volume(&l)).abs() < 1e-12);
    }

    #[test]
    fn tiling_examples() {
        let r = tiling_spot_check(&unit(), 1000).unwrap();
        assert_eq!((r.samples, r.violations), (1000, 0));
        let l = lattice_from_params(&opt_basis()).unwrap();
        let r = tiling_spot_check(&l, 1000).unwrap();
        assert_eq!((r.samples, r.violations), (1000, 0));
    }

    #[test]
    fn basis_parsing() {
        let b: LatticeBasis = "1,0,0.5,0.2,1,0".parse().unwrap();
        assert_eq!(b.k, 1);
        assert_eq!(b.t1, [1.0, 0.0, 0.5]);
        let b: LatticeBasis = "1,0,0,0,1,0,3".parse().unwrap();
        assert_eq!(b.k, 3);
        assert!("1,2,3".parse::<LatticeBasis>().is_err());
        let back: LatticeBasis = b.to_string().parse().unwrap();
        assert_eq!(back, b);
    }
}
