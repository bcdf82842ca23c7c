//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::ExitCode;

use nil_cover::ball::{ball_volume, hull_check, max_vertical_chord, profile_critical_point, sphere_profile};
use nil_cover::covering::{
    bound_f, bound_f1, bound_f2, circumball, covering_density, minimize_lower_bound, optimize_hex, verify_covering,
};
use nil_cover::geodesic::{distance, geodesic_point, geodesic_to, metric_norm, GeodesicParams};
use nil_cover::lattice::{domain_volume, fundamental_domain, lattice_from_params, tiling_spot_check, Lattice, LatticeBasis};
use nil_cover::nil::{compose, inverse, line_reflect_y, rotate_z, translate, Translation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn within(name: &str, got: f64, want: f64, tol: f64) -> Result<String, String> {
    if (got - want).abs() <= tol {
        Ok(format!("{name}={got:.10}"))
    } else {
        Err(format!("{name}={got:.10}, expected {want} ± {tol:e}"))
    }
}

fn all(parts: Vec<Result<String, String>>) -> Outcome {
    let mut ok = Vec::new();
    for p in parts {
        ok.push(p?);
    }
    Ok(ok.join(", "))
}

fn require(cond: bool, what: &str) -> Result<String, String> {
    if cond {
        Ok(what.to_string())
    } else {
        Err(format!("violated: {what}"))
    }
}

fn packing_lattice() -> Lattice {
    let b = LatticeBasis::new([1.306_338_20, 0.0, 0.738_944_61], [0.653_169_10, 1.131_322_06, 1.108_416_92], 1);
    lattice_from_params(&b).expect("valid lattice")
}

fn increasing(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> bool {
    let n = 200;
    (0..n).all(|i| {
        let a = lo + (hi - lo) * i as f64 / n as f64;
        let b = lo + (hi - lo) * (i + 1) as f64 / n as f64;
        f(b) > f(a)
    })
}

fn circumball_of_packing() -> Outcome {
    let d = fundamental_domain(&packing_lattice());
    let ball = circumball(&[d.o, d.t1, d.t2, d.t3]).map_err(|e| e.to_string())?;
    all(vec![
        within("cx", ball.center.x, 0.459_810_62, 1e-5),
        within("cy", ball.center.y, 0.265_471_79, 1e-5),
        within("cz", ball.center.z, 0.799_977_99, 1e-5),
        within("R", ball.radius, 0.902_939_41, 1e-5),
    ])
}

fn packing_density() -> Outcome {
    let lattice = packing_lattice();
    let rep = covering_density(&lattice).map_err(|e| e.to_string())?;
    all(vec![
        within("vol_ball", rep.ball_volume, 3.125_385_16, 1e-5),
        within("vol_domain", domain_volume(&lattice), 2.184_156_56, 1e-5),
        within("density", rep.density, 1.430_934_59, 1e-5),
        require(rep.verified, "sampling verified"),
    ])
}

fn hex_optimum() -> Outcome {
    let best = optimize_hex().map_err(|e| e.to_string())?;
    let lattice = lattice_from_params(&best.lattice).map_err(|e| e.to_string())?;
    let check = verify_covering(&lattice, best.radius * (1.0 + 1e-4), 20_000).map_err(|e| e.to_string())?;
    all(vec![
        within("t11", best.t11, 1.260_015_85, 1e-4),
        within("R", best.radius, 0.860_467_18, 1e-4),
        within("density", best.density, 1.429_006_15, 1e-5),
        within("t13", best.lattice.t1[2], 0.687_468_26, 1e-5),
        within("t23", best.lattice.t2[2], 1.031_202_39, 1e-5),
        require(check.covered, "covered at R(1+1e-4)"),
    ])
}

fn lower_bound() -> Outcome {
    let lb = minimize_lower_bound().map_err(|e| e.to_string())?;
    let hex = optimize_hex().map_err(|e| e.to_string())?;
    all(vec![
        within("density", lb.density, 1.362_781_12, 1e-4),
        within("Rp", lb.rp, 0.858_474_45, 1e-3),
        require(1.362_781_12 < hex.density && hex.density <= 1.429_006_15, "1.36278112 < hex_min <= 1.42900615"),
    ])
}

fn bound_functions() -> Outcome {
    all(vec![
        within("f(pi/2)", bound_f(FRAC_PI_2).map_err(|e| e.to_string())?, 1.711_795_10, 1e-5),
        within("f2(3pi/2)", bound_f2(1.5 * PI).map_err(|e| e.to_string())?, 2.372_757_787, 1e-5),
        within("f1(pi)", bound_f1(PI).map_err(|e| e.to_string())?, 1.441_711_246, 1e-3),
        require(increasing(|r| bound_f(r).unwrap(), FRAC_PI_2, PI), "f increasing"),
        require(increasing(|r| bound_f1(r).unwrap(), PI, 1.5 * PI), "f1 increasing"),
        require(increasing(|r| bound_f2(r).unwrap(), 1.5 * PI, TAU), "f2 increasing"),
    ])
}

fn vertical_chords() -> Outcome {
    all(vec![
        within("h(3pi/2)", max_vertical_chord(1.5 * PI).map_err(|e| e.to_string())?, 13.0 * PI / 4.0, 1e-6),
        within("h(2pi)", max_vertical_chord(TAU).map_err(|e| e.to_string())?, 5.0 * PI, 1e-6),
        within("Z(2pi,pi/6)", sphere_profile(TAU, PI / 6.0).map_err(|e| e.to_string())?.z, 2.5 * PI, 1e-12),
    ])
}

fn convexity_thresholds() -> Outcome {
    let scan = (1..=400).map(|i| TAU * i as f64 / 400.0);
    let mismatch = scan.filter(|&r| profile_critical_point(r).is_some() != (r > PI)).count();
    let small = hull_check(FRAC_PI_2, 24, 48).map_err(|e| e.to_string())?;
    let large = hull_check(2.0, 24, 48).map_err(|e| e.to_string())?;
    all(vec![
        require(mismatch == 0, "critical point exactly for R > pi"),
        require(small.all_on_hull(), "hull test passes at pi/2"),
        require(!large.all_on_hull(), "hull test fails at 2.0"),
    ])
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let tr = |rng: &mut ChaCha8Rng, s: f64| {
        Translation::new(rng.random_range(-s..s), rng.random_range(-s..s), rng.random_range(-s..s))
    };
    let mut worst = [0.0f64; 4];

    for _ in 0..1000 {
        let (a, b, c) = (tr(&mut rng, 3.0), tr(&mut rng, 3.0), tr(&mut rng, 3.0));
        let l = compose(&compose(&a, &b), &c);
        let r = compose(&a, &compose(&b, &c));
        let id = compose(&a, &inverse(&a));
        let err = [l.t1 - r.t1, l.t2 - r.t2, l.t3 - r.t3, id.t1, id.t2, id.t3]
            .iter()
            .fold(0.0f64, |m, x| m.max(x.abs()));
        worst[0] = worst[0].max(err);
    }

    for _ in 0..200 {
        let p = tr(&mut rng, 1.0).to_point();
        let q = tr(&mut rng, 1.0).to_point();
        let t = tr(&mut rng, 3.0);
        let w = rng.random_range(-PI..PI);
        let d = distance(&p, &q).map_err(|e| e.to_string())?;
        let images = [
            (translate(&p, &t), translate(&q, &t)),
            (rotate_z(&p, w), rotate_z(&q, w)),
            (line_reflect_y(&p), line_reflect_y(&q)),
        ];
        for (a, b) in images {
            worst[1] = worst[1].max((distance(&a, &b).map_err(|e| e.to_string())? - d).abs());
        }
    }

    for _ in 0..200 {
        let g = GeodesicParams::new(rng.random_range(-PI..PI), rng.random_range(-1.5..1.5), rng.random_range(0.01..3.0))
            .map_err(|e| e.to_string())?;
        let h = 1e-5;
        let at = |s: f64| geodesic_point(&GeodesicParams { s, ..g });
        let (a, b) = (at(g.s + h), at(g.s - h));
        let v = [(a.x - b.x) / (2.0 * h), (a.y - b.y) / (2.0 * h), (a.z - b.z) / (2.0 * h)];
        worst[2] = worst[2].max((metric_norm(&at(g.s), &v) - 1.0).abs());
        let back = geodesic_to(&at(g.s)).map_err(|e| e.to_string())?;
        worst[3] = worst[3].max((back.s - g.s).abs()).max(geodesic_point(&back).euclid_dist(&at(g.s)));
    }

    let r = 0.01;
    let euclid = 4.0 / 3.0 * PI * r * r * r;
    let small = (ball_volume(r).map_err(|e| e.to_string())? - euclid).abs() / euclid;

    let bases = [
        LatticeBasis::new([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1),
        LatticeBasis::new([1.306_338_20, 0.0, 0.738_944_61], [0.653_169_10, 1.131_322_06, 1.108_416_92], 1),
        LatticeBasis::new([0.9, 0.4, 0.2], [-0.3, 1.2, 0.7], 1),
    ];
    let mut violations = 0;
    for b in bases {
        let l = lattice_from_params(&b).map_err(|e| e.to_string())?;
        violations += tiling_spot_check(&l, 1000).map_err(|e| e.to_string())?.violations;
    }

    all(vec![
        require(worst[0] <= 1e-12, &format!("group law {:.1e}", worst[0])),
        require(worst[1] <= 1e-8, &format!("isometry {:.1e}", worst[1])),
        require(worst[2] <= 1e-6, &format!("unit speed {:.1e}", worst[2])),
        require(worst[3] <= 1e-8, &format!("round trip {:.1e}", worst[3])),
        require(small <= 1e-3, &format!("small ball {small:.1e}")),
        require(violations == 0, "tiling 0/3000"),
    ])
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("circumball of the packing lattice", circumball_of_packing),
        ("packing lattice covering density", packing_density),
        ("hexagonal family optimum", hex_optimum),
        ("lower bound and density bracket", lower_bound),
        ("bound functions", bound_functions),
        ("vertical chords", vertical_chords),
        ("convexity thresholds", convexity_thresholds),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
