use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use nil_cover::ball;
use nil_cover::covering::{self, DEFAULT_SAMPLES, EUCLIDEAN_COVERING_DENSITY};
use nil_cover::geodesic;
use nil_cover::lattice::{self, Lattice, LatticeBasis};
use nil_cover::{NilError, NilPoint};

mod output;

#[derive(Parser)]
#[command(name = "nil-cover", version, about = "Geodesic balls, lattices and ball coverings in Nil geometry")]
struct Cli {
    /// Print results as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Geodesic distance between two points.
    Distance {
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        from: NilPoint,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        to: NilPoint,
    },
    /// Minimal geodesic between two points, by multistart shooting.
    Geodesic {
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        from: NilPoint,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        to: NilPoint,
    },
    /// Volume of the geodesic ball of the given radius.
    BallVolume {
        #[arg(long, allow_hyphen_values = true)]
        radius: f64,
    },
    /// Triangulated geodesic sphere as OBJ.
    SphereMesh {
        #[arg(long, allow_hyphen_values = true)]
        radius: f64,
        #[arg(long, default_value_t = 32)]
        n_theta: usize,
        #[arg(long, default_value_t = 64)]
        n_phi: usize,
        /// Emit the sheared image instead of the sphere.
        #[arg(long)]
        m_image: bool,
        /// Write the mesh here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convexity of the ball and of its sheared image.
    Convexity {
        #[arg(long, allow_hyphen_values = true)]
        radius: f64,
        /// Latitude bands of the hull test mesh.
        #[arg(long, default_value_t = 24)]
        n_theta: usize,
        #[arg(long, default_value_t = 48)]
        n_phi: usize,
    },
    /// Longest vertical chord of the ball.
    ChordMax {
        #[arg(long, allow_hyphen_values = true)]
        radius: f64,
    },
    /// Lattice constructions.
    Lattice {
        #[command(subcommand)]
        action: LatticeAction,
    },
    /// Circumscribed geodesic ball of four points.
    Circumball {
        /// Repeat four times.
        #[arg(long = "point", value_parser = parse_point, num_args = 1, required = true, allow_hyphen_values = true)]
        points: Vec<NilPoint>,
    },
    /// Covering radius, density and sampling check of a lattice.
    Covering {
        #[command(subcommand)]
        action: CoveringAction,
    },
    /// Density bound functions.
    Bound {
        #[command(subcommand)]
        action: BoundAction,
    },
    /// Optimizers over the hexagonal family and the lower-bound construction.
    Optimize {
        #[command(subcommand)]
        action: OptimizeAction,
    },
    /// Named constants and convexity thresholds.
    Constants,
}

#[derive(Args, Clone)]
struct LatticeArg {
    /// Generators as t11,t12,t13,t21,t22,t23[,k].
    #[arg(long, value_parser = parse_lattice, conflicts_with = "lattice_file", allow_hyphen_values = true)]
    lattice: Option<LatticeBasis>,
    /// JSON file {"t1": [..], "t2": [..], "k": 1}.
    #[arg(long)]
    lattice_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum LatticeAction {
    /// Vertices of the fundamental domain.
    Domain(LatticeArg),
    /// Volume of the fundamental domain.
    Volume(LatticeArg),
    /// Orbit points of the origin with exponents bounded by n.
    Points {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Checks that translates of the domain tile space once.
    TilingCheck {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum CoveringAction {
    Radius(LatticeArg),
    Density(LatticeArg),
    Verify {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, allow_hyphen_values = true)]
        radius: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Relative inflation applied to the radius before checking.
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum BoundAction {
    F {
        #[arg(long, allow_hyphen_values = true)]
        radius: f64,
    },
    F1 {
        #[arg(long, allow_hyphen_values = true)]
        radius: f64,
    },
    F2 {
        #[arg(long, allow_hyphen_values = true)]
        radius: f64,
    },
    /// Lower-bound configuration at a trial radius.
    Lower {
        #[arg(long, allow_hyphen_values = true)]
        radius: f64,
    },
}

#[derive(Subcommand)]
enum OptimizeAction {
    Hex,
    Lower,
}

fn parse_point(s: &str) -> Result<NilPoint, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad coordinate {p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [x, y, z] => Ok(NilPoint::new(*x, *y, *z)),
        _ => Err(format!("expected x,y,z, got {} values", v.len())),
    }
}

fn parse_lattice(s: &str) -> Result<LatticeBasis, String> {
    s.parse()
}

enum Failure {
    Usage(String),
    Nil(NilError),
    Io(String),
}

impl From<NilError> for Failure {
    fn from(e: NilError) -> Self {
        Failure::Nil(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Nil(NilError::NoSolution(_)) => 3,
            Failure::Nil(_) => 2,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => format!("usage error: {m}"),
            Failure::Nil(e) => e.to_string(),
            Failure::Io(m) => format!("i/o error: {m}"),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

impl LatticeArg {
    fn load(&self) -> Result<Lattice, Failure> {
        let basis = match (&self.lattice, &self.lattice_file) {
            (Some(b), _) => *b,
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
            }
            (None, None) => return Err(Failure::Usage("one of --lattice or --lattice-file is required".into())),
        };
        Ok(lattice::lattice_from_params(&basis)?)
    }
}

fn lattice_json(l: &Lattice) -> Value {
    json!({ "basis": to_value(&l.basis), "input": to_value(&l.input), "rotation": l.rotation })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Distance { from, to } => Ok(json!({ "distance": geodesic::distance(&from, &to)? })),
        Command::Geodesic { from, to } => {
            let sol = geodesic::geodesic_between(&from, &to)?;
            Ok(to_value(&sol))
        }
        Command::BallVolume { radius } => Ok(json!({ "radius": radius, "volume": ball::ball_volume(radius)? })),
        Command::SphereMesh { radius, n_theta, n_phi, m_image, out } => {
            let mesh = ball::sphere_mesh(radius, n_theta, n_phi, m_image)?;
            match out {
                Some(path) => {
                    let file = File::create(&path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    let mut w = BufWriter::new(file);
                    mesh.write_obj(&mut w)?;
                    w.flush()?;
                    Ok(json!({
                        "out": path.display().to_string(),
                        "vertices": mesh.vertices.len(),
                        "faces": mesh.faces.len(),
                    }))
                }
                None => {
                    let stdout = io::stdout();
                    let mut w = BufWriter::new(stdout.lock());
                    mesh.write_obj(&mut w)?;
                    w.flush()?;
                    Ok(Value::Null)
                }
            }
        }
        Command::Convexity { radius, n_theta, n_phi } => {
            let hull = ball::hull_check(radius, n_theta, n_phi)?;
            Ok(json!({
                "radius": radius,
                "ball_convex": ball::is_ball_convex(radius),
                "m_image_convex": ball::is_m_image_convex(radius),
                "profile_critical_theta": ball::profile_critical_point(radius),
                "min_gaussian_curvature": ball::min_gaussian_curvature(radius, 2 * n_theta, 2 * n_phi)?,
                "hull": to_value(&hull),
            }))
        }
        Command::ChordMax { radius } => {
            let (theta, z) = ball::max_profile_height(radius)?;
            Ok(json!({ "radius": radius, "chord": 2.0 * z, "theta": theta }))
        }
        Command::Lattice { action } => match action {
            LatticeAction::Domain(a) => {
                let l = a.load()?;
                let d = lattice::fundamental_domain(&l);
                let vertices: serde_json::Map<String, Value> =
                    d.labeled().iter().map(|(k, p)| (k.to_string(), to_value(p))).collect();
                Ok(json!({ "lattice": lattice_json(&l), "vertices": vertices }))
            }
            LatticeAction::Volume(a) => {
                let l = a.load()?;
                Ok(json!({ "lattice": lattice_json(&l), "volume": lattice::domain_volume(&l) }))
            }
            LatticeAction::Points { lattice: a, n } => {
                let l = a.load()?;
                let pts: Vec<Value> =
                    lattice::lattice_points_in_shell(&l, n).iter().map(|p| json!([p.x, p.y, p.z])).collect();
                Ok(json!({ "n": n, "count": pts.len(), "points": pts }))
            }
            LatticeAction::TilingCheck { lattice: a, samples } => {
                let l = a.load()?;
                Ok(to_value(&lattice::tiling_spot_check(&l, samples)?))
            }
        },
        Command::Circumball { points } => {
            let pts: [NilPoint; 4] = points
                .try_into()
                .map_err(|v: Vec<NilPoint>| Failure::Usage(format!("expected 4 --point values, got {}", v.len())))?;
            Ok(to_value(&covering::circumball(&pts)?))
        }
        Command::Covering { action } => match action {
            CoveringAction::Radius(a) => {
                let l = a.load()?;
                Ok(json!({ "covering_radius": covering::covering_radius(&l)? }))
            }
            CoveringAction::Density(a) => Ok(to_value(&covering::covering_density(&a.load()?)?)),
            CoveringAction::Verify { lattice: a, radius, samples, tol } => {
                let l = a.load()?;
                Ok(to_value(&covering::verify_covering(&l, radius * (1.0 + tol), samples)?))
            }
        },
        Command::Bound { action } => match action {
            BoundAction::F { radius } => Ok(json!({ "radius": radius, "f": covering::bound_f(radius)? })),
            BoundAction::F1 { radius } => Ok(json!({ "radius": radius, "f1": covering::bound_f1(radius)? })),
            BoundAction::F2 { radius } => Ok(json!({ "radius": radius, "f2": covering::bound_f2(radius)? })),
            BoundAction::Lower { radius } => Ok(to_value(&covering::lower_bound_density(radius)?)),
        },
        Command::Optimize { action } => match action {
            OptimizeAction::Hex => Ok(to_value(&covering::optimize_hex()?)),
            OptimizeAction::Lower => Ok(to_value(&covering::minimize_lower_bound()?)),
        },
        Command::Constants => Ok(json!({
            "euclidean_covering_density": EUCLIDEAN_COVERING_DENSITY,
            "ball_convex_radius": FRAC_PI_2,
            "m_image_convex_radius": PI,
            "max_radius": TAU,
        })),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(Value::Null) => ExitCode::SUCCESS,
        Ok(v) => {
            print!("{}", output::render(&v, json));
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("nil-cover: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
