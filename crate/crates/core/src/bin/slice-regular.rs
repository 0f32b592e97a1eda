use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use slice_regular::commands::{self, LoadedFunction, VerifyOptions, EXIT_VERIFY_FAILED};
use slice_regular::{BuildOptions, Error, GridSpec, ImaginaryUnit, Quaternion, Result, Sphere2};

/// Slice-regular functions of a quaternionic variable.
#[derive(Parser)]
#[command(name = "slice-regular", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a function at a point, with a certified bound when available.
    Eval {
        /// JSON file, or inline JSON starting with `{`.
        function: String,
        point: String,
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
    },
    /// Spherical Laurent expansion around a sphere.
    Expand {
        function: String,
        #[arg(long, value_name = "X0,Y0")]
        sphere: String,
        #[arg(long, default_value = "i")]
        unit: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// Principal part at a sphere.
    PrincipalPart {
        function: String,
        #[arg(long, value_name = "X0,Y0")]
        sphere: String,
        #[arg(long, default_value = "i")]
        unit: String,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
    },
    /// Build a Mittag-Leffler function from a prescription file.
    MlBuild {
        prescription: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        max_groups: Option<usize>,
    },
    /// Sample a function on a rectangle of one slice, as CSV.
    Grid {
        function: String,
        #[arg(long, default_value = "i")]
        unit: String,
        #[arg(long, value_name = "A,B", allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_name = "A,B", allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value_t = 64)]
        nx: usize,
        #[arg(long, default_value_t = 64)]
        ny: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized regularity, affinity and principal-part checks.
    Verify {
        function: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 10)]
        spheres: usize,
    },
}

fn load(spec: &str) -> Result<LoadedFunction> {
    if spec.trim_start().starts_with('{') {
        LoadedFunction::from_json(serde_json::from_str(spec)?)
    } else {
        LoadedFunction::load(spec.as_ref())
    }
}

fn pair(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::Parse(format!("expected two numbers `a,b`, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn unit(s: &str) -> Result<ImaginaryUnit> {
    ImaginaryUnit::new(s.parse::<Quaternion>()?)
}

fn sphere(s: &str) -> Result<Sphere2> {
    let (x0, y0) = pair(s)?;
    if y0 < 0.0 {
        return Err(Error::InvalidInput(format!("sphere radius must be non-negative, got {y0}")));
    }
    Ok(Sphere2::new(x0, y0))
}

fn run(cmd: Cmd) -> Result<(String, bool)> {
    let ok = |s: String| Ok((s, true));
    match cmd {
        Cmd::Eval { function, point, eps } => ok(commands::eval(&load(&function)?, point.parse()?, eps)?),
        Cmd::Expand { function, sphere: s, unit: u, k, order } => {
            ok(commands::expand(&load(&function)?, sphere(&s)?, unit(&u)?, k, order)?)
        }
        Cmd::PrincipalPart { function, sphere: s, unit: u, k_max } => {
            ok(commands::principal_part(&load(&function)?, sphere(&s)?, unit(&u)?, k_max)?)
        }
        Cmd::MlBuild { prescription, out, max_groups } => {
            let mut opts = BuildOptions::default();
            if let Some(m) = max_groups {
                opts.max_groups = m;
            }
            ok(commands::ml_build(&prescription, &out, opts)?)
        }
        Cmd::Grid { function, unit: u, x, y, nx, ny, out } => {
            let spec = GridSpec::new(unit(&u)?, pair(&x)?, pair(&y)?, nx, ny)?;
            ok(commands::grid(&load(&function)?, &spec, out.as_deref())?)
        }
        Cmd::Verify { function, seed, points, spheres } => {
            let opts = VerifyOptions { seed, points, spheres, ..VerifyOptions::default() };
            commands::verify(&load(&function)?, opts)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().cmd) {
        Ok((out, pass)) => {
            let _ = writeln!(std::io::stdout(), "{out}");
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY_FAILED as u8)
            }
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::from(commands::exit_code(&e) as u8)
        }
    }
}
