//! Command implementations behind the `slice-regular` binary. Each returns
//! the text to print; errors carry a machine-readable kind.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::function::{Certified, CertifiedFunction, Conjugate, QiQ, SliceFunction};
use crate::geometry::Sphere2;
use crate::grid::{grid_csv, GridSpec};
use crate::mittag_leffler::{build, BuildOptions, LatticePrincipal, MLFunction, Prescription};
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::rational::{PrincipalPart, SemiRational};
use crate::series_examples::{Paired, ZSum};
use crate::spherical::{extract_principal_part_at, pole_order, spherical_laurent};
use crate::star_poly::StarPoly;
use crate::verify::{check_affine_on_sphere, regularity_probe, RegularityReport};

/// Exit status for pole hits.
pub const EXIT_POLE: i32 = 2;
/// Exit status for a failed verification.
pub const EXIT_VERIFY_FAILED: i32 = 3;

/// Anything the CLI can evaluate.
pub enum LoadedFunction {
    Poly(StarPoly),
    Rational(SemiRational),
    ZSum(ZSum),
    Paired(Paired),
    Conjugate,
    QiQ,
    ML(Box<MLFunction>),
}

impl LoadedFunction {
    pub fn from_json(v: Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("function description must be a JSON object".into()))?;
        if obj.contains_key("groups") {
            return Ok(LoadedFunction::ML(Box::new(serde_json::from_value(v)?)));
        }
        if let Some(name) = obj.get("builtin") {
            return match name.as_str() {
                Some("zsum") => Ok(LoadedFunction::ZSum(ZSum::default())),
                Some("paired") => Ok(LoadedFunction::Paired(Paired::default())),
                Some("conjugate") => Ok(LoadedFunction::Conjugate),
                Some("qiq") => Ok(LoadedFunction::QiQ),
                _ => Err(Error::Parse(format!("unknown builtin {name}"))),
            };
        }
        if obj.contains_key("spheres") || obj.contains_key("generator") {
            let p: Prescription = serde_json::from_value(v)?;
            return Ok(LoadedFunction::ML(Box::new(build(&p, BuildOptions::default())?)));
        }
        if obj.contains_key("num") {
            return Ok(LoadedFunction::Rational(serde_json::from_value(v)?));
        }
        if obj.contains_key("coeffs") {
            return Ok(LoadedFunction::Poly(serde_json::from_value(v)?));
        }
        Err(Error::Parse("unrecognized function description".into()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(serde_json::from_str(&text)?)
    }

    fn as_dyn(&self) -> &dyn SliceFunction {
        match self {
            LoadedFunction::Poly(f) => f,
            LoadedFunction::Rational(f) => f,
            LoadedFunction::ZSum(f) => f,
            LoadedFunction::Paired(f) => f,
            LoadedFunction::Conjugate => &Conjugate,
            LoadedFunction::QiQ => &QiQ,
            LoadedFunction::ML(f) => f.as_ref(),
        }
    }

    /// Value with a certificate when the function has one.
    pub fn eval_certified(&self, q: Quaternion, eps: f64) -> Result<(Quaternion, Option<f64>)> {
        let c: Option<Certified> = match self {
            LoadedFunction::ZSum(f) => Some(f.eval_certified(q, eps)?),
            LoadedFunction::Paired(f) => Some(f.eval_certified(q, eps)?),
            LoadedFunction::ML(f) => Some(f.eval_certified(q, eps)?),
            _ => None,
        };
        match c {
            Some(c) => Ok((c.value, Some(c.bound))),
            None => Ok((self.eval(q)?, None)),
        }
    }

    /// An oracle with the same principal parts that is well conditioned near `q`.
    pub fn view_near(&self, q: Quaternion) -> Box<dyn SliceFunction + '_> {
        match self {
            LoadedFunction::ML(f) => Box::new(f.local_view_near(q)),
            other => Box::new(other.as_dyn()),
        }
    }

    /// Principal parts the function is known to carry, for round-trip checks.
    pub fn expected_parts(&self) -> Vec<PrincipalPart> {
        match self {
            LoadedFunction::ZSum(_) => (-2..=2).map(|n| LatticePrincipal::Unit.part(n)).collect(),
            LoadedFunction::Paired(_) => (-2..=2).map(|n| LatticePrincipal::Paired.part(n)).collect(),
            LoadedFunction::ML(f) => match &f.prescription {
                Prescription::Finite(parts) => parts.iter().filter(|p| p.k() > 0).take(8).cloned().collect(),
                Prescription::Lattice(kind) => (-2..=2).map(|n| kind.part(n)).collect(),
            },
            _ => Vec::new(),
        }
    }

    fn pole_spheres_all(&self) -> Vec<Sphere2> {
        match self {
            LoadedFunction::Rational(f) => f.pole_spheres(),
            _ => Vec::new(),
        }
    }
}

impl SliceFunction for LoadedFunction {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        self.as_dyn().eval(q)
    }

    fn pole_spheres(&self, near: Quaternion, radius: f64) -> Option<Vec<Sphere2>> {
        self.as_dyn().pole_spheres(near, radius)
    }
}

fn pretty<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

pub fn eval(f: &LoadedFunction, point: Quaternion, eps: f64) -> Result<String> {
    let (value, bound) = f.eval_certified(point, eps)?;
    pretty(&json!({ "point": point, "value": value, "display": value.to_string(), "bound": bound }))
}

pub fn expand(f: &LoadedFunction, sphere: Sphere2, unit: ImaginaryUnit, k: Option<usize>, order: usize) -> Result<String> {
    let q0 = sphere.point(unit);
    let view = f.view_near(q0);
    let k = match k {
        Some(k) => k,
        None => pole_order(view.as_ref(), sphere, 8)?,
    };
    let j_max = order.max(2 * k + 1);
    pretty(&spherical_laurent(view.as_ref(), sphere, q0, k, j_max)?)
}

pub fn principal_part(f: &LoadedFunction, sphere: Sphere2, unit: ImaginaryUnit, k_max: usize) -> Result<String> {
    let view = f.view_near(sphere.point(unit));
    let p = extract_principal_part_at(view.as_ref(), sphere, unit, k_max)?;
    pretty(&json!({ "principal": p, "exceptional_point": p.exceptional_point() }))
}

pub fn ml_build(prescription: &Path, out: &Path, opts: BuildOptions) -> Result<String> {
    let p: Prescription = serde_json::from_str(&std::fs::read_to_string(prescription)?)?;
    let f = build(&p, opts)?;
    std::fs::write(out, serde_json::to_string(&f)?)?;
    pretty(&json!({ "artifact": out, "complete": f.complete, "ledger": f.ledger() }))
}

pub fn grid(f: &LoadedFunction, spec: &GridSpec, out: Option<&Path>) -> Result<String> {
    let csv = grid_csv(f, spec)?;
    match out {
        Some(path) => {
            std::fs::write(path, &csv)?;
            Ok(format!("wrote {} rows to {}", spec.nx * spec.ny, path.display()))
        }
        None => Ok(csv.trim_end().to_string()),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub points: usize,
    pub spheres: usize,
    pub h: f64,
    pub dbar_tol: f64,
    pub affine_tol: f64,
    pub part_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, points: 100, spheres: 10, h: 1e-3, dbar_tol: 1e-6, affine_tol: 1e-10, part_tol: 1e-8 }
    }
}

#[derive(Serialize)]
struct PartCheck {
    sphere: Sphere2,
    k: Option<usize>,
    distance: Option<f64>,
    error: Option<String>,
    pass: bool,
}

const POLE_MARGIN: f64 = 0.02;

fn near_pole(f: &LoadedFunction, q: Quaternion, margin: f64) -> bool {
    let hinted = f.pole_spheres(q, margin).is_some_and(|v| !v.is_empty());
    hinted || f.pole_spheres_all().iter().any(|s| s.distance(q) < margin)
}

/// Regularity probes, affinity on spheres and principal-part round trips.
/// Returns the JSON report and whether everything passed.
pub fn verify(f: &LoadedFunction, opts: VerifyOptions) -> Result<(String, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut failures = 0;
    let mut worst: Option<RegularityReport> = None;
    let mut probed = 0;
    while probed < opts.points {
        let unit = ImaginaryUnit::random(&mut rng);
        let (x, y) = (rng.gen_range(-3.0..3.0), rng.gen_range(-2.5..2.5));
        let q = Quaternion::real(x) + unit.as_quat() * y;
        if near_pole(f, q, POLE_MARGIN) {
            continue;
        }
        probed += 1;
        let view = f.view_near(q);
        let rep = regularity_probe(view.as_ref(), q, unit, opts.h, opts.dbar_tol)?;
        if !rep.regular {
            failures += 1;
        }
        let worse = worst.as_ref().is_none_or(|w| (!rep.regular && w.regular) || (rep.regular == w.regular && rep.extrapolated > w.extrapolated));
        if worse {
            worst = Some(rep);
        }
    }

    let mut affine_failures = 0;
    let mut max_dev: f64 = 0.0;
    let mut tested = 0;
    while tested < opts.spheres {
        let sphere = Sphere2::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.1..2.5));
        let probe = sphere.point(ImaginaryUnit::I);
        if f.pole_spheres(probe, 4.0).is_some_and(|v| v.iter().any(|s| (s.x0 - sphere.x0).hypot(s.y0 - sphere.y0) < 0.05))
            || f.pole_spheres_all().iter().any(|s| (s.x0 - sphere.x0).hypot(s.y0 - sphere.y0) < 0.05)
        {
            continue;
        }
        tested += 1;
        let view = f.view_near(probe);
        let rep = check_affine_on_sphere(view.as_ref(), sphere, opts.affine_tol, rng.gen())?;
        max_dev = max_dev.max(rep.max_deviation);
        if !rep.pass {
            affine_failures += 1;
        }
    }

    let mut parts = Vec::new();
    for p in f.expected_parts() {
        let view = f.view_near(p.q0());
        let check = match extract_principal_part_at(view.as_ref(), p.sphere, p.unit, 8) {
            Ok(got) => {
                let d = got.distance(&p);
                PartCheck { sphere: p.sphere, k: Some(got.k()), distance: Some(d), error: None, pass: got.k() == p.k() && d <= opts.part_tol }
            }
            Err(e) => PartCheck { sphere: p.sphere, k: None, distance: None, error: Some(e.to_string()), pass: false },
        };
        parts.push(check);
    }
    if let LoadedFunction::Rational(r) = f {
        // subtracting the extracted principal part must remove the pole
        for s in r.pole_spheres() {
            let check = extract_principal_part_at(r, s, ImaginaryUnit::I, 8).and_then(|p| {
                let rest = r.sub(&p.to_rational());
                Ok((p.k(), pole_order(&rest, s, 8)?))
            });
            parts.push(match check {
                Ok((k, left)) => PartCheck { sphere: s, k: Some(k), distance: None, error: None, pass: left == 0 },
                Err(e) => PartCheck { sphere: s, k: None, distance: None, error: Some(e.to_string()), pass: false },
            });
        }
    }

    let pass = failures == 0 && affine_failures == 0 && parts.iter().all(|p| p.pass);
    let report = json!({
        "regularity": { "points": probed, "failures": failures, "worst": worst },
        "affinity": { "spheres": tested, "failures": affine_failures, "max_deviation": max_dev },
        "principal_parts": parts,
        "pass": pass,
    });
    Ok((pretty(&report)?, pass))
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Pole(..) => EXIT_POLE,
        _ => 1,
    }
}
