//! Semiregular functions on ℍ with prescribed principal parts.
//!
//! The prescribed spheres are grouped by modulus into shells
//! `ρ_{n-1} < |q| ≤ ρ_n` with `ρ_n ≈ n + 1/2`. Group `n` contributes
//! `Q_n = Σ P_α`, corrected for `n ≥ 2` by a Taylor polynomial `R_n` of `Q_n`
//! with `sup_{|q| ≤ ρ_{n-1}} |Q_n - R_n| < 2^{-n}`, and
//! `f = Q_1 + Σ_{n≥2} (Q_n - R_n)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{Certified, CertifiedFunction, SliceFunction};
use crate::geometry::Sphere2;
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::rational::{taylor_truncate_sum, PrincipalPart, SemiRational};
use crate::star_poly::TruncatedSeries;

/// Minimal separation between distinct prescribed spheres.
pub const MIN_SEPARATION: f64 = 1e-6;
/// Maximal number of prescribed spheres per unit modulus shell.
pub const MAX_PER_SHELL: usize = 64;
/// Minimal gap between an exhaustion radius and any sphere modulus.
pub const MIN_CLEARANCE: f64 = 1.0 / 32.0;
const RADIUS_OFFSETS: [f64; 3] = [0.0, 0.125, -0.125];

/// Principal parts of the integer-lattice generator at `n + 𝕊`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticePrincipal {
    /// `((q-n)²+1)^{-1}`.
    Unit,
    /// `((q-n)²+1)^{-1}(q-n-i)`.
    Paired,
}

impl LatticePrincipal {
    pub fn part(self, n: i64) -> PrincipalPart {
        let pair = match self {
            LatticePrincipal::Unit => (Quaternion::ONE, Quaternion::ZERO),
            LatticePrincipal::Paired => (Quaternion::ZERO, Quaternion::ONE),
        };
        PrincipalPart::new(Sphere2::new(n as f64, 1.0), ImaginaryUnit::I, vec![pair])
    }
}

/// Prescribed principal parts: a finite list, or a rule producing them lazily.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PrescriptionJson", into = "PrescriptionJson")]
pub enum Prescription {
    Finite(Vec<PrincipalPart>),
    Lattice(LatticePrincipal),
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum PrescriptionJson {
    Finite { spheres: Vec<PrincipalPart> },
    Generator { generator: String, principal: LatticePrincipal },
}

impl TryFrom<PrescriptionJson> for Prescription {
    type Error = String;

    fn try_from(j: PrescriptionJson) -> std::result::Result<Self, String> {
        match j {
            PrescriptionJson::Finite { spheres } => Ok(Prescription::Finite(spheres)),
            PrescriptionJson::Generator { generator, principal } if generator == "integer_lattice" => {
                Ok(Prescription::Lattice(principal))
            }
            PrescriptionJson::Generator { generator, .. } => Err(format!("unknown generator {generator:?}")),
        }
    }
}

impl From<Prescription> for PrescriptionJson {
    fn from(p: Prescription) -> Self {
        match p {
            Prescription::Finite(spheres) => PrescriptionJson::Finite { spheres },
            Prescription::Lattice(principal) => {
                PrescriptionJson::Generator { generator: "integer_lattice".into(), principal }
            }
        }
    }
}

impl Prescription {
    /// Parts whose sphere modulus lies in `(lo, hi]`.
    pub fn parts_in_band(&self, lo: f64, hi: f64) -> Vec<PrincipalPart> {
        let inside = |s: &Sphere2| s.modulus() > lo && s.modulus() <= hi;
        match self {
            Prescription::Finite(parts) => {
                parts.iter().filter(|p| p.k() > 0 && inside(&p.sphere)).cloned().collect()
            }
            Prescription::Lattice(kind) => {
                let m = hi.max(0.0).ceil() as i64;
                (-m..=m).map(|n| kind.part(n)).filter(|p| inside(&p.sphere)).collect()
            }
        }
    }

    fn moduli_near(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.parts_in_band(lo, hi).iter().map(|p| p.sphere.modulus()).collect()
    }

    /// Largest sphere modulus of a finite prescription.
    pub fn max_modulus(&self) -> Option<f64> {
        match self {
            Prescription::Finite(parts) => {
                Some(parts.iter().filter(|p| p.k() > 0).map(|p| p.sphere.modulus()).fold(0.0, f64::max))
            }
            Prescription::Lattice(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Prescription::Finite(parts) if parts.iter().all(|p| p.k() == 0))
    }

    /// Prescribed spheres within `radius` of `near`.
    pub fn spheres_near(&self, near: Quaternion, radius: f64) -> Vec<Sphere2> {
        match self {
            Prescription::Finite(parts) => parts
                .iter()
                .filter(|p| p.k() > 0 && p.sphere.distance(near) < radius)
                .map(|p| p.sphere)
                .collect(),
            Prescription::Lattice(kind) => {
                let lo = (near.re() - radius - 1.0).floor() as i64;
                let hi = (near.re() + radius + 1.0).ceil() as i64;
                (lo..=hi).map(|n| kind.part(n).sphere).filter(|s| s.distance(near) < radius).collect()
            }
        }
    }

    /// Distinct spheres, pairwise separated, finitely many per unit shell.
    pub fn validate(&self) -> Result<()> {
        let Prescription::Finite(parts) = self else {
            return Ok(());
        };
        let mut parts: Vec<&PrincipalPart> = parts.iter().filter(|p| p.k() > 0).collect();
        for p in &parts {
            let finite = p.sphere.x0.is_finite()
                && p.sphere.y0.is_finite()
                && p.pairs.iter().all(|(a, b)| a.is_finite() && b.is_finite());
            if !finite {
                return Err(Error::InvalidInput(format!("non-finite data at sphere {}", p.sphere)));
            }
        }
        let mut per_shell: BTreeMap<u64, usize> = BTreeMap::new();
        for p in &parts {
            let c = per_shell.entry(p.sphere.modulus().floor() as u64).or_default();
            *c += 1;
            if *c > MAX_PER_SHELL {
                return Err(Error::Discreteness(format!(
                    "more than {MAX_PER_SHELL} spheres with modulus in [{0}, {0}+1)",
                    p.sphere.modulus().floor()
                )));
            }
        }
        parts.sort_by(|a, b| a.sphere.x0.total_cmp(&b.sphere.x0));
        for (i, p) in parts.iter().enumerate() {
            for r in &parts[i + 1..] {
                if r.sphere.x0 - p.sphere.x0 >= MIN_SEPARATION {
                    break;
                }
                let d = (r.sphere.x0 - p.sphere.x0).hypot(r.sphere.y0 - p.sphere.y0);
                if d < MIN_SEPARATION {
                    return Err(Error::Discreteness(format!(
                        "spheres {} and {} are closer than {MIN_SEPARATION}",
                        p.sphere, r.sphere
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BuildOptions {
    /// Groups built for a generator prescription.
    pub max_groups: usize,
    /// Largest Taylor order tried for a correction.
    pub max_correction_degree: usize,
    /// First Taylor order of the doubling search.
    pub initial_order: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { max_groups: 32, max_correction_degree: 8192, initial_order: 16 }
    }
}

/// One exhaustion shell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Group {
    pub n: usize,
    /// `ρ_n`.
    pub radius: f64,
    pub parts: Vec<PrincipalPart>,
    /// `R_n`, valid on `|q| ≤ ρ_{n-1}`.
    pub correction: Option<TruncatedSeries>,
    /// `b_n`, certified `sup |Q_n - R_n|` on that ball.
    pub bound: f64,
}

impl Group {
    /// `Q_n` as one rational function.
    pub fn q_rational(&self) -> SemiRational {
        self.parts.iter().fold(SemiRational::zero(), |acc, p| acc.add(&p.to_rational()))
    }

    fn eval_q(&self, q: Quaternion, magnitude: &mut f64) -> Result<Quaternion> {
        let mut acc = Quaternion::ZERO;
        for p in &self.parts {
            let v = p.eval(q)?;
            *magnitude += v.norm();
            acc += v;
        }
        Ok(acc)
    }

    fn eval_corrected(&self, q: Quaternion, magnitude: &mut f64) -> Result<Quaternion> {
        let mut v = self.eval_q(q, magnitude)?;
        if let Some(r) = &self.correction {
            *magnitude += r.abs_eval(q);
            v -= r.eval(q);
        }
        Ok(v)
    }
}

/// A row of the bound ledger.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub n: usize,
    pub rho: f64,
    pub spheres: usize,
    pub degree: Option<usize>,
    pub bound: f64,
}

/// The function produced by [`build`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MLFunction {
    pub prescription: Prescription,
    pub options: BuildOptions,
    pub groups: Vec<Group>,
    /// Every prescribed sphere belongs to a built group.
    pub complete: bool,
}

fn choose_radius(prescription: &Prescription, n: usize) -> Result<f64> {
    let base = n as f64 + 0.5;
    let moduli = prescription.moduli_near(base - 0.5, base + 0.5);
    let clearance = |rho: f64| moduli.iter().map(|m| (m - rho).abs()).fold(f64::INFINITY, f64::min);
    let (rho, gap) = RADIUS_OFFSETS
        .iter()
        .map(|d| (base + d, clearance(base + d)))
        .fold((base, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best });
    if gap < MIN_CLEARANCE {
        return Err(Error::BoundaryCollision(rho));
    }
    Ok(rho)
}

/// Certified correction for a group: Taylor order doubled until the tail
/// bound on `|q| ≤ ball` drops below `2^{-n}`.
fn correction(parts: &[SemiRational], n: usize, ball: f64, opts: &BuildOptions) -> Result<TruncatedSeries> {
    let target = 0.5f64.powi(n as i32);
    let mut order = opts.initial_order.max(1);
    loop {
        let series = taylor_truncate_sum(parts, order, ball)?;
        if series.tail_bound < target {
            return Ok(series);
        }
        if order >= opts.max_correction_degree {
            return Err(Error::DegreeCap { degree: order * 2, cap: opts.max_correction_degree });
        }
        order = (order * 2).min(opts.max_correction_degree);
    }
}

/// Builds `f` with the prescribed principal parts.
pub fn build(prescription: &Prescription, opts: BuildOptions) -> Result<MLFunction> {
    prescription.validate()?;
    let outermost = prescription.max_modulus();
    let mut groups: Vec<Group> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for n in 1.. {
        let done = match outermost {
            None => n > opts.max_groups,
            Some(_) if prescription.is_empty() => true,
            Some(m) => prev >= m,
        };
        if done {
            break;
        }
        let radius = choose_radius(prescription, n)?;
        let parts = prescription.parts_in_band(prev, radius);
        let (corr, bound) = if n >= 2 && !parts.is_empty() {
            let rationals: Vec<SemiRational> = parts.iter().map(|p| p.to_rational()).collect();
            let c = correction(&rationals, n, prev, &opts)?;
            let b = c.tail_bound;
            (Some(c), b)
        } else {
            (None, 0.0)
        };
        groups.push(Group { n, radius, parts, correction: corr, bound });
        prev = radius;
    }
    Ok(MLFunction {
        prescription: prescription.clone(),
        options: opts,
        complete: prescription.max_modulus().is_some(),
        groups,
    })
}

impl MLFunction {
    pub fn ledger(&self) -> Vec<LedgerRow> {
        self.groups
            .iter()
            .map(|g| LedgerRow {
                n: g.n,
                rho: g.radius,
                spheres: g.parts.len(),
                degree: g.correction.as_ref().map(|c| c.degree()),
                bound: g.bound,
            })
            .collect()
    }

    /// Index of the group holding `sphere`, if prescribed.
    pub fn group_of(&self, sphere: Sphere2) -> Option<usize> {
        self.groups.iter().find(|g| g.parts.iter().any(|p| p.sphere == sphere)).map(|g| g.n)
    }

    /// Minimal `N ≥ 2` with `|q| < ρ_{N-1}`.
    fn locality(&self, q: Quaternion) -> Option<usize> {
        let r = q.norm();
        self.groups.iter().find(|g| r < g.radius).map(|g| g.n + 1)
    }

    fn needed_groups(&self, q: Quaternion, eps: f64) -> Result<(usize, bool)> {
        let depth = if eps > 0.0 { (1.0 / eps).log2().ceil().max(1.0) as usize } else { usize::MAX };
        let built = self.groups.len();
        match self.locality(q) {
            _ if self.complete => Ok((built, true)),
            Some(local) => {
                let needed = local.max(depth);
                if needed > built {
                    return Err(Error::Truncated { built, needed });
                }
                Ok((needed, false))
            }
            None => Err(Error::Truncated { built, needed: built + 1 }),
        }
    }

    /// `Σ_{n ≤ last} (Q_n - R_n)(q)`, corrections dropped for groups up to
    /// `raw_through`.
    fn partial(&self, q: Quaternion, last: usize, raw_through: usize) -> Result<(Quaternion, f64)> {
        let mut magnitude = 0.0;
        let mut acc = Quaternion::ZERO;
        for g in self.groups.iter().take(last) {
            acc += if g.n <= raw_through {
                g.eval_q(q, &mut magnitude)?
            } else {
                g.eval_corrected(q, &mut magnitude)?
            };
        }
        Ok((acc, magnitude))
    }

    fn rounding(&self, last: usize, magnitude: f64) -> f64 {
        let deg = self.groups.iter().take(last).filter_map(|g| g.correction.as_ref()).map(|c| c.degree()).max();
        8.0 * f64::EPSILON * (deg.unwrap_or(0) + last + 1) as f64 * magnitude
    }

    /// The value at `q` with an absolute error bound `≤ eps + rounding`.
    pub fn eval_certified(&self, q: Quaternion, eps: f64) -> Result<Certified> {
        let (last, exact) = self.needed_groups(q, eps)?;
        let (value, magnitude) = self.partial(q, last, 0)?;
        let tail = if exact { 0.0 } else { 0.5f64.powi(last as i32) };
        Ok(Certified { value, bound: tail + self.rounding(last, magnitude) })
    }

    /// `f + Σ_{n ≤ cutoff} R_n`: the same principal parts, without the
    /// polynomial corrections that are large far outside their balls.
    pub fn local_view(&self, cutoff: usize) -> LocalView<'_> {
        LocalView { f: self, cutoff }
    }

    /// A local view well conditioned near `q`.
    pub fn local_view_near(&self, q: Quaternion) -> LocalView<'_> {
        let r = q.norm() + 1.0;
        let inner = self.groups.iter().find(|g| r < g.radius).map_or(self.groups.len(), |g| g.n);
        self.local_view(inner + 1)
    }
}

/// Oracle precision for [`MLFunction`] as a plain function.
pub const ML_ORACLE_EPS: f64 = 1e-13;

impl SliceFunction for MLFunction {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        Ok(self.eval_certified(q, ML_ORACLE_EPS.max(0.5f64.powi(self.groups.len() as i32)))?.value)
    }

    fn pole_spheres(&self, near: Quaternion, radius: f64) -> Option<Vec<Sphere2>> {
        Some(self.prescription.spheres_near(near, radius))
    }
}

impl CertifiedFunction for MLFunction {
    fn eval_certified(&self, q: Quaternion, eps: f64) -> Result<Certified> {
        MLFunction::eval_certified(self, q, eps)
    }
}

/// See [`MLFunction::local_view`].
#[derive(Clone, Copy, Debug)]
pub struct LocalView<'a> {
    pub f: &'a MLFunction,
    pub cutoff: usize,
}

impl LocalView<'_> {
    pub fn eval_certified(&self, q: Quaternion, eps: f64) -> Result<Certified> {
        let (last, exact) = self.f.needed_groups(q, eps)?;
        let last = if exact { last } else { last.max(self.cutoff.min(self.f.groups.len())) };
        let (value, magnitude) = self.f.partial(q, last, self.cutoff)?;
        let tail = if exact { 0.0 } else { 0.5f64.powi(last as i32) };
        Ok(Certified { value, bound: tail + self.f.rounding(last, magnitude) })
    }
}

impl SliceFunction for LocalView<'_> {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        let eps = ML_ORACLE_EPS.max(0.5f64.powi(self.f.groups.len() as i32));
        Ok(self.eval_certified(q, eps)?.value)
    }

    fn pole_spheres(&self, near: Quaternion, radius: f64) -> Option<Vec<Sphere2>> {
        self.f.pole_spheres(near, radius)
    }
}
