//! Spherical Taylor and Laurent expansions
//! `f(q) = Σ_{n ≥ -k} ((q - x0)² + y0²)^n [A_{2(n+k)} + (q - q0) A_{2(n+k)+1}]`,
//! remainder operators on a slice, principal-part extraction from an
//! evaluation oracle, and the representation formula.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::SliceFunction;
use crate::geometry::{same_plane, Sphere2, SymmetricShell};
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::rational::PrincipalPart;
use crate::scalar::Scalar;
use crate::star_poly::{LaurentCoeffs, StarPoly};

/// Finite-difference steps for slice derivatives.
pub const DIFF_STEPS: [f64; 3] = [1e-3, 5e-4, 2.5e-4];
const DEFAULT_SAMPLES: usize = 64;
const DEFAULT_SHELL_SQ: f64 = 0.25;

/// `f(x + yJ) = ½(f⁺ + f⁻) + (JI/2)(f⁻ - f⁺)` from `f⁺ = f(x + yI)` and
/// `f⁻ = f(x - yI)`.
pub fn representation_extend(
    f_plus: Quaternion,
    f_minus: Quaternion,
    i: ImaginaryUnit,
    j: ImaginaryUnit,
) -> Quaternion {
    (f_plus + f_minus) * 0.5 + j.as_quat() * i.as_quat() * (f_minus - f_plus) * 0.5
}

fn same_point(a: Quaternion, b: Quaternion) -> bool {
    (a - b).norm() <= 1e-13 * (1.0 + a.norm())
}

/// Slice derivative at `q0` along the real direction, Richardson-extrapolated.
fn slice_derivative<F: SliceFunction + ?Sized>(f: &F, q0: Quaternion) -> Result<Quaternion> {
    let mut d = [Quaternion::ZERO; 3];
    for (slot, h) in d.iter_mut().zip(DIFF_STEPS) {
        let hq = Quaternion::real(h);
        *slot = (f.eval(q0 + hq)? - f.eval(q0 - hq)?) / (2.0 * h);
    }
    let r1 = (d[1] * 4.0 - d[0]) / 3.0;
    let r2 = (d[2] * 4.0 - d[1]) / 3.0;
    let out = (r2 * 16.0 - r1) / 15.0;
    if !out.is_finite() || (r1 - r2).norm() > 1e-4 * (1.0 + out.norm()) {
        return Err(Error::NotRegular(format!("difference quotients at {q0} do not settle")));
    }
    Ok(out)
}

/// `R_{q0} f(q) = (q - q0)^{-1}(f(q) - f(q0))` for `q` on the slice of `q0`;
/// at `q = q0` the slice derivative.
pub fn r_operator_on_slice<F: SliceFunction + ?Sized>(f: &F, q0: Quaternion, q: Quaternion) -> Result<Quaternion> {
    if !same_plane(q, q0) {
        return Err(Error::OffSlice(q.to_string(), q0.to_string()));
    }
    if same_point(q, q0) {
        return slice_derivative(f, q0);
    }
    let w = (q - q0).inv().expect("q differs from q0");
    Ok(w * (f.eval(q)? - f.eval(q0)?))
}

/// `R_{q0} f` as an oracle, valid on the slice of `q0`.
pub struct RemainderFn<F> {
    pub f: F,
    pub q0: Quaternion,
}

impl<F: SliceFunction> SliceFunction for RemainderFn<F> {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        r_operator_on_slice(&self.f, self.q0, q)
    }

    fn pole_spheres(&self, near: Quaternion, radius: f64) -> Option<Vec<Sphere2>> {
        self.f.pole_spheres(near, radius)
    }
}

/// `A_0..A_{j_max}` through the remainder operators:
/// `A_{2n} = (R_{q̄0} R_{q0})^n f(q0)`, `A_{2n+1} = R_{q0}(R_{q̄0} R_{q0})^n f(q̄0)`.
/// Nested difference quotients lose accuracy quickly; this is a cross-check.
pub fn spherical_coeffs_by_remainders<F: SliceFunction>(f: &F, q0: Quaternion, j_max: usize) -> Result<Vec<Quaternion>> {
    let q0b = q0.conj();
    let mut out = Vec::with_capacity(j_max + 1);
    let mut g: Box<dyn SliceFunction + '_> = Box::new(f);
    for j in 0..=j_max {
        if j % 2 == 0 {
            out.push(g.eval(q0)?);
            g = Box::new(RemainderFn { f: g, q0 });
        } else {
            out.push(g.eval(q0b)?);
            g = Box::new(RemainderFn { f: g, q0: q0b });
        }
    }
    Ok(out)
}

/// Exact coefficients of a polynomial by alternating division by `q - q0`
/// and `q - q̄0`.
pub fn spherical_coeffs_poly<T: Scalar>(p: &StarPoly<T>, q0: &crate::quat::Quat<T>, j_max: usize) -> Result<Vec<crate::quat::Quat<T>>> {
    let q0b = q0.conj();
    let mut h = p.expand_at_zero();
    let mut out = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        let node = if j % 2 == 0 { q0 } else { &q0b };
        let (quo, rem) = h.star_divide_linear(node)?;
        out.push(rem);
        h = quo;
    }
    Ok(out)
}

/// Samples of `f` on the circle `p + r e^{Iθ_m}` of the slice `L_I`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceSamples {
    pub unit: ImaginaryUnit,
    pub center: Quaternion,
    pub radius: f64,
    pub values: Vec<Quaternion>,
}

impl SliceSamples {
    pub fn sample<F: SliceFunction + ?Sized>(
        f: &F,
        unit: ImaginaryUnit,
        center: Quaternion,
        radius: f64,
        m: usize,
    ) -> Result<Self> {
        if !m.is_power_of_two() {
            return Err(Error::InvalidInput(format!("sample count {m} is not a power of two")));
        }
        if !same_plane(center, unit.as_quat()) {
            return Err(Error::OffSlice(center.to_string(), unit.to_string()));
        }
        let values = (0..m)
            .map(|idx| {
                let theta = TAU * idx as f64 / m as f64;
                f.eval(center + Quaternion::unit_exp(unit, theta) * radius)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SliceSamples { unit, center, radius, values })
    }

    /// `r^{-n} (1/M) Σ e^{-Inθ_m} f(p + r e^{Iθ_m})`.
    pub fn coefficient(&self, n: i64) -> Quaternion {
        let m = self.values.len();
        let mut acc = Quaternion::ZERO;
        for (idx, v) in self.values.iter().enumerate() {
            let theta = TAU * ((n.rem_euclid(m as i64) as usize * idx) % m) as f64 / m as f64;
            acc += Quaternion::unit_exp(self.unit, -theta) * *v;
        }
        acc * (self.radius.powi(-(n as i32)) / m as f64)
    }
}

/// Laurent coefficients `a_n`, `n` in `lo..=hi`, of `f_I` about the circle center.
pub fn slice_laurent_coeffs(samples: &SliceSamples, lo: i64, hi: i64) -> LaurentCoeffs {
    LaurentCoeffs {
        center: samples.center,
        lowest: lo,
        coeffs: (lo..=hi).map(|n| samples.coefficient(n)).collect(),
    }
}

/// A spherical Laurent (Taylor when `k = 0`) expansion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphericalExpansion {
    #[serde(with = "sphere_pair")]
    pub sphere: Sphere2,
    pub q0: Quaternion,
    pub k: usize,
    #[serde(rename = "A")]
    pub coeffs: Vec<Quaternion>,
    /// Empirically certified shell radius.
    pub radius: f64,
}

mod sphere_pair {
    use super::Sphere2;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(s: &Sphere2, ser: S) -> Result<S::Ok, S::Error> {
        [s.x0, s.y0].serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Sphere2, D::Error> {
        let [x0, y0] = <[f64; 2]>::deserialize(d)?;
        Ok(Sphere2::new(x0, y0))
    }
}

impl SphericalExpansion {
    pub fn unit(&self) -> ImaginaryUnit {
        self.q0.decompose().2.unwrap_or(ImaginaryUnit::I)
    }

    /// Partial sum over all stored coefficients.
    pub fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        let delta = self.sphere.delta(q);
        let w = q - self.q0;
        let mut acc = Quaternion::ZERO;
        let dinv = if self.k > 0 {
            Some(delta.inv().ok_or_else(|| Error::Pole(q.to_string(), self.sphere))?)
        } else {
            None
        };
        for (idx, pair) in self.coeffs.chunks(2).enumerate() {
            let n = idx as i64 - self.k as i64;
            let pow = if n >= 0 { delta.powi(n as u32) } else { dinv.expect("k > 0").powi((-n) as u32) };
            let a = pair[0];
            let b = pair.get(1).copied().unwrap_or(Quaternion::ZERO);
            acc += pow * (a + w * b);
        }
        Ok(acc)
    }

    /// The `n = -k..-1` block.
    pub fn principal_part(&self) -> PrincipalPart {
        let at = |j: usize| self.coeffs.get(j).copied().unwrap_or(Quaternion::ZERO);
        let pairs = (1..=self.k).map(|n| (at(2 * (self.k - n)), at(2 * (self.k - n) + 1))).collect();
        PrincipalPart::new(self.sphere, self.unit(), pairs)
    }

    /// Largest radius (halving from `start`) at which the expansion matches
    /// `f` on random shell points with `sqrt|Δ| ∈ [0.05, 0.4] R`.
    pub fn certify_radius<F: SliceFunction + ?Sized>(&self, f: &F, start: f64, tol: f64, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut r = start;
        for _ in 0..12 {
            let shell = SymmetricShell::new(self.sphere, r);
            let ok = (0..32).all(|_| {
                let p = shell.random_point(&mut rng, 0.05, 0.4);
                match (f.eval(p), self.eval(p)) {
                    (Ok(a), Ok(b)) => (a - b).norm() <= tol * a.norm().max(1.0),
                    _ => false,
                }
            });
            if ok {
                return r;
            }
            r *= 0.5;
        }
        0.0
    }
}

/// Slice points of other pole spheres, for contour sizing.
fn other_poles<F: SliceFunction + ?Sized>(f: &F, sphere: Sphere2, unit: ImaginaryUnit) -> Option<Vec<(Sphere2, Vec<Quaternion>)>> {
    let hints = f.pole_spheres(sphere.point(unit), 8.0 * (1.0 + sphere.modulus()))?;
    Some(
        hints
            .into_iter()
            .filter(|s| (s.x0 - sphere.x0).abs() + (s.y0 - sphere.y0).abs() > 1e-12 * (1.0 + sphere.modulus()))
            .map(|s| (s, s.slice_points(unit)))
            .collect(),
    )
}

/// `R²` for the circle `|Δ| = R²`: half the smallest `|Δ|` at other poles
/// on the slice, at most 1.
fn shell_radius_sq<F: SliceFunction + ?Sized>(f: &F, sphere: Sphere2, unit: ImaginaryUnit) -> f64 {
    let Some(others) = other_poles(f, sphere, unit) else {
        return DEFAULT_SHELL_SQ;
    };
    let m = others
        .iter()
        .flat_map(|(_, pts)| pts.iter())
        .map(|p| sphere.delta(*p).norm())
        .fold(f64::INFINITY, f64::min);
    (0.5 * m).min(1.0)
}

fn start_radius<F: SliceFunction + ?Sized>(f: &F, sphere: Sphere2, unit: ImaginaryUnit) -> f64 {
    match other_poles(f, sphere, unit) {
        Some(others) if !others.is_empty() => {
            let m = others
                .iter()
                .map(|(s, _)| sphere.delta(s.point(unit)).norm())
                .fold(f64::INFINITY, f64::min);
            0.9 * m.sqrt()
        }
        _ => 1.0,
    }
}

fn check_on_sphere(sphere: Sphere2, q0: Quaternion) -> Result<ImaginaryUnit> {
    if !sphere.contains(q0, 1e-12 * (1.0 + sphere.modulus())) {
        return Err(Error::InvalidInput(format!("{q0} is not on the sphere {sphere}")));
    }
    Ok(match q0.decompose().2 {
        Some(u) if !sphere.is_real_point() => u,
        _ => ImaginaryUnit::I,
    })
}

/// Spherical Taylor coefficients `A_0..A_{j_max}` of a function regular near
/// the sphere, by contour integrals in the variable `w = Δ(z)` of `L_I`.
pub fn spherical_coeffs<F: SliceFunction + ?Sized>(f: &F, sphere: Sphere2, q0: Quaternion, j_max: usize) -> Result<SphericalExpansion> {
    let unit = check_on_sphere(sphere, q0)?;
    let coeffs = raw_coeffs(f, sphere, unit, j_max)?;
    let mut exp = SphericalExpansion { sphere, q0: sphere.point(unit), k: 0, coeffs, radius: 0.0 };
    exp.radius = exp.certify_radius(f, start_radius(f, sphere, unit), 1e-5, 0);
    Ok(exp)
}

/// Each `w` on `|w| = R²` has preimages `z± = x0 ± (w - y0²)^{1/2}`, and
/// `g1(w) = (z₊ - z₋)^{-1}(f(z₊) - f(z₋)) = Σ wⁿ A_{2n+1}`,
/// `g0(w) = f(z₊) - (z₊ - q0) g1(w) = Σ wⁿ A_{2n}`.
fn raw_coeffs<F: SliceFunction + ?Sized>(f: &F, sphere: Sphere2, unit: ImaginaryUnit, j_max: usize) -> Result<Vec<Quaternion>> {
    let r2 = shell_radius_sq(f, sphere, unit);
    let q0 = sphere.point(unit);
    let count = j_max / 2 + 1;
    let m = (4 * count).next_power_of_two().max(DEFAULT_SAMPLES);
    let mut g0 = Vec::with_capacity(m);
    let mut g1 = Vec::with_capacity(m);
    for idx in 0..m {
        let theta = TAU * (idx as f64 + 0.5) / m as f64;
        let w = Complex64::from_polar(r2, theta);
        let s = (w - sphere.y0 * sphere.y0).sqrt();
        let zp = Quaternion::from_slice(Complex64::new(sphere.x0, 0.0) + s, unit);
        let zm = Quaternion::from_slice(Complex64::new(sphere.x0, 0.0) - s, unit);
        let (fp, fm) = (f.eval(zp)?, f.eval(zm)?);
        let odd = (zp - zm).inv().expect("w off y0²") * (fp - fm);
        g0.push(fp - (zp - q0) * odd);
        g1.push(odd);
    }
    let coefficient = |g: &[Quaternion], n: usize| {
        let mut acc = Quaternion::ZERO;
        for (idx, v) in g.iter().enumerate() {
            let theta = TAU * (idx as f64 + 0.5) / m as f64;
            acc += Quaternion::unit_exp(unit, -(n as f64) * theta) * *v;
        }
        acc * (r2.powi(-(n as i32)) / m as f64)
    };
    Ok((0..=j_max).map(|j| coefficient(if j % 2 == 0 { &g0 } else { &g1 }, j / 2)).collect())
}

/// Pole-sphere-regularized oracle `Δ^k f`.
struct Regularized<'a, F: ?Sized> {
    f: &'a F,
    sphere: Sphere2,
    k: usize,
}

impl<F: SliceFunction + ?Sized> SliceFunction for Regularized<'_, F> {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        Ok(self.sphere.delta(q).powi(self.k as u32) * self.f.eval(q)?)
    }

    fn pole_spheres(&self, near: Quaternion, radius: f64) -> Option<Vec<Sphere2>> {
        let mut out = self.f.pole_spheres(near, radius)?;
        if self.k > 0 {
            out.retain(|s| *s != self.sphere);
        }
        Some(out)
    }
}

/// Probe units for approach paths.
fn probe_units() -> [ImaginaryUnit; 4] {
    let s = 1.0 / 3f64.sqrt();
    [
        ImaginaryUnit::I,
        ImaginaryUnit::J,
        ImaginaryUnit::K,
        ImaginaryUnit::new(Quaternion::new(0.0, s, -s, s)).expect("nonzero"),
    ]
}

/// Whether `|f|` stays bounded along approach paths onto the sphere: the
/// maximum over 4 slices × 8 directions must not grow by more than 2× from
/// distance 1e-3 to 1e-4.
fn bounded_near<F: SliceFunction + ?Sized>(f: &F, sphere: Sphere2) -> Result<bool> {
    let sup = |t: f64| -> Result<f64> {
        let mut m: f64 = 0.0;
        for unit in probe_units() {
            for p in sphere.slice_points(unit) {
                for d in 0..8 {
                    let phi = TAU * d as f64 / 8.0 + 0.1;
                    let v = f.eval(p + Quaternion::unit_exp(unit, phi) * t)?;
                    m = m.max(v.norm());
                }
            }
        }
        Ok(m)
    };
    let (far, near) = (sup(1e-3)?, sup(1e-4)?);
    if !(far.is_finite() && near.is_finite()) {
        return Ok(false);
    }
    Ok(near <= 2.0 * far + 1e-300)
}

/// Spherical Laurent expansion with pole-order parameter `k`, coefficients
/// `A_0..A_{j_max}`.
pub fn spherical_laurent<F: SliceFunction + ?Sized>(
    f: &F,
    sphere: Sphere2,
    q0: Quaternion,
    k: usize,
    j_max: usize,
) -> Result<SphericalExpansion> {
    let unit = check_on_sphere(sphere, q0)?;
    let g = Regularized { f, sphere, k };
    if !bounded_near(&g, sphere)? {
        return Err(Error::NotRegular(format!("pole at {sphere} has spherical order above {}", 2 * k)));
    }
    let coeffs = raw_coeffs(&g, sphere, unit, j_max)?;
    let mut exp = SphericalExpansion { sphere, q0: sphere.point(unit), k, coeffs, radius: 0.0 };
    exp.radius = exp.certify_radius(f, start_radius(&g, sphere, unit), 1e-5, 0);
    Ok(exp)
}

/// Minimal `k ≤ k_max` with `Δ^k f` bounded near the sphere.
pub fn pole_order<F: SliceFunction + ?Sized>(f: &F, sphere: Sphere2, k_max: usize) -> Result<usize> {
    for k in 0..=k_max {
        if bounded_near(&Regularized { f, sphere, k }, sphere)? {
            return Ok(k);
        }
    }
    Err(Error::OrderExceedsBound(k_max))
}

/// Principal part at `sphere`, reference point `x0 + y0 i`.
pub fn extract_principal_part<F: SliceFunction + ?Sized>(f: &F, sphere: Sphere2, k_max: usize) -> Result<PrincipalPart> {
    extract_principal_part_at(f, sphere, ImaginaryUnit::I, k_max)
}

pub fn extract_principal_part_at<F: SliceFunction + ?Sized>(
    f: &F,
    sphere: Sphere2,
    unit: ImaginaryUnit,
    k_max: usize,
) -> Result<PrincipalPart> {
    let k = pole_order(f, sphere, k_max)?;
    if k == 0 {
        return Ok(PrincipalPart::new(sphere, unit, Vec::new()));
    }
    let g = Regularized { f, sphere, k };
    let coeffs = raw_coeffs(&g, sphere, unit, 2 * k - 1)?;
    let exp = SphericalExpansion { sphere, q0: sphere.point(unit), k, coeffs, radius: 0.0 };
    Ok(exp.principal_part())
}
