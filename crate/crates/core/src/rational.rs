//! Semiregular rational functions `d^{-1} * N` with a real-coefficient,
//! factored denominator `d`, principal parts at spheres, pole extraction and
//! certified Taylor truncation.
//!
//! Because `d` has real coefficients it is central in the *-algebra, and its
//! value `d(q)` lies in the slice of `q`. The regular function `d^{-1} * N`
//! therefore evaluates pointwise as `d(q)^{-1} N(q)` (left factor).

use std::cmp::Ordering;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::Sphere2;
use crate::quat::{ImaginaryUnit, Quat, Quaternion};
use crate::scalar::Scalar;
use crate::star_poly::{StarPoly, TruncatedSeries};

/// An irreducible real factor of a denominator.
#[derive(Clone, Debug, PartialEq)]
pub enum DenFactor<T: Scalar = f64> {
    /// `q - r`.
    RealRoot { r: T },
    /// `(q - x0)² + y0²` with `y0 > 0`.
    Sphere { x0: T, y0: T },
}

impl<T: Scalar> DenFactor<T> {
    /// Monic coefficients, constant term first.
    pub fn poly(&self) -> Vec<T> {
        match self {
            DenFactor::RealRoot { r } => vec![-r.clone(), T::one()],
            DenFactor::Sphere { x0, y0 } => vec![
                x0.clone() * x0.clone() + y0.clone() * y0.clone(),
                -(x0.clone() + x0.clone()),
                T::one(),
            ],
        }
    }

    pub fn eval(&self, q: &Quat<T>) -> Quat<T> {
        match self {
            DenFactor::RealRoot { r } => q.clone() - Quat::real(r.clone()),
            DenFactor::Sphere { x0, y0 } => {
                let w = q.clone() - Quat::real(x0.clone());
                w.clone() * w + Quat::real(y0.clone() * y0.clone())
            }
        }
    }

    pub fn sphere(&self) -> Sphere2 {
        match self {
            DenFactor::RealRoot { r } => Sphere2::real_point(r.to_f64()),
            DenFactor::Sphere { x0, y0 } => Sphere2::new(x0.to_f64(), y0.to_f64()),
        }
    }

    /// Common modulus of the complex roots.
    pub fn root_modulus(&self) -> f64 {
        self.sphere().modulus()
    }

    fn sort_key(&self) -> (u8, f64, f64) {
        match self {
            DenFactor::RealRoot { r } => (0, r.to_f64(), 0.0),
            DenFactor::Sphere { x0, y0 } => (1, x0.to_f64(), y0.to_f64()),
        }
    }

    /// The denominator factor whose zero set is `sphere`.
    pub fn for_sphere(sphere: Sphere2) -> Self {
        if sphere.is_real_point() {
            DenFactor::RealRoot { r: T::from_f64(sphere.x0) }
        } else {
            DenFactor::Sphere { x0: T::from_f64(sphere.x0), y0: T::from_f64(sphere.y0) }
        }
    }
}

/// `d(q)^{-1} N(q)` with `d = Π factor^power` monic and real.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiRational<T: Scalar = f64> {
    num: StarPoly<T>,
    den: Vec<(DenFactor<T>, u32)>,
}

impl<T: Scalar> SemiRational<T> {
    /// Builds the canonical form: duplicate factors merged, common factors
    /// with the numerator cancelled, factors sorted.
    pub fn new(num: StarPoly<T>, den: Vec<(DenFactor<T>, u32)>) -> Result<Self> {
        if !num.center().is_zero() {
            return Err(Error::InvalidInput("numerator must be expanded at 0".into()));
        }
        let mut merged: Vec<(DenFactor<T>, u32)> = Vec::new();
        for (f, p) in den {
            let f = match f {
                DenFactor::Sphere { x0, y0 } if y0.is_zero() => {
                    // (q - x0)² is a double real root
                    merge(&mut merged, DenFactor::RealRoot { r: x0 }, 2 * p);
                    continue;
                }
                DenFactor::Sphere { x0, y0 } if y0 < T::zero() => DenFactor::Sphere { x0, y0: -y0 },
                f => f,
            };
            merge(&mut merged, f, p);
        }
        let mut out = SemiRational { num, den: merged };
        out.cancel();
        Ok(out)
    }

    pub fn from_poly(num: StarPoly<T>) -> Self {
        SemiRational { num, den: Vec::new() }
    }

    pub fn zero() -> Self {
        Self::from_poly(StarPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(StarPoly::constant(Quat::one()))
    }

    pub fn numerator(&self) -> &StarPoly<T> {
        &self.num
    }

    pub fn denominator(&self) -> &[(DenFactor<T>, u32)] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Expanded denominator, constant term first.
    pub fn den_poly(&self) -> Vec<T> {
        den_product(&self.den)
    }

    pub fn pole_spheres(&self) -> Vec<Sphere2> {
        self.den.iter().map(|(f, _)| f.sphere()).collect()
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (f, p) in self.den.iter_mut() {
            let fp = f.poly();
            while *p > 0 {
                let (quo, rem) = self.num.div_rem_real_monic(&fp);
                let scale = self.num.coeffs().iter().map(|c| c.max_abs()).fold(0.0, f64::max);
                let negligible = rem
                    .coeffs()
                    .iter()
                    .all(|c| [&c.x0, &c.x1, &c.x2, &c.x3].iter().all(|x| x.is_negligible(scale)));
                if !negligible {
                    break;
                }
                self.num = quo;
                *p -= 1;
            }
        }
        self.den.retain(|(_, p)| *p > 0);
        self.den.sort_by(|a, b| a.0.sort_key().partial_cmp(&b.0.sort_key()).unwrap_or(Ordering::Equal));
    }

    pub fn neg(&self) -> Self {
        SemiRational { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut lcm = self.den.clone();
        for (f, p) in &other.den {
            match lcm.iter_mut().find(|(g, _)| g == f) {
                Some((_, q)) => *q = (*q).max(*p),
                None => lcm.push((f.clone(), *p)),
            }
        }
        let lift = |s: &Self| {
            let extra: Vec<(DenFactor<T>, u32)> = lcm
                .iter()
                .map(|(f, p)| {
                    let have = s.den.iter().find(|(g, _)| g == f).map_or(0, |(_, q)| *q);
                    (f.clone(), p - have)
                })
                .collect();
            s.num.mul_real_poly(&den_product(&extra))
        };
        let num = lift(self).add(&lift(other)).expect("numerators share center 0");
        let mut out = SemiRational { num, den: lcm };
        out.cancel();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `(d1^{-1} N1) * (d2^{-1} N2) = (d1 d2)^{-1} (N1 * N2)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let num = self.num.star_mul(&other.num)?;
        let mut den = self.den.clone();
        for (f, p) in &other.den {
            merge(&mut den, f.clone(), *p);
        }
        let mut out = SemiRational { num, den };
        out.cancel();
        Ok(out)
    }

    pub fn mul_right(&self, a: &Quat<T>) -> Self {
        let mut out = SemiRational { num: self.num.mul_right(a), den: self.den.clone() };
        out.cancel();
        out
    }

    pub fn eval(&self, q: &Quat<T>) -> Result<Quat<T>> {
        let mut d = Quat::one();
        for (f, p) in &self.den {
            let v = f.eval(q);
            let scale = 1.0 + q.to_f64().norm_sqr() + f.root_modulus().powi(2);
            if [&v.x0, &v.x1, &v.x2, &v.x3].iter().all(|c| c.is_negligible(1e-2 * scale)) {
                return Err(Error::Pole(q.to_f64().to_string(), f.sphere()));
            }
            for _ in 0..*p {
                d = d * v.clone();
            }
        }
        let dinv = d
            .inv()
            .ok_or_else(|| Error::Pole(q.to_f64().to_string(), Sphere2::through(q.to_f64())))?;
        Ok(dinv * self.num.eval(q))
    }

    /// Writes `f = ((q - x0)² + y0²)^{-k} g` with the denominator of `g`
    /// coprime to the sphere's factor; `k = 0` when the sphere is not a pole.
    pub fn pole_extract(&self, sphere: Sphere2) -> (u32, Self) {
        let target = DenFactor::<T>::for_sphere(sphere);
        let Some(pos) = self.den.iter().position(|(f, _)| f.sphere() == target.sphere()) else {
            return (0, self.clone());
        };
        let p = self.den[pos].1;
        let mut den = self.den.clone();
        den.remove(pos);
        let (k, num) = if sphere.is_real_point() {
            // ((q - x0)²)^k g with 2k ≥ p
            let k = p.div_ceil(2);
            let lin = DenFactor::<T>::RealRoot { r: T::from_f64(sphere.x0) }.poly();
            let mut num = self.num.clone();
            for _ in 0..(2 * k - p) {
                num = num.mul_real_poly(&lin);
            }
            (k, num)
        } else {
            (p, self.num.clone())
        };
        (k, SemiRational { num, den })
    }

    /// Multiplies by `((q - x0)² + y0²)^k`.
    pub fn mul_sphere_power(&self, sphere: Sphere2, k: u32) -> Self {
        let f = DenFactor::<T>::for_sphere(sphere);
        let power = if sphere.is_real_point() { 2 * k } else { k };
        let mut num = self.num.clone();
        let fp = f.poly();
        for _ in 0..power {
            num = num.mul_real_poly(&fp);
        }
        let mut out = SemiRational { num, den: self.den.clone() };
        out.cancel();
        out
    }
}

fn merge<T: Scalar>(den: &mut Vec<(DenFactor<T>, u32)>, f: DenFactor<T>, p: u32) {
    if p == 0 {
        return;
    }
    match den.iter_mut().find(|(g, _)| *g == f) {
        Some((_, q)) => *q += p,
        None => den.push((f, p)),
    }
}

fn real_poly_mul<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    let mut c = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] = c[i + j].clone() + x.clone() * y.clone();
        }
    }
    c
}

fn den_product<T: Scalar>(den: &[(DenFactor<T>, u32)]) -> Vec<T> {
    let mut acc = vec![T::one()];
    for (f, p) in den {
        let fp = f.poly();
        for _ in 0..*p {
            acc = real_poly_mul(&acc, &fp);
        }
    }
    acc
}

/// A principal part at a sphere,
/// `P(q) = Σ_{n=1}^{k} ((q - x0)² + y0²)^{-n} [A_{2n} + (q - q0) A_{2n+1}]`,
/// with `q0 = x0 + y0 I` for the stored unit `I`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalPart {
    pub sphere: Sphere2,
    pub unit: ImaginaryUnit,
    /// `pairs[n - 1] = (A_{2n}, A_{2n+1})`.
    pub pairs: Vec<(Quaternion, Quaternion)>,
}

impl PrincipalPart {
    /// Trailing zero pairs are dropped so that the top pair is nonzero.
    pub fn new(sphere: Sphere2, unit: ImaginaryUnit, mut pairs: Vec<(Quaternion, Quaternion)>) -> Self {
        while pairs.last().is_some_and(|(a, b)| a.norm() == 0.0 && b.norm() == 0.0) {
            pairs.pop();
        }
        PrincipalPart { sphere, unit, pairs }
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    pub fn q0(&self) -> Quaternion {
        self.sphere.point(self.unit)
    }

    pub fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        if self.pairs.is_empty() {
            return Ok(Quaternion::ZERO);
        }
        let delta = self.sphere.delta(q);
        let scale = 1.0 + q.norm_sqr() + self.sphere.modulus().powi(2);
        if delta.norm() <= 1e-14 * scale {
            return Err(Error::Pole(q.to_string(), self.sphere));
        }
        let dinv = delta.inv().expect("nonzero");
        let w = q - self.q0();
        let mut pow = Quaternion::ONE;
        let mut acc = Quaternion::ZERO;
        for (a, b) in &self.pairs {
            pow = pow * dinv;
            acc += pow * (*a + w * *b);
        }
        Ok(acc)
    }

    /// Exact rational form with denominator `((q - x0)² + y0²)^k`.
    pub fn to_rational<T: Scalar>(&self) -> SemiRational<T> {
        let k = self.k() as u32;
        if k == 0 {
            return SemiRational::zero();
        }
        let factor = DenFactor::<T>::for_sphere(self.sphere);
        let fp = if self.sphere.is_real_point() {
            real_poly_mul(&factor.poly(), &factor.poly())
        } else {
            factor.poly()
        };
        let q0 = Quat::<T>::from_f64(self.q0());
        let mut num = StarPoly::<T>::zero();
        for (idx, (a, b)) in self.pairs.iter().enumerate() {
            let n = idx as u32 + 1;
            let (a, b) = (Quat::<T>::from_f64(*a), Quat::<T>::from_f64(*b));
            // A + (q - q0) B
            let lin = StarPoly::new(vec![a - q0.clone() * b.clone(), b]);
            let mut term = lin;
            for _ in 0..(k - n) {
                term = term.mul_real_poly(&fp);
            }
            num = num.add(&term).expect("center 0");
        }
        let power = if self.sphere.is_real_point() { 2 * k } else { k };
        SemiRational::new(num, vec![(factor, power)]).expect("center 0")
    }

    /// The point of the sphere where `A_{2k} + (q - q0) A_{2k+1}` vanishes, if
    /// any. The spherical order can drop there; this is a heuristic marker.
    pub fn exceptional_point(&self) -> Option<Quaternion> {
        let (a, b) = *self.pairs.last()?;
        let binv = b.inv()?;
        let q = self.q0() - a * binv;
        self.sphere.contains(q, 1e-9 * (1.0 + self.sphere.modulus())).then_some(q)
    }

    /// Max coefficient distance to `other` (pairs padded with zeros).
    pub fn distance(&self, other: &PrincipalPart) -> f64 {
        let n = self.k().max(other.k());
        let z = (Quaternion::ZERO, Quaternion::ZERO);
        (0..n)
            .map(|i| {
                let (a, b) = self.pairs.get(i).copied().unwrap_or(z);
                let (c, d) = other.pairs.get(i).copied().unwrap_or(z);
                (a - c).norm().max((b - d).norm())
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
struct PrincipalJson {
    x0: f64,
    y0: f64,
    k: usize,
    #[serde(rename = "A")]
    a: Vec<Quaternion>,
    #[serde(default)]
    q0_unit: Option<ImaginaryUnit>,
}

impl Serialize for PrincipalPart {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PrincipalJson {
            x0: self.sphere.x0,
            y0: self.sphere.y0,
            k: self.k(),
            a: self.pairs.iter().flat_map(|(a, b)| [*a, *b]).collect(),
            q0_unit: Some(self.unit),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PrincipalPart {
    /// `A` lists `A_2, A_3, ..., A_{2k+1}`; the unit defaults to `i`.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PrincipalJson::deserialize(d)?;
        if j.a.len() != 2 * j.k {
            return Err(D::Error::custom(format!("expected {} coefficients for k = {}, got {}", 2 * j.k, j.k, j.a.len())));
        }
        if !(j.x0.is_finite() && j.y0.is_finite()) {
            return Err(D::Error::custom("non-finite sphere"));
        }
        let pairs = j.a.chunks(2).map(|c| (c[0], c[1])).collect();
        Ok(PrincipalPart::new(Sphere2::new(j.x0, j.y0), j.q0_unit.unwrap_or(ImaginaryUnit::I), pairs))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum FactorJson {
    Sphere { x0: f64, y0: f64, power: u32 },
    RealRoot { r: f64, power: u32 },
}

#[derive(Serialize, Deserialize)]
struct RationalJson {
    num: StarPoly,
    #[serde(default)]
    den: Vec<FactorJson>,
}

impl Serialize for SemiRational<f64> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let den = self
            .den
            .iter()
            .map(|(f, p)| match f {
                DenFactor::RealRoot { r } => FactorJson::RealRoot { r: *r, power: *p },
                DenFactor::Sphere { x0, y0 } => FactorJson::Sphere { x0: *x0, y0: *y0, power: *p },
            })
            .collect();
        RationalJson { num: self.num.clone(), den }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SemiRational<f64> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = RationalJson::deserialize(d)?;
        let num = j.num.expand_at_zero();
        let den = j
            .den
            .into_iter()
            .map(|f| match f {
                FactorJson::RealRoot { r, power } => (DenFactor::RealRoot { r }, power),
                FactorJson::Sphere { x0, y0, power } => (DenFactor::Sphere { x0, y0 }, power),
            })
            .collect();
        SemiRational::new(num, den).map_err(D::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Certified Taylor truncation

/// Power series of `f(s·u)` in `u`, coefficients `0..len`.
fn scaled_series(f: &SemiRational, s: f64, len: usize) -> Vec<Quaternion> {
    // d(s u) = C · P(u) with P(0) = 1
    let mut c_const = 1.0;
    let mut p = vec![1.0];
    for (fac, pow) in &f.den {
        let normalized = match fac {
            DenFactor::RealRoot { r } => {
                c_const *= (-r).powi(*pow as i32);
                vec![1.0, -s / r]
            }
            DenFactor::Sphere { x0, y0 } => {
                let n = x0 * x0 + y0 * y0;
                c_const *= n.powi(*pow as i32);
                vec![1.0, -2.0 * x0 * s / n, s * s / n]
            }
        };
        for _ in 0..*pow {
            p = real_poly_mul(&p, &normalized);
        }
    }
    // 1/P(u) by the linear recurrence c_m = -Σ_{j≥1} P_j c_{m-j}
    let mut inv = vec![0.0; len];
    if len > 0 {
        inv[0] = 1.0;
    }
    for m in 1..len {
        let mut acc = 0.0;
        for (j, pj) in p.iter().enumerate().skip(1).take(m) {
            acc -= pj * inv[m - j];
        }
        inv[m] = acc;
    }
    let mut sj = 1.0;
    let num: Vec<Quaternion> = f
        .num
        .coeffs()
        .iter()
        .map(|a| {
            let out = *a * (sj / c_const);
            sj *= s;
            out
        })
        .collect();
    let mut out = vec![Quaternion::ZERO; len];
    for (j, a) in num.iter().enumerate() {
        for (m, slot) in out.iter_mut().enumerate().skip(j) {
            *slot += *a * inv[m - j];
        }
    }
    out
}

/// Upper bound for `sup_{|q| = r} |f(q)|`, valid below the smallest pole modulus.
fn sup_bound(f: &SemiRational, r: f64) -> f64 {
    let num: f64 = f.num.coeffs().iter().rev().fold(0.0, |acc, a| acc * r + a.norm());
    let den: f64 = f
        .den
        .iter()
        .map(|(fac, p)| {
            let gap = fac.root_modulus() - r;
            let per = match fac {
                DenFactor::RealRoot { .. } => gap,
                DenFactor::Sphere { .. } => gap * gap,
            };
            per.powi(*p as i32)
        })
        .product();
    num / den
}

fn min_pole_modulus(f: &SemiRational) -> f64 {
    f.den.iter().map(|(fac, _)| fac.root_modulus()).fold(f64::INFINITY, f64::min)
}

/// Certified truncation of a sum of semiregular rationals. The returned tail
/// bound dominates `Σ_{m > order} |b_m|`, which bounds the sup-norm error of
/// the truncation over `|q| ≤ rho`.
pub fn taylor_truncate_sum(parts: &[SemiRational], order: usize, rho: f64) -> Result<TruncatedSeries> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidInput(format!("ball radius must be positive, got {rho}")));
    }
    for f in parts {
        for (fac, _) in &f.den {
            if fac.root_modulus() <= rho {
                return Err(Error::PoleInBall { sphere: fac.sphere(), radius: rho });
            }
        }
    }
    let mut coeffs = vec![Quaternion::ZERO; order + 1];
    let mut tail = 0.0;
    for f in parts {
        let (c, t) = truncate_one(f, order, rho);
        for (slot, v) in coeffs.iter_mut().zip(c) {
            *slot += v;
        }
        tail += t;
    }
    Ok(TruncatedSeries { scale: rho, order, radius: rho, tail_bound: tail, coeffs })
}

/// Certified Taylor truncation of `f` at 0 on the closed ball `|q| ≤ rho`.
pub fn taylor_truncate(f: &SemiRational, order: usize, rho: f64) -> Result<TruncatedSeries> {
    taylor_truncate_sum(std::slice::from_ref(f), order, rho)
}

fn truncate_one(f: &SemiRational, order: usize, rho: f64) -> (Vec<Quaternion>, f64) {
    if f.den.is_empty() {
        let series = scaled_series(f, rho, f.num.coeffs().len().max(order + 1));
        let tail = series.iter().skip(order + 1).map(|b| b.norm()).sum();
        let mut head = series;
        head.truncate(order + 1);
        return (head, tail);
    }
    // Cauchy estimate on |q| = t·rho: |b_m| ≤ M(t) t^{-m}
    let ratio = min_pole_modulus(f) / rho;
    let (t, m_t) = (1..40)
        .map(|i| {
            let t = 1.0 + (ratio - 1.0) * i as f64 / 40.0;
            (t, sup_bound(f, t * rho))
        })
        .min_by(|a, b| {
            let ka = a.1.ln() - (order as f64 + 1.0) * a.0.ln();
            let kb = b.1.ln() - (order as f64 + 1.0) * b.0.ln();
            ka.partial_cmp(&kb).unwrap_or(Ordering::Equal)
        })
        .expect("nonempty grid");
    let geo = 1.0 / (1.0 - 1.0 / t);
    // explicit terms until the Cauchy remainder is negligible
    let extra = ((m_t * geo / 1e-30).ln() / t.ln()).ceil().max(16.0) as usize;
    let len = order + 1 + extra.min(400_000);
    let series = scaled_series(f, rho, len);
    let cauchy = m_t * geo * t.powf(-(len as f64));
    let explicit: f64 = series.iter().skip(order + 1).map(|b| b.norm()).sum();
    let mut head = series;
    head.truncate(order + 1);
    (head, explicit + cauchy)
}
