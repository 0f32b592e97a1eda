//! Quaternions and imaginary units.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A quaternion `x0 + x1 i + x2 j + x3 k` over the scalar field `T`.
#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct Quat<T> {
    pub x0: T,
    pub x1: T,
    pub x2: T,
    pub x3: T,
}

/// Double-precision quaternion, the working type of the toolkit.
pub type Quaternion = Quat<f64>;

impl<T: Scalar> Quat<T> {
    pub fn new(x0: T, x1: T, x2: T, x3: T) -> Self {
        Quat { x0, x1, x2, x3 }
    }

    pub fn zero() -> Self {
        Self::real(T::zero())
    }

    pub fn one() -> Self {
        Self::real(T::one())
    }

    pub fn real(x: T) -> Self {
        Quat::new(x, T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Quat::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Quat::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Quat::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    pub fn from_f64(q: Quaternion) -> Self {
        Quat::new(T::from_f64(q.x0), T::from_f64(q.x1), T::from_f64(q.x2), T::from_f64(q.x3))
    }

    pub fn to_f64(&self) -> Quaternion {
        Quat::new(self.x0.to_f64(), self.x1.to_f64(), self.x2.to_f64(), self.x3.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.x0.is_zero() && self.x1.is_zero() && self.x2.is_zero() && self.x3.is_zero()
    }

    pub fn conj(&self) -> Self {
        Quat::new(self.x0.clone(), -self.x1.clone(), -self.x2.clone(), -self.x3.clone())
    }

    pub fn norm_sqr(&self) -> T {
        self.x0.clone() * self.x0.clone()
            + self.x1.clone() * self.x1.clone()
            + self.x2.clone() * self.x2.clone()
            + self.x3.clone() * self.x3.clone()
    }

    pub fn scale(&self, s: &T) -> Self {
        Quat::new(
            self.x0.clone() * s.clone(),
            self.x1.clone() * s.clone(),
            self.x2.clone() * s.clone(),
            self.x3.clone() * s.clone(),
        )
    }

    /// Multiplicative inverse `q̄ / |q|²`. Returns `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(Quat::new(
            c.x0 / n.clone(),
            c.x1 / n.clone(),
            c.x2 / n.clone(),
            c.x3 / n,
        ))
    }

    /// Largest absolute component, as a double.
    pub fn max_abs(&self) -> f64 {
        [&self.x0, &self.x1, &self.x2, &self.x3]
            .iter()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quat { x0: 0.0, x1: 0.0, x2: 0.0, x3: 0.0 };
    pub const ONE: Quaternion = Quat { x0: 1.0, x1: 0.0, x2: 0.0, x3: 0.0 };
    pub const I: Quaternion = Quat { x0: 0.0, x1: 1.0, x2: 0.0, x3: 0.0 };
    pub const J: Quaternion = Quat { x0: 0.0, x1: 0.0, x2: 1.0, x3: 0.0 };
    pub const K: Quaternion = Quat { x0: 0.0, x1: 0.0, x2: 0.0, x3: 1.0 };

    pub fn from_array(a: [f64; 4]) -> Self {
        Quat::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    pub fn norm(&self) -> f64 {
        // hypot-style scaling keeps huge and tiny values finite
        let m = self.max_abs();
        if m == 0.0 || !m.is_finite() {
            return m;
        }
        let s = Quat::new(self.x0 / m, self.x1 / m, self.x2 / m, self.x3 / m);
        m * s.norm_sqr().sqrt()
    }

    pub fn re(&self) -> f64 {
        self.x0
    }

    pub fn im(&self) -> Quaternion {
        Quat::new(0.0, self.x1, self.x2, self.x3)
    }

    pub fn im_norm(&self) -> f64 {
        self.im().norm()
    }

    pub fn is_real(&self) -> bool {
        self.x1 == 0.0 && self.x2 == 0.0 && self.x3 == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.x0.is_finite() && self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// Splits `q = x + y I` with `y = |Im q| ≥ 0`; `I` is `None` iff `q` is real.
    pub fn decompose(&self) -> (f64, f64, Option<ImaginaryUnit>) {
        let y = self.im_norm();
        if y == 0.0 {
            (self.x0, 0.0, None)
        } else {
            let u = self.im() / y;
            (self.x0, y, Some(ImaginaryUnit(u)))
        }
    }

    /// The point `z.re + z.im · I` of the slice `L_I`.
    pub fn from_slice(z: Complex64, unit: ImaginaryUnit) -> Self {
        Quaternion::real(z.re) + unit.0 * z.im
    }

    /// Coordinates of `self` in the slice `L_I`, if it lies there within `tol`.
    pub fn to_slice(&self, unit: ImaginaryUnit, tol: f64) -> Option<Complex64> {
        let im = self.im();
        let y = im.x1 * unit.0.x1 + im.x2 * unit.0.x2 + im.x3 * unit.0.x3;
        let resid = (im - unit.0 * y).norm();
        if resid <= tol * (1.0 + self.norm()) {
            Some(Complex64::new(self.x0, y))
        } else {
            None
        }
    }

    pub fn approx_eq(&self, other: &Quaternion, tol: f64) -> bool {
        (*self - *other).norm() <= tol
    }

    /// Uniform random quaternion with components in `[-r, r]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, r: f64) -> Self {
        Quat::new(
            rng.gen_range(-r..=r),
            rng.gen_range(-r..=r),
            rng.gen_range(-r..=r),
            rng.gen_range(-r..=r),
        )
    }

    /// Exponential `e^{θ I}` of the slice unit, as a quaternion.
    pub fn unit_exp(unit: ImaginaryUnit, theta: f64) -> Self {
        Quaternion::real(theta.cos()) + unit.0 * theta.sin()
    }
}

impl<T: Scalar> Add for Quat<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Quat::new(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl<T: Scalar> Sub for Quat<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Quat::new(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl<T: Scalar> Neg for Quat<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Quat::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

impl<T: Scalar> AddAssign for Quat<T> {
    fn add_assign(&mut self, o: Self) {
        *self = self.clone() + o;
    }
}

impl<T: Scalar> SubAssign for Quat<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = self.clone() - o;
    }
}

/// Hamilton product.
impl<T: Scalar> Mul for Quat<T> {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = self;
        let x0 = a.x0.clone() * b.x0.clone()
            - a.x1.clone() * b.x1.clone()
            - a.x2.clone() * b.x2.clone()
            - a.x3.clone() * b.x3.clone();
        let x1 = a.x0.clone() * b.x1.clone() + a.x1.clone() * b.x0.clone() + a.x2.clone() * b.x3.clone()
            - a.x3.clone() * b.x2.clone();
        let x2 = a.x0.clone() * b.x2.clone() - a.x1.clone() * b.x3.clone()
            + a.x2.clone() * b.x0.clone()
            + a.x3.clone() * b.x1.clone();
        let x3 = a.x0 * b.x3 + a.x1 * b.x2 - a.x2 * b.x1 + a.x3 * b.x0;
        Quat::new(x0, x1, x2, x3)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quat::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        Quat::new(self.x0 / s, self.x1 / s, self.x2 / s, self.x3 / s)
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Self {
        iter.fold(Quaternion::ZERO, |a, b| a + b)
    }
}

/// An element `I` of the unit sphere `𝕊 = {q : q² = -1}` of imaginary units.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ImaginaryUnit(Quaternion);

impl ImaginaryUnit {
    pub const I: ImaginaryUnit = ImaginaryUnit(Quaternion::I);
    pub const J: ImaginaryUnit = ImaginaryUnit(Quaternion::J);
    pub const K: ImaginaryUnit = ImaginaryUnit(Quaternion::K);

    /// Normalizes the imaginary part of `q`. Fails when it vanishes.
    pub fn new(q: Quaternion) -> Result<Self> {
        let im = q.im();
        let n = im.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidInput(format!("{q} has no imaginary direction")));
        }
        Ok(ImaginaryUnit(im / n))
    }

    pub fn as_quat(&self) -> Quaternion {
        self.0
    }

    /// Uniformly distributed on 𝕊.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v = Quaternion::new(
                0.0,
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
            );
            let n = v.norm();
            if n > 1e-3 && n <= 1.0 {
                return ImaginaryUnit(v / n);
            }
        }
    }
}

impl Neg for ImaginaryUnit {
    type Output = ImaginaryUnit;
    fn neg(self) -> ImaginaryUnit {
        ImaginaryUnit(-self.0)
    }
}

impl fmt::Display for ImaginaryUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<'de> Deserialize<'de> for ImaginaryUnit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let q = Quaternion::deserialize(d)?;
        // already-unit input is kept bit for bit
        if q.x0 == 0.0 && (q.norm() - 1.0).abs() <= 4.0 * f64::EPSILON {
            return Ok(ImaginaryUnit(q));
        }
        ImaginaryUnit::new(q).map_err(serde::de::Error::custom)
    }
}

impl Serialize for ImaginaryUnit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        <[f64; 4]>::deserialize(d).map(Quaternion::from_array)
    }
}

impl fmt::Display for Quaternion {
    /// `a+bi+cj+dk`, omitting zero terms; `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (c, suffix) in [(self.x0, ""), (self.x1, "i"), (self.x2, "j"), (self.x3, "k")] {
            if c == 0.0 {
                continue;
            }
            if !out.is_empty() && (c > 0.0 || c.is_nan()) {
                out.push('+');
            }
            out.push_str(&format!("{c}{suffix}"));
        }
        if out.is_empty() {
            out.push('0');
        }
        f.pad(&out)
    }
}

impl FromStr for Quaternion {
    type Err = Error;

    /// Parses `a+bi+cj+dk` with any subset of terms, in any order, e.g.
    /// `0.5`, `-j`, `1+i+j+k`, `2.5e-1-3k`. A bare JSON array `[a,b,c,d]`
    /// is also accepted.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.starts_with('[') {
            let a: [f64; 4] = serde_json::from_str(&s)?;
            return Ok(Quaternion::from_array(a));
        }
        if s.is_empty() {
            return Err(Error::Parse("empty quaternion".into()));
        }
        let bytes = s.as_bytes();
        let mut terms = Vec::new();
        let mut start = 0;
        for idx in 1..bytes.len() {
            let c = bytes[idx];
            let prev = bytes[idx - 1];
            if (c == b'+' || c == b'-') && prev != b'e' && prev != b'E' {
                terms.push(&s[start..idx]);
                start = idx;
            }
        }
        terms.push(&s[start..]);

        let mut q = Quaternion::ZERO;
        for term in terms {
            let (body, slot) = match term.chars().last() {
                Some('i') => (&term[..term.len() - 1], 1),
                Some('j') => (&term[..term.len() - 1], 2),
                Some('k') => (&term[..term.len() - 1], 3),
                _ => (term, 0),
            };
            let value = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                b => b
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad quaternion term `{term}` in `{s}`")))?,
            };
            match slot {
                0 => q.x0 += value,
                1 => q.x1 += value,
                2 => q.x2 += value,
                _ => q.x3 += value,
            }
        }
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_q() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-10.0f64..10.0).prop_map(Quaternion::from_array)
    }

    #[test]
    fn basis_table() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(j * i, -k);
        assert_eq!(i * i, -Quaternion::ONE);
    }

    #[test]
    fn expand_product_by_hand() {
        // (1+i)(1+j) = 1 + j + i + ij = 1 + i + j + k
        let a = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        let b = Quaternion::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(a * b, Quaternion::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn decompose_examples() {
        let (x, y, u) = Quaternion::new(3.0, 0.0, 4.0, 0.0).decompose();
        assert_eq!((x, y), (3.0, 4.0));
        assert_eq!(u.unwrap(), ImaginaryUnit::J);

        let (x, y, u) = Quaternion::real(5.0).decompose();
        assert_eq!((x, y), (5.0, 0.0));
        assert!(u.is_none());

        let (x, y, u) = Quaternion::new(1.0, 1.0, 1.0, 1.0).decompose();
        let s = 1.0 / 3f64.sqrt();
        assert_eq!(x, 1.0);
        assert!((y - 3f64.sqrt()).abs() < 1e-15);
        assert!(u.unwrap().as_quat().approx_eq(&Quaternion::new(0.0, s, s, s), 1e-15));
    }

    #[test]
    fn parse_and_display() {
        let q: Quaternion = "1+i+j+k".parse().unwrap();
        assert_eq!(q, Quaternion::new(1.0, 1.0, 1.0, 1.0));
        let q: Quaternion = "-2.5e-1j + 3".parse().unwrap();
        assert_eq!(q, Quaternion::new(3.0, 0.0, -0.25, 0.0));
        let q: Quaternion = "-k".parse().unwrap();
        assert_eq!(q, -Quaternion::K);
        let q: Quaternion = "[1,2,3,4]".parse().unwrap();
        assert_eq!(q, Quaternion::new(1.0, 2.0, 3.0, 4.0));
        assert!("1+x".parse::<Quaternion>().is_err());
        assert_eq!(Quaternion::new(1.0, -2.0, 0.0, 0.5).to_string(), "1-2i+0.5k");
        assert_eq!(Quaternion::ZERO.to_string(), "0");
    }

    #[test]
    fn unit_squares_to_minus_one() {
        let u = ImaginaryUnit::new(Quaternion::new(7.0, 1.0, -2.0, 2.0)).unwrap();
        assert!((u.as_quat() * u.as_quat()).approx_eq(&-Quaternion::ONE, 1e-15));
        assert!(ImaginaryUnit::new(Quaternion::real(2.0)).is_err());
    }

    proptest! {
        #[test]
        fn norm_multiplicative(a in arb_q(), b in arb_q()) {
            let lhs = (a * b).norm();
            let rhs = a.norm() * b.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs.max(1.0));
        }

        #[test]
        fn associative(a in arb_q(), b in arb_q(), c in arb_q()) {
            let l = (a * b) * c;
            let r = a * (b * c);
            prop_assert!(l.approx_eq(&r, 1e-11 * (1.0 + l.norm())));
        }

        #[test]
        fn conj_product_is_norm(a in arb_q()) {
            let p = a * a.conj();
            prop_assert!(p.approx_eq(&Quaternion::real(a.norm_sqr()), 1e-12 * (1.0 + a.norm_sqr())));
            prop_assert_eq!(a * Quaternion::ONE, a);
        }

        #[test]
        fn display_parse_round_trip(a in arb_q()) {
            let back: Quaternion = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
