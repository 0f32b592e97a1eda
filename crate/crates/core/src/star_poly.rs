//! Polynomials `Σ (q - q0)^{*n} a_n` with right quaternion coefficients under
//! the *-product, plus truncated series with stored tail bounds and slice
//! Laurent coefficient blocks.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::same_plane;
use crate::quat::{Quat, Quaternion};
use crate::scalar::Scalar;

/// Degree limit enforced by *-multiplication and *-powers.
pub const DEFAULT_DEGREE_CAP: usize = 512;

/// `f(q) = Σ_n (q - center)^{*n} a_n`, coefficients on the right.
#[derive(Clone, Debug, PartialEq)]
pub struct StarPoly<T: Scalar = f64> {
    coeffs: Vec<Quat<T>>,
    center: Quat<T>,
}

impl<T: Scalar> StarPoly<T> {
    /// Centered at 0. Trailing zero coefficients are dropped.
    pub fn new(coeffs: Vec<Quat<T>>) -> Self {
        Self::with_center(coeffs, Quat::zero())
    }

    pub fn with_center(mut coeffs: Vec<Quat<T>>, center: Quat<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        StarPoly { coeffs, center }
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn constant(a: Quat<T>) -> Self {
        Self::new(vec![a])
    }

    /// `q ↦ q - q0`, expanded at 0.
    pub fn linear(q0: Quat<T>) -> Self {
        Self::new(vec![-q0, Quat::one()])
    }

    /// Real-coefficient polynomial `Σ q^n c_n`.
    pub fn from_real(c: &[T]) -> Self {
        Self::new(c.iter().map(|x| Quat::real(x.clone())).collect())
    }

    pub fn coeffs(&self) -> &[Quat<T>] {
        &self.coeffs
    }

    pub fn center(&self) -> &Quat<T> {
        &self.center
    }

    pub fn coeff(&self, n: usize) -> Quat<T> {
        self.coeffs.get(n).cloned().unwrap_or_else(Quat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn has_real_coeffs(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.x1.is_zero() && c.x2.is_zero() && c.x3.is_zero())
    }

    fn check_center(&self, other: &Self) -> Result<()> {
        if self.center != other.center {
            return Err(Error::CenterMismatch(
                self.center.to_f64().to_string(),
                other.center.to_f64().to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_center(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Ok(Self::with_center(c, self.center.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let c = self.coeffs.iter().map(|a| -a.clone()).collect();
        Self::with_center(c, self.center.clone())
    }

    /// `f * a` for a constant `a`: every coefficient multiplied on the right.
    pub fn mul_right(&self, a: &Quat<T>) -> Self {
        let c = self.coeffs.iter().map(|x| x.clone() * a.clone()).collect();
        Self::with_center(c, self.center.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        let c = self.coeffs.iter().map(|x| x.scale(s)).collect();
        Self::with_center(c, self.center.clone())
    }

    /// The *-product: `c_n = Σ_{k=0}^{n} a_k b_{n-k}`.
    pub fn star_mul(&self, other: &Self) -> Result<Self> {
        self.star_mul_capped(other, DEFAULT_DEGREE_CAP)
    }

    pub fn star_mul_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        self.check_center(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::with_center(Vec::new(), self.center.clone()));
        }
        let degree = self.coeffs.len() + other.coeffs.len() - 2;
        if degree > cap {
            return Err(Error::DegreeCap { degree, cap });
        }
        let mut c = vec![Quat::zero(); degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a.clone() * b.clone();
            }
        }
        Ok(Self::with_center(c, self.center.clone()))
    }

    /// Product with a real-coefficient polynomial (central, so order is irrelevant).
    pub fn mul_real_poly(&self, r: &[T]) -> Self {
        if self.is_zero() || r.is_empty() {
            return Self::with_center(Vec::new(), self.center.clone());
        }
        let mut c = vec![Quat::zero(); self.coeffs.len() + r.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, s) in r.iter().enumerate() {
                c[i + j] += a.scale(s);
            }
        }
        Self::with_center(c, self.center.clone())
    }

    /// Long division by a monic real polynomial: `self = d * quotient + remainder`.
    pub fn div_rem_real_monic(&self, d: &[T]) -> (Self, Self) {
        let dd = d.len() - 1;
        debug_assert!(d[dd] == T::one());
        if self.coeffs.len() <= dd {
            return (Self::with_center(Vec::new(), self.center.clone()), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Quat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let lead = rem[k + dd].clone();
            for (j, dj) in d.iter().enumerate() {
                rem[k + j] -= lead.scale(dj);
            }
            quot[k] = lead;
        }
        rem.truncate(dd);
        (
            Self::with_center(quot, self.center.clone()),
            Self::with_center(rem, self.center.clone()),
        )
    }

    /// Synthetic division by `q - q0`: `self = remainder + (q - q0) * quotient`,
    /// with `remainder = self(q0)`. Requires center 0.
    pub fn star_divide_linear(&self, q0: &Quat<T>) -> Result<(Self, Quat<T>)> {
        if !self.center.is_zero() {
            return Err(Error::CenterMismatch(self.center.to_f64().to_string(), "0".into()));
        }
        let n = self.coeffs.len();
        if n == 0 {
            return Ok((Self::zero(), Quat::zero()));
        }
        // f_m = h_{m-1} - q0 h_m, solved from the top
        let mut h = vec![Quat::zero(); n - 1];
        let mut carry = self.coeffs[n - 1].clone();
        for m in (1..n).rev() {
            h[m - 1] = carry.clone();
            carry = self.coeffs[m - 1].clone() + q0.clone() * carry;
        }
        Ok((Self::new(h), carry))
    }

    /// Equivalent expansion about `new_center`.
    ///
    /// Both centers must lie on a common plane `L_I` (or one be real).
    pub fn recenter(&self, new_center: &Quat<T>) -> Result<Self> {
        let (a, b) = (self.center.to_f64(), new_center.to_f64());
        if !same_plane(a, b) {
            return Err(Error::NotOnCommonPlane(a.to_string(), b.to_string()));
        }
        if &self.center == new_center {
            return Ok(self.clone());
        }
        let at_zero = self.expand_at_zero();
        if new_center.is_zero() {
            return Ok(at_zero);
        }
        // q^m = ((q - c) + c)^{*m} = Σ_n C(m,n) (q - c)^{*n} c^{m-n}
        let n = at_zero.coeffs.len();
        let powers = powers_of(new_center, n);
        let mut d = vec![Quat::zero(); n];
        for (m, bm) in at_zero.coeffs.iter().enumerate() {
            let mut binom = T::one();
            for (k, dk) in d.iter_mut().enumerate().take(m + 1) {
                *dk += (powers[m - k].clone() * bm.clone()).scale(&binom);
                binom = binom * T::from_i64((m - k) as i64) / T::from_i64((k + 1) as i64);
            }
        }
        Ok(Self::with_center(d, new_center.clone()))
    }

    /// Coefficients of the same function expanded at 0.
    pub fn expand_at_zero(&self) -> Self {
        if self.center.is_zero() {
            return self.clone();
        }
        // (q - c)^{*n} = Σ_m C(n,m) q^m (-c)^{n-m}
        let n = self.coeffs.len();
        let powers = powers_of(&-self.center.clone(), n);
        let mut out = vec![Quat::zero(); n];
        for (deg, an) in self.coeffs.iter().enumerate() {
            let mut binom = T::one();
            for m in 0..=deg {
                out[m] += (powers[deg - m].clone() * an.clone()).scale(&binom);
                binom = binom * T::from_i64((deg - m) as i64) / T::from_i64((m + 1) as i64);
            }
        }
        Self::new(out)
    }

    /// Pointwise value. When `q` commutes with the center the *-powers are
    /// ordinary powers of `q - center`; otherwise the expansion at 0 is used.
    pub fn eval(&self, q: &Quat<T>) -> Quat<T> {
        if self.coeffs.is_empty() {
            return Quat::zero();
        }
        let commutes = {
            let comm = q.clone() * self.center.clone() - self.center.clone() * q.clone();
            let scale = q.to_f64().norm() * self.center.to_f64().norm();
            [comm.x0, comm.x1, comm.x2, comm.x3]
                .iter()
                .all(|c| c.is_negligible(1e-3 * scale))
        };
        if commutes {
            horner(&self.coeffs, &(q.clone() - self.center.clone()))
        } else {
            horner(&self.expand_at_zero().coeffs, q)
        }
    }
}

fn powers_of<T: Scalar>(c: &Quat<T>, n: usize) -> Vec<Quat<T>> {
    let mut p = Vec::with_capacity(n.max(1));
    p.push(Quat::one());
    for k in 1..n {
        let next = p[k - 1].clone() * c.clone();
        p.push(next);
    }
    p
}

/// `Σ w^n a_n` with left powers of `w`.
pub fn horner<T: Scalar>(coeffs: &[Quat<T>], w: &Quat<T>) -> Quat<T> {
    let mut acc = Quat::zero();
    for a in coeffs.iter().rev() {
        acc = w.clone() * acc + a.clone();
    }
    acc
}

/// `(q - q0)^{*n}` expanded at 0.
pub fn star_pow<T: Scalar>(q0: &Quat<T>, n: usize) -> Result<StarPoly<T>> {
    if n > DEFAULT_DEGREE_CAP {
        return Err(Error::DegreeCap { degree: n, cap: DEFAULT_DEGREE_CAP });
    }
    let lin = StarPoly::linear(q0.clone());
    let mut acc = StarPoly::constant(Quat::one());
    for _ in 0..n {
        acc = acc.star_mul(&lin)?;
    }
    Ok(acc)
}

#[derive(Serialize, Deserialize)]
struct StarPolyJson {
    #[serde(default)]
    center: Option<Quaternion>,
    coeffs: Vec<Quaternion>,
}

impl Serialize for StarPoly<f64> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StarPolyJson { center: Some(self.center), coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StarPoly<f64> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = StarPolyJson::deserialize(d)?;
        Ok(StarPoly::with_center(j.coeffs, j.center.unwrap_or(Quaternion::ZERO)))
    }
}

/// A truncated power series `Σ_{m ≤ order} u^m b_m` in the scaled variable
/// `u = q / scale`, with a certified bound on the omitted tail over the
/// closed ball `|q| ≤ radius`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    pub scale: f64,
    pub order: usize,
    pub radius: f64,
    pub tail_bound: f64,
    pub coeffs: Vec<Quaternion>,
}

impl TruncatedSeries {
    pub fn eval(&self, q: Quaternion) -> Quaternion {
        horner(&self.coeffs, &(q / self.scale))
    }

    /// `Σ |b_m| |q/scale|^m`, the magnitude scale of a Horner evaluation.
    pub fn abs_eval(&self, q: Quaternion) -> f64 {
        let u = q.norm() / self.scale;
        self.coeffs.iter().rev().fold(0.0, |acc, b| acc * u + b.norm())
    }

    /// Coefficients in `q` itself (`b_m / scale^m`); may underflow for high orders.
    pub fn unscaled(&self) -> StarPoly {
        let mut s = 1.0;
        let c = self
            .coeffs
            .iter()
            .map(|b| {
                let out = *b * (1.0 / s);
                s *= self.scale;
                out
            })
            .collect();
        StarPoly::new(c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// Laurent block `Σ_{n=lowest}^{lowest+len-1} (q - p)^{n} a_n` about `center`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentCoeffs {
    pub center: Quaternion,
    pub lowest: i64,
    pub coeffs: Vec<Quaternion>,
}

impl LaurentCoeffs {
    pub fn coeff(&self, n: i64) -> Quaternion {
        let idx = n - self.lowest;
        if idx < 0 {
            return Quaternion::ZERO;
        }
        self.coeffs.get(idx as usize).copied().unwrap_or(Quaternion::ZERO)
    }

    /// Largest `m` with `a_{-m} ≠ 0` within `tol`, or 0.
    pub fn pole_order(&self, tol: f64) -> usize {
        (1..=(-self.lowest).max(0))
            .rev()
            .find(|&m| self.coeff(-m).norm() > tol)
            .unwrap_or(0) as usize
    }

    /// Evaluation on the slice of the center, where negative powers are
    /// pointwise inverses. Off that slice only the nonnegative part has a
    /// meaning here, so any negative term is rejected.
    pub fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        let on_slice = same_plane(q, self.center);
        if !on_slice && self.lowest < 0 {
            return Err(Error::OffSlice(q.to_string(), self.center.to_string()));
        }
        if !on_slice {
            let poly = StarPoly::with_center(self.coeffs.clone(), self.center);
            return Ok(poly.eval(&q));
        }
        let w = q - self.center;
        let winv = w
            .inv()
            .ok_or_else(|| Error::Pole(q.to_string(), crate::geometry::Sphere2::through(q)))?;
        let mut acc = Quaternion::ZERO;
        for (idx, a) in self.coeffs.iter().enumerate() {
            let n = self.lowest + idx as i64;
            let p = if n >= 0 { w.powi(n as u32) } else { winv.powi((-n) as u32) };
            acc += p * *a;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::ImaginaryUnit;
    use crate::scalar::Exact;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> Quaternion {
        s.parse().unwrap()
    }

    fn poly(cs: &[&str]) -> StarPoly {
        StarPoly::new(cs.iter().map(|s| q(s)).collect())
    }

    fn brute_convolution(a: &[Quaternion], b: &[Quaternion]) -> Vec<Quaternion> {
        let mut c = vec![Quaternion::ZERO; a.len() + b.len() - 1];
        for n in 0..c.len() {
            for k in 0..=n {
                if k < a.len() && n - k < b.len() {
                    c[n] += a[k] * b[n - k];
                }
            }
        }
        c
    }

    fn int_poly(rng: &mut ChaCha8Rng, deg: usize) -> StarPoly<Exact> {
        StarPoly::new(
            (0..=deg)
                .map(|_| {
                    Quat::new(
                        Exact::from_integer(rng.gen_range(-9..=9).into()),
                        Exact::from_integer(rng.gen_range(-9..=9).into()),
                        Exact::from_integer(rng.gen_range(-9..=9).into()),
                        Exact::from_integer(rng.gen_range(-9..=9).into()),
                    )
                })
                .collect(),
        )
    }

    #[test]
    fn product_of_linear_factors() {
        let f = StarPoly::linear(Quaternion::I);
        let g = StarPoly::linear(Quaternion::J);
        let fg = f.star_mul(&g).unwrap();
        assert_eq!(fg, poly(&["k", "-i-j", "1"]));
        let gf = g.star_mul(&f).unwrap();
        assert_ne!(fg, gf, "the *-product is not commutative");
        assert_eq!(fg.star_mul(&StarPoly::constant(Quaternion::ONE)).unwrap(), fg);
    }

    #[test]
    fn random_products_match_double_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a: Vec<_> = (0..7).map(|_| Quaternion::random(&mut rng, 3.0)).collect();
            let b: Vec<_> = (0..7).map(|_| Quaternion::random(&mut rng, 3.0)).collect();
            let got = StarPoly::new(a.clone()).star_mul(&StarPoly::new(b.clone())).unwrap();
            let want = brute_convolution(&a, &b);
            for (x, y) in got.coeffs().iter().zip(&want) {
                assert!(x.approx_eq(y, 1e-12));
            }
        }
    }

    #[test]
    fn star_powers() {
        assert_eq!(star_pow(&Quaternion::I, 2).unwrap(), poly(&["-1", "-2i", "1"]));
        assert_eq!(star_pow(&Quaternion::I, 0).unwrap(), poly(&["1"]));
        assert_eq!(star_pow(&q("3"), 2).unwrap(), poly(&["9", "-6", "1"]));
        assert!(matches!(star_pow(&Quaternion::I, 600), Err(Error::DegreeCap { .. })));
    }

    #[test]
    fn evaluation() {
        let f = poly(&["-1", "-2i", "1"]);
        assert!(f.eval(&Quaternion::J).approx_eq(&q("-2+2k"), 1e-15));
        assert_eq!(StarPoly::constant(q("1+2k")).eval(&q("5+j")), q("1+2k"));
        let s = poly(&["1", "0", "1"]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let u = ImaginaryUnit::random(&mut rng);
            assert!(s.eval(&u.as_quat()).norm() < 1e-15);
        }
    }

    #[test]
    fn zeros_of_q2_plus_1_form_the_unit_sphere() {
        let s = poly(&["1", "0", "1"]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let u = ImaginaryUnit::random(&mut rng);
            let x = rng.gen_range(-2.0..2.0);
            let y = rng.gen_range(0.1..2.0);
            let v = s.eval(&(Quaternion::real(x) + u.as_quat() * y)).norm();
            assert!(v > 1e-6, "only x+yI with (x,y)=(0,±1) are zeros");
        }
        assert!(s.eval(&-Quaternion::K).norm() < 1e-15);
    }

    #[test]
    fn divide_linear_examples() {
        let (quo, rem) = poly(&["1", "0", "1"]).star_divide_linear(&Quaternion::I).unwrap();
        assert_eq!(quo, poly(&["i", "1"]));
        assert_eq!(rem, Quaternion::ZERO);
        assert_eq!(
            StarPoly::linear(Quaternion::I).star_mul(&quo).unwrap(),
            poly(&["1", "0", "1"])
        );
        let (quo, rem) = StarPoly::constant(q("2-k")).star_divide_linear(&Quaternion::I).unwrap();
        assert!(quo.is_zero());
        assert_eq!(rem, q("2-k"));
        let (quo, rem) = poly(&["0", "1"]).star_divide_linear(&Quaternion::J).unwrap();
        assert_eq!(quo, poly(&["1"]));
        assert_eq!(rem, Quaternion::J);
    }

    #[test]
    fn recenter_examples() {
        let f = poly(&["0", "0", "1"]);
        assert_eq!(f.recenter(&Quaternion::ZERO).unwrap(), f);
        let g = f.recenter(&Quaternion::ONE).unwrap();
        assert_eq!(g.coeffs(), &[q("1"), q("2"), q("1")]);
        let a = StarPoly::with_center(vec![q("1+i"), q("2-j"), q("k")], q("0.5+2i"));
        let b = a.recenter(&q("-1+0.5i")).unwrap().recenter(&q("0.5+2i")).unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!(x.approx_eq(y, 1e-12));
        }
        assert!(matches!(a.recenter(&q("1+j")), Err(Error::NotOnCommonPlane(..))));
    }

    #[test]
    fn recentered_polys_agree_on_the_slice_and_off_it() {
        let a = StarPoly::with_center(vec![q("1+i"), q("2-j"), q("k"), q("1")], q("0.5+2i"));
        let b = a.expand_at_zero();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let p = Quaternion::random(&mut rng, 2.0);
            assert!(a.eval(&p).approx_eq(&b.eval(&p), 1e-10));
        }
    }

    #[test]
    fn exact_algebra_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let (a, b, c) = (int_poly(&mut rng, 4), int_poly(&mut rng, 3), int_poly(&mut rng, 5));
            let l = a.star_mul(&b).unwrap().star_mul(&c).unwrap();
            let r = a.star_mul(&b.star_mul(&c).unwrap()).unwrap();
            assert_eq!(l, r);
            let d = a.star_mul(&b.add(&c).unwrap()).unwrap();
            let e = a.star_mul(&b).unwrap().add(&a.star_mul(&c).unwrap()).unwrap();
            assert_eq!(d, e);
            // real-coefficient polys are central
            let real = StarPoly::<Exact>::from_real(&[Exact::from_integer(3.into()), Exact::from_integer((-2).into()), Exact::from_integer(1.into())]);
            assert_eq!(real.star_mul(&a).unwrap(), a.star_mul(&real).unwrap());
            // division reconstructs exactly
            let q0 = Quat::new(Exact::from_integer(1.into()), Exact::from_integer(2.into()), Exact::from_integer(0.into()), Exact::from_integer((-1).into()));
            let (quo, rem) = a.star_divide_linear(&q0).unwrap();
            let back = StarPoly::linear(q0.clone()).star_mul(&quo).unwrap().add(&StarPoly::constant(rem.clone())).unwrap();
            assert_eq!(back, a);
            assert_eq!(rem, a.eval(&q0));
        }
    }

    #[test]
    fn center_mismatch_is_an_error() {
        let a = StarPoly::with_center(vec![q("1")], q("i"));
        let b = StarPoly::new(vec![q("1")]);
        assert!(matches!(a.star_mul(&b), Err(Error::CenterMismatch(..))));
    }

    #[test]
    fn laurent_eval_on_slice() {
        let l = LaurentCoeffs { center: q("1+i"), lowest: -1, coeffs: vec![q("1"), q("0"), q("2")] };
        let p = q("1.5+1.5i");
        let w = p - q("1+i");
        let want = w.inv().unwrap() + w * 2.0;
        assert!(l.eval(p).unwrap().approx_eq(&want, 1e-14));
        assert!(matches!(l.eval(q("1+j")), Err(Error::OffSlice(..))));
        assert_eq!(l.pole_order(1e-12), 1);
    }

    #[test]
    fn json_shape() {
        let f = StarPoly::with_center(vec![q("1"), q("i")], q("2"));
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"center":[2.0,0.0,0.0,0.0],"coeffs":[[1.0,0.0,0.0,0.0],[0.0,1.0,0.0,0.0]]}"#);
        let back: StarPoly = serde_json::from_str(r#"{"coeffs":[[1,0,0,0]]}"#).unwrap();
        assert_eq!(back, StarPoly::constant(Quaternion::ONE));
    }

    proptest! {
        #[test]
        fn slice_evaluation_factors(
            a in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..6),
            b in prop::collection::vec(prop::array::uniform4(-3.0f64..3.0), 1..6),
            x in -1.5f64..1.5, y in -1.5f64..1.5,
        ) {
            // coefficients of f in L_i commute with points of L_i
            let f = StarPoly::new(a.iter().map(|&(r, s)| Quaternion::new(r, s, 0.0, 0.0)).collect());
            let g = StarPoly::new(b.into_iter().map(Quaternion::from_array).collect());
            let p = Quaternion::new(x, y, 0.0, 0.0);
            let lhs = f.star_mul(&g).unwrap().eval(&p);
            let rhs = f.eval(&p) * g.eval(&p);
            prop_assert!(lhs.approx_eq(&rhs, 1e-9 * (1.0 + rhs.norm())));
        }
    }
}
