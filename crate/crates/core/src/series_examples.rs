//! The two lattice series
//! `Σ_{n∈ℤ} ((q-n)²+1)^{-1}` and
//! `(q²+1)^{-1}(q-i) + Σ_{n≥1} [((q-n)²+1)^{-1}(q-n-i) + ((q+n)²+1)^{-1}(q+n-i)]`,
//! evaluated with certified tails.
//!
//! Both sums pair the `n` and `-n` terms, split off the `1/n²` asymptote,
//! which sums in closed form through the trigamma function, and bound the
//! `O(n^{-4})` remainder by an integral.

use crate::error::{Error, Result};
use crate::function::{Certified, CertifiedFunction, SliceFunction};
use crate::geometry::Sphere2;
use crate::quat::Quaternion;

/// Precision used when the series act as plain oracles.
pub const ORACLE_EPS: f64 = 1e-12;

/// `ψ'(x)` for `x ≥ 1`.
pub fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 16.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let (x2, x1) = (1.0 / (x * x), 1.0 / x);
    // asymptotic series with Bernoulli numbers
    let series = x1 + x2 / 2.0 + x1 * x2 * (1.0 / 6.0 - x2 * (1.0 / 30.0 - x2 * (1.0 / 42.0 - x2 * (1.0 / 30.0 - x2 * 5.0 / 66.0))));
    acc + series
}

/// `((q - n)² + 1)`, guarding the sphere `n + 𝕊`.
fn delta(q: Quaternion, n: f64) -> Result<Quaternion> {
    let w = q - Quaternion::real(n);
    let d = w * w + Quaternion::ONE;
    if d.norm() <= 1e-14 * (1.0 + n * n + q.norm_sqr()) {
        return Err(Error::Pole(q.to_string(), Sphere2::new(n, 1.0)));
    }
    Ok(d)
}

fn lattice_poles(near: Quaternion, radius: f64) -> Vec<Sphere2> {
    let lo = (near.re() - radius - 1.0).floor() as i64;
    let hi = (near.re() + radius + 1.0).ceil() as i64;
    (lo..=hi)
        .map(|n| Sphere2::new(n as f64, 1.0))
        .filter(|s| s.distance(near) < radius)
        .collect()
}

/// Number of paired terms needed for an integral tail `c / (3 (N - a - 1)³) ≤ eps`.
fn terms_needed(a: f64, c: f64, eps: f64) -> usize {
    let lead = (c / (3.0 * eps)).cbrt().ceil();
    (a + 2.0 + lead).ceil() as usize
}

fn rounding(n_terms: usize, magnitude: f64) -> f64 {
    4.0 * f64::EPSILON * (n_terms as f64 + 10.0) * magnitude
}

/// `Σ_{n∈ℤ} ((q-n)²+1)^{-1}`, poles at the spheres `n + 𝕊`.
#[derive(Clone, Copy, Debug)]
pub struct ZSum {
    pub eps: f64,
}

impl Default for ZSum {
    fn default() -> Self {
        ZSum { eps: ORACLE_EPS }
    }
}

impl ZSum {
    /// Symmetric partial sum over `|n| ≤ n_max`.
    pub fn partial_sum(&self, q: Quaternion, n_max: usize) -> Result<Quaternion> {
        let mut acc = delta(q, 0.0)?.inv().expect("checked");
        for n in 1..=n_max {
            let n = n as f64;
            acc += delta(q, n)?.inv().expect("checked") + delta(q, -n)?.inv().expect("checked");
        }
        Ok(acc)
    }

    /// Plain integral-comparison bound `2/(N - |q| - 1)` on the symmetric tail.
    pub fn naive_tail_bound(&self, q: Quaternion, n_max: usize) -> Option<f64> {
        let gap = n_max as f64 - q.norm() - 1.0;
        (gap > 0.0).then(|| 2.0 / gap)
    }

    /// `|T_n - 2/n²| ≤ c / (n - a - 1)⁴` with `c` returned for `n > n_max`.
    fn remainder_constant(a: f64, n_max: usize) -> f64 {
        let a2 = a * a;
        let n1 = (n_max + 1) as f64;
        (6.0 * a2 + 2.0) + 2.0 * (a2 + 1.0).powi(2) / (n1 * n1)
    }
}

impl SliceFunction for ZSum {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        Ok(self.eval_certified(q, self.eps)?.value)
    }

    fn pole_spheres(&self, near: Quaternion, radius: f64) -> Option<Vec<Sphere2>> {
        Some(lattice_poles(near, radius))
    }
}

impl CertifiedFunction for ZSum {
    fn eval_certified(&self, q: Quaternion, eps: f64) -> Result<Certified> {
        let a = q.norm();
        let mut n_max = terms_needed(a, Self::remainder_constant(a, 0), eps);
        n_max = n_max.max(terms_needed(a, Self::remainder_constant(a, n_max), eps));
        let mut acc = delta(q, 0.0)?.inv().expect("checked");
        let mut magnitude = acc.norm();
        for n in 1..=n_max {
            let nf = n as f64;
            let t = delta(q, nf)?.inv().expect("checked") + delta(q, -nf)?.inv().expect("checked");
            magnitude += t.norm();
            acc += t;
        }
        let asym = 2.0 * trigamma(n_max as f64 + 1.0);
        let c = Self::remainder_constant(a, n_max);
        let tail = c / (3.0 * (n_max as f64 - a - 1.0).powi(3));
        Ok(Certified {
            value: acc + Quaternion::real(asym),
            bound: tail + rounding(n_max, magnitude + asym),
        })
    }
}

/// The paired series; principal part `((q-n)²+1)^{-1}(q-n-i)` at `n + 𝕊`.
#[derive(Clone, Copy, Debug)]
pub struct Paired {
    pub eps: f64,
}

impl Default for Paired {
    fn default() -> Self {
        Paired { eps: ORACLE_EPS }
    }
}

impl Paired {
    /// `((q-n)²+1)^{-1}(q-n-i)`.
    pub fn simple_term(q: Quaternion, n: f64) -> Result<Quaternion> {
        Ok(delta(q, n)?.inv().expect("checked") * (q - Quaternion::real(n) - Quaternion::I))
    }

    /// `2(q³ - q²i + q(1-n²) - (n²+1)i) / (((q+n)²+1)((q-n)²+1))`.
    pub fn paired_term(q: Quaternion, n: f64) -> Result<Quaternion> {
        let d = delta(q, n)? * delta(q, -n)?;
        let n2 = n * n;
        let q2 = q * q;
        let num = (q2 * q - q2 * Quaternion::I + q * (1.0 - n2) - Quaternion::I * (n2 + 1.0)) * 2.0;
        Ok(d.inv().expect("checked") * num)
    }

    /// `Σ_{n=1}^{N} ((q-n)²+1)^{-1}(q-n-i)`, which diverges like `log N`.
    pub fn one_sided_partial_sum(q: Quaternion, n_max: usize) -> Result<Quaternion> {
        let mut acc = Quaternion::ZERO;
        for n in 1..=n_max {
            acc += Self::simple_term(q, n as f64)?;
        }
        Ok(acc)
    }

    /// Paired partial sum through `n_max`.
    pub fn partial_sum(q: Quaternion, n_max: usize) -> Result<Quaternion> {
        let mut acc = Self::simple_term(q, 0.0)?;
        for n in 1..=n_max {
            acc += Self::paired_term(q, n as f64)?;
        }
        Ok(acc)
    }

    fn remainder_constant(a: f64, n_max: usize) -> f64 {
        let n1 = (n_max + 1) as f64;
        2.0 * (a + 1.0).powi(3) + 2.0 * (a * a + 1.0).powi(2) * (a + 1.0) / (n1 * n1)
    }
}

impl SliceFunction for Paired {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        Ok(self.eval_certified(q, self.eps)?.value)
    }

    fn pole_spheres(&self, near: Quaternion, radius: f64) -> Option<Vec<Sphere2>> {
        Some(lattice_poles(near, radius))
    }
}

impl CertifiedFunction for Paired {
    fn eval_certified(&self, q: Quaternion, eps: f64) -> Result<Certified> {
        let a = q.norm();
        let mut n_max = terms_needed(a, Self::remainder_constant(a, 0), eps);
        n_max = n_max.max(terms_needed(a, Self::remainder_constant(a, n_max), eps));
        let mut acc = Self::simple_term(q, 0.0)?;
        let mut magnitude = acc.norm();
        for n in 1..=n_max {
            let t = Self::paired_term(q, n as f64)?;
            magnitude += t.norm();
            acc += t;
        }
        // Σ_{n>N} -2(q+i)/n²
        let asym = (q + Quaternion::I) * (-2.0 * trigamma(n_max as f64 + 1.0));
        let c = Self::remainder_constant(a, n_max);
        let tail = c / (3.0 * (n_max as f64 - a - 1.0).powi(3));
        Ok(Certified {
            value: acc + asym,
            bound: tail + rounding(n_max, magnitude + asym.norm()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Quaternion {
        s.parse().unwrap()
    }

    #[test]
    fn trigamma_values() {
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((trigamma(1.0) - pi2_6).abs() < 1e-14);
        assert!((trigamma(2.0) - (pi2_6 - 1.0)).abs() < 1e-14);
        assert!((trigamma(1e6) / (1e-6 + 0.5e-12 + 1e-18 / 6.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zsum_closed_form_on_the_real_line() {
        // Σ 1/((x-n)²+1) = π sinh(2π) / (cosh(2π) - cos(2πx))
        let pi = std::f64::consts::PI;
        for x in [0.0, 0.5, 0.3, 2.25] {
            let want = pi * (2.0 * pi).sinh() / ((2.0 * pi).cosh() - (2.0 * pi * x).cos());
            let got = ZSum::default().eval_certified(Quaternion::real(x), 1e-10).unwrap();
            assert!((got.value.re() - want).abs() <= got.bound, "{x}: {} vs {want}", got.value);
            assert!(got.value.im_norm() == 0.0);
        }
    }

    #[test]
    fn zsum_partial_sums_within_naive_bound() {
        let z = ZSum::default();
        let p = q("0.5i");
        let full = z.eval_certified(p, 1e-12).unwrap();
        for n in [1000, 10000] {
            let part = z.partial_sum(p, n).unwrap();
            assert!((part - full.value).norm() <= z.naive_tail_bound(p, n).unwrap());
        }
    }

    #[test]
    fn zsum_conjugate_symmetry() {
        let z = ZSum::default();
        let p = q("0.3+0.7i");
        assert!((z.eval(p.conj()).unwrap() - z.eval(p).unwrap().conj()).norm() < 1e-12);
    }

    #[test]
    fn paired_matches_simple_fractions() {
        let p = q("0.4+0.2j-0.3k");
        for n in 1..6 {
            let n = n as f64;
            let lhs = Paired::paired_term(p, n).unwrap();
            let rhs = Paired::simple_term(p, n).unwrap() + Paired::simple_term(p, -n).unwrap();
            assert!((lhs - rhs).norm() < 1e-14);
        }
    }

    #[test]
    fn paired_certificate_covers_long_partial_sum() {
        let p = q("1.5+0.5i+0.5k");
        let c = Paired::default().eval_certified(p, 1e-9).unwrap();
        let long = Paired::partial_sum(p, 200_000).unwrap();
        // the partial sum still misses about 2|q+i|/N
        let miss = 2.0 * (p + Quaternion::I).norm() / 200_000.0 * 1.01;
        assert!((long - c.value).norm() <= c.bound + miss);
    }

    #[test]
    fn poles_are_reported() {
        assert!(matches!(ZSum::default().eval(q("2+j")), Err(Error::Pole(_, s)) if s == Sphere2::new(2.0, 1.0)));
        assert!(matches!(Paired::default().eval(q("-1+k")), Err(Error::Pole(..))));
        assert_eq!(lattice_poles(q("0.5+i"), 1.0).len(), 2);
    }
}
