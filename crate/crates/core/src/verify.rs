//! Numerical checks of slice regularity: the discretized `∂̄_I`, affinity on
//! spheres, and σ-ball expansions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::function::SliceFunction;
use crate::geometry::{same_plane, SigmaBall, Sphere2};
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::star_poly::StarPoly;

fn slice_coords(q: Quaternion, unit: Option<ImaginaryUnit>) -> (f64, f64, ImaginaryUnit) {
    match unit {
        Some(u) => {
            let y = q.im().x1 * u.as_quat().x1 + q.im().x2 * u.as_quat().x2 + q.im().x3 * u.as_quat().x3;
            (q.re(), y, u)
        }
        None => {
            let (x, y, u) = q.decompose();
            (x, y, u.unwrap_or(ImaginaryUnit::I))
        }
    }
}

fn slice_point(x: f64, y: f64, u: ImaginaryUnit) -> Quaternion {
    Quaternion::real(x) + u.as_quat() * y
}

fn dbar_vector<F: SliceFunction + ?Sized>(f: &F, x: f64, y: f64, u: ImaginaryUnit, h: f64) -> Result<Quaternion> {
    let dx = (f.eval(slice_point(x + h, y, u))? - f.eval(slice_point(x - h, y, u))?) / (2.0 * h);
    let dy = (f.eval(slice_point(x, y + h, u))? - f.eval(slice_point(x, y - h, u))?) / (2.0 * h);
    Ok((dx + u.as_quat() * dy) * 0.5)
}

/// Central-difference `∂̄_I f` at `q = x + yI`, with `I` the unit of `q`
/// (`i` for real `q`).
pub fn dbar_residual<F: SliceFunction + ?Sized>(f: &F, q: Quaternion, h: f64) -> Result<Quaternion> {
    let (x, y, u) = slice_coords(q, None);
    dbar_vector(f, x, y, u, h)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub point: Quaternion,
    pub unit: ImaginaryUnit,
    pub steps: [f64; 3],
    pub residuals: [f64; 3],
    pub order: f64,
    /// Richardson-extrapolated residual, relative to `max(1, |f|)`.
    pub extrapolated: f64,
    pub scale: f64,
    pub regular: bool,
}

/// Probes `∂̄_I f` at `x + yI` (coordinates of `q` along `unit`) with steps
/// `h, h/2, h/4`. Regular means second-order decay (or residuals at
/// the rounding floor) and an extrapolated relative residual below `tol`.
pub fn regularity_probe<F: SliceFunction + ?Sized>(
    f: &F,
    q: Quaternion,
    unit: ImaginaryUnit,
    h: f64,
    tol: f64,
) -> Result<RegularityReport> {
    let (x, y, u) = slice_coords(q, Some(unit));
    let point = slice_point(x, y, u);
    let scale = f.eval(point)?.norm().max(1.0);
    let steps = [h, h / 2.0, h / 4.0];
    let mut vecs = [Quaternion::ZERO; 3];
    for (v, s) in vecs.iter_mut().zip(steps) {
        *v = dbar_vector(f, x, y, u, s)?;
    }
    let residuals = vecs.map(|v| v.norm() / scale);
    let ratio = |a: f64, b: f64| if b > 0.0 { (a / b).log2() } else { f64::INFINITY };
    let order = 0.5 * (ratio(residuals[0], residuals[1]) + ratio(residuals[1], residuals[2]));
    let extrapolated = ((vecs[2] * 4.0 - vecs[1]) / 3.0).norm() / scale;
    let noise = 1e3 * f64::EPSILON / steps[2];
    let regular = (order >= 1.5 || residuals[2] <= noise) && extrapolated < tol;
    Ok(RegularityReport { point, unit: u, steps, residuals, order, extrapolated, scale, regular })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineReport {
    pub sphere: Sphere2,
    /// `a` and `b` in `f(x + yJ) = a + J b`.
    pub a: Quaternion,
    pub b: Quaternion,
    pub samples: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Fits `f(x + yJ) = a + J b` from `J = ±i` and tests 20 random `J`.
pub fn check_affine_on_sphere<F: SliceFunction + ?Sized>(f: &F, sphere: Sphere2, tol: f64, seed: u64) -> Result<AffineReport> {
    let i = ImaginaryUnit::I;
    let fp = f.eval(sphere.point(i))?;
    let fm = f.eval(sphere.point(-i))?;
    let a = (fp + fm) * 0.5;
    let b = if sphere.is_real_point() { Quaternion::ZERO } else { -(i.as_quat() * (fp - fm)) * 0.5 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let j = ImaginaryUnit::random(&mut rng);
        let v = f.eval(sphere.point(j))?;
        let dev = (v - (a + j.as_quat() * b)).norm() / v.norm().max(1.0);
        worst = worst.max(dev);
    }
    Ok(AffineReport { sphere, a, b, samples: 20, max_deviation: worst, pass: worst <= tol })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaReport {
    pub center: Quaternion,
    pub radius: f64,
    pub samples: usize,
    pub on_slice: usize,
    pub max_error: f64,
    pub pass: bool,
}

/// Compares `Σ (q - q0)^{*n} a_n` (the polynomial `coeffs`, centered at
/// `q0`) with `f` on points of the σ-ball `Σ(q0, r)`. Candidates are drawn
/// both from the slice disc and from the Euclidean 4-ball; only those inside
/// the σ-ball are used.
pub fn check_sigma_expansion<F: SliceFunction + ?Sized>(
    f: &F,
    coeffs: &StarPoly,
    radius: f64,
    tol: f64,
    seed: u64,
) -> Result<SigmaReport> {
    let q0 = *coeffs.center();
    let ball = SigmaBall::new(q0, radius);
    let unit = q0.decompose().2.unwrap_or(ImaginaryUnit::I);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut samples, mut on_slice, mut worst) = (0usize, 0usize, 0.0f64);
    for idx in 0..400 {
        let candidate = if idx % 2 == 0 {
            let (r, t) = (radius * rng.gen_range(0.0..1.0f64).sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
            q0 + Quaternion::unit_exp(unit, t) * r
        } else {
            q0 + Quaternion::random(&mut rng, radius)
        };
        if !ball.contains(candidate) {
            continue;
        }
        samples += 1;
        if same_plane(candidate, q0) {
            on_slice += 1;
        }
        let want = f.eval(candidate)?;
        let err = (coeffs.eval(&candidate) - want).norm() / want.norm().max(1.0);
        worst = worst.max(err);
    }
    Ok(SigmaReport { center: q0, radius, samples, on_slice, max_error: worst, pass: samples > 0 && worst <= tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{Conjugate, QiQ};
    use crate::rational::{DenFactor, SemiRational};

    fn q(s: &str) -> Quaternion {
        s.parse().unwrap()
    }

    fn cube() -> StarPoly {
        StarPoly::new(vec![q("0"), q("0"), q("0"), q("1")])
    }

    #[test]
    fn dbar_examples() {
        assert!(dbar_residual(&cube(), q("1+2j"), 1e-3).unwrap().norm() < 1e-5);
        let r = dbar_residual(&Conjugate, q("0.5+0.3i-0.2k"), 1e-4).unwrap();
        assert!((r - Quaternion::ONE).norm() < 1e-9);
        assert!(dbar_residual(&StarPoly::constant(q("2-j")), q("1+k"), 1e-3).unwrap().norm() < 1e-15);
    }

    #[test]
    fn probe_verdicts() {
        let u = ImaginaryUnit::new(q("i+j")).unwrap();
        let f = SemiRational::new(StarPoly::new(vec![q("1+k"), q("j")]), vec![(DenFactor::Sphere { x0: 1.0, y0: 1.0 }, 2)]).unwrap();
        for g in [&f as &dyn SliceFunction, &cube()] {
            let rep = regularity_probe(g, q("0.3+0.8i"), u, 1e-3, 1e-6).unwrap();
            assert!(rep.regular, "{rep:?}");
        }
        for g in [&Conjugate as &dyn SliceFunction, &QiQ] {
            let rep = regularity_probe(g, q("0.3+0.8i"), u, 1e-3, 1e-6).unwrap();
            assert!(!rep.regular, "{rep:?}");
        }
    }

    #[test]
    fn affinity() {
        let rep = check_affine_on_sphere(&StarPoly::new(vec![q("0"), q("1")]), Sphere2::new(2.0, 3.0), 1e-12, 0).unwrap();
        assert!(rep.pass && rep.a.approx_eq(&q("2"), 1e-15) && rep.b.approx_eq(&q("3"), 1e-15));
        let real_poly = StarPoly::from_real(&[1.0, -2.0, 0.5, 3.0]);
        assert!(check_affine_on_sphere(&real_poly, Sphere2::new(-1.0, 0.7), 1e-10, 1).unwrap().pass);
        assert!(!check_affine_on_sphere(&QiQ, Sphere2::new(0.5, 1.5), 1e-10, 2).unwrap().pass);
        // the conjugate is affine on spheres; only ∂̄ exposes it
        assert!(check_affine_on_sphere(&Conjugate, Sphere2::new(0.5, 1.5), 1e-10, 2).unwrap().pass);
    }

    #[test]
    fn sigma_expansion_of_geometric_series() {
        // 1/(1-q) = Σ (q - q0)^n (1 - q0)^{-n-1}
        let q0 = q("0.75i");
        let f = SemiRational::new(StarPoly::constant(q("-1")), vec![(DenFactor::RealRoot { r: 1.0 }, 1)]).unwrap();
        let base = (Quaternion::ONE - q0).inv().unwrap();
        let coeffs: Vec<Quaternion> = (0..80).map(|n| base.powi(n + 1)).collect();
        let p = StarPoly::with_center(coeffs.clone(), q0);
        let rep = check_sigma_expansion(&f, &p, 0.7, 1e-10, 0).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.on_slice, rep.samples);
        let mut wrong = coeffs;
        wrong[1] = wrong[1] * 1.01;
        assert!(!check_sigma_expansion(&f, &StarPoly::with_center(wrong, q0), 0.7, 1e-10, 0).unwrap().pass);
        let own = cube().recenter(&q0).unwrap();
        assert!(check_sigma_expansion(&cube(), &own, 0.7, 1e-12, 0).unwrap().pass);
    }
}
