//! Symmetric-set geometry: spheres `x0 + y0 𝕊`, the σ-distance, σ-balls and
//! the symmetric neighborhoods `U(x0 + y0 𝕊, R)`.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::quat::{ImaginaryUnit, Quaternion};

/// Imaginary parts below this norm count as real.
pub const REAL_AXIS_TOL: f64 = 1e-14;
/// Tolerance on the distance between unit directions for "same plane".
pub const PLANE_TOL: f64 = 1e-12;

/// The 2-sphere `x0 + y0 𝕊`; `y0 = 0` is the real point `x0`.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct Sphere2 {
    pub x0: f64,
    pub y0: f64,
}

impl Sphere2 {
    /// Canonical representative: `y0` is stored as `|y0|`.
    pub fn new(x0: f64, y0: f64) -> Self {
        Sphere2 { x0, y0: y0.abs() }
    }

    pub fn real_point(x0: f64) -> Self {
        Sphere2 { x0, y0: 0.0 }
    }

    /// The sphere through `q`.
    pub fn through(q: Quaternion) -> Self {
        Sphere2 { x0: q.re(), y0: q.im_norm() }
    }

    pub fn is_real_point(&self) -> bool {
        self.y0 == 0.0
    }

    /// `|q|` for every `q` on the sphere.
    pub fn modulus(&self) -> f64 {
        self.x0.hypot(self.y0)
    }

    /// `x0 + y0 I`.
    pub fn point(&self, unit: ImaginaryUnit) -> Quaternion {
        Quaternion::real(self.x0) + unit.as_quat() * self.y0
    }

    /// Euclidean distance from `q` to the sphere.
    pub fn distance(&self, q: Quaternion) -> f64 {
        (q.re() - self.x0).hypot(q.im_norm() - self.y0)
    }

    pub fn contains(&self, q: Quaternion, tol: f64) -> bool {
        self.distance(q) <= tol
    }

    /// `(q - x0)² + y0²`, the real-coefficient quadratic vanishing on the sphere.
    pub fn delta(&self, q: Quaternion) -> Quaternion {
        let w = q - Quaternion::real(self.x0);
        w * w + Quaternion::real(self.y0 * self.y0)
    }

    /// Points of the sphere on the slice `L_I`: `x0 ± y0 I` (one point if real).
    pub fn slice_points(&self, unit: ImaginaryUnit) -> Vec<Quaternion> {
        if self.is_real_point() {
            vec![Quaternion::real(self.x0)]
        } else {
            vec![self.point(unit), self.point(-unit)]
        }
    }
}

impl fmt::Display for Sphere2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real_point() {
            write!(f, "{{{}}}", self.x0)
        } else {
            write!(f, "{}+{}S", self.x0, self.y0)
        }
    }
}

/// Whether `q` and `p` lie on a common plane `L_I`; real points lie on all of them.
pub fn same_plane(q: Quaternion, p: Quaternion) -> bool {
    let (nq, np) = (q.im_norm(), p.im_norm());
    if nq < REAL_AXIS_TOL || np < REAL_AXIS_TOL {
        return true;
    }
    let uq = q.im() / nq;
    let up = p.im() / np;
    (uq - up).norm() < PLANE_TOL || (uq + up).norm() < PLANE_TOL
}

/// `ω(q,p) = sqrt((Re q - Re p)² + (|Im q| + |Im p|)²)`.
pub fn omega(q: Quaternion, p: Quaternion) -> f64 {
    (q.re() - p.re()).hypot(q.im_norm() + p.im_norm())
}

/// The σ-distance: Euclidean on a common plane, `ω` otherwise.
pub fn sigma(q: Quaternion, p: Quaternion) -> f64 {
    if same_plane(q, p) {
        (q - p).norm()
    } else {
        omega(q, p)
    }
}

/// `Σ(q0, R) = {q : σ(q, q0) < R}`.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct SigmaBall {
    pub center: Quaternion,
    pub radius: f64,
}

impl SigmaBall {
    pub fn new(center: Quaternion, radius: f64) -> Self {
        SigmaBall { center, radius }
    }

    pub fn contains(&self, q: Quaternion) -> bool {
        sigma(q, self.center) < self.radius
    }

    /// Whether the ball is the planar disc `{z ∈ L_I : |z - q0| < R}`.
    pub fn is_planar_disc(&self) -> bool {
        self.radius < self.center.im_norm()
    }
}

/// `U(x0 + y0 𝕊, R) = {q : |(q - x0)² + y0²| < R²}`.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct SymmetricShell {
    pub sphere: Sphere2,
    pub radius: f64,
}

impl SymmetricShell {
    pub fn new(sphere: Sphere2, radius: f64) -> Self {
        SymmetricShell { sphere, radius }
    }

    pub fn contains(&self, q: Quaternion) -> bool {
        self.sphere.delta(q).norm() < self.radius * self.radius
    }

    /// The point `z` of `L_I` with `(z - x0)² + y0² = delta`, choosing the
    /// square-root branch by `flip`.
    pub fn point_with_delta(&self, delta: Complex64, unit: ImaginaryUnit, flip: bool) -> Quaternion {
        let y0 = self.sphere.y0;
        let mut w = (delta - Complex64::new(y0 * y0, 0.0)).sqrt();
        if flip {
            w = -w;
        }
        Quaternion::from_slice(Complex64::new(self.sphere.x0, 0.0) + w, unit)
    }

    /// Random point with `|(q - x0)² + y0²|^{1/2}` uniform in `[lo, hi]·R`.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R, lo: f64, hi: f64) -> Quaternion {
        let s = self.radius * rng.gen_range(lo..=hi);
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let delta = Complex64::from_polar(s * s, phi);
        let unit = ImaginaryUnit::random(rng);
        self.point_with_delta(delta, unit, rng.gen_bool(0.5))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use proptest::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> Quaternion {
        s.parse().unwrap()
    }

    #[test]
    fn sigma_examples() {
        assert!((sigma(q("1+2i"), q("3+4i")) - 8f64.sqrt()).abs() < 1e-15);
        assert!((sigma(q("i"), q("j")) - 2.0).abs() < 1e-15);
        assert!((sigma(q("2"), q("3+4j")) - 17f64.sqrt()).abs() < 1e-15);
        // conjugate points share a plane
        assert!((sigma(q("1+i"), q("1-i")) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn ball_and_shell_membership() {
        let ball = SigmaBall::new(q("i"), 0.5);
        assert!(ball.contains(q("0.4+i")));
        assert!(!ball.contains(q("j")));
        let shell = SymmetricShell::new(Sphere2::new(0.0, 1.0), 1.0);
        assert!(!shell.contains(Quaternion::ZERO));
        assert!(shell.contains(q("0.3+i")));
    }

    #[test]
    fn sphere_basics() {
        let s = Sphere2::new(3.0, -4.0);
        assert_eq!(s.y0, 4.0);
        assert_eq!(s.modulus(), 5.0);
        let p = s.point(ImaginaryUnit::K);
        assert!(s.contains(p, 1e-15));
        assert!(s.delta(p).norm() < 1e-14);
        assert_eq!(Sphere2::real_point(2.0).slice_points(ImaginaryUnit::I).len(), 1);
    }

    #[test]
    fn shell_points_hit_requested_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let shell = SymmetricShell::new(Sphere2::new(1.0, 2.0), 1.5);
        for _ in 0..100 {
            let p = shell.random_point(&mut rng, 0.1, 0.9);
            assert!(shell.contains(p));
        }
        let d = Complex64::new(0.3, -0.2);
        let p = shell.point_with_delta(d, ImaginaryUnit::J, false);
        let got = shell.sphere.delta(p);
        assert!(got.approx_eq(&Quaternion::new(0.3, 0.0, -0.2, 0.0), 1e-14));
    }

    #[test]
    fn small_sigma_ball_is_planar() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ball = SigmaBall::new(q("0.5+2k"), 1.5);
        assert!(ball.is_planar_disc());
        let mut hits = 0;
        for _ in 0..20000 {
            let p = ball.center + Quaternion::random(&mut rng, 1.5);
            if ball.contains(p) {
                hits += 1;
                assert!(same_plane(p, ball.center));
            }
        }
        // random 4D perturbations almost never land on the plane
        assert_eq!(hits, 0);
        let on_plane = q("0.9+2.3k");
        assert!(ball.contains(on_plane));
    }

    fn arb_point() -> impl Strategy<Value = Quaternion> {
        let free = prop::array::uniform4(-4.0f64..4.0).prop_map(Quaternion::from_array);
        // points sharing the slice through i + j, to exercise the planar branch
        let planar = (-4.0f64..4.0, -4.0f64..4.0).prop_map(|(x, y)| Quaternion::new(x, y, y, 0.0));
        prop_oneof![free, planar]
    }

    proptest! {
        #[test]
        fn sigma_is_a_metric_above_euclid(p in arb_point(), q in arb_point(), r in arb_point()) {
            prop_assert_eq!(sigma(p, q), sigma(q, p));
            prop_assert_eq!(sigma(p, p), 0.0);
            prop_assert!(sigma(p, q) >= (p - q).norm());
            prop_assert!(sigma(p, r) <= sigma(p, q) + sigma(q, r) + 1e-12);
        }
    }
}
