//! Evaluation oracles.

use crate::error::Result;
use crate::geometry::Sphere2;
use crate::quat::Quaternion;
use crate::rational::{PrincipalPart, SemiRational};
use crate::star_poly::StarPoly;

/// A quaternion-valued function known through point evaluation.
pub trait SliceFunction: Send + Sync {
    fn eval(&self, q: Quaternion) -> Result<Quaternion>;

    /// Pole spheres whose distance to `near` is below `radius`, when the
    /// function knows them. Used to size sampling contours.
    fn pole_spheres(&self, _near: Quaternion, _radius: f64) -> Option<Vec<Sphere2>> {
        None
    }
}

impl<F: SliceFunction + ?Sized> SliceFunction for &F {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        (**self).eval(q)
    }

    fn pole_spheres(&self, near: Quaternion, radius: f64) -> Option<Vec<Sphere2>> {
        (**self).pole_spheres(near, radius)
    }
}

impl<F: SliceFunction + ?Sized> SliceFunction for Box<F> {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        (**self).eval(q)
    }

    fn pole_spheres(&self, near: Quaternion, radius: f64) -> Option<Vec<Sphere2>> {
        (**self).pole_spheres(near, radius)
    }
}

impl SliceFunction for StarPoly {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        Ok(StarPoly::eval(self, &q))
    }

    fn pole_spheres(&self, _near: Quaternion, _radius: f64) -> Option<Vec<Sphere2>> {
        Some(Vec::new())
    }
}

fn nearby(spheres: impl IntoIterator<Item = Sphere2>, near: Quaternion, radius: f64) -> Vec<Sphere2> {
    spheres.into_iter().filter(|s| s.distance(near) < radius).collect()
}

impl SliceFunction for SemiRational {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        SemiRational::eval(self, &q)
    }

    fn pole_spheres(&self, near: Quaternion, radius: f64) -> Option<Vec<Sphere2>> {
        Some(nearby(SemiRational::pole_spheres(self), near, radius))
    }
}

impl SliceFunction for PrincipalPart {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        PrincipalPart::eval(self, q)
    }

    fn pole_spheres(&self, near: Quaternion, radius: f64) -> Option<Vec<Sphere2>> {
        let own = (self.k() > 0).then_some(self.sphere);
        Some(nearby(own, near, radius))
    }
}

/// Wraps a closure as an oracle with no pole information.
pub struct FnFunction<F>(pub F);

impl<F> SliceFunction for FnFunction<F>
where
    F: Fn(Quaternion) -> Result<Quaternion> + Send + Sync,
{
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        (self.0)(q)
    }
}

/// `f - g`, pole hints merged.
pub struct Difference<A, B>(pub A, pub B);

impl<A: SliceFunction, B: SliceFunction> SliceFunction for Difference<A, B> {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        Ok(self.0.eval(q)? - self.1.eval(q)?)
    }

    fn pole_spheres(&self, near: Quaternion, radius: f64) -> Option<Vec<Sphere2>> {
        let mut a = self.0.pole_spheres(near, radius)?;
        a.extend(self.1.pole_spheres(near, radius)?);
        Some(a)
    }
}

/// `q ↦ q̄`, affine on every sphere but not slice regular.
#[derive(Clone, Copy, Debug, Default)]
pub struct Conjugate;

impl SliceFunction for Conjugate {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        Ok(q.conj())
    }
}

/// `q ↦ q i q`, which is not affine on spheres.
#[derive(Clone, Copy, Debug, Default)]
pub struct QiQ;

impl SliceFunction for QiQ {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        Ok(q * Quaternion::I * q)
    }
}

/// A value with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Certified {
    pub value: Quaternion,
    pub bound: f64,
}

/// Oracles that can bound their own evaluation error.
pub trait CertifiedFunction: SliceFunction {
    fn eval_certified(&self, q: Quaternion, eps: f64) -> Result<Certified>;
}
