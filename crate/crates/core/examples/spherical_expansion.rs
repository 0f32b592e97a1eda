//! Spherical Laurent expansion of a semiregular rational around its pole sphere.

use slice_regular::{pole_order, spherical_laurent, DenFactor, Quaternion, SemiRational, Sphere2, StarPoly};

fn q(s: &str) -> Quaternion {
    s.parse().unwrap()
}

fn main() -> slice_regular::Result<()> {
    // f(q) = Δ(q)^{-2} (1 + q j), Δ = (q - 1)^2 + 1
    let f = SemiRational::new(StarPoly::new(vec![q("1"), q("j")]), vec![(DenFactor::Sphere { x0: 1.0, y0: 1.0 }, 2)])?;
    let sphere = Sphere2::new(1.0, 1.0);
    let k = pole_order(&f, sphere, 8)?;
    let q0 = q("1+i");
    let exp = spherical_laurent(&f, sphere, q0, k, 9)?;
    println!("pole order {k}, certified shell radius {:.3}", exp.radius);
    for (j, a) in exp.coeffs.iter().enumerate() {
        println!("A_{:<2} = {a}", j as i64 - 2 * k as i64);
    }
    let p = q("1.2+0.3i+0.85k");
    println!("f(p)         = {}", f.eval(&p)?);
    println!("expansion(p) = {}", exp.eval(p)?);
    Ok(())
}
