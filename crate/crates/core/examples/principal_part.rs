//! Extracting a principal part numerically and subtracting it.

use slice_regular::{extract_principal_part, pole_order, DenFactor, Quaternion, SemiRational, SliceFunction, Sphere2, StarPoly};

fn q(s: &str) -> Quaternion {
    s.parse().unwrap()
}

fn main() -> slice_regular::Result<()> {
    let sphere = Sphere2::new(-0.5, 2.0);
    let f = SemiRational::new(
        StarPoly::new(vec![q("2+i"), q("k"), q("1-j")]),
        vec![(DenFactor::for_sphere(sphere), 2), (DenFactor::RealRoot { r: 3.0 }, 1)],
    )?;
    let pp = extract_principal_part(&f, sphere, 8)?;
    println!("k = {}", pp.k());
    for (n, (a, b)) in pp.pairs.iter().enumerate() {
        println!("Δ^-{}: A = {a}, B = {b}", n + 1);
    }
    match pp.exceptional_point() {
        Some(p) => println!("exceptional point on the sphere: {p}"),
        None => println!("no exceptional point"),
    }
    let rest = f.sub(&pp.to_rational());
    println!("pole order after subtraction: {}", pole_order(&rest, sphere, 8)?);
    let p = q("-0.5+1.9j");
    println!("f(p) - P(p) = {}", f.eval(&p)? - SliceFunction::eval(&pp, p)?);
    Ok(())
}
