//! The *-product of quaternionic polynomials and its evaluation rule.

use slice_regular::{Quaternion, StarPoly};

fn q(s: &str) -> Quaternion {
    s.parse().unwrap()
}

fn main() -> slice_regular::Result<()> {
    let f = StarPoly::new(vec![q("1"), q("i")]);
    let g = StarPoly::new(vec![q("j"), q("0"), q("2-k")]);
    let fg = f.star_mul(&g)?;
    let gf = g.star_mul(&f)?;
    println!("f*g coefficients: {:?}", fg.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());
    println!("g*f coefficients: {:?}", gf.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());

    // (f*g)(p) = f(p) g(f(p)^{-1} p f(p)) whenever f(p) != 0
    let p = q("0.4-0.3j+0.7k");
    let fp = f.eval(&p);
    let twisted = fp.inv().unwrap() * p * fp;
    println!("(f*g)(p)        = {}", fg.eval(&p));
    println!("f(p) g(twisted) = {}", fp * g.eval(&twisted));
    println!("f(p) g(p)       = {}  (not the same)", fp * g.eval(&p));
    Ok(())
}
