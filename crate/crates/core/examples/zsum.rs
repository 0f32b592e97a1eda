//! The lattice sum Σ_n [(q - n)^2 + 1]^{-1}: certified values and its poles.

use slice_regular::{extract_principal_part, CertifiedFunction, Quaternion, Sphere2, ZSum};

fn main() -> slice_regular::Result<()> {
    let f = ZSum::default();
    for s in ["0.5", "0.5+0.5i", "0.25+0.3j-0.4k", "7.1+2j"] {
        let q: Quaternion = s.parse()?;
        let c = f.eval_certified(q, 1e-12)?;
        println!("f({s}) = {} ± {:.1e}", c.value, c.bound);
    }
    let q: Quaternion = "0.5".parse()?;
    for n in [10usize, 1000, 100_000] {
        println!("partial sum |n| <= {n}: {}", f.partial_sum(q, n)?);
    }
    for n in -2..=2 {
        let pp = extract_principal_part(&f, Sphere2::new(n as f64, 1.0), 4)?;
        println!("sphere {n}+S: k = {}, A = {}, B = {}", pp.k(), pp.pairs[0].0, pp.pairs[0].1);
    }
    Ok(())
}
