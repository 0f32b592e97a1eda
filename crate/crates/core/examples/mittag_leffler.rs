//! Building a function with prescribed principal parts and reading its ledger.

use slice_regular::{build, extract_principal_part, BuildOptions, ImaginaryUnit, Prescription, PrincipalPart, Quaternion, Sphere2};

fn q(s: &str) -> Quaternion {
    s.parse().unwrap()
}

fn main() -> slice_regular::Result<()> {
    let i = ImaginaryUnit::I;
    let parts = vec![
        PrincipalPart::new(Sphere2::new(0.0, 1.0), i, vec![(q("1"), q("0"))]),
        PrincipalPart::new(Sphere2::new(2.0, 0.5), i, vec![(q("0"), q("1")), (q("i"), q("0"))]),
        PrincipalPart::new(Sphere2::new(-3.0, 1.5), i, vec![(q("j"), q("k"))]),
        PrincipalPart::new(Sphere2::real_point(4.5), i, vec![(q("2"), q("0"))]),
    ];
    let f = build(&Prescription::Finite(parts.clone()), BuildOptions::default())?;
    println!("{:>3} {:>7} {:>8} {:>7} {:>12}", "n", "rho", "spheres", "degree", "bound");
    for row in f.ledger() {
        let deg = row.degree.map_or("-".to_string(), |d| d.to_string());
        println!("{:>3} {:>7.3} {:>8} {:>7} {:>12.3e}", row.n, row.rho, row.spheres, deg, row.bound);
    }
    let c = f.eval_certified(q("0.3+0.4j"), 1e-10)?;
    println!("f(0.3+0.4j) = {} ± {:.1e}", c.value, c.bound);
    for p in &parts {
        let got = extract_principal_part(&f.local_view_near(p.q0()), p.sphere, 8)?;
        println!("{}: recovered k = {}, distance {:.2e}", p.sphere, got.k(), got.distance(p));
    }
    Ok(())
}
