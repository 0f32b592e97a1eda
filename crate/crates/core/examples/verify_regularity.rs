//! Telling slice-regular functions from impostors.

use slice_regular::{check_affine_on_sphere, regularity_probe, Conjugate, ImaginaryUnit, QiQ, SliceFunction, Sphere2, StarPoly, ZSum};

fn main() -> slice_regular::Result<()> {
    let cube = StarPoly::from_real(&[0.0, 0.0, 0.0, 1.0]);
    let zsum = ZSum::default();
    let candidates: [(&str, &dyn SliceFunction); 4] = [("q^3", &cube), ("zsum", &zsum), ("conj(q)", &Conjugate), ("q i q", &QiQ)];
    let unit = ImaginaryUnit::new("i+j-k".parse()?)?;
    let point = "0.4+0.7i".parse()?;
    for (name, f) in candidates {
        let probe = regularity_probe(f, point, unit, 1e-3, 1e-6)?;
        let affine = check_affine_on_sphere(f, Sphere2::new(0.4, 1.3), 1e-10, 7)?;
        println!(
            "{name:>8}: ∂̄ residual {:.1e} (order {:.2}) regular={}  affine deviation {:.1e} pass={}",
            probe.extrapolated, probe.order, probe.regular, affine.max_deviation, affine.pass
        );
    }
    Ok(())
}
