//! Pairing n with -n makes Σ (q - n)^{-1} converge; one-sided sums drift like log N.

use slice_regular::{extract_principal_part, CertifiedFunction, Paired, Quaternion, Sphere2};

fn main() -> slice_regular::Result<()> {
    let q: Quaternion = "0.3+0.6j".parse()?;
    for n in [1_000usize, 1_000_000] {
        println!(
            "N = {n:>7}: paired {}   one-sided {}",
            Paired::partial_sum(q, n)?,
            Paired::one_sided_partial_sum(q, n)?
        );
    }
    let c = Paired::default().eval_certified(q, 1e-10)?;
    println!("certified value {} ± {:.1e}", c.value, c.bound);
    for n in 0..=2 {
        let pp = extract_principal_part(&Paired::default(), Sphere2::new(n as f64, 1.0), 4)?;
        println!("sphere {n}+S: k = {}, A = {}, B = {}", pp.k(), pp.pairs[0].0, pp.pairs[0].1);
    }
    Ok(())
}
