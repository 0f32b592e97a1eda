//! The σ-distance: Euclidean on a common slice, larger across slices.

use slice_regular::{omega, same_plane, sigma, Quaternion, SigmaBall};

fn q(s: &str) -> Quaternion {
    s.parse().unwrap()
}

fn main() {
    let p = q("1+2i");
    for other in ["1+2.5i", "1-i", "1+2j", "1+2k", "0.5+1.5j"] {
        let x = q(other);
        println!(
            "σ({p}, {x}) = {:.6}   |p-x| = {:.6}   ω = {:.6}   same slice: {}",
            sigma(p, x),
            (p - x).norm(),
            omega(p, x),
            same_plane(p, x)
        );
    }
    // a σ-ball around a non-real center is a disc inside its slice
    let ball = SigmaBall::new(p, 0.6);
    println!("Σ({p}, 0.6) contains 1+2.5i: {}, 1+2j: {}", ball.contains(q("1+2.5i")), ball.contains(q("1+2j")));
    println!("planar disc: {}", ball.is_planar_disc());
    let real_ball = SigmaBall::new(q("0.2"), 0.6);
    println!("Σ(0.2, 0.6) contains 0.3j: {}, planar: {}", real_ball.contains(q("0.3j")), real_ball.is_planar_disc());
}
