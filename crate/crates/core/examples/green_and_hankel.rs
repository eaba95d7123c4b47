//! Background Green's functions and the Hankel functions behind the 2D kernel.
//!
//! cargo run --example green_and_hankel

use nanoresonance::geometry::Dim;
use nanoresonance::kernel::{green, hankel0, hankel1};
use nanoresonance::Result;
use num_complex::Complex64;

fn main() -> Result<()> {
    println!("{:>6} {:>24} {:>24}", "z", "H0(z)", "H1(z)");
    for z in [0.1, 1.0, 5.0, 11.9, 12.1, 30.0] {
        let z = Complex64::new(z, 0.0);
        let (h0, h1) = (hankel0(z)?, hankel1(z)?);
        println!(
            "{:>6.2} {:>11.8} {:+11.8}i {:>11.8} {:+11.8}i",
            z.re, h0.re, h0.im, h1.re, h1.im
        );
    }

    let k = Complex64::new(2.0, 0.0);
    let origin = [0.0; 3];
    println!("\n{:>6} {:>28} {:>28}", "r", "G_2(r)", "G_3(r)");
    for r in [0.01, 0.1, 1.0, 3.0] {
        let x = [r, 0.0, 0.0];
        let g2 = green(Dim::Two, &x, &origin, k)?;
        let g3 = green(Dim::Three, &x, &origin, k)?;
        println!(
            "{r:>6.2} {:>13.6e} {:+13.6e}i {:>13.6e} {:+13.6e}i",
            g2.re, g2.im, g3.re, g3.im
        );
    }
    Ok(())
}
