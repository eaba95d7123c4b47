//! Hybridized monopole and dipole resonances of two balls as they move
//! apart.
//!
//! cargo run --release --example dimer_3d

use nanoresonance::dimer::{solve_dimer_3d, DimerConfig};
use nanoresonance::geometry::DomainSpec;
use nanoresonance::resonance::{BackgroundDispersion, MaterialParams, SolveOptions};
use nanoresonance::Result;
use num_complex::Complex64;

fn main() -> Result<()> {
    let mat = MaterialParams::new(1.0, 1.0, 0.2, 1.0, 1.0, 1.0)?;
    let disp = BackgroundDispersion::FixedK0(Complex64::new(1.0, 0.0));
    let opts = SolveOptions::default();
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>10} {:>8}",
        "sep", "Re ω_m", "Re ω_s", "Re ω_d", "|𝕂|", "ordered"
    );
    for sep in [3.0, 10.0, 30.0, 100.0] {
        let cfg = DimerConfig::symmetric(DomainSpec::ball(1.0), sep, 0.02)?;
        let sol = solve_dimer_3d(&mat, &cfg, 8, disp, &opts)?;
        let d = &sol.dimer;
        println!(
            "{sep:>6} {:>12.9} {:>12.9} {:>12.9} {:>10.3e} {:>8}",
            d.omega_m.re,
            sol.single.omega.re,
            d.omega_d.re,
            d.couplings.k.norm(),
            d.ordered
        );
    }
    Ok(())
}
