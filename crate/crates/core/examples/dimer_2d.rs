//! Hybridized resonances of two disks from the coupled indicator condition.
//!
//! cargo run --release --example dimer_2d

use nanoresonance::dimer::{solve_dimer_2d, DimerConfig};
use nanoresonance::geometry::DomainSpec;
use nanoresonance::resonance::{BackgroundDispersion, KClosure, MaterialParams, SolveOptions};
use nanoresonance::Result;
use num_complex::Complex64;

fn main() -> Result<()> {
    let mat = MaterialParams::new(0.05, 1.0, 0.1, 1.0, 1.0, 1.0)?;
    let disp = BackgroundDispersion::FixedK0(Complex64::new(1.0, 0.0));
    let opts = SolveOptions::default().with_closure(KClosure::Fixed(Complex64::new(1.0, 0.0)));
    println!(
        "{:>6} {:>14} {:>14} {:>14} {:>10}",
        "sep", "Re ω_m", "Re ω_s", "Re ω_d", "|η̂|"
    );
    for sep in [3.0, 10.0, 30.0, 100.0] {
        let cfg = DimerConfig::symmetric(DomainSpec::disk(1.0), sep, 0.005)?;
        let sol = solve_dimer_2d(&mat, &cfg, 16, disp, &opts)?;
        let d = &sol.dimer;
        println!(
            "{sep:>6} {:>14.11} {:>14.11} {:>14.11} {:>10.4}",
            d.omega_m.re,
            sol.single.omega.re,
            d.omega_d.re,
            d.couplings.k.norm()
        );
    }
    Ok(())
}
