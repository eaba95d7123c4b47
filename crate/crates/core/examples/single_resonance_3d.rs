//! Subwavelength resonance of a dispersive ball as the particle shrinks.
//!
//! cargo run --release --example single_resonance_3d

use nanoresonance::geometry::{build_mesh, DomainSpec};
use nanoresonance::kernel::Convention;
use nanoresonance::resonance::{
    solve_single_3d_with, BackgroundDispersion, MaterialParams, SolveOptions, Spectral3d,
};
use nanoresonance::Result;

fn main() -> Result<()> {
    let mat = MaterialParams::new(1.0, 1.0, 0.2, 1.0, 1.0, 1.0)?;
    let mesh = build_mesh(&DomainSpec::ball(1.0), 10)?;
    for mode in [Convention::PaperLiteral, Convention::Consistent] {
        let spectral = Spectral3d::compute(&mesh, mode)?;
        let opts = SolveOptions::default().with_mode(mode);
        println!("{mode}: lambda0 = {:.6}", spectral.lambda0);
        println!(
            "{:>6} {:>26} {:>26} {:>10} {:>4}",
            "delta", "omega", "k", "residual", "it"
        );
        for delta in [0.1, 0.05, 0.02, 0.01] {
            let r = solve_single_3d_with(
                &mat,
                &spectral,
                delta,
                BackgroundDispersion::Standard,
                &opts,
            )?;
            println!(
                "{delta:>6} {:>12.6e} {:+12.6e}i {:>12.6e} {:+12.6e}i {:>10.2e} {:>4}",
                r.omega.re, r.omega.im, r.k.re, r.k.im, r.residual, r.iterations
            );
        }
    }
    Ok(())
}
