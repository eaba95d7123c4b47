//! Resonance of a dispersive disk from the eigenvalue condition and from
//! the indicator expansion; the two agree as δ → 0.
//!
//! cargo run --release --example single_resonance_2d

use nanoresonance::geometry::{build_mesh, DomainSpec};
use nanoresonance::kernel::Convention;
use nanoresonance::resonance::{
    solve_single_2d_with, BackgroundDispersion, MaterialParams, SolveOptions, Spectral2d, Variant2d,
};
use nanoresonance::Result;

fn main() -> Result<()> {
    let mat = MaterialParams::new(1.0, 1.0, 0.2, 1.0, 1.0, 1.0)?;
    let mesh = build_mesh(&DomainSpec::disk(1.0), 24)?;
    let mode = Convention::Consistent;
    let spectral = Spectral2d::compute(&mesh, mode)?;
    let opts = SolveOptions::default().with_mode(mode);
    let disp = BackgroundDispersion::Standard;
    println!(
        "{:>7} {:>26} {:>26} {:>10}",
        "delta", "omega (eigen)", "omega (indicator)", "gap"
    );
    for delta in [0.05, 0.01, 0.002, 0.0005] {
        let e = solve_single_2d_with(&mat, &spectral, delta, disp, &opts, Variant2d::Eigen)?;
        let i = solve_single_2d_with(&mat, &spectral, delta, disp, &opts, Variant2d::Indicator)?;
        println!(
            "{delta:>7} {:>12.6e} {:+12.6e}i {:>12.6e} {:+12.6e}i {:>10.2e}",
            e.omega.re,
            e.omega.im,
            i.omega.re,
            i.omega.im,
            (e.omega - i.omega).norm()
        );
    }
    Ok(())
}
