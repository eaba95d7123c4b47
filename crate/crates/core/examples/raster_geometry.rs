//! A resonator given as a binary image: mesh, spectrum and resonance of an
//! L-shaped cross-section.
//!
//! cargo run --release --example raster_geometry

use nanoresonance::geometry::{build_mesh, DomainSpec, RasterGrid};
use nanoresonance::resonance::{
    solve_single_2d_with, BackgroundDispersion, MaterialParams, SolveOptions, Spectral2d, Variant2d,
};
use nanoresonance::Result;

const L_SHAPE: &str = "\
6 6 0.25
110000
110000
110000
110000
111111
111111
";

fn main() -> Result<()> {
    let domain = DomainSpec::raster(RasterGrid::parse(L_SHAPE)?);
    println!(
        "area {:.4}, diameter {:.4}",
        domain.measure(),
        domain.diameter()
    );
    let mat = MaterialParams::new(1.0, 1.0, 0.2, 1.0, 1.0, 1.0)?;
    let opts = SolveOptions::default();
    for n in [12, 24, 48] {
        let mesh = build_mesh(&domain, n)?;
        let spectral = Spectral2d::compute(&mesh, opts.mode)?;
        let r = solve_single_2d_with(
            &mat,
            &spectral,
            0.02,
            BackgroundDispersion::Standard,
            &opts,
            Variant2d::Eigen,
        )?;
        println!(
            "cells {n:>3}  nodes {:>5}  |G| {:>9.5}  ω = {:.8}  residual {:.1e}",
            mesh.len(),
            spectral.constants.g.norm(),
            r.omega,
            r.residual
        );
    }
    Ok(())
}
