//! Leading eigenvalue of the Newtonian potential on the unit ball and the
//! unit disk under mesh refinement.
//!
//! cargo run --release --example newtonian_spectrum

use nanoresonance::geometry::{build_mesh, Dim, DomainSpec};
use nanoresonance::kernel::{Convention, KernelKind};
use nanoresonance::spectral::{
    assemble, leading_eigenpair, shape_constants, uniform_leading_eigenvalue,
};
use nanoresonance::Result;

fn main() -> Result<()> {
    let mode = Convention::Consistent;
    println!("unit ball");
    println!(
        "{:>5} {:>6} {:>12} {:>12} {:>12}",
        "n", "nodes", "lambda0", "|B|", "|F|"
    );
    for n in [6, 8, 10, 12] {
        let mesh = build_mesh(&DomainSpec::ball(1.0), n)?;
        let k = assemble(&mesh, &mesh, KernelKind::series(Dim::Three, 0, mode))?;
        let pair = leading_eigenpair(&k, &mesh)?;
        let c = shape_constants(&mesh, &pair.vector)?;
        println!(
            "{n:>5} {:>6} {:>12.8} {:>12.8} {:>12.8}",
            mesh.len(),
            pair.value,
            c.b.norm(),
            c.f.norm()
        );
    }

    // radial mode of the disk; continuum value 1/j01²
    let exact = 1.0 / 2.404_825_557_695_773f64.powi(2);
    println!("\nunit disk, exact {exact:.8}");
    println!(
        "{:>5} {:>7} {:>12} {:>10}",
        "n", "nodes", "lambda0", "error"
    );
    for n in [32, 64, 128] {
        let mesh = build_mesh(&DomainSpec::disk(1.0), n)?;
        let l = uniform_leading_eigenvalue(&mesh, KernelKind::series(Dim::Two, 0, mode))?;
        println!(
            "{n:>5} {:>7} {l:>12.8} {:>10.2e}",
            mesh.len(),
            (l - exact).abs()
        );
    }
    Ok(())
}
