//! Truncated series of the volume operator against the exact operator on a
//! particle of size δ: the remainder shrinks as (δk₀)⁴ in 3D and as
//! δ⁴log δ in 2D.
//!
//! cargo run --release --example kernel_expansion_oracle

use nanoresonance::geometry::{build_mesh, Dim, DomainSpec};
use nanoresonance::kernel::{Convention, KernelKind, SeriesCoefficients};
use nanoresonance::spectral::{assemble, assemble_sum};
use nanoresonance::Result;
use num_complex::Complex64;

fn remainder(dim: Dim, n: usize, delta: f64, max_term: i32) -> Result<f64> {
    let domain = match dim {
        Dim::Two => DomainSpec::disk(1.0),
        Dim::Three => DomainSpec::ball(1.0),
    };
    let mesh = build_mesh(&domain, n)?;
    let k0 = Complex64::new(1.0, 0.0);
    let exact = assemble(&mesh, &mesh, KernelKind::exact(dim, delta * k0))?;
    let coeffs = SeriesCoefficients::new(dim, delta, k0, Convention::Consistent)?;
    let series = assemble_sum(&mesh, &mesh, &coeffs.terms(max_term))?;
    Ok((&exact.data - &series.data).norm() / exact.data.norm())
}

fn main() -> Result<()> {
    for (dim, n, top) in [(Dim::Three, 10, 3), (Dim::Two, 24, 1)] {
        println!("dimension {dim}, terms up to n = {top}");
        let mut last: Option<(f64, f64)> = None;
        for delta in [0.2, 0.1, 0.05] {
            let r = remainder(dim, n, delta, top)?;
            match last {
                Some((d, p)) => println!(
                    "  δk0 = {delta:<5} residual {r:.3e}  order {:.2}",
                    (p / r).ln() / (d / delta).ln()
                ),
                None => println!("  δk0 = {delta:<5} residual {r:.3e}"),
            }
            last = Some((delta, r));
        }
    }
    Ok(())
}
