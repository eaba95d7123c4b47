//! Field scattered by a small ball along a line, sweeping the frequency
//! through the resonance.
//!
//! cargo run --release --example scattered_field

use nanoresonance::geometry::{build_mesh, DomainSpec, Point};
use nanoresonance::resonance::{
    scattered_field, solve_single_3d_with, BackgroundDispersion, FieldForm, FieldModel,
    FieldOptions, MaterialParams, SolveOptions, Spectral3d,
};
use nanoresonance::Result;
use num_complex::Complex64;

fn main() -> Result<()> {
    let mat = MaterialParams::new(1.0, 1.0, 0.2, 1.0, 1.0, 1.0)?;
    let mesh = build_mesh(&DomainSpec::ball(1.0), 8)?;
    let opts = SolveOptions::default();
    let spectral = Spectral3d::compute(&mesh, opts.mode)?;
    let delta = 0.05;
    let disp = BackgroundDispersion::FixedK0(Complex64::new(1.0, 0.0));
    let res = solve_single_3d_with(&mat, &spectral, delta, disp, &opts)?;
    println!("resonance ω_s = {:.6}", res.omega);

    let model = FieldModel::from_3d(&mesh, &spectral, delta, res.k0)?;
    let dk = delta * res.k0;
    let plane = move |y: &Point| (Complex64::new(0.0, 1.0) * dk * y[0]).exp();
    let field_opts = FieldOptions {
        form: FieldForm::PolePencil,
        ..FieldOptions::default()
    };
    let x = [5.0, 0.0, 0.0];
    println!("{:>10} {:>14}", "omega", "|u_sc(x)|");
    for t in [0.5, 0.8, 0.9, 0.95, 0.99, 1.0] {
        let omega = Complex64::new(t * res.omega.re, 0.0);
        let u = scattered_field(&x, omega, res.k, &mat, &model, &plane, &field_opts)?;
        println!("{:>10.6} {:>14.6e}", omega.re, u.norm());
    }

    println!("\n{:>6} {:>14}", "r", "|u_sc| at Re ω_s");
    let omega = Complex64::new(res.omega.re, 0.0);
    for r in [2.0, 4.0, 8.0, 16.0] {
        let u = scattered_field(
            &[r, 0.0, 0.0],
            omega,
            res.k,
            &mat,
            &model,
            &plane,
            &FieldOptions::default(),
        )?;
        println!("{r:>6} {:>14.6e}", u.norm());
    }
    Ok(())
}
