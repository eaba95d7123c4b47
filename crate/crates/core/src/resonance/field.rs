//! Far-from-particle scattered field near a resonance.
//!
//! Positions are in the reference frame of `D` (the particle scaled back by
//! `1/δ`), in which the background kernel carries the wavenumber `δk₀`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{contrast, MaterialParams, Spectral2d, Spectral3d};
use crate::error::{invalid, Error, Result};
use crate::geometry::{distance, Dim, Point, QuadratureMesh};
use crate::kernel::{green, Convention};

/// Which approximation to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum FieldForm {
    /// The closed approximation obtained after substituting the resonance
    /// condition into the pole-pencil expansion.
    #[default]
    Printed,
    /// The single-pole term `−δ²ω²ξ G ⟨u_in,u_δ⟩∫u_δ / (1 − δ²ω²ξΛ)`, which
    /// diverges at the resonance.
    PolePencil,
}

/// Where the Green's function is anchored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum KernelPoint {
    /// `G(x − c)∫u_δ` with `c` the mesh centroid.
    #[default]
    Centroid,
    /// `∫ G(x − y) u_δ(y) dy` over the mesh.
    MeshIntegral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct FieldOptions {
    pub form: FieldForm,
    pub kernel_point: KernelPoint,
    /// 2D only: use `ω²` instead of the literal `ω²·ω²` in the denominator.
    pub single_omega_sq: bool,
}

/// Everything the scattered-field formulas need about one particle at a
/// fixed `(δ, k₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldModel<'a> {
    pub mesh: &'a QuadratureMesh,
    /// Resonant mode `u_δ` (leading eigenvector in 3D, `Î_D` in 2D).
    pub vector: Vec<Complex64>,
    pub mode: Convention,
    pub delta: f64,
    pub k0: Complex64,
    /// Correction coefficient: `(δk₀)²⟨K^(2)u,u⟩` in 3D,
    /// `(δk₀)⁴(L⟨K^(2)Î,Î⟩ + ⟨Klog^(2)Î,Î⟩)` in 2D.
    pub correction: Complex64,
    /// `Λ` of the resonance condition at `(δ, k₀)`.
    pub lambda: Complex64,
}

impl<'a> FieldModel<'a> {
    pub fn from_3d(
        mesh: &'a QuadratureMesh,
        spectral: &Spectral3d,
        delta: f64,
        k0: Complex64,
    ) -> Result<Self> {
        if mesh.dim != Dim::Three || mesh.len() != spectral.vector.len() {
            return invalid("3D mesh matching the spectral data required");
        }
        let dk = delta * k0;
        Ok(FieldModel {
            mesh,
            vector: spectral.vector.clone(),
            mode: spectral.mode,
            delta,
            k0,
            correction: dk * dk * spectral.second_order(),
            lambda: spectral.effective(delta, k0, true),
        })
    }

    pub fn from_2d(
        mesh: &'a QuadratureMesh,
        spectral: &Spectral2d,
        delta: f64,
        k0: Complex64,
    ) -> Result<Self> {
        if mesh.dim != Dim::Two || mesh.len() != spectral.vector.len() {
            return invalid("2D mesh matching the spectral data required");
        }
        let l = spectral.log(delta, k0)?;
        Ok(FieldModel {
            mesh,
            vector: spectral.vector.clone(),
            mode: spectral.mode,
            delta,
            k0,
            correction: (delta * k0).powi(4) * (l * spectral.k2 + spectral.lf2),
            lambda: spectral.effective(delta, k0, true)?,
        })
    }
}

/// `u(x) − u_in(x)` near the resonance of the particle described by `model`.
pub fn scattered_field(
    x: &Point,
    omega: Complex64,
    k: Complex64,
    mat: &MaterialParams,
    model: &FieldModel<'_>,
    u_in: &dyn Fn(&Point) -> Complex64,
    opts: &FieldOptions,
) -> Result<Complex64> {
    let mesh = model.mesh;
    if mesh.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let nearest = mesh
        .nodes
        .iter()
        .map(|y| distance(x, y))
        .fold(f64::INFINITY, f64::min);
    if nearest < 0.5 * mesh.h {
        return invalid(format!(
            "evaluation point lies inside the particle (nearest node {nearest:.3e} away)"
        ));
    }
    let xi = contrast(omega, k, mat)?;
    let dk = model.delta * model.k0;
    let mut inner = Complex64::new(0.0, 0.0);
    let mut integral = Complex64::new(0.0, 0.0);
    for ((y, w), u) in mesh.nodes.iter().zip(&mesh.weights).zip(&model.vector) {
        inner += u_in(y) * u.conj() * w;
        integral += u * w;
    }
    let g_term = match opts.kernel_point {
        KernelPoint::Centroid => green(mesh.dim, x, &mesh.centroid(), dk)? * integral,
        KernelPoint::MeshIntegral => {
            let mut s = Complex64::new(0.0, 0.0);
            for ((y, w), u) in mesh.nodes.iter().zip(&mesh.weights).zip(&model.vector) {
                s += green(mesh.dim, x, y, dk)? * u * w;
            }
            s
        }
    };
    let d2w2xi = model.delta * model.delta * omega * omega * xi;
    match opts.form {
        FieldForm::Printed => {
            let mut den = d2w2xi * model.correction;
            if mesh.dim == Dim::Two && !opts.single_omega_sq {
                den *= omega * omega;
            }
            if den.norm() == 0.0 {
                return Err(Error::Pole("scattered-field denominator vanishes".into()));
            }
            Ok((integral + d2w2xi * g_term) / den * inner)
        }
        FieldForm::PolePencil => {
            let den = 1.0 - d2w2xi * model.lambda;
            if den.norm() == 0.0 {
                return Err(Error::Pole("ω is exactly resonant".into()));
            }
            Ok(-d2w2xi * g_term * inner / den)
        }
    }
}
