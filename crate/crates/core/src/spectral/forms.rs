//! Quadratic forms, shape constants and the small-`δk₀` eigenvalue
//! expansions built from them.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{EigenPair, Evaluator};
use crate::error::{Error, Result};
use crate::geometry::{distance, Dim, QuadratureMesh};
use crate::kernel::{equal_measure_radius, gamma_hat, Convention, KernelKind, RadialTerm};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_vector(mesh: &QuadratureMesh, u: &[Complex64]) -> Result<()> {
    if u.len() != mesh.len() {
        return Err(Error::InvalidInput(format!(
            "vector has {} entries, mesh has {} nodes",
            u.len(),
            mesh.len()
        )));
    }
    Ok(())
}

/// `Σ_i ū_i w_i Σ_j κ_t(x_i, x_j) w_j u_j` for several radial kernels at
/// once, with self-integrals on the diagonal.
fn radial_forms(
    mesh: &QuadratureMesh,
    kernels: &[RadialTerm],
    u: &[Complex64],
) -> Result<Vec<Complex64>> {
    check_vector(mesh, u)?;
    let dim = mesh.dim;
    let n = mesh.len();
    let diag: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            let a = equal_measure_radius(dim, mesh.weights[i]);
            kernels
                .iter()
                .map(|t| t.self_integral(dim, a, mesh.weights[i]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let partial: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = vec![Complex64::new(0.0, 0.0); kernels.len()];
            let x = &mesh.nodes[i];
            for j in 0..n {
                let wu = u[j] * mesh.weights[j];
                if i == j {
                    for (a, d) in acc.iter_mut().zip(&diag[i]) {
                        *a += d * u[j];
                    }
                    continue;
                }
                let r = distance(x, &mesh.nodes[j]);
                for (a, t) in acc.iter_mut().zip(kernels) {
                    *a += t.eval(r)? * wu;
                }
            }
            let s = u[i].conj() * mesh.weights[i];
            Ok(acc.into_iter().map(|a| a * s).collect())
        })
        .collect::<Result<_>>()?;
    let mut out = vec![Complex64::new(0.0, 0.0); kernels.len()];
    for row in partial {
        for (o, v) in out.iter_mut().zip(row) {
            *o += v;
        }
    }
    Ok(out)
}

/// `⟨K u, u⟩ = Σ_i ū_i w_i (K u)_i` evaluated without storing the matrix.
pub fn quadratic_form(
    mesh: &QuadratureMesh,
    kind: KernelKind,
    u: &[Complex64],
) -> Result<Complex64> {
    check_vector(mesh, u)?;
    if kind.dim != mesh.dim {
        return Err(Error::InvalidInput(
            "kernel dimension does not match mesh".into(),
        ));
    }
    let evals = Evaluator::new(&[(Complex64::new(1.0, 0.0), kind)])?;
    let dim = mesh.dim;
    let n = mesh.len();
    let total: Result<Complex64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let v: Complex64 = if i == j {
                    evals
                        .iter()
                        .map(|e| e.self_integral(dim, mesh.weights[j]))
                        .sum::<Result<Complex64>>()?
                } else {
                    let r = mesh.distance(i, j);
                    evals
                        .iter()
                        .map(|e| e.value(r))
                        .sum::<Result<Complex64>>()?
                        * mesh.weights[j]
                };
                acc += v * u[j];
            }
            Ok(acc * u[i].conj() * mesh.weights[i])
        })
        .sum();
    total
}

/// Shape constants of a nodal vector. Constants that do not apply in the
/// mesh dimension are NaN (`𝔽` in 2D; `ℙ`, `𝔾`, `𝕊` in 3D).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeConstants {
    pub dim: Dim,
    /// `(∫u)²`.
    pub b: Complex64,
    /// `∫∫ |x−y| u(y) ū(x)`.
    pub f: Complex64,
    /// `∫∫ log|x−y| u(y) ū(x)`.
    pub p: Complex64,
    /// `∫∫ u(y) ū(x) / |x−y|`.
    pub g: Complex64,
    /// `∫∫ u(y) ū(x) / |x−y|²`.
    pub s: Complex64,
}

pub fn shape_constants(mesh: &QuadratureMesh, u: &[Complex64]) -> Result<ShapeConstants> {
    check_vector(mesh, u)?;
    let one = Complex64::new(1.0, 0.0);
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let integral: Complex64 = u.iter().zip(&mesh.weights).map(|(x, w)| x * w).sum();
    let b = integral * integral;
    match mesh.dim {
        Dim::Three => {
            let f = radial_forms(mesh, &[RadialTerm::power(one, 1)], u)?[0];
            Ok(ShapeConstants {
                dim: Dim::Three,
                b,
                f,
                p: nan,
                g: nan,
                s: nan,
            })
        }
        Dim::Two => {
            let forms = radial_forms(
                mesh,
                &[
                    RadialTerm::log(one, 0),
                    RadialTerm::power(one, -1),
                    RadialTerm::power(one, -2),
                ],
                u,
            )?;
            Ok(ShapeConstants {
                dim: Dim::Two,
                b,
                f: nan,
                p: forms[0],
                g: forms[1],
                s: forms[2],
            })
        }
    }
}

/// Eigenvalue of `K^{δk₀}` near `λ₀` in 3D, truncated after `(δk₀)^order`.
pub fn perturbed_eigenvalue_3d(
    pair: &EigenPair,
    delta: f64,
    k0: Complex64,
    constants: &ShapeConstants,
    order: u8,
    mode: Convention,
) -> Result<Complex64> {
    if constants.dim != Dim::Three {
        return Err(Error::InvalidInput("3D constants required".into()));
    }
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidInput("order must be 1 or 2".into()));
    }
    let sign = match mode {
        Convention::PaperLiteral => -1.0,
        Convention::Consistent => 1.0,
    };
    let dk = k0 * delta;
    let mut lambda = Complex64::new(pair.value, 0.0) + sign * I / (4.0 * PI) * dk * constants.b;
    if order == 2 {
        // ⟨K^(2) u, u⟩ = ∓ 𝔽 / 8π
        lambda += dk * dk * (-sign) * constants.f / (8.0 * PI);
    }
    Ok(lambda)
}

/// Eigenvalue of `K^{δk₀}` near `log(δk₀γ̂) λ₋₁` in 2D for the pair
/// `(λ₋₁, Î_D)`. Order 1 stops at `(δk₀)²`, order 2 at `(δk₀)⁴`.
///
/// Paper mode uses `ℙ`, `𝔾`, `𝕊`; consistent mode evaluates the
/// higher-order quadratic forms (with their log-free companions) on `mesh`.
pub fn perturbed_eigenvalue_2d(
    pair: &EigenPair,
    delta: f64,
    k0: Complex64,
    constants: &ShapeConstants,
    mesh: &QuadratureMesh,
    order: u8,
    mode: Convention,
) -> Result<Complex64> {
    if constants.dim != Dim::Two || mesh.dim != Dim::Two {
        return Err(Error::InvalidInput("2D constants and mesh required".into()));
    }
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidInput("order must be 1 or 2".into()));
    }
    let dk = k0 * delta;
    let log = log_term(delta, k0, mode)?;
    let mut lambda = log * pair.value - constants.p / (2.0 * PI);
    match mode {
        Convention::PaperLiteral => {
            lambda -= I * dk * dk * log * constants.g / (4.0 * PI);
            if order == 2 {
                lambda += dk.powi(4) * log * I * constants.s / (4.0 * PI);
            }
        }
        Convention::Consistent => {
            for n in 1..=order as i32 {
                let k = quadratic_form(mesh, KernelKind::series(Dim::Two, n, mode), &pair.vector)?;
                let lf = quadratic_form(mesh, KernelKind::log_free(n), &pair.vector)?;
                lambda += dk.powi(2 * n) * (log * k + lf);
            }
        }
    }
    Ok(lambda)
}

pub(crate) fn log_term(delta: f64, k0: Complex64, mode: Convention) -> Result<Complex64> {
    if !(delta > 0.0) || k0.norm() == 0.0 {
        return Err(Error::InvalidInput("δ and k0 must be nonzero".into()));
    }
    let l = (k0 * delta * gamma_hat(k0, mode)?).ln();
    if l.norm() < 1e-14 {
        return Err(Error::ResonantLogarithm);
    }
    Ok(l)
}

/// `ν(δ) = ν₀ log δ + ν₁ + ν₂ δ² log δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicatorExpansion2D {
    pub nu0: f64,
    pub nu1: Complex64,
    pub nu2: Complex64,
    pub k0: Complex64,
    pub mode: Convention,
}

impl IndicatorExpansion2D {
    pub fn nu(&self, delta: f64) -> Complex64 {
        let l = delta.ln();
        self.nu0 * l + self.nu1 + self.nu2 * delta * delta * l
    }
}

/// Expansion of `⟨M^{δk₀} Î_D, Î_D⟩` in `δ` at fixed `k₀`.
pub fn indicator_expansion_2d(
    mesh: &QuadratureMesh,
    k0: Complex64,
    mode: Convention,
) -> Result<IndicatorExpansion2D> {
    let forms = IndicatorForms::new(mesh, mode)?;
    forms.expansion(k0)
}

/// `k₀`-independent parts of the indicator expansion, cached for repeated
/// evaluation at varying `k₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct IndicatorForms {
    pub measure: f64,
    pub k0_form: Complex64,
    pub k1_form: Complex64,
    pub mode: Convention,
}

impl IndicatorForms {
    pub fn new(mesh: &QuadratureMesh, mode: Convention) -> Result<Self> {
        let pair = super::indicator_pair(mesh)?;
        Ok(IndicatorForms {
            measure: mesh.measure(),
            k0_form: quadratic_form(mesh, KernelKind::series(Dim::Two, 0, mode), &pair.vector)?,
            k1_form: quadratic_form(mesh, KernelKind::series(Dim::Two, 1, mode), &pair.vector)?,
            mode,
        })
    }

    pub fn expansion(&self, k0: Complex64) -> Result<IndicatorExpansion2D> {
        if k0.norm() == 0.0 {
            return Err(Error::InvalidInput("k0 must be nonzero".into()));
        }
        let nu0 = -self.measure / (2.0 * PI);
        let gh = gamma_hat(k0, self.mode)?;
        Ok(IndicatorExpansion2D {
            nu0,
            nu1: nu0 * (k0 * gh).ln() + self.k0_form,
            nu2: k0 * k0 * self.k1_form,
            k0,
            mode: self.mode,
        })
    }
}

/// `𝔽` recovered from an order-2 eigenvalue:
/// `(8π/(δk₀)²)(λ_δ − λ₀ + (i/4π)δk₀𝔹)`.
pub fn shape_constant_f(
    lambda_delta: Complex64,
    lambda0: f64,
    b: Complex64,
    delta: f64,
    k0: Complex64,
) -> Result<Complex64> {
    let dk = k0 * delta;
    if dk.norm() == 0.0 {
        return Err(Error::InvalidInput("δk₀ must be nonzero".into()));
    }
    Ok(8.0 * PI / (dk * dk) * (lambda_delta - lambda0 + I / (4.0 * PI) * dk * b))
}

/// `𝕊` recovered from an order-2 eigenvalue:
/// `−i/((δk₀)⁴ L) · (4π(λ_δ − L λ₋₁) + 2ℙ + i(δk₀)² L 𝔾)` with
/// `L = log(δk₀γ̂)`.
pub fn shape_constant_s(
    lambda_delta: Complex64,
    lambda_m1: f64,
    p: Complex64,
    g: Complex64,
    delta: f64,
    k0: Complex64,
    gamma_hat: Complex64,
) -> Result<Complex64> {
    let dk = k0 * delta;
    if dk.norm() == 0.0 {
        return Err(Error::InvalidInput("δk₀ must be nonzero".into()));
    }
    let log = (dk * gamma_hat).ln();
    if log.norm() < 1e-14 {
        return Err(Error::ResonantLogarithm);
    }
    let bracket = 4.0 * PI * (lambda_delta - log * lambda_m1) + 2.0 * p + I * dk * dk * log * g;
    Ok(-I / (dk.powi(4) * log) * bracket)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_mesh, DomainSpec, QuadratureMesh};
    use crate::spectral::{assemble, indicator_pair};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_node_f_constant() {
        let w = 0.3;
        let mesh = QuadratureMesh {
            dim: Dim::Three,
            nodes: vec![[0.0; 3], [1.0, 0.0, 0.0]],
            weights: vec![w, w],
            h: 0.1,
            domain: DomainSpec::ball(1.0),
        };
        let u = vec![c(1.0 / (2.0 * w).sqrt(), 0.0); 2];
        let sc = shape_constants(&mesh, &u).unwrap();
        let a = equal_measure_radius(Dim::Three, w);
        let diag = 2.0 * (PI * a.powi(4)) / (2.0 * w) * w;
        assert!((sc.f.re - (w + diag)).abs() < 1e-15);
        assert!((sc.b.re - 2.0 * w).abs() < 1e-15);
    }

    #[test]
    fn unit_measure_indicator_has_unit_b() {
        let side = 0.5;
        let mesh = build_mesh(&DomainSpec::rectangle(side, side), 8).unwrap();
        let pair = indicator_pair(&mesh).unwrap();
        let sc = shape_constants(&mesh, &pair.vector).unwrap();
        assert!((sc.b.re - 1.0).abs() < 1e-14);
        assert!(sc.g.re > 0.0 && sc.f.re.is_nan());
    }

    #[test]
    fn quadratic_form_matches_matrix() {
        let mesh = build_mesh(&DomainSpec::ellipse(1.0, 0.6), 10).unwrap();
        let u: Vec<Complex64> = (0..mesh.len()).map(|i| c((i as f64).sin(), 0.3)).collect();
        let kind = KernelKind::series(Dim::Two, 2, Convention::PaperLiteral);
        let a = assemble(&mesh, &mesh, kind).unwrap();
        let au = a.apply(&u);
        let want: Complex64 = au
            .iter()
            .zip(&u)
            .zip(&mesh.weights)
            .map(|((x, y), w)| x * y.conj() * w)
            .sum();
        let got = quadratic_form(&mesh, kind, &u).unwrap();
        assert!((got - want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn g_constant_matches_closed_form() {
        // ∫∫_{D×D} |x−y|⁻¹ = 16π/3 on the unit disk, so 𝔾(Î_D) = 16/3
        let mesh = build_mesh(&DomainSpec::disk(1.0), 64).unwrap();
        let pair = indicator_pair(&mesh).unwrap();
        let g = shape_constants(&mesh, &pair.vector).unwrap().g.re;
        let want = 16.0 / 3.0;
        assert!((g - want).abs() / want < 1e-3, "{g} vs {want}");
    }

    #[test]
    fn f_constant_matches_mean_distance() {
        // mean distance between two points of the unit ball is 36/35
        let mesh = build_mesh(&DomainSpec::ball(1.0), 16).unwrap();
        let m = mesh.measure();
        let u = vec![c(1.0 / m.sqrt(), 0.0); mesh.len()];
        let f = shape_constants(&mesh, &u).unwrap().f.re;
        let want = 36.0 / 35.0 * m;
        assert!((f - want).abs() / want < 1e-2, "{f} vs {want}");
    }

    #[test]
    fn perturbed_3d_trivial_cases() {
        let pair = EigenPair {
            value: 0.4,
            vector: vec![],
            index: 0,
        };
        let sc = ShapeConstants {
            dim: Dim::Three,
            b: c(2.0, 0.0),
            f: c(3.0, 0.0),
            p: c(f64::NAN, 0.0),
            g: c(f64::NAN, 0.0),
            s: c(f64::NAN, 0.0),
        };
        let k0 = c(1.0, 0.0);
        let l = perturbed_eigenvalue_3d(&pair, 0.0, k0, &sc, 2, Convention::PaperLiteral).unwrap();
        assert_eq!(l, c(0.4, 0.0));
        let no_b = ShapeConstants {
            b: c(0.0, 0.0),
            ..sc
        };
        let l =
            perturbed_eigenvalue_3d(&pair, 0.1, k0, &no_b, 1, Convention::PaperLiteral).unwrap();
        assert_eq!(l, c(0.4, 0.0));
        let lp = perturbed_eigenvalue_3d(&pair, 0.1, k0, &sc, 1, Convention::PaperLiteral).unwrap();
        let lc = perturbed_eigenvalue_3d(&pair, 0.1, k0, &sc, 1, Convention::Consistent).unwrap();
        assert!((lp.im + lc.im).abs() < 1e-16 && lp.im < 0.0);
    }

    #[test]
    fn perturbed_2d_reductions() {
        let mesh = build_mesh(&DomainSpec::disk(1.0), 8).unwrap();
        let pair = indicator_pair(&mesh).unwrap();
        let zero = ShapeConstants {
            dim: Dim::Two,
            b: c(1.0, 0.0),
            f: c(f64::NAN, 0.0),
            p: c(0.0, 0.0),
            g: c(0.0, 0.0),
            s: c(0.0, 0.0),
        };
        let (delta, k0) = (0.1, c(1.0, 0.0));
        let l =
            perturbed_eigenvalue_2d(&pair, delta, k0, &zero, &mesh, 1, Convention::PaperLiteral)
                .unwrap();
        let log = log_term(delta, k0, Convention::PaperLiteral).unwrap();
        assert!((l - log * pair.value).norm() < 1e-15);
    }

    #[test]
    fn shape_constant_identities_algebra() {
        let (l0, b, d, k0) = (0.3, c(1.5, 0.0), 0.2, c(1.1, 0.0));
        let dk = k0 * d;
        let first = l0 - I / (4.0 * PI) * dk * b;
        assert!(shape_constant_f(first, l0, b, d, k0).unwrap().norm() < 1e-13);
        let cc = c(0.7, -0.2);
        let v = shape_constant_f(first + dk * dk * cc, l0, b, d, k0).unwrap();
        assert!((v - 8.0 * PI * cc).norm() < 1e-12);
        assert!(shape_constant_f(first, l0, b, 0.0, k0).is_err());

        let gh = gamma_hat(k0, Convention::PaperLiteral).unwrap();
        let log = (dk * gh).ln();
        let (lm1, p, g) = (-0.5, c(-0.4, 0.0), c(2.3, 0.0));
        let base = log * lm1 - p / (2.0 * PI) - I * dk * dk * log * g / (4.0 * PI);
        assert!(shape_constant_s(base, lm1, p, g, d, k0, gh).unwrap().norm() < 1e-10);
        let s = c(5.0, 0.0);
        let with = base + dk.powi(4) * log * I / (4.0 * PI) * s;
        assert!((shape_constant_s(with, lm1, p, g, d, k0, gh).unwrap() - s).norm() < 1e-9);
    }

    #[test]
    fn indicator_expansion_matches_exact_form() {
        let mesh = build_mesh(&DomainSpec::disk(1.0), 16).unwrap();
        let pair = indicator_pair(&mesh).unwrap();
        let k0 = c(1.0, 0.0);
        let e = indicator_expansion_2d(&mesh, k0, Convention::Consistent).unwrap();
        let gap = |delta: f64| {
            let exact =
                quadratic_form(&mesh, KernelKind::exact(Dim::Two, delta * k0), &pair.vector)
                    .unwrap();
            (exact - e.nu(delta)).norm()
        };
        let (coarse, fine) = (gap(2e-3), gap(1e-3));
        assert!(fine < 1e-6, "{fine}");
        assert!(coarse / fine > 3.0, "{coarse} {fine}");
    }

    #[test]
    fn indicator_nu0() {
        let disk = build_mesh(&DomainSpec::disk(1.0), 40).unwrap();
        let e = indicator_expansion_2d(&disk, c(1.0, 0.0), Convention::Consistent).unwrap();
        assert!((e.nu0 + 0.5).abs() < 2e-2);
        assert!((e.nu0 + disk.measure() / (2.0 * PI)).abs() < 1e-15);
        let sq = build_mesh(&DomainSpec::rectangle(0.5, 0.5), 10).unwrap();
        let e = indicator_expansion_2d(&sq, c(1.0, 0.0), Convention::Consistent).unwrap();
        assert!((e.nu0 + 1.0 / (2.0 * PI)).abs() < 1e-14);
    }
}
