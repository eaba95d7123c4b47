use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::closed_form::{omega_k_delta_2d, omega_k_delta_3d, ClosedForm};
use super::{
    newton, BackgroundDispersion, KClosure, MaterialParams, OrderTag, ResonanceResult,
    SolveOptions, Tolerances, I,
};
use crate::error::{invalid, Error, Result};
use crate::geometry::{Dim, QuadratureMesh};
use crate::kernel::{gamma_hat, Convention, KernelKind};
use crate::spectral::forms::{log_term, IndicatorForms};
use crate::spectral::{
    assemble, indicator_pair, leading_eigenpair, quadratic_form, shape_constants,
    IndicatorExpansion2D, ShapeConstants,
};

/// Spectral data of a 3D shape: the leading Newtonian eigenpair and its
/// shape constants. Fields are public so constants can be overridden.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectral3d {
    pub mode: Convention,
    pub lambda0: f64,
    pub vector: Vec<Complex64>,
    pub constants: ShapeConstants,
}

impl Spectral3d {
    pub fn compute(mesh: &QuadratureMesh, mode: Convention) -> Result<Self> {
        if mesh.dim != Dim::Three {
            return invalid("3D mesh required");
        }
        let matrix = assemble(mesh, mesh, KernelKind::series(Dim::Three, 0, mode))?;
        let pair = leading_eigenpair(&matrix, mesh)?;
        let constants = shape_constants(mesh, &pair.vector)?;
        Ok(Spectral3d {
            mode,
            lambda0: pair.value,
            vector: pair.vector,
            constants,
        })
    }

    fn sign(&self) -> f64 {
        match self.mode {
            Convention::PaperLiteral => -1.0,
            Convention::Consistent => 1.0,
        }
    }

    /// `λ_δ = λ₀ ∓ (i/4π)δk₀𝔹` (upper sign: paper convention).
    pub fn lambda_delta(&self, delta: f64, k0: Complex64) -> Complex64 {
        self.lambda0 + self.sign() * I / (4.0 * PI) * delta * k0 * self.constants.b
    }

    /// `⟨K^(2)u₀, u₀⟩ = ±𝔽/8π`.
    pub fn second_order(&self) -> Complex64 {
        -self.sign() * self.constants.f / (8.0 * PI)
    }

    /// `Λ` of the resonance condition `1 − δ²ω²ξΛ = 0`:
    /// `λ_δ − (δk₀)²𝔽/8π` when the correction is kept.
    pub fn effective(&self, delta: f64, k0: Complex64, correction: bool) -> Complex64 {
        let mut l = self.lambda_delta(delta, k0);
        if correction {
            let dk = delta * k0;
            l -= dk * dk * self.constants.f / (8.0 * PI);
        }
        l
    }

    pub fn closed_form(
        &self,
        mat: &MaterialParams,
        delta: f64,
        k0: Complex64,
    ) -> Result<ClosedForm> {
        omega_k_delta_3d(mat, delta, k0, self.lambda0, self.constants.b)
    }
}

/// Spectral data of a 2D shape for the normalised indicator `Î_D`: shape
/// constants plus the higher-order quadratic forms of the active kernel
/// convention. Fields are public so constants can be overridden.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectral2d {
    pub mode: Convention,
    pub measure: f64,
    /// `λ₋₁ = −|D|/2π`.
    pub lambda_m1: f64,
    pub vector: Vec<Complex64>,
    pub constants: ShapeConstants,
    /// `⟨K^(1)Î, Î⟩`.
    pub k1: Complex64,
    /// `⟨K^(2)Î, Î⟩`.
    pub k2: Complex64,
    /// Log-free companions (consistent convention; zero otherwise).
    pub lf1: Complex64,
    pub lf2: Complex64,
}

impl Spectral2d {
    pub fn compute(mesh: &QuadratureMesh, mode: Convention) -> Result<Self> {
        if mesh.dim != Dim::Two {
            return invalid("2D mesh required");
        }
        let pair = indicator_pair(mesh)?;
        let constants = shape_constants(mesh, &pair.vector)?;
        let zero = Complex64::new(0.0, 0.0);
        let (k1, k2, lf1, lf2) = match mode {
            Convention::PaperLiteral => (
                -I * constants.g / (4.0 * PI),
                I * constants.s / (4.0 * PI),
                zero,
                zero,
            ),
            Convention::Consistent => {
                let u = &pair.vector;
                (
                    quadratic_form(mesh, KernelKind::series(Dim::Two, 1, mode), u)?,
                    quadratic_form(mesh, KernelKind::series(Dim::Two, 2, mode), u)?,
                    quadratic_form(mesh, KernelKind::log_free(1), u)?,
                    quadratic_form(mesh, KernelKind::log_free(2), u)?,
                )
            }
        };
        Ok(Spectral2d {
            mode,
            measure: mesh.measure(),
            lambda_m1: pair.value,
            vector: pair.vector,
            constants,
            k1,
            k2,
            lf1,
            lf2,
        })
    }

    pub fn log(&self, delta: f64, k0: Complex64) -> Result<Complex64> {
        log_term(delta, k0, self.mode)
    }

    /// `⟨K^(0)Î, Î⟩ = −ℙ/2π`.
    pub fn k0_form(&self) -> Complex64 {
        -self.constants.p / (2.0 * PI)
    }

    /// `λ_δ = Lλ₋₁ − ℙ/2π + (δk₀)²(L⟨K^(1)Î,Î⟩ + ⟨Klog^(1)Î,Î⟩)`, `L = log(δk₀γ̂)`.
    pub fn lambda_delta(&self, delta: f64, k0: Complex64) -> Result<Complex64> {
        let l = self.log(delta, k0)?;
        let dk = delta * k0;
        Ok(l * self.lambda_m1 + self.k0_form() + dk * dk * (l * self.k1 + self.lf1))
    }

    /// `Λ` of the resonance condition. The literal convention keeps the
    /// sign `λ_δ − i(δk₀)⁴L𝕊/4π`; the consistent convention adds
    /// `(δk₀)⁴(L⟨K^(2)⟩ + ⟨Klog^(2)⟩)`.
    pub fn effective(&self, delta: f64, k0: Complex64, correction: bool) -> Result<Complex64> {
        let mut lam = self.lambda_delta(delta, k0)?;
        if correction {
            let l = self.log(delta, k0)?;
            let dk4 = (delta * k0).powi(4);
            let sign = match self.mode {
                Convention::PaperLiteral => -1.0,
                Convention::Consistent => 1.0,
            };
            lam += sign * dk4 * (l * self.k2 + self.lf2);
        }
        Ok(lam)
    }

    pub fn indicator(&self, k0: Complex64) -> Result<IndicatorExpansion2D> {
        IndicatorForms {
            measure: self.measure,
            k0_form: self.k0_form(),
            k1_form: self.k1,
            mode: self.mode,
        }
        .expansion(k0)
    }

    pub fn closed_form(
        &self,
        mat: &MaterialParams,
        delta: f64,
        k0: Complex64,
    ) -> Result<ClosedForm> {
        omega_k_delta_2d(
            mat,
            delta,
            k0,
            self.lambda_m1,
            self.constants.p,
            self.constants.g,
            gamma_hat(k0, self.mode)?,
        )
    }
}

/// Which 2D resonance condition to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Variant2d {
    /// Eigenvalue expansion `λ_δ` with the `𝕊` correction.
    #[default]
    Eigen,
    /// `1 − δ²ω²ξ ν(δ) = 0`.
    Indicator,
}

/// Scalar resonance problem `G(ω) = (β − ω² + ηk² − iγω) − δ²ω²μ₀αΛ(ω)`.
pub(crate) struct Condition<'a> {
    pub mat: &'a MaterialParams,
    pub delta: f64,
    pub dispersion: BackgroundDispersion,
    pub lambda: &'a dyn Fn(Complex64) -> Result<Complex64>,
    pub k2: K2,
    /// Bracket `b(k₀)` of the self-consistent closure
    /// `ηk² = ω²(1 + αμ₀δ² b) − β`.
    pub balance: &'a dyn Fn(Complex64) -> Result<Complex64>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum K2 {
    Fixed(Complex64),
    SelfConsistent,
}

impl Condition<'_> {
    pub fn k2_at(&self, omega: Complex64, k0: Complex64) -> Result<Complex64> {
        match self.k2 {
            K2::Fixed(k2) => Ok(k2),
            K2::SelfConsistent => {
                let m = self.mat;
                let b = (self.balance)(k0)?;
                Ok(
                    (omega * omega * (1.0 + m.alpha * m.mu0 * self.delta * self.delta * b)
                        - m.beta)
                        / m.eta,
                )
            }
        }
    }

    pub fn eval(&self, omega: Complex64) -> Result<(Complex64, f64)> {
        let k0 = self.dispersion.k0(omega, self.mat);
        let lam = (self.lambda)(k0)?;
        let k2 = self.k2_at(omega, k0)?;
        let denom = self.mat.denominator_k2(omega, k2);
        let g =
            denom - self.delta * self.delta * omega * omega * self.mat.mu0 * self.mat.alpha * lam;
        Ok((g, (g / denom).norm()))
    }
}

/// Runs the `k₀`–`ω` fixed point `ω ← (ω^{p−1} f(ω))^{1/p}` on the closed
/// form `f`, where `f ∝ ω^{1−p}` up to logarithms.
pub(crate) fn closed_form_seed<F>(
    closed: F,
    mat: &MaterialParams,
    dispersion: BackgroundDispersion,
    power: i32,
    tol: &Tolerances,
) -> Result<(Complex64, Complex64, ClosedForm)>
where
    F: Fn(Complex64) -> Result<ClosedForm>,
{
    if dispersion.is_fixed() {
        let k0 = dispersion.k0(Complex64::new(0.0, 0.0), mat);
        let cf = closed(k0)?;
        return Ok((cf.omega, k0, cf));
    }
    let mut omega = Complex64::new(mat.beta.sqrt(), 0.0);
    for _ in 0..tol.fixed_point_max {
        let k0 = dispersion.k0(omega, mat);
        let cf = closed(k0)?;
        if cf.omega.norm() == 0.0 {
            return Ok((cf.omega, k0, cf));
        }
        let next = (omega.powi(power - 1) * cf.omega).powf(1.0 / power as f64);
        let change = (next - omega).norm() / next.norm();
        omega = next;
        if change < tol.fixed_point {
            let k0 = dispersion.k0(omega, mat);
            return Ok((omega, k0, closed(k0)?));
        }
    }
    Err(Error::NonConvergence {
        best: omega,
        residual: f64::NAN,
        iterations: tol.fixed_point_max,
    })
}

pub(crate) fn no_trivial(omega: Complex64, what: &str) -> Result<()> {
    if omega.norm() == 0.0 {
        return Err(Error::NoPhysicalRoot(format!(
            "{what} vanishes (γ = 0 gives only the trivial root ω = 0)"
        )));
    }
    Ok(())
}

pub(crate) fn mirror(omega: Complex64) -> Complex64 {
    if omega.re > 0.0 {
        omega
    } else {
        -omega
    }
}

pub(crate) fn resolve_k2(closure: KClosure, seed_k: Complex64) -> K2 {
    match closure {
        KClosure::FromSeed => K2::Fixed(seed_k * seed_k),
        KClosure::Fixed(k) => K2::Fixed(k * k),
        KClosure::SelfConsistent => K2::SelfConsistent,
    }
}

pub(crate) fn evanescent(k2: Complex64) -> bool {
    k2.re < 0.0 && k2.im.abs() <= 1e-14 * k2.re.abs()
}

pub(crate) struct Solved {
    pub omega: Complex64,
    pub k: Complex64,
    pub k0: Complex64,
    pub lambda: Complex64,
    pub residual: f64,
    pub iterations: usize,
}

pub(crate) fn run(cond: &Condition<'_>, seed: Complex64, tol: &Tolerances) -> Result<Solved> {
    let out = newton(|w| cond.eval(w), seed, tol)?;
    let omega = out.root;
    if !(omega.re > 0.0) || omega.norm() <= 1e-12 * seed.norm() {
        return Err(Error::NoPhysicalRoot(format!(
            "Newton converged to ω = {omega} with Re ω ≤ 0"
        )));
    }
    let k0 = cond.dispersion.k0(omega, cond.mat);
    let k2 = cond.k2_at(omega, k0)?;
    Ok(Solved {
        omega,
        k: k2.sqrt(),
        k0,
        lambda: (cond.lambda)(k0)?,
        residual: out.residual,
        iterations: out.iterations,
    })
}

pub(crate) fn check_inputs(
    mat: &MaterialParams,
    delta: f64,
    dispersion: &BackgroundDispersion,
    opts: &SolveOptions,
) -> Result<()> {
    mat.validate()?;
    dispersion.validate()?;
    opts.tolerances.validate()?;
    if !(delta > 0.0 && delta.is_finite()) {
        return invalid(format!("δ must be positive, got {delta}"));
    }
    if let KClosure::Fixed(k) = opts.closure {
        if !(k.re.is_finite() && k.im.is_finite()) {
            return invalid("fixed k must be finite");
        }
    }
    Ok(())
}

pub(crate) fn size_warning(delta: f64, k0: Complex64) -> Vec<String> {
    let dk = (delta * k0).norm();
    if dk > 0.5 {
        vec![format!(
            "δk₀ = {dk:.3} exceeds 0.5; the small-size expansion is unreliable"
        )]
    } else {
        Vec::new()
    }
}

/// Resonance of a 3D particle `δD + z`, computing the spectral data on
/// `mesh` in the convention of `opts.mode`.
pub fn solve_single_3d(
    mat: &MaterialParams,
    mesh: &QuadratureMesh,
    delta: f64,
    dispersion: BackgroundDispersion,
    opts: &SolveOptions,
) -> Result<ResonanceResult> {
    check_inputs(mat, delta, &dispersion, opts)?;
    let spectral = Spectral3d::compute(mesh, opts.mode)?;
    solve_single_3d_with(mat, &spectral, delta, dispersion, opts)
}

/// Solves `1 − δ²ω²ξ(ω,k)λ_δ = −δ⁴k₀²ω²ξ𝔽/8π` from precomputed data.
pub fn solve_single_3d_with(
    mat: &MaterialParams,
    spectral: &Spectral3d,
    delta: f64,
    dispersion: BackgroundDispersion,
    opts: &SolveOptions,
) -> Result<ResonanceResult> {
    check_inputs(mat, delta, &dispersion, opts)?;
    if spectral.constants.dim != Dim::Three {
        return invalid("3D spectral data required");
    }
    let tol = &opts.tolerances;
    let (omega_delta, k0_seed, cf) = closed_form_seed(
        |k0| spectral.closed_form(mat, delta, k0),
        mat,
        dispersion,
        2,
        tol,
    )?;
    no_trivial(omega_delta, "ω_δ")?;
    let seed = mirror(omega_delta);
    let correction = opts.include_correction;
    let lambda = |k0: Complex64| Ok(spectral.effective(delta, k0, correction));
    let balance = |_k0: Complex64| Ok(Complex64::new(spectral.lambda0, 0.0));
    let cond = Condition {
        mat,
        delta,
        dispersion,
        lambda: &lambda,
        k2: resolve_k2(opts.closure, cf.k),
        balance: &balance,
    };
    let s = run(&cond, seed, tol)?;
    let k2 = s.k * s.k;
    Ok(ResonanceResult {
        omega: s.omega,
        k: s.k,
        k0: s.k0,
        lambda: s.lambda,
        order_tag: if correction {
            OrderTag::FourthOrder
        } else {
            OrderTag::Leading
        },
        residual: s.residual,
        iterations: s.iterations,
        seed,
        evanescent: evanescent(k2) || (matches!(opts.closure, KClosure::FromSeed) && cf.evanescent),
        mode: spectral.mode,
        dim: Dim::Three,
        warnings: size_warning(delta, k0_seed),
    })
}

/// Resonance of a 2D particle `δD + z`, computing the spectral data on
/// `mesh` in the convention of `opts.mode`.
pub fn solve_single_2d(
    mat: &MaterialParams,
    mesh: &QuadratureMesh,
    delta: f64,
    dispersion: BackgroundDispersion,
    opts: &SolveOptions,
    variant: Variant2d,
) -> Result<ResonanceResult> {
    check_inputs(mat, delta, &dispersion, opts)?;
    let spectral = Spectral2d::compute(mesh, opts.mode)?;
    solve_single_2d_with(mat, &spectral, delta, dispersion, opts, variant)
}

/// Physical root of `(1 + δ²μ₀αΛ)ω² + iγω − (β + ηk²) = 0`.
pub(crate) fn quadratic_seed(
    mat: &MaterialParams,
    delta: f64,
    lambda: Complex64,
    k2: Complex64,
) -> Result<Complex64> {
    let a = 1.0 + delta * delta * mat.mu0 * mat.alpha * lambda;
    let b = I * mat.gamma;
    let c = -(mat.beta + mat.eta * k2);
    let disc = (b * b - 4.0 * a * c).sqrt();
    let roots = [(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)];
    roots
        .into_iter()
        .filter(|w| w.re > 0.0)
        .max_by(|x, y| x.re.total_cmp(&y.re))
        .ok_or_else(|| Error::NoPhysicalRoot("balance quadratic has no root with Re ω > 0".into()))
}

/// Solves the 2D condition of `variant` from precomputed data.
pub fn solve_single_2d_with(
    mat: &MaterialParams,
    spectral: &Spectral2d,
    delta: f64,
    dispersion: BackgroundDispersion,
    opts: &SolveOptions,
    variant: Variant2d,
) -> Result<ResonanceResult> {
    check_inputs(mat, delta, &dispersion, opts)?;
    if spectral.constants.dim != Dim::Two {
        return invalid("2D spectral data required");
    }
    let tol = &opts.tolerances;
    let (omega_delta, k0_seed, cf) = closed_form_seed(
        |k0| spectral.closed_form(mat, delta, k0),
        mat,
        dispersion,
        3,
        tol,
    )?;
    no_trivial(omega_delta, "ω_δ")?;
    let correction = opts.include_correction;
    let k2 = resolve_k2(opts.closure, cf.k);
    let eigen = |k0: Complex64| spectral.effective(delta, k0, correction);
    let indicator = |k0: Complex64| Ok(spectral.indicator(k0)?.nu(delta));
    let (lambda, tag): (&dyn Fn(Complex64) -> Result<Complex64>, OrderTag) = match variant {
        Variant2d::Eigen => (
            &eigen,
            if correction {
                OrderTag::FourthOrderLog
            } else {
                OrderTag::Leading
            },
        ),
        Variant2d::Indicator => (&indicator, OrderTag::IndicatorExpansion),
    };
    let eigen_balance =
        |k0: Complex64| Ok(spectral.log(delta, k0)? * spectral.lambda_m1 + spectral.k0_form());
    let indicator_balance = |k0: Complex64| {
        let e = spectral.indicator(k0)?;
        Ok(e.nu0 * delta.ln() + e.nu1)
    };
    let balance: &dyn Fn(Complex64) -> Result<Complex64> = match variant {
        Variant2d::Eigen => &eigen_balance,
        Variant2d::Indicator => &indicator_balance,
    };
    let seed = match variant {
        Variant2d::Eigen => mirror(omega_delta),
        Variant2d::Indicator => {
            let k2_seed = match k2 {
                K2::Fixed(k2) => k2,
                K2::SelfConsistent => cf.k * cf.k,
            };
            quadratic_seed(mat, delta, lambda(k0_seed)?, k2_seed)?
        }
    };
    let cond = Condition {
        mat,
        delta,
        dispersion,
        lambda,
        k2,
        balance,
    };
    let s = run(&cond, seed, tol)?;
    let k2 = s.k * s.k;
    Ok(ResonanceResult {
        omega: s.omega,
        k: s.k,
        k0: s.k0,
        lambda: s.lambda,
        order_tag: tag,
        residual: s.residual,
        iterations: s.iterations,
        seed,
        evanescent: evanescent(k2) || (matches!(opts.closure, KClosure::FromSeed) && cf.evanescent),
        mode: spectral.mode,
        dim: Dim::Two,
        warnings: size_warning(delta, k0_seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_mesh, DomainSpec};
    use crate::resonance::contrast;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn material() -> MaterialParams {
        MaterialParams::new(1.0, 1.0, 0.5, 1.0, 1.0, 1.0).unwrap()
    }

    fn ball() -> QuadratureMesh {
        build_mesh(&DomainSpec::ball(1.0), 10).unwrap()
    }

    fn disk() -> QuadratureMesh {
        build_mesh(&DomainSpec::disk(1.0), 24).unwrap()
    }

    fn defining_residual(
        mat: &MaterialParams,
        r: &ResonanceResult,
        delta: f64,
        lambda: Complex64,
    ) -> f64 {
        let xi = contrast(r.omega, r.k, mat).unwrap();
        (1.0 - delta * delta * r.omega * r.omega * xi * lambda).norm()
    }

    #[test]
    fn residual_3d_both_modes() {
        let mesh = ball();
        let mat = material();
        for mode in [Convention::PaperLiteral, Convention::Consistent] {
            let opts = SolveOptions::default().with_mode(mode);
            let r = solve_single_3d(
                &mat,
                &mesh,
                0.05,
                BackgroundDispersion::FixedK0(c(1.0, 0.0)),
                &opts,
            )
            .unwrap();
            assert!(r.residual <= 1e-10, "{mode}: {}", r.residual);
            assert!(r.omega.re > 0.0);
            assert!(r.iterations <= 30);
            let spec = Spectral3d::compute(&mesh, mode).unwrap();
            let lam = spec.effective(0.05, r.k0, true);
            assert!(defining_residual(&mat, &r, 0.05, lam) <= 1e-10);
            assert_eq!(r.order_tag, OrderTag::FourthOrder);
        }
    }

    #[test]
    fn forced_zero_f_gives_leading_balance() {
        let mesh = ball();
        let mat = material();
        let mut spec = Spectral3d::compute(&mesh, Convention::PaperLiteral).unwrap();
        spec.constants.f = c(0.0, 0.0);
        let disp = BackgroundDispersion::FixedK0(c(1.0, 0.0));
        let r = solve_single_3d_with(&mat, &spec, 0.05, disp, &SolveOptions::default()).unwrap();
        let lam = spec.lambda_delta(0.05, r.k0);
        assert!(defining_residual(&mat, &r, 0.05, lam) <= 1e-10);
    }

    #[test]
    fn paper_3d_seed_is_leading_root() {
        // without the 𝔽 term the literal split is exact: ω = ω_δ, k = k_δ
        let mesh = ball();
        let mat = material();
        let spec = Spectral3d::compute(&mesh, Convention::PaperLiteral).unwrap();
        let opts = SolveOptions {
            include_correction: false,
            ..SolveOptions::default()
        };
        let disp = BackgroundDispersion::FixedK0(c(1.0, 0.0));
        let r = solve_single_3d_with(&mat, &spec, 0.05, disp, &opts).unwrap();
        assert!((r.omega - r.seed).norm() <= 1e-10 * r.seed.norm());
        assert_eq!(r.order_tag, OrderTag::Leading);
    }

    #[test]
    fn fixed_k0_scaling_is_cubic() {
        let spec = Spectral3d::compute(&ball(), Convention::PaperLiteral).unwrap();
        let mat = MaterialParams::new(1.0, 1.0, 0.05, 1.0, 1.0, 1.0).unwrap();
        let disp = BackgroundDispersion::FixedK0(c(1.0, 0.0));
        let opts = SolveOptions::default();
        let a = solve_single_3d_with(&mat, &spec, 0.02, disp, &opts).unwrap();
        let b = solve_single_3d_with(&mat, &spec, 0.01, disp, &opts).unwrap();
        assert!(((b.seed / a.seed).norm() - 8.0).abs() < 1e-12);
        let ratio = b.omega.norm() / a.omega.norm();
        assert!((ratio - 8.0).abs() < 8e-2, "ratio {ratio}");
    }

    #[test]
    fn dispersive_k0_converges() {
        let mesh = ball();
        let mat = material();
        for disp in [
            BackgroundDispersion::PaperLiteral,
            BackgroundDispersion::Standard,
        ] {
            let r = solve_single_3d(&mat, &mesh, 0.05, disp, &SolveOptions::default()).unwrap();
            assert!(r.residual <= 1e-10);
            assert!((r.k0 - disp.k0(r.omega, &mat)).norm() < 1e-14 * r.k0.norm());
        }
    }

    #[test]
    fn lossless_has_no_physical_root() {
        let mat = MaterialParams::new(1.0, 1.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        let disp = BackgroundDispersion::FixedK0(c(1.0, 0.0));
        let e = solve_single_3d(&mat, &ball(), 0.05, disp, &SolveOptions::default());
        assert!(matches!(e, Err(Error::NoPhysicalRoot(_))));
        let e = solve_single_2d(
            &mat,
            &disk(),
            0.05,
            disp,
            &SolveOptions::default(),
            Variant2d::Eigen,
        );
        assert!(matches!(e, Err(Error::NoPhysicalRoot(_))));
    }

    #[test]
    fn residual_2d_variants_and_modes() {
        let mesh = disk();
        let mat = material();
        let disp = BackgroundDispersion::FixedK0(c(1.0, 0.0));
        for mode in [Convention::PaperLiteral, Convention::Consistent] {
            let opts = SolveOptions::default().with_mode(mode);
            for variant in [Variant2d::Eigen, Variant2d::Indicator] {
                let r = solve_single_2d(&mat, &mesh, 0.05, disp, &opts, variant).unwrap();
                assert!(r.residual <= 1e-10, "{mode} {variant:?}: {}", r.residual);
                assert!(r.omega.re > 0.0);
                assert!(r.iterations <= 30);
            }
        }
    }

    #[test]
    fn forced_zero_s_gives_leading_balance() {
        let mut spec = Spectral2d::compute(&disk(), Convention::PaperLiteral).unwrap();
        spec.constants.s = c(0.0, 0.0);
        spec.k2 = c(0.0, 0.0);
        let mat = material();
        let disp = BackgroundDispersion::FixedK0(c(1.0, 0.0));
        let r = solve_single_2d_with(
            &mat,
            &spec,
            0.05,
            disp,
            &SolveOptions::default(),
            Variant2d::Eigen,
        )
        .unwrap();
        let lam = spec.lambda_delta(0.05, r.k0).unwrap();
        assert!(defining_residual(&mat, &r, 0.05, lam) <= 1e-10);
    }

    #[test]
    fn eigen_and_indicator_approach_each_other() {
        let spec = Spectral2d::compute(&disk(), Convention::PaperLiteral).unwrap();
        let mat = material();
        let disp = BackgroundDispersion::FixedK0(c(1.0, 0.0));
        let opts = SolveOptions::default().with_closure(KClosure::Fixed(c(1.0, 0.0)));
        let gap = |delta: f64| {
            let e =
                solve_single_2d_with(&mat, &spec, delta, disp, &opts, Variant2d::Eigen).unwrap();
            let i = solve_single_2d_with(&mat, &spec, delta, disp, &opts, Variant2d::Indicator)
                .unwrap();
            (e.omega - i.omega).norm() / i.omega.norm()
        };
        assert!(gap(1e-3) < gap(1e-2));
    }

    #[test]
    fn damping_sign_is_stable_across_delta() {
        let spec = Spectral3d::compute(&ball(), Convention::PaperLiteral).unwrap();
        let mat = MaterialParams::new(1.0, 1.0, 0.05, 1.0, 1.0, 1.0).unwrap();
        let disp = BackgroundDispersion::FixedK0(c(1.0, 0.0));
        let opts = SolveOptions::default().with_closure(KClosure::Fixed(c(1.0, 0.0)));
        let signs: Vec<bool> = [0.08, 0.04, 0.02, 0.01]
            .iter()
            .map(|&d| {
                solve_single_3d_with(&mat, &spec, d, disp, &opts)
                    .unwrap()
                    .omega
                    .im
                    < 0.0
            })
            .collect();
        assert!(signs.iter().all(|&s| s == signs[0]));
    }

    #[test]
    fn self_consistent_closure_paper_3d() {
        let mat = material();
        let disp = BackgroundDispersion::FixedK0(c(1.0, 0.0));
        let opts = SolveOptions::default().with_closure(KClosure::SelfConsistent);
        let r = solve_single_3d(&mat, &ball(), 0.05, disp, &opts).unwrap();
        assert!(r.residual <= 1e-10);
        assert!(r.omega.re > 0.0);
    }

    #[test]
    fn quadratic_seed_picks_physical_root() {
        let mat = MaterialParams::new(1.0, 1.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        let w = quadratic_seed(&mat, 0.0, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((w - 1.0).norm() < 1e-15);
    }
}
