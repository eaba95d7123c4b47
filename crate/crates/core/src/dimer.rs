//! Hybridized resonances of two identical resonators `δD + z₁`, `δD + z₂`.
//!
//! All meshes live in the rescaled frame: the particles are `D + z_i/δ` and
//! the background kernel carries the wavenumber `δk₀`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{
    build_mesh, distance, scale_translate, Dim, DomainSpec, Point, QuadratureMesh,
};
use crate::kernel::{Convention, KernelKind, SeriesCoefficients};
use crate::resonance::single::{
    check_inputs, closed_form_seed, no_trivial, quadratic_seed, resolve_k2, run, Condition, K2,
};
use crate::resonance::{
    contrast, solve_single_2d_with, solve_single_3d_with, BackgroundDispersion, MaterialParams,
    ResonanceResult, SolveOptions, Spectral2d, Spectral3d, Variant2d,
};
use crate::spectral::{assemble, assemble_sum, check_disjoint, OperatorMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimerConfig {
    /// Shared reference shape `D`.
    pub domain: DomainSpec,
    pub z1: Point,
    pub z2: Point,
    pub delta: f64,
}

impl DimerConfig {
    pub fn new(domain: DomainSpec, z1: Point, z2: Point, delta: f64) -> Result<Self> {
        let c = DimerConfig {
            domain,
            z1,
            z2,
            delta,
        };
        c.validate()?;
        Ok(c)
    }

    /// Centers on the first axis, symmetric about the origin, with
    /// center-to-center distance `separation · δ · diam(D)`.
    pub fn symmetric(domain: DomainSpec, separation_in_diameters: f64, delta: f64) -> Result<Self> {
        let half = 0.5 * separation_in_diameters * delta * domain.diameter();
        Self::new(domain, [-half, 0.0, 0.0], [half, 0.0, 0.0], delta)
    }

    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return invalid(format!("δ must be positive, got {}", self.delta));
        }
        if self.domain.dim == Dim::Two && (self.z1[2] != 0.0 || self.z2[2] != 0.0) {
            return invalid("2D dimer centers must have a zero third coordinate");
        }
        let reach = self.delta * self.domain.diameter();
        if self.separation() <= reach {
            return Err(Error::Overlap {
                distance: self.separation(),
                h: reach,
            });
        }
        Ok(())
    }

    pub fn separation(&self) -> f64 {
        distance(&self.z1, &self.z2)
    }

    pub fn separation_in_diameters(&self) -> f64 {
        self.separation() / (self.delta * self.domain.diameter())
    }

    /// Meshes of `D`, `D + z₁/δ` and `D + z₂/δ` with identical node order.
    pub fn meshes(&self, cells_per_axis: usize) -> Result<DimerMeshes> {
        self.validate()?;
        let base = build_mesh(&self.domain, cells_per_axis)?;
        let shift = |z: &Point| [z[0] / self.delta, z[1] / self.delta, z[2] / self.delta];
        let first = scale_translate(&base, 1.0, shift(&self.z1))?;
        let second = scale_translate(&base, 1.0, shift(&self.z2))?;
        Ok(DimerMeshes {
            base,
            first,
            second,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimerMeshes {
    pub base: QuadratureMesh,
    pub first: QuadratureMesh,
    pub second: QuadratureMesh,
}

/// Coupling constants of a dimer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimerCouplings {
    /// `𝕂 = ⟨R_{D₁D₂}φ₁, φ₂⟩` (3D) or `⟨N_{D₁D₂}Î₁, Î₂⟩` (2D).
    pub k: Complex64,
    /// `𝕄 = ⟨R_{D₂D₁}φ₂, φ₁⟩` (3D) or `⟨N_{D₂D₁}Î₂, Î₁⟩` (2D).
    pub m: Complex64,
    /// `η̂` (2D only).
    pub eta_hat: Option<Complex64>,
    /// `Γ` for the `+√(𝕂𝕄)` and `−√(𝕂𝕄)` branches (3D only).
    pub gamma: Option<[Complex64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimerResult {
    /// Monopole (symmetric) mode.
    pub omega_m: Complex64,
    /// Dipole (antisymmetric) mode.
    pub omega_d: Complex64,
    pub couplings: DimerCouplings,
    /// Residuals for `(ω_m, ω_d)`.
    pub residuals: [f64; 2],
    pub iterations: [usize; 2],
    pub k: Complex64,
    /// `Re ω_m < Re ω_d` holds for the branch labelling.
    pub ordered: bool,
}

/// Off-diagonal operator `R_{D_i D_j}` with kernel `−G(x − y, δk₀)`: rows on
/// `target`, columns on `source`.
pub fn assemble_cross(
    target: &QuadratureMesh,
    source: &QuadratureMesh,
    delta_k0: Complex64,
) -> Result<OperatorMatrix> {
    require_distinct(target, source)?;
    assemble(target, source, KernelKind::exact(target.dim, delta_k0))
}

/// 2D `N = log(δk₀γ̂)K̂ + R^(0) + (δk₀)²log(δk₀γ̂)R^(1)` (plus the log-free
/// companion in the consistent convention).
pub fn assemble_cross_series_2d(
    target: &QuadratureMesh,
    source: &QuadratureMesh,
    delta: f64,
    k0: Complex64,
    mode: Convention,
) -> Result<OperatorMatrix> {
    if target.dim != Dim::Two {
        return invalid("series cross operator is 2D only");
    }
    require_distinct(target, source)?;
    let coeffs = SeriesCoefficients::new(Dim::Two, delta, k0, mode)?;
    assemble_sum(target, source, &coeffs.terms(1))
}

fn require_distinct(a: &QuadratureMesh, b: &QuadratureMesh) -> Result<()> {
    if a.fingerprint() == b.fingerprint() {
        return Err(Error::Overlap {
            distance: 0.0,
            h: a.h,
        });
    }
    check_disjoint(a, b)
}

/// `⟨A φ, ψ⟩ = Σ_i ψ̄_i w_i (Aφ)_i` for a cross operator `A` from `source`
/// to `target`.
fn cross_inner(
    matrix: &OperatorMatrix,
    target: &QuadratureMesh,
    phi: &[Complex64],
    psi: &[Complex64],
) -> Complex64 {
    matrix
        .apply(phi)
        .iter()
        .zip(psi)
        .zip(&target.weights)
        .map(|((a, p), w)| p.conj() * a * w)
        .sum()
}

fn check_vectors(
    first: &QuadratureMesh,
    second: &QuadratureMesh,
    phi1: &[Complex64],
    phi2: &[Complex64],
) -> Result<()> {
    if phi1.len() != first.len() || phi2.len() != second.len() {
        return invalid("eigenvector lengths do not match the dimer meshes");
    }
    Ok(())
}

/// `𝕂` and `𝕄` from the exact cross operators.
pub fn coupling_constants_3d(
    first: &QuadratureMesh,
    second: &QuadratureMesh,
    phi1: &[Complex64],
    phi2: &[Complex64],
    delta_k0: Complex64,
) -> Result<DimerCouplings> {
    check_vectors(first, second, phi1, phi2)?;
    let r12 = assemble_cross(second, first, delta_k0)?;
    let r21 = assemble_cross(first, second, delta_k0)?;
    Ok(DimerCouplings {
        k: cross_inner(&r12, second, phi1, phi2),
        m: cross_inner(&r21, first, phi2, phi1),
        eta_hat: None,
        gamma: None,
    })
}

/// `Γ = −1 − δ²μ₀αλ_δ ± δ²μ₀α√(𝕂𝕄)` for both signs.
pub fn gamma_branches(
    mat: &MaterialParams,
    delta: f64,
    lambda_delta: Complex64,
    k: Complex64,
    m: Complex64,
) -> [Complex64; 2] {
    let s = (k * m).sqrt();
    let a = delta * delta * mat.mu0 * mat.alpha;
    [
        -1.0 - a * lambda_delta + a * s,
        -1.0 - a * lambda_delta - a * s,
    ]
}

fn quadratic_roots(gamma: Complex64, mat: &MaterialParams, k2: Complex64) -> [Complex64; 2] {
    let i = Complex64::new(0.0, 1.0);
    let disc = (-(mat.gamma * mat.gamma) - 4.0 * gamma * (mat.beta + mat.eta * k2)).sqrt();
    [
        (i * mat.gamma + disc) / (2.0 * gamma),
        (i * mat.gamma - disc) / (2.0 * gamma),
    ]
}

/// `|(1 − δ²ω²ξλ_δ)² − δ⁴ω⁴ξ²𝕂𝕄|`.
///
/// At the excitonic pole the condition is multiplied through by the squared
/// denominator and the result is scaled by the size of its terms.
pub fn hybrid_residual_3d(
    mat: &MaterialParams,
    delta: f64,
    lambda_delta: Complex64,
    couplings: &DimerCouplings,
    omega: Complex64,
    k: Complex64,
) -> Result<f64> {
    let d = mat.denominator_k2(omega, k * k);
    if d.norm() > 0.0 {
        let t = delta * delta * omega * omega * contrast(omega, k, mat)?;
        let a = 1.0 - t * lambda_delta;
        return Ok((a * a - t * t * couplings.k * couplings.m).norm());
    }
    let s = delta * delta * omega * omega * mat.mu0 * mat.alpha;
    let p = s * s * (lambda_delta * lambda_delta - couplings.k * couplings.m);
    let scale =
        (omega.norm_sqr() + mat.gamma * omega.norm() + (mat.beta + mat.eta * k * k).norm()).powi(2);
    Ok(p.norm() / scale)
}

/// Closed-form hybridized frequencies
/// `ω = [iγ ± √(−γ² − 4Γ(β + ηk²))]/(2Γ)`.
///
/// The `−√(𝕂𝕄)` branch of `Γ` (effective eigenvalue `λ_δ + √(𝕂𝕄)`) is the
/// monopole, the `+√(𝕂𝕄)` branch the dipole.
pub fn hybrid_frequencies_3d(
    mat: &MaterialParams,
    delta: f64,
    lambda_delta: Complex64,
    couplings: &DimerCouplings,
    k: Complex64,
) -> Result<DimerResult> {
    mat.validate()?;
    let gammas = gamma_branches(mat, delta, lambda_delta, couplings.k, couplings.m);
    if gammas.iter().any(|g| g.norm() == 0.0) {
        return Err(Error::Pole("Γ vanishes".into()));
    }
    let pick = |g: Complex64| -> Result<Complex64> {
        quadratic_roots(g, mat, k * k)
            .into_iter()
            .filter(|w| w.re > 0.0)
            .max_by(|a, b| a.re.total_cmp(&b.re))
            .ok_or_else(|| Error::NoPhysicalRoot(format!("Γ = {g}: both roots have Re ω ≤ 0")))
    };
    let omega_d = pick(gammas[0])?;
    let omega_m = pick(gammas[1])?;
    let residuals = [
        hybrid_residual_3d(mat, delta, lambda_delta, couplings, omega_m, k)?,
        hybrid_residual_3d(mat, delta, lambda_delta, couplings, omega_d, k)?,
    ];
    let mut couplings = *couplings;
    couplings.gamma = Some(gammas);
    Ok(DimerResult {
        omega_m,
        omega_d,
        couplings,
        residuals,
        iterations: [0, 0],
        k,
        ordered: omega_m.re < omega_d.re,
    })
}

/// `k₀`-independent cross quadratic forms of a 2D dimer:
/// `⟨K Î₂, Î₁⟩` for `K^(−1)`, `R^(0)`, `R^(1)` and the log-free companion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimerForms2d {
    pub mode: Convention,
    pub measure: f64,
    pub indicator: Complex64,
    pub r0: Complex64,
    pub r1: Complex64,
    pub lf1: Complex64,
}

impl DimerForms2d {
    pub fn compute(
        first: &QuadratureMesh,
        second: &QuadratureMesh,
        mode: Convention,
    ) -> Result<Self> {
        if first.dim != Dim::Two || second.dim != Dim::Two {
            return invalid("2D dimer meshes required");
        }
        require_distinct(first, second)?;
        let mut kinds = vec![
            KernelKind::series(Dim::Two, -1, mode),
            KernelKind::series(Dim::Two, 0, mode),
            KernelKind::series(Dim::Two, 1, mode),
        ];
        if mode == Convention::Consistent {
            kinds.push(KernelKind::log_free(1));
        }
        let radial: Vec<_> = kinds
            .iter()
            .map(|k| k.radial_terms())
            .collect::<Result<_>>()?;
        let ind1 = 1.0 / first.measure().sqrt();
        let ind2 = 1.0 / second.measure().sqrt();
        let sums: Vec<Complex64> = first
            .nodes
            .par_iter()
            .zip(&first.weights)
            .map(|(x, wx)| {
                let mut acc = vec![Complex64::new(0.0, 0.0); radial.len()];
                for (y, wy) in second.nodes.iter().zip(&second.weights) {
                    let r = distance(x, y);
                    for (a, terms) in acc.iter_mut().zip(&radial) {
                        for t in terms {
                            *a += t.eval(r)? * (wx * wy);
                        }
                    }
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(vec![Complex64::new(0.0, 0.0); radial.len()], |mut s, a| {
                s.iter_mut().zip(a).for_each(|(x, y)| *x += y);
                s
            });
        let scale = ind1 * ind2;
        Ok(DimerForms2d {
            mode,
            measure: first.measure(),
            indicator: sums[0] * scale,
            r0: sums[1] * scale,
            r1: sums[2] * scale,
            lf1: sums.get(3).copied().unwrap_or_default() * scale,
        })
    }

    /// `η̂ = L⟨K̂Î₂,Î₁⟩ + ⟨R^(0)Î₂,Î₁⟩ + (δk₀)²(L⟨R^(1)Î₂,Î₁⟩ + ⟨Rlog^(1)Î₂,Î₁⟩)`.
    pub fn eta_hat(&self, delta: f64, k0: Complex64) -> Result<Complex64> {
        let c = SeriesCoefficients::new(Dim::Two, delta, k0, self.mode)?;
        Ok(c.log * self.indicator + self.r0 + c.c(1) * self.r1 + c.log_free(1) * self.lf1)
    }
}

/// Solves `1 − δ²ω²ξ(ω,k)(ν(δ) ± η̂) = 0` for both coherent branches; `+`
/// is the monopole.
pub fn hybrid_condition_2d(
    mat: &MaterialParams,
    single: &Spectral2d,
    forms: &DimerForms2d,
    delta: f64,
    dispersion: BackgroundDispersion,
    opts: &SolveOptions,
) -> Result<DimerResult> {
    check_inputs(mat, delta, &dispersion, opts)?;
    if forms.mode != single.mode {
        return invalid("dimer forms and single-particle data use different conventions");
    }
    let tol = &opts.tolerances;
    let (omega_delta, k0_seed, cf) = closed_form_seed(
        |k0| single.closed_form(mat, delta, k0),
        mat,
        dispersion,
        3,
        tol,
    )?;
    no_trivial(omega_delta, "ω_δ")?;
    let k2 = resolve_k2(opts.closure, cf.k);
    let k2_seed = match k2 {
        K2::Fixed(k2) => k2,
        K2::SelfConsistent => cf.k * cf.k,
    };
    let balance = |k0: Complex64| {
        let e = single.indicator(k0)?;
        Ok(e.nu0 * delta.ln() + e.nu1)
    };
    let mut solved = Vec::with_capacity(2);
    for sign in [1.0, -1.0] {
        let lambda =
            |k0: Complex64| Ok(single.indicator(k0)?.nu(delta) + sign * forms.eta_hat(delta, k0)?);
        let seed = quadratic_seed(mat, delta, lambda(k0_seed)?, k2_seed)?;
        let cond = Condition {
            mat,
            delta,
            dispersion,
            lambda: &lambda,
            k2,
            balance: &balance,
        };
        solved.push(run(&cond, seed, tol)?);
    }
    let eta = forms.eta_hat(delta, solved[0].k0)?;
    let (m, d) = (&solved[0], &solved[1]);
    Ok(DimerResult {
        omega_m: m.omega,
        omega_d: d.omega,
        couplings: DimerCouplings {
            k: eta,
            m: eta,
            eta_hat: Some(eta),
            gamma: None,
        },
        residuals: [m.residual, d.residual],
        iterations: [m.iterations, d.iterations],
        k: m.k,
        ordered: m.omega.re < d.omega.re,
    })
}

/// A solved dimer together with its isolated-particle reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimerSolution {
    pub config: DimerConfig,
    pub single: ResonanceResult,
    pub dimer: DimerResult,
}

impl DimerSolution {
    /// `max(|ω_m − ω_s|, |ω_d − ω_s|) / |ω_s|`.
    pub fn relative_spread(&self) -> f64 {
        let s = self.single.omega;
        (self.dimer.omega_m - s)
            .norm()
            .max((self.dimer.omega_d - s).norm())
            / s.norm()
    }

    /// `Re ω_m < Re ω_s < Re ω_d`.
    pub fn brackets_single(&self) -> bool {
        let s = self.single.omega.re;
        self.dimer.omega_m.re < s && s < self.dimer.omega_d.re
    }
}

/// Full 3D pipeline: leading eigenpair of `D`, single-particle resonance,
/// exact cross couplings at the single-particle `k₀`, closed-form hybrid
/// frequencies at the single-particle `k`.
pub fn solve_dimer_3d(
    mat: &MaterialParams,
    config: &DimerConfig,
    cells_per_axis: usize,
    dispersion: BackgroundDispersion,
    opts: &SolveOptions,
) -> Result<DimerSolution> {
    if config.domain.dim != Dim::Three {
        return invalid("3D dimer required");
    }
    let meshes = config.meshes(cells_per_axis)?;
    let spectral = Spectral3d::compute(&meshes.base, opts.mode)?;
    let single = solve_single_3d_with(mat, &spectral, config.delta, dispersion, opts)?;
    let couplings = coupling_constants_3d(
        &meshes.first,
        &meshes.second,
        &spectral.vector,
        &spectral.vector,
        config.delta * single.k0,
    )?;
    let dimer = hybrid_frequencies_3d(mat, config.delta, single.lambda, &couplings, single.k)?;
    Ok(DimerSolution {
        config: config.clone(),
        single,
        dimer,
    })
}

/// Full 2D pipeline: indicator data of `D`, single-particle resonance of the
/// indicator variant, cross forms and both hybrid branches.
pub fn solve_dimer_2d(
    mat: &MaterialParams,
    config: &DimerConfig,
    cells_per_axis: usize,
    dispersion: BackgroundDispersion,
    opts: &SolveOptions,
) -> Result<DimerSolution> {
    if config.domain.dim != Dim::Two {
        return invalid("2D dimer required");
    }
    let meshes = config.meshes(cells_per_axis)?;
    let spectral = Spectral2d::compute(&meshes.base, opts.mode)?;
    let single = solve_single_2d_with(
        mat,
        &spectral,
        config.delta,
        dispersion,
        opts,
        Variant2d::Indicator,
    )?;
    let forms = DimerForms2d::compute(&meshes.first, &meshes.second, opts.mode)?;
    let dimer = hybrid_condition_2d(mat, &spectral, &forms, config.delta, dispersion, opts)?;
    Ok(DimerSolution {
        config: config.clone(),
        single,
        dimer,
    })
}
