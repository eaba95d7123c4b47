//! Single-particle subwavelength resonances: the dispersive permittivity
//! model, closed-form seeds, the nonlinear resonance conditions and the
//! scattered-field approximation.

mod closed_form;
mod field;
mod newton;
pub(crate) mod single;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::Dim;
use crate::kernel::Convention;

pub use closed_form::{omega_k_delta_2d, omega_k_delta_3d, ClosedForm};
pub use field::{scattered_field, FieldForm, FieldModel, FieldOptions, KernelPoint};
pub(crate) use newton::newton;
pub use single::{
    solve_single_2d, solve_single_2d_with, solve_single_3d, solve_single_3d_with, Spectral2d,
    Spectral3d, Variant2d,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Constants of `ε(ω, k) = ε₀ + α/(β − ω² + ηk² − iγω)` plus the background
/// permeability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub eta: f64,
    pub eps0: f64,
    pub mu0: f64,
}

impl MaterialParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, eta: f64, eps0: f64, mu0: f64) -> Result<Self> {
        let m = MaterialParams {
            alpha,
            beta,
            gamma,
            eta,
            eps0,
            mu0,
        };
        m.validate()?;
        Ok(m)
    }

    /// `γ = 0` is accepted (lossless limit); every other constant must be
    /// strictly positive.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("eta", self.eta),
            ("eps0", self.eps0),
            ("mu0", self.mu0),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return invalid(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return invalid(format!("gamma must be nonnegative, got {}", self.gamma));
        }
        Ok(())
    }

    /// `β − ω² + ηk² − iγω`, written in `k²` so that it stays analytic.
    pub(crate) fn denominator_k2(&self, omega: Complex64, k2: Complex64) -> Complex64 {
        self.beta - omega * omega + self.eta * k2 - I * self.gamma * omega
    }
}

fn checked_denominator(omega: Complex64, k: Complex64, mat: &MaterialParams) -> Result<Complex64> {
    let d = mat.denominator_k2(omega, k * k);
    if d.norm() == 0.0 || !d.re.is_finite() || !d.im.is_finite() {
        return Err(Error::Pole(format!(
            "excitonic pole: β − ω² + ηk² − iγω = 0 at ω = {omega}, k = {k}"
        )));
    }
    Ok(d)
}

/// `ε(ω, k)`.
pub fn permittivity(omega: Complex64, k: Complex64, mat: &MaterialParams) -> Result<Complex64> {
    Ok(mat.eps0 + mat.alpha / checked_denominator(omega, k, mat)?)
}

/// `ξ(ω, k) = μ₀(ε(ω, k) − ε₀)`.
pub fn contrast(omega: Complex64, k: Complex64, mat: &MaterialParams) -> Result<Complex64> {
    Ok(mat.mu0 * mat.alpha / checked_denominator(omega, k, mat)?)
}

/// How the background wavenumber `k₀` follows `ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BackgroundDispersion {
    /// `k₀ = ω ε₀ μ₀`.
    PaperLiteral,
    /// `k₀ = ω √(ε₀ μ₀)`.
    Standard,
    FixedK0(Complex64),
}

impl BackgroundDispersion {
    pub fn k0(&self, omega: Complex64, mat: &MaterialParams) -> Complex64 {
        match *self {
            BackgroundDispersion::PaperLiteral => omega * mat.eps0 * mat.mu0,
            BackgroundDispersion::Standard => omega * (mat.eps0 * mat.mu0).sqrt(),
            BackgroundDispersion::FixedK0(k0) => k0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let BackgroundDispersion::FixedK0(k0) = self {
            if !(k0.re.is_finite() && k0.im.is_finite()) || k0.norm() == 0.0 {
                return invalid(format!("fixed k0 must be finite and nonzero, got {k0}"));
            }
        }
        Ok(())
    }

    pub fn is_fixed(&self) -> bool {
        matches!(self, BackgroundDispersion::FixedK0(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            BackgroundDispersion::PaperLiteral => "paper",
            BackgroundDispersion::Standard => "standard",
            BackgroundDispersion::FixedK0(_) => "fixed",
        }
    }
}

/// How the interior wavenumber `k` is tied to `ω` during the solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub enum KClosure {
    /// `k = k_δ` from the closed form at the seed, then frozen.
    #[default]
    FromSeed,
    Fixed(Complex64),
    /// `k` eliminated through the real-part balance of the closed form at
    /// every iterate.
    SelfConsistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Target for `|F(ω)|`.
    pub residual: f64,
    pub max_iterations: usize,
    /// Abort once `|ω|` exceeds this multiple of the seed modulus.
    pub divergence: f64,
    /// Relative change that ends the `k₀`–`ω` fixed-point pass.
    pub fixed_point: f64,
    pub fixed_point_max: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-12,
            max_iterations: 50,
            divergence: 1e6,
            fixed_point: 1e-10,
            fixed_point_max: 50,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.residual > 0.0) || self.max_iterations == 0 || !(self.divergence > 1.0) {
            return invalid("tolerances must be positive with at least one iteration");
        }
        if !(self.fixed_point > 0.0) || self.fixed_point_max == 0 {
            return invalid("fixed-point tolerance must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub mode: Convention,
    pub closure: KClosure,
    pub tolerances: Tolerances,
    /// Keep the `𝔽` (3D) or `𝕊` (2D) correction in the resonance condition.
    pub include_correction: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            mode: Convention::PaperLiteral,
            closure: KClosure::FromSeed,
            tolerances: Tolerances::default(),
            include_correction: true,
        }
    }
}

impl SolveOptions {
    pub fn with_mode(mut self, mode: Convention) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_closure(mut self, closure: KClosure) -> Self {
        self.closure = closure;
        self
    }
}

/// Which truncation of the resonance condition produced a root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderTag {
    /// `1 − δ²ω²ξλ_δ = 0`.
    Leading,
    /// 3D condition with the `𝔽` term.
    FourthOrder,
    /// 2D condition with the `𝕊` term.
    FourthOrderLog,
    /// 2D condition `1 − δ²ω²ξ ν(δ) = 0`.
    IndicatorExpansion,
}

impl OrderTag {
    pub fn label(self) -> &'static str {
        match self {
            OrderTag::Leading => "leading",
            OrderTag::FourthOrder => "fourth-order",
            OrderTag::FourthOrderLog => "fourth-order-log",
            OrderTag::IndicatorExpansion => "indicator",
        }
    }
}

impl fmt::Display for OrderTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BackgroundDispersion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "paper" => Ok(BackgroundDispersion::PaperLiteral),
            "standard" => Ok(BackgroundDispersion::Standard),
            other => other
                .parse::<f64>()
                .map(|k| BackgroundDispersion::FixedK0(Complex64::new(k, 0.0)))
                .map_err(|_| {
                    Error::Config(format!(
                        "dispersion must be 'paper', 'standard' or a number, got '{other}'"
                    ))
                }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceResult {
    pub omega: Complex64,
    pub k: Complex64,
    /// `k₀` at the root.
    pub k0: Complex64,
    /// Effective eigenvalue `Λ` in `1 − δ²ω²ξΛ = 0` at the root.
    pub lambda: Complex64,
    pub order_tag: OrderTag,
    /// `|1 − δ²ω²ξ(ω, k)Λ(ω)|`.
    pub residual: f64,
    pub iterations: usize,
    pub seed: Complex64,
    /// `k` was taken from a negative radicand.
    pub evanescent: bool,
    pub mode: Convention,
    pub dim: Dim,
    pub warnings: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit() -> MaterialParams {
        MaterialParams::new(1.0, 4.0, 1.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn static_permittivity() {
        let m = unit();
        let eps = permittivity(c(0.0, 0.0), c(0.0, 0.0), &m).unwrap();
        assert_relative_eq!(eps.re, 1.25, epsilon = 1e-15);
        assert_eq!(eps.im, 0.0);
        let xi = contrast(c(0.0, 0.0), c(0.0, 0.0), &m).unwrap();
        assert_relative_eq!(xi.re, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn direct_arithmetic_sample() {
        let eps = permittivity(c(1.0, 0.0), c(1.0, 0.0), &unit()).unwrap();
        let want = 1.0 + 1.0 / c(4.0, -1.0);
        assert!((eps - want).norm() < 1e-15);
    }

    #[test]
    fn exact_pole_is_an_error() {
        let m = MaterialParams::new(1.0, 3.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        let e = permittivity(c(2.0, 0.0), c(1.0, 0.0), &m);
        assert!(matches!(e, Err(Error::Pole(_))));
        assert!(matches!(
            contrast(c(2.0, 0.0), c(1.0, 0.0), &m),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn near_pole_grows() {
        let mut last = 0.0;
        for g in [1e-1, 1e-2, 1e-3, 1e-4] {
            let m = MaterialParams::new(1.0, 3.0, g, 1.0, 1.0, 1.0).unwrap();
            let e = permittivity(c(2.0, 0.0), c(1.0, 0.0), &m).unwrap().norm();
            assert!(e > last);
            last = e;
        }
    }

    #[test]
    fn contrast_decays_at_large_frequency() {
        let xi = contrast(c(1e6, 0.0), c(1.0, 0.0), &unit()).unwrap();
        assert!(xi.norm() < 1e-11);
    }

    #[test]
    fn rejects_bad_constants() {
        assert!(MaterialParams::new(0.0, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(MaterialParams::new(1.0, 1.0, -1.0, 1.0, 1.0, 1.0).is_err());
        assert!(MaterialParams::new(1.0, 1.0, 1.0, 1.0, f64::NAN, 1.0).is_err());
        assert!(BackgroundDispersion::FixedK0(c(0.0, 0.0))
            .validate()
            .is_err());
    }

    #[test]
    fn dispersion_laws() {
        let m = MaterialParams::new(1.0, 1.0, 1.0, 1.0, 2.0, 8.0).unwrap();
        let w = c(3.0, -0.5);
        assert_eq!(BackgroundDispersion::PaperLiteral.k0(w, &m), w * 16.0);
        assert_eq!(BackgroundDispersion::Standard.k0(w, &m), w * 4.0);
        assert_eq!(
            BackgroundDispersion::FixedK0(c(0.7, 0.0)).k0(w, &m),
            c(0.7, 0.0)
        );
        assert_eq!(
            "standard".parse::<BackgroundDispersion>().unwrap(),
            BackgroundDispersion::Standard
        );
        assert_eq!(
            "1.5".parse::<BackgroundDispersion>().unwrap(),
            BackgroundDispersion::FixedK0(c(1.5, 0.0))
        );
    }

    proptest! {
        #[test]
        fn contrast_matches_permittivity(
            wr in 0.1f64..5.0, wi in -1.0f64..0.0, kr in 0.0f64..3.0,
            alpha in 0.1f64..5.0, beta in 0.1f64..5.0, gamma in 0.0f64..2.0,
        ) {
            let m = MaterialParams::new(alpha, beta, gamma, 1.3, 1.7, 0.9).unwrap();
            let w = c(wr, wi);
            let k = c(kr, 0.0);
            if let (Ok(eps), Ok(xi)) = (permittivity(w, k, &m), contrast(w, k, &m)) {
                let back = xi / m.mu0 + m.eps0;
                prop_assert!((back - eps).norm() <= 1e-12 * eps.norm());
            }
        }
    }
}
