//! Green's functions, the Newtonian/logarithmic series kernels and the
//! cell self-integrals used to regularise diagonal entries.
//!
//! Every kernel is `κ` in `K[u](x) = ∫ κ(x, y) u(y) dy`. The exact kernel is
//! `κ = −G(x − y, k)`, so it carries the opposite sign of the Green's
//! function. Series kernels are represented as short sums of radial terms
//! `c · r^p · (log r)^{0|1}`.

pub mod hankel;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, Dim, Point};
pub use hankel::{hankel0, hankel1, EULER_GAMMA};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Catalan's constant.
pub const CATALAN: f64 = 0.915_965_594_177_219_1;

/// `∫ r⁻² dA` over a square cell with a concentric disk of radius `h/4`
/// removed. Independent of `h`.
pub const PUNCTURED_CELL_INVERSE_SQUARE: f64 = 5.046_481_984_505_532;

/// Sign and normalisation conventions of the series kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    /// Kernels, `γ̂` and resonance equations in the literal sign convention.
    PaperLiteral,
    /// Kernels derived consistently from `−G`, so the series reproduces the
    /// exact operator.
    Consistent,
}

impl Convention {
    pub fn label(self) -> &'static str {
        match self {
            Convention::PaperLiteral => "paper",
            Convention::Consistent => "consistent",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "paper" | "paper-literal" | "paperliteral" => Ok(Convention::PaperLiteral),
            "consistent" => Ok(Convention::Consistent),
            other => Err(Error::Config(format!(
                "unknown mode {other:?}; expected `paper` or `consistent`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KernelVariant {
    /// `−G(·, k)`.
    Exact(Complex64),
    /// Coefficient kernel `K^(n)` of the small-`δk₀` expansion.
    SeriesTerm(i32),
    /// Log-free companion of `K^(n)` (2D consistent mode only).
    LogFree(i32),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelKind {
    pub variant: KernelVariant,
    pub dim: Dim,
    pub mode: Convention,
}

impl KernelKind {
    pub fn exact(dim: Dim, k: Complex64) -> Self {
        KernelKind {
            variant: KernelVariant::Exact(k),
            dim,
            mode: Convention::Consistent,
        }
    }

    pub fn series(dim: Dim, n: i32, mode: Convention) -> Self {
        KernelKind {
            variant: KernelVariant::SeriesTerm(n),
            dim,
            mode,
        }
    }

    pub fn log_free(n: i32) -> Self {
        KernelKind {
            variant: KernelVariant::LogFree(n),
            dim: Dim::Two,
            mode: Convention::Consistent,
        }
    }

    pub fn label(&self) -> String {
        match self.variant {
            KernelVariant::Exact(k) => format!("exact(k={k})"),
            KernelVariant::SeriesTerm(n) => format!("K^({n})"),
            KernelVariant::LogFree(n) => format!("Klog^({n})"),
        }
    }

    /// Radial terms of a series kernel. Errors for exact kernels and for
    /// terms that do not exist in this dimension or convention.
    pub fn radial_terms(&self) -> Result<Vec<RadialTerm>> {
        let bad = || Error::InvalidKernel {
            term: self.label(),
            dim: self.dim.as_usize(),
        };
        let sign = match self.mode {
            Convention::Consistent => 1.0,
            Convention::PaperLiteral => -1.0,
        };
        match (self.dim, self.variant) {
            (_, KernelVariant::Exact(_)) => Err(bad()),
            (Dim::Three, KernelVariant::SeriesTerm(n)) if n >= 0 => {
                let c = I.powi(n) * (sign / (4.0 * PI * factorial(n as u32)));
                Ok(vec![RadialTerm::power(c, n - 1)])
            }
            (Dim::Three, _) => Err(bad()),
            (Dim::Two, KernelVariant::SeriesTerm(-1)) => {
                Ok(vec![RadialTerm::power((-1.0 / (2.0 * PI)).into(), 0)])
            }
            (Dim::Two, KernelVariant::SeriesTerm(0)) => {
                Ok(vec![RadialTerm::log((-1.0 / (2.0 * PI)).into(), 0)])
            }
            (Dim::Two, KernelVariant::SeriesTerm(n)) if n >= 1 => match self.mode {
                Convention::Consistent => Ok(vec![RadialTerm::power(
                    (-tau(n as u32) / (2.0 * PI)).into(),
                    2 * n,
                )]),
                Convention::PaperLiteral => match n {
                    1 => Ok(vec![RadialTerm::power(-I / (4.0 * PI), -1)]),
                    2 => Ok(vec![RadialTerm::power(I / (4.0 * PI), -2)]),
                    _ => Err(bad()),
                },
            },
            (Dim::Two, KernelVariant::LogFree(n))
                if n >= 1 && self.mode == Convention::Consistent =>
            {
                let t = tau(n as u32) / (2.0 * PI);
                Ok(vec![
                    RadialTerm::power((t * harmonic(n as u32)).into(), 2 * n),
                    RadialTerm::log((-t).into(), 2 * n),
                ])
            }
            (Dim::Two, _) => Err(bad()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.variant {
            KernelVariant::Exact(k) => {
                if !k.re.is_finite() || !k.im.is_finite() {
                    return Err(Error::InvalidInput("non-finite wavenumber".into()));
                }
                if self.dim == Dim::Two && k.norm() == 0.0 {
                    return Err(Error::InvalidInput(
                        "2D exact kernel needs a nonzero wavenumber".into(),
                    ));
                }
                Ok(())
            }
            _ => self.radial_terms().map(|_| ()),
        }
    }

    /// Kernel value at separation `r`.
    pub fn value(&self, r: f64) -> Result<Complex64> {
        match self.variant {
            KernelVariant::Exact(k) => {
                if r == 0.0 {
                    return Err(Error::Singularity("exact kernel at r = 0".into()));
                }
                Ok(-green_radial(self.dim, r, k)?)
            }
            _ => {
                let terms = self.radial_terms()?;
                terms.iter().map(|t| t.eval(r)).sum()
            }
        }
    }

    /// Integral of the kernel over the disk or ball of measure `weight`
    /// centred at the singularity. `r⁻²` terms in 2D use the punctured
    /// square cell instead.
    pub fn self_integral(&self, weight: f64) -> Result<Complex64> {
        let a = equal_measure_radius(self.dim, weight);
        match self.variant {
            KernelVariant::Exact(k) => match self.dim {
                Dim::Three => Ok(ball_integral_exact(k, a)),
                Dim::Two => Ok(I * (PI / 2.0) * disk_integral_r_h0(k, a)?),
            },
            _ => {
                let terms = self.radial_terms()?;
                terms
                    .iter()
                    .map(|t| t.self_integral(self.dim, a, weight))
                    .sum()
            }
        }
    }
}

/// `coeff · r^power · (log r)^{log as u8}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialTerm {
    pub coeff: Complex64,
    pub power: i32,
    pub log: bool,
}

impl RadialTerm {
    pub fn power(coeff: Complex64, power: i32) -> Self {
        RadialTerm {
            coeff,
            power,
            log: false,
        }
    }

    pub fn log(coeff: Complex64, power: i32) -> Self {
        RadialTerm {
            coeff,
            power,
            log: true,
        }
    }

    pub fn eval(&self, r: f64) -> Result<Complex64> {
        if r == 0.0 {
            return match (self.power, self.log) {
                (0, false) => Ok(self.coeff),
                (p, _) if p > 0 => Ok(Complex64::new(0.0, 0.0)),
                _ => Err(Error::Singularity("series kernel at r = 0".into())),
            };
        }
        let mut v = self.coeff * r.powi(self.power);
        if self.log {
            v *= r.ln();
        }
        Ok(v)
    }

    pub(crate) fn self_integral(&self, dim: Dim, a: f64, weight: f64) -> Result<Complex64> {
        let d = dim.as_usize() as i32;
        let q = self.power + d;
        let surface = match dim {
            Dim::Two => 2.0 * PI,
            Dim::Three => 4.0 * PI,
        };
        if q > 0 {
            let qf = q as f64;
            let base = surface * a.powi(q) / qf;
            let v = if self.log {
                base * (a.ln() - 1.0 / qf)
            } else {
                base
            };
            return Ok(self.coeff * v);
        }
        if dim == Dim::Two && self.power == -2 && !self.log {
            let _ = weight;
            return Ok(self.coeff * PUNCTURED_CELL_INVERSE_SQUARE);
        }
        Err(Error::Singularity(format!(
            "r^{} is not integrable in dimension {d}",
            self.power
        )))
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn harmonic(n: u32) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// `(−1/4)^n / (n!)²`, the ascending-series coefficient of `J0`.
fn tau(n: u32) -> f64 {
    (-0.25f64).powi(n as i32) / factorial(n).powi(2)
}

pub fn equal_measure_radius(dim: Dim, weight: f64) -> f64 {
    match dim {
        Dim::Two => (weight / PI).sqrt(),
        Dim::Three => (3.0 * weight / (4.0 * PI)).cbrt(),
    }
}

/// Outgoing Green's function of `Δ + k²`: `−e^{ikr}/(4πr)` in 3D and
/// `−(i/4) H0⁽¹⁾(kr)` in 2D.
pub fn green(dim: Dim, x: &Point, y: &Point, k: Complex64) -> Result<Complex64> {
    let r = distance(x, y);
    if r == 0.0 {
        return Err(Error::Singularity("Green's function at x = y".into()));
    }
    green_radial(dim, r, k)
}

fn green_radial(dim: Dim, r: f64, k: Complex64) -> Result<Complex64> {
    match dim {
        Dim::Three => Ok(-(I * k * r).exp() / (4.0 * PI * r)),
        Dim::Two => Ok(-I / 4.0 * hankel0(k * r)?),
    }
}

/// Series kernel `κ(x, y)` for a non-exact kind.
pub fn series_kernel(kind: &KernelKind, x: &Point, y: &Point) -> Result<Complex64> {
    if let KernelVariant::Exact(_) = kind.variant {
        return Err(Error::InvalidKernel {
            term: kind.label(),
            dim: kind.dim.as_usize(),
        });
    }
    kind.value(distance(x, y))
}

/// `∫_0^a r e^{ikr} dr`, the integral of `e^{ikr}/(4πr)` over a ball.
pub fn ball_integral_exact(k: Complex64, a: f64) -> Complex64 {
    let z = k * a;
    if z.norm() < 1.0 {
        // Σ (ika)^n a² / (n! (n+2))
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term / 2.0;
        for n in 1..40 {
            term *= I * z / n as f64;
            sum += term / (n as f64 + 2.0);
            if term.norm() < 1e-18 {
                break;
            }
        }
        sum * a * a
    } else {
        (I * z).exp() * (a / (I * k) + 1.0 / (k * k)) - 1.0 / (k * k)
    }
}

/// `∫_0^a r H0⁽¹⁾(kr) dr`.
pub fn disk_integral_r_h0(k: Complex64, a: f64) -> Result<Complex64> {
    if k.norm() == 0.0 {
        return Err(Error::InvalidInput("disk integral needs k ≠ 0".into()));
    }
    let z = k * a;
    if z.norm() > 8.0 {
        return Ok(a * hankel1(z)? / k + 2.0 * I / (PI * k * k));
    }
    // termwise integration of the J0 and Y0 ascending series
    let c = (z / 2.0).ln() + EULER_GAMMA;
    let q = -z * z / 4.0;
    let mut t = Complex64::new(1.0, 0.0);
    let mut h = 0.0;
    let mut ij = Complex64::new(0.0, 0.0);
    let mut iy = Complex64::new(0.0, 0.0);
    for m in 0..300 {
        if m > 0 {
            let mf = m as f64;
            t *= q / (mf * mf);
            h += 1.0 / mf;
        }
        let p = 2.0 * m as f64 + 2.0;
        ij += t / p;
        iy += t * ((c - h) / p - 1.0 / (p * p));
        if m > 4 && t.norm() < 1e-18 {
            break;
        }
    }
    let a2 = a * a;
    Ok(a2 * (ij + I * (2.0 / PI) * iy))
}

/// `γ̂ = ½ e^{γ − iπ/2}` (consistent) or `½ k₀ e^{γ − iπ/2}` (paper).
pub fn gamma_hat(k0: Complex64, mode: Convention) -> Result<Complex64> {
    let base = Complex64::new(0.0, -0.5 * EULER_GAMMA.exp());
    match mode {
        Convention::Consistent => Ok(base),
        Convention::PaperLiteral => {
            if k0.norm() == 0.0 {
                return Err(Error::InvalidInput("k0 must be nonzero".into()));
            }
            Ok(base * k0)
        }
    }
}

/// Coefficients `c_n` of the expansion `K^{δk₀} = Σ c_n K^(n)` (plus, in 2D
/// consistent mode, `Σ (δk₀)^{2n} Klog^(n)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesCoefficients {
    pub dim: Dim,
    pub mode: Convention,
    pub delta_k0: Complex64,
    /// `log(δ k₀ γ̂)` (2D only, zero in 3D).
    pub log: Complex64,
}

impl SeriesCoefficients {
    pub fn new(dim: Dim, delta: f64, k0: Complex64, mode: Convention) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::InvalidInput("δ must be positive".into()));
        }
        if k0.norm() == 0.0 {
            return Err(Error::InvalidInput("k0 must be nonzero".into()));
        }
        let delta_k0 = k0 * delta;
        let log = match dim {
            Dim::Three => Complex64::new(0.0, 0.0),
            Dim::Two => {
                let l = (delta_k0 * gamma_hat(k0, mode)?).ln();
                if l.norm() < 1e-14 {
                    return Err(Error::ResonantLogarithm);
                }
                l
            }
        };
        Ok(SeriesCoefficients {
            dim,
            mode,
            delta_k0,
            log,
        })
    }

    pub fn c(&self, n: i32) -> Complex64 {
        match self.dim {
            Dim::Three => self.delta_k0.powi(n),
            Dim::Two => match n {
                -1 => self.log,
                0 => Complex64::new(1.0, 0.0),
                _ => self.delta_k0.powi(2 * n) * self.log,
            },
        }
    }

    /// Coefficient of `Klog^(n)`; zero outside 2D consistent mode.
    pub fn log_free(&self, n: i32) -> Complex64 {
        if self.dim == Dim::Two && self.mode == Convention::Consistent && n >= 1 {
            self.delta_k0.powi(2 * n)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Terms `(coefficient, kernel)` of the expansion through order `n_max`.
    pub fn terms(&self, n_max: i32) -> Vec<(Complex64, KernelKind)> {
        let start = if self.dim == Dim::Two { -1 } else { 0 };
        let mut out = Vec::new();
        for n in start..=n_max {
            out.push((self.c(n), KernelKind::series(self.dim, n, self.mode)));
            if n >= 1 && self.dim == Dim::Two && self.mode == Convention::Consistent {
                out.push((self.log_free(n), KernelKind::log_free(n)));
            }
        }
        out
    }
}
