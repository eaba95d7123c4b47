use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::MaterialParams;
use crate::error::{invalid, Error, Result};

/// `(ω_δ, k_δ)` from splitting the leading-order condition into the
/// frequency and wavenumber equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub omega: Complex64,
    pub k: Complex64,
    /// The radicand of `k_δ` was real and negative, so `k_δ` is imaginary.
    pub evanescent: bool,
}

impl ClosedForm {
    /// `Re ω > 0`; `ω = 0` is the discarded trivial root.
    pub fn is_physical(&self) -> bool {
        self.omega.re > 0.0
    }
}

fn root_with_flag(radicand: Complex64) -> (Complex64, bool) {
    let evanescent = radicand.re < 0.0 && radicand.im.abs() <= 1e-14 * radicand.re.abs();
    (radicand.sqrt(), evanescent)
}

fn check_delta(delta: f64, k0: Complex64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return invalid(format!("δ must be positive, got {delta}"));
    }
    if k0.norm() == 0.0 || !k0.re.is_finite() || !k0.im.is_finite() {
        return invalid(format!("k0 must be finite and nonzero, got {k0}"));
    }
    Ok(())
}

/// `ω_δ = 4πγ/(αμ₀δ³k₀𝔹)` and
/// `k_δ = √(16π²γ²(1+αμ₀δ²λ₀)/(α²μ₀²δ⁶k₀²𝔹²η) − β/η)`.
pub fn omega_k_delta_3d(
    mat: &MaterialParams,
    delta: f64,
    k0: Complex64,
    lambda0: f64,
    b: Complex64,
) -> Result<ClosedForm> {
    mat.validate()?;
    check_delta(delta, k0)?;
    if b.norm() == 0.0 {
        return invalid("𝔹 vanishes: the eigenvector has zero mean");
    }
    let (a, m) = (mat.alpha, mat.mu0);
    let omega = 4.0 * PI * mat.gamma / (a * m * delta.powi(3) * k0 * b);
    let radicand = 16.0 * PI * PI * mat.gamma.powi(2) * (1.0 + a * m * delta * delta * lambda0)
        / (a * a * m * m * delta.powi(6) * k0 * k0 * b * b * mat.eta)
        - mat.beta / mat.eta;
    let (k, evanescent) = root_with_flag(radicand);
    Ok(ClosedForm {
        omega,
        k,
        evanescent,
    })
}

/// `ω_δ = 4πγ/(αδ⁴μ₀k₀² log(δk₀γ̂) 𝔾)` with `k_δ` from the matching
/// wavenumber equation.
#[allow(clippy::too_many_arguments)]
pub fn omega_k_delta_2d(
    mat: &MaterialParams,
    delta: f64,
    k0: Complex64,
    lambda_m1: f64,
    p: Complex64,
    g: Complex64,
    gamma_hat: Complex64,
) -> Result<ClosedForm> {
    mat.validate()?;
    check_delta(delta, k0)?;
    if g.norm() == 0.0 {
        return invalid("𝔾 vanishes");
    }
    let log = (delta * k0 * gamma_hat).ln();
    if log.norm() < 1e-14 {
        return Err(Error::ResonantLogarithm);
    }
    let (a, m) = (mat.alpha, mat.mu0);
    let omega = 4.0 * PI * mat.gamma / (a * delta.powi(4) * m * k0 * k0 * log * g);
    let radicand = -mat.beta / mat.eta
        + (2.0 * PI * a * delta * delta * m * lambda_m1 * log - a * delta * delta * m * p
            + 2.0 * PI)
            * 8.0
            * PI
            * mat.gamma.powi(2)
            / (mat.eta * a * a * delta.powi(8) * m * m * k0.powi(4) * log * log * g * g);
    let (k, evanescent) = root_with_flag(radicand);
    Ok(ClosedForm {
        omega,
        k,
        evanescent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{gamma_hat, Convention};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ones() -> MaterialParams {
        MaterialParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn plug_in_3d() {
        let cf = omega_k_delta_3d(&ones(), 1.0, c(1.0, 0.0), 0.0, c(1.0, 0.0)).unwrap();
        assert!((cf.omega - 4.0 * PI).norm() < 1e-14);
        assert!((cf.k - (16.0 * PI * PI - 1.0f64).sqrt()).norm() < 1e-12);
        assert!(!cf.evanescent);
    }

    #[test]
    fn lossless_gives_trivial_root() {
        let m = MaterialParams::new(1.0, 1.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        let cf = omega_k_delta_3d(&m, 0.1, c(1.0, 0.0), 0.2, c(3.0, 0.0)).unwrap();
        assert_eq!(cf.omega.norm(), 0.0);
        assert!(!cf.is_physical());
        assert!(cf.evanescent);
        assert!((cf.k - c(0.0, 1.0)).norm() < 1e-15);
        let gh = gamma_hat(c(1.0, 0.0), Convention::PaperLiteral).unwrap();
        let cf =
            omega_k_delta_2d(&m, 0.1, c(1.0, 0.0), -0.5, c(0.2, 0.0), c(5.3, 0.0), gh).unwrap();
        assert!(!cf.is_physical());
    }

    #[test]
    fn satisfies_3d_system() {
        let m = MaterialParams::new(0.8, 2.0, 0.3, 1.5, 1.2, 0.7).unwrap();
        let (delta, k0, l0, b) = (0.05, c(1.3, 0.0), 0.27, c(3.1, 0.0));
        let cf = omega_k_delta_3d(&m, delta, k0, l0, b).unwrap();
        let w = cf.omega;
        let e1 =
            m.alpha * m.mu0 * delta * delta * w * w * l0 - m.beta + w * w - m.eta * cf.k * cf.k;
        let e2 = m.gamma * w - m.mu0 / (4.0 * PI) * m.alpha * delta.powi(3) * w * w * k0 * b;
        assert!(e1.norm() <= 1e-12 * (w * w).norm());
        assert!(e2.norm() <= 1e-12 * (m.gamma * w).norm());
    }

    #[test]
    fn satisfies_2d_system() {
        let m = MaterialParams::new(0.8, 2.0, 0.3, 1.5, 1.2, 0.7).unwrap();
        let (delta, k0) = (0.05, c(1.1, 0.0));
        let (lm1, p, g) = (-0.5, c(-0.4, 0.0), c(5.33, 0.0));
        let gh = gamma_hat(k0, Convention::PaperLiteral).unwrap();
        let cf = omega_k_delta_2d(&m, delta, k0, lm1, p, g, gh).unwrap();
        let (w, l) = (cf.omega, (delta * k0 * gh).ln());
        let (a, mu) = (m.alpha, m.mu0);
        let d2 = delta * delta;
        let e1 = 4.0 * PI * a * d2 * w * w * mu * l * lm1
            - 2.0 * p * a * d2 * w * w * mu
            - 4.0 * PI * m.beta
            + 4.0 * PI * w * w
            - 4.0 * PI * m.eta * cf.k * cf.k;
        let e2 = -a * delta.powi(4) * w * w * mu * k0 * k0 * l * g + 4.0 * PI * m.gamma * w;
        let scale = 4.0 * PI * (w * w).norm();
        assert!(e1.norm() <= 1e-12 * scale, "{}", e1.norm() / scale);
        assert!(e2.norm() <= 1e-12 * (4.0 * PI * m.gamma * w).norm());
    }

    #[test]
    fn large_g_drives_frequency_to_zero() {
        let gh = gamma_hat(c(1.0, 0.0), Convention::Consistent).unwrap();
        let mut last = f64::INFINITY;
        for g in [1e2, 1e4, 1e6, 1e8] {
            let cf = omega_k_delta_2d(&ones(), 0.1, c(1.0, 0.0), -0.5, c(0.1, 0.0), c(g, 0.0), gh)
                .unwrap();
            assert!(cf.omega.norm() < last);
            last = cf.omega.norm();
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(omega_k_delta_3d(&ones(), 0.0, c(1.0, 0.0), 0.1, c(1.0, 0.0)).is_err());
        assert!(omega_k_delta_3d(&ones(), 0.1, c(0.0, 0.0), 0.1, c(1.0, 0.0)).is_err());
        assert!(omega_k_delta_3d(&ones(), 0.1, c(1.0, 0.0), 0.1, c(0.0, 0.0)).is_err());
        // δ k₀ γ̂ = 1 makes the logarithm vanish
        let e = omega_k_delta_2d(
            &ones(),
            1.0,
            c(1.0, 0.0),
            -0.5,
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(1.0, 0.0),
        );
        assert!(matches!(e, Err(Error::ResonantLogarithm)));
    }
}
