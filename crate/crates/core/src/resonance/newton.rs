//! Damped complex Newton iteration for scalar resonance conditions.

use num_complex::Complex64;

use super::Tolerances;
use crate::error::{Error, Result};

const RING: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// Residual below which a stalled iterate is accepted as converged to the
/// floating-point floor of the condition.
const STALL_ACCEPT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct NewtonOutcome {
    pub root: Complex64,
    pub residual: f64,
    pub iterations: usize,
}

/// Finds a zero of `G`, where `eval(ω) = (G(ω), |F(ω)|)` and `F` is the
/// normalised condition whose modulus is reported as the residual.
///
/// The derivative uses the four-point ring `Σ G(ω + h iʲ) i⁻ʲ / 4h`, exact
/// through third order for analytic `G`.
pub(crate) fn newton<E>(eval: E, seed: Complex64, tol: &Tolerances) -> Result<NewtonOutcome>
where
    E: Fn(Complex64) -> Result<(Complex64, f64)>,
{
    tol.validate()?;
    if seed.norm() == 0.0 || !seed.re.is_finite() || !seed.im.is_finite() {
        return Err(Error::InvalidInput(format!("invalid Newton seed {seed}")));
    }
    let limit = tol.divergence * seed.norm();
    let mut omega = seed;
    let (mut g, mut f) = eval(omega)?;
    if f <= tol.residual {
        return Ok(NewtonOutcome {
            root: omega,
            residual: f,
            iterations: 0,
        });
    }
    for it in 1..=tol.max_iterations {
        let h = 1e-4 * omega.norm();
        let mut deriv = Complex64::new(0.0, 0.0);
        for r in RING {
            deriv += eval(omega + r * h)?.0 / r;
        }
        deriv /= 4.0 * h;
        if deriv.norm() == 0.0 || !deriv.re.is_finite() {
            return Err(Error::NonConvergence {
                best: omega,
                residual: f,
                iterations: it,
            });
        }
        let step = -g / deriv;
        let mut t = 1.0;
        let mut best = None;
        for _ in 0..16 {
            let trial = omega + step * t;
            if let Ok((g2, f2)) = eval(trial) {
                if g2.norm() < g.norm() {
                    best = Some((trial, g2, f2));
                    break;
                }
            }
            t *= 0.5;
        }
        let stalled = (step * t).norm() <= 8.0 * f64::EPSILON * omega.norm();
        match best {
            Some((w, g2, f2)) => {
                omega = w;
                g = g2;
                f = f2;
            }
            None if f <= STALL_ACCEPT => {
                return Ok(NewtonOutcome {
                    root: omega,
                    residual: f,
                    iterations: it,
                });
            }
            None => {
                return Err(Error::NonConvergence {
                    best: omega,
                    residual: f,
                    iterations: it,
                })
            }
        }
        if f <= tol.residual || (stalled && f <= STALL_ACCEPT) {
            return Ok(NewtonOutcome {
                root: omega,
                residual: f,
                iterations: it,
            });
        }
        if omega.norm() > limit || !omega.re.is_finite() {
            return Err(Error::NonConvergence {
                best: omega,
                residual: f,
                iterations: it,
            });
        }
    }
    Err(Error::NonConvergence {
        best: omega,
        residual: f,
        iterations: tol.max_iterations,
    })
}
