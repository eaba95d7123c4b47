//! Hankel functions of the first kind, orders 0 and 1, for complex argument
//! in the right half plane.
//!
//! Ascending series below [`SERIES_SPLIT`], Hankel asymptotic expansion above.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Modulus at which evaluation switches from the ascending series to the
/// asymptotic expansion.
pub const SERIES_SPLIT: f64 = 12.0;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check(z: Complex64) -> Result<()> {
    if z.norm() == 0.0 {
        return Err(Error::Singularity("Hankel function at z = 0".into()));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidInput(format!(
            "non-finite Hankel argument {z}"
        )));
    }
    Ok(())
}

/// `H0⁽¹⁾(z)`.
pub fn hankel0(z: Complex64) -> Result<Complex64> {
    check(z)?;
    if z.norm() <= SERIES_SPLIT {
        let (j0, y0) = j0_y0_series(z);
        Ok(j0 + I * y0)
    } else {
        Ok(asymptotic(0, z))
    }
}

/// `H1⁽¹⁾(z)`.
pub fn hankel1(z: Complex64) -> Result<Complex64> {
    check(z)?;
    if z.norm() <= SERIES_SPLIT {
        let (j1, y1) = j1_y1_series(z);
        Ok(j1 + I * y1)
    } else {
        Ok(asymptotic(1, z))
    }
}

/// `(J0(z), Y0(z))` from the ascending series.
pub fn j0_y0_series(z: Complex64) -> (Complex64, Complex64) {
    let q = -z * z / 4.0;
    let mut term = Complex64::new(1.0, 0.0);
    let mut j0 = term;
    let mut harmonic_sum = Complex64::new(0.0, 0.0);
    let mut h = 0.0;
    for m in 1..300 {
        let mf = m as f64;
        term *= q / (mf * mf);
        h += 1.0 / mf;
        j0 += term;
        harmonic_sum += h * term;
        if term.norm() < 1e-18 * j0.norm().max(1e-300) && m > 4 {
            break;
        }
    }
    let y0 = FRAC_2_PI * (((z / 2.0).ln() + EULER_GAMMA) * j0 - harmonic_sum);
    (j0, y0)
}

/// `(J1(z), Y1(z))` from the ascending series.
pub fn j1_y1_series(z: Complex64) -> (Complex64, Complex64) {
    let half = z / 2.0;
    let q = -half * half;
    // term_m = (-1)^m (z/2)^{2m+1} / (m! (m+1)!)
    let mut term = half;
    let mut j1 = term;
    let mut h_m = 0.0;
    let mut h_m1 = 1.0;
    let mut tail = (h_m + h_m1) * term;
    for m in 1..300 {
        let mf = m as f64;
        term *= q / (mf * (mf + 1.0));
        h_m += 1.0 / mf;
        h_m1 += 1.0 / (mf + 1.0);
        j1 += term;
        tail += (h_m + h_m1) * term;
        if term.norm() < 1e-18 * j1.norm().max(1e-300) && m > 4 {
            break;
        }
    }
    let y1 = -FRAC_2_PI / z + FRAC_2_PI * (half.ln() + EULER_GAMMA) * j1 - tail / PI;
    (j1, y1)
}

fn asymptotic(order: u32, z: Complex64) -> Complex64 {
    let mu = 4.0 * (order * order) as f64;
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = term * I * (mu - odd * odd) / (k as f64 * 8.0 * z);
        let size = next.norm();
        if size > last {
            break;
        }
        term = next;
        sum += term;
        last = size;
        if size < 1e-18 {
            break;
        }
    }
    let phase = z - (order as f64) * PI / 2.0 - FRAC_PI_4;
    (FRAC_2_PI / z).sqrt() * (I * phase).exp() * sum
}
