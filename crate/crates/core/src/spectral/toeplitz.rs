//! Matrix-free leading eigenvalue on uniform grids.
//!
//! On a lattice mesh with uniform weights the operator is a block-Toeplitz
//! convolution, applied through a zero-padded circular convolution of twice
//! the grid size.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::Evaluator;
use crate::error::{Error, Result};
use crate::geometry::QuadratureMesh;
use crate::kernel::KernelKind;

struct Grid {
    shape: [usize; 3],
    index: Vec<usize>,
}

fn lattice(mesh: &QuadratureMesh) -> Result<Grid> {
    let w0 = mesh.weights[0];
    if mesh.weights.iter().any(|w| (w - w0).abs() > 1e-12 * w0) {
        return Err(Error::InvalidInput("weights are not uniform".into()));
    }
    let h = mesh.h;
    let mut lo = [f64::INFINITY; 3];
    for x in &mesh.nodes {
        for a in 0..3 {
            lo[a] = lo[a].min(x[a]);
        }
    }
    let mut idx = Vec::with_capacity(mesh.len());
    let mut counts = [1usize; 3];
    for x in &mesh.nodes {
        let mut p = [0usize; 3];
        for a in 0..3 {
            let t = (x[a] - lo[a]) / h;
            let r = t.round();
            if (t - r).abs() > 1e-6 {
                return Err(Error::InvalidInput("nodes are not on a lattice".into()));
            }
            p[a] = r as usize;
            counts[a] = counts[a].max(p[a] + 1);
        }
        idx.push(p);
    }
    let shape = counts.map(|c| if c > 1 { 2 * c } else { 1 });
    let index = idx
        .iter()
        .map(|p| (p[0] * shape[1] + p[1]) * shape[2] + p[2])
        .collect();
    Ok(Grid { shape, index })
}

struct NdFft {
    shape: [usize; 3],
    forward: [Arc<dyn Fft<f64>>; 3],
    inverse: [Arc<dyn Fft<f64>>; 3],
}

impl NdFft {
    fn new(shape: [usize; 3]) -> Self {
        let mut planner = FftPlanner::new();
        NdFft {
            shape,
            forward: shape.map(|n| planner.plan_fft_forward(n)),
            inverse: shape.map(|n| planner.plan_fft_inverse(n)),
        }
    }

    fn run(&self, data: &mut [Complex64], inverse: bool) {
        let [n0, n1, n2] = self.shape;
        let plans = if inverse {
            &self.inverse
        } else {
            &self.forward
        };
        let strides = [n1 * n2, n2, 1];
        for axis in 0..3 {
            let len = self.shape[axis];
            if len == 1 {
                continue;
            }
            let stride = strides[axis];
            let mut line = vec![Complex64::new(0.0, 0.0); len];
            let total = n0 * n1 * n2;
            for start in 0..total {
                // visit each line once, from its first element
                if (start / stride) % len != 0 {
                    continue;
                }
                for (k, v) in line.iter_mut().enumerate() {
                    *v = data[start + k * stride];
                }
                plans[axis].process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    data[start + k * stride] = *v;
                }
            }
        }
        if inverse {
            let scale = 1.0 / total_len(self.shape) as f64;
            data.iter_mut().for_each(|v| *v *= scale);
        }
    }
}

fn total_len(shape: [usize; 3]) -> usize {
    shape[0] * shape[1] * shape[2]
}

/// Dominant eigenvalue of a real symmetric kernel on a uniform lattice mesh,
/// by power iteration with FFT matrix-vector products.
///
/// The iteration starts from the constant vector, so it converges to the
/// largest-modulus eigenvalue whose eigenvector has nonzero mean. On the
/// disk this is the rotationally symmetric branch of the degenerate
/// leading eigenvalue `1/j₀₁²`.
pub fn uniform_leading_eigenvalue(mesh: &QuadratureMesh, kind: KernelKind) -> Result<f64> {
    if mesh.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let evals = Evaluator::new(&[(Complex64::new(1.0, 0.0), kind)])?;
    let grid = lattice(mesh)?;
    let shape = grid.shape;
    let w = mesh.weights[0];
    let h = mesh.h;
    let fft = NdFft::new(shape);

    let mut kernel = vec![Complex64::new(0.0, 0.0); total_len(shape)];
    let signed = |o: usize, m: usize| -> f64 {
        if o < m / 2 || m == 1 {
            o as f64
        } else {
            o as f64 - m as f64
        }
    };
    for i0 in 0..shape[0] {
        for i1 in 0..shape[1] {
            for i2 in 0..shape[2] {
                let d = [
                    signed(i0, shape[0]),
                    signed(i1, shape[1]),
                    signed(i2, shape[2]),
                ];
                let r = h * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                let v: Complex64 = if r == 0.0 {
                    evals
                        .iter()
                        .map(|e| e.self_integral(mesh.dim, w))
                        .sum::<Result<_>>()?
                } else {
                    evals
                        .iter()
                        .map(|e| e.value(r))
                        .sum::<Result<Complex64>>()?
                        * w
                };
                kernel[(i0 * shape[1] + i1) * shape[2] + i2] = v;
            }
        }
    }
    if kernel
        .iter()
        .any(|v| v.im.abs() > 1e-14 * v.norm().max(1e-300))
    {
        return Err(Error::NotSymmetrizable("kernel is not real".into()));
    }
    fft.run(&mut kernel, false);

    let n = mesh.len();
    let mut buf = vec![Complex64::new(0.0, 0.0); total_len(shape)];
    let mut apply = |u: &[f64]| -> Vec<f64> {
        buf.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for (k, &p) in grid.index.iter().enumerate() {
            buf[p] = Complex64::new(u[k], 0.0);
        }
        fft.run(&mut buf, false);
        for (b, k) in buf.iter_mut().zip(&kernel) {
            *b *= k;
        }
        fft.run(&mut buf, true);
        grid.index.iter().map(|&p| buf[p].re).collect()
    };

    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut lambda = 0.0;
    for _ in 0..2000 {
        let av = apply(&v);
        let next: f64 = av.iter().zip(&v).map(|(a, b)| a * b).sum();
        let norm = av.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotSymmetrizable("operator is zero".into()));
        }
        v = av.iter().map(|a| a / norm).collect();
        let done = (next - lambda).abs() <= 1e-14 * next.abs();
        lambda = next;
        if done {
            return Ok(lambda);
        }
    }
    Err(Error::NonConvergence {
        best: Complex64::new(lambda, 0.0),
        residual: f64::NAN,
        iterations: 2000,
    })
}
