//! Dense operator matrices on quadrature meshes and their spectra.
//!
//! Entry `(i, j)` of an assembled matrix is `κ(x_i, y_j) · w_j`, so the
//! matrix acts on nodal values. On a single mesh the diagonal is the cell
//! self-integral of the kernel.

mod export;
pub(crate) mod forms;
mod toeplitz;

pub use export::{write_eigenpairs_csv, write_matrix_csv};
pub use forms::{
    indicator_expansion_2d, perturbed_eigenvalue_2d, perturbed_eigenvalue_3d, quadratic_form,
    shape_constant_f, shape_constant_s, shape_constants, IndicatorExpansion2D, ShapeConstants,
};
pub use toeplitz::uniform_leading_eigenvalue;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{distance, Dim, QuadratureMesh};
use crate::kernel::{KernelKind, KernelVariant, RadialTerm};

/// Kernel terms `Σ c_t κ_t` evaluated together.
#[derive(Debug, Clone)]
pub(crate) enum Evaluator {
    Radial(Vec<RadialTerm>),
    Exact(KernelKind),
}

impl Evaluator {
    pub(crate) fn new(terms: &[(Complex64, KernelKind)]) -> Result<Vec<Evaluator>> {
        let mut radial = Vec::new();
        let mut out = Vec::new();
        for (c, kind) in terms {
            kind.validate()?;
            match kind.variant {
                KernelVariant::Exact(_) => {
                    if *c != Complex64::new(1.0, 0.0) {
                        return Err(Error::InvalidInput(
                            "exact kernels cannot be scaled in a sum".into(),
                        ));
                    }
                    out.push(Evaluator::Exact(*kind));
                }
                _ => radial.extend(kind.radial_terms()?.into_iter().map(|t| RadialTerm {
                    coeff: t.coeff * c,
                    ..t
                })),
            }
        }
        if !radial.is_empty() {
            out.push(Evaluator::Radial(radial));
        }
        Ok(out)
    }

    pub(crate) fn value(&self, r: f64) -> Result<Complex64> {
        match self {
            Evaluator::Radial(terms) => terms.iter().map(|t| t.eval(r)).sum(),
            Evaluator::Exact(kind) => kind.value(r),
        }
    }

    pub(crate) fn self_integral(&self, dim: Dim, weight: f64) -> Result<Complex64> {
        match self {
            Evaluator::Radial(terms) => {
                let a = crate::kernel::equal_measure_radius(dim, weight);
                terms.iter().map(|t| t.self_integral(dim, a, weight)).sum()
            }
            Evaluator::Exact(kind) => kind.self_integral(weight),
        }
    }
}

/// Dense complex matrix of `Σ c_t K_t` between two meshes.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub data: DMatrix<Complex64>,
    pub terms: Vec<(Complex64, KernelKind)>,
    pub row_fingerprint: u64,
    pub col_fingerprint: u64,
    /// Row and column meshes are the same mesh (diagonal holds self-terms).
    pub same_mesh: bool,
    /// Entries include the column weights.
    pub includes_weights: bool,
}

impl OperatorMatrix {
    pub fn nrows(&self) -> usize {
        self.data.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.data.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        let v = &self.data * DVector::from_column_slice(u);
        v.iter().copied().collect()
    }

    pub fn label(&self) -> String {
        self.terms
            .iter()
            .map(|(c, k)| {
                if *c == Complex64::new(1.0, 0.0) {
                    k.label()
                } else {
                    format!("({c})*{}", k.label())
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Whether any term uses the punctured-cell rule on the diagonal.
    pub fn punctured_diagonal(&self) -> bool {
        self.same_mesh
            && self.terms.iter().any(|(_, k)| {
                k.dim == Dim::Two
                    && k.radial_terms()
                        .map(|ts| ts.iter().any(|t| t.power == -2))
                        .unwrap_or(false)
            })
    }
}

/// Assembles a single kernel.
pub fn assemble(
    row_mesh: &QuadratureMesh,
    col_mesh: &QuadratureMesh,
    kind: KernelKind,
) -> Result<OperatorMatrix> {
    assemble_sum(row_mesh, col_mesh, &[(Complex64::new(1.0, 0.0), kind)])
}

/// Assembles `Σ c_t K_t` in one pass.
pub fn assemble_sum(
    row_mesh: &QuadratureMesh,
    col_mesh: &QuadratureMesh,
    terms: &[(Complex64, KernelKind)],
) -> Result<OperatorMatrix> {
    if terms.is_empty() {
        return Err(Error::InvalidInput("no kernel terms".into()));
    }
    if row_mesh.dim != col_mesh.dim {
        return Err(Error::InvalidInput("meshes differ in dimension".into()));
    }
    if terms.iter().any(|(_, k)| k.dim != row_mesh.dim) {
        return Err(Error::InvalidInput(
            "kernel dimension does not match mesh".into(),
        ));
    }
    if row_mesh.is_empty() || col_mesh.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let evals = Evaluator::new(terms)?;
    let row_fp = row_mesh.fingerprint();
    let col_fp = col_mesh.fingerprint();
    let same = row_fp == col_fp;
    if !same {
        check_disjoint(row_mesh, col_mesh)?;
    }
    let dim = row_mesh.dim;
    let m = col_mesh.len();
    let rows: Vec<Vec<Complex64>> = (0..row_mesh.len())
        .into_par_iter()
        .map(|i| {
            let x = &row_mesh.nodes[i];
            (0..m)
                .map(|j| {
                    if same && i == j {
                        evals
                            .iter()
                            .map(|e| e.self_integral(dim, col_mesh.weights[j]))
                            .sum()
                    } else {
                        let r = distance(x, &col_mesh.nodes[j]);
                        let v: Result<Complex64> = evals.iter().map(|e| e.value(r)).sum();
                        Ok(v? * col_mesh.weights[j])
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let flat: Vec<Complex64> = rows.into_iter().flatten().collect();
    Ok(OperatorMatrix {
        data: DMatrix::from_row_slice(row_mesh.len(), m, &flat),
        terms: terms.to_vec(),
        row_fingerprint: row_fp,
        col_fingerprint: col_fp,
        same_mesh: same,
        includes_weights: true,
    })
}

pub(crate) fn check_disjoint(a: &QuadratureMesh, b: &QuadratureMesh) -> Result<()> {
    let h = 0.5 * a.h.max(b.h);
    let closest = a
        .nodes
        .par_iter()
        .map(|x| {
            b.nodes
                .iter()
                .map(|y| distance(x, y))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    if closest < h {
        return Err(Error::Overlap {
            distance: closest,
            h: 2.0 * h,
        });
    }
    Ok(())
}

/// Eigenpair of a weight-symmetrizable operator. `vector` holds nodal
/// values normalised so that `Σ |u_i|² w_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<Complex64>,
    /// Rank in the descending ordering.
    pub index: usize,
}

/// Fixes the global phase so the largest-modulus entry is real positive.
pub(crate) fn fix_phase(u: &mut [Complex64]) {
    // first index wins ties so the choice is deterministic
    let mut idx = 0;
    for (i, z) in u.iter().enumerate() {
        if z.norm() > u[idx].norm() * (1.0 + 1e-12) {
            idx = i;
        }
    }
    let z = u[idx];
    if z.norm() == 0.0 {
        return;
    }
    let phase = z.conj() / z.norm();
    u.iter_mut().for_each(|v| *v *= phase);
}

fn check_mesh(matrix: &OperatorMatrix, mesh: &QuadratureMesh) -> Result<()> {
    if !matrix.same_mesh || matrix.row_fingerprint != mesh.fingerprint() {
        return Err(Error::InvalidInput(
            "matrix was not assembled on this mesh".into(),
        ));
    }
    Ok(())
}

/// `S = W^{1/2} A W^{−1/2}` as a real symmetric matrix.
fn symmetrized(matrix: &OperatorMatrix, mesh: &QuadratureMesh) -> Result<DMatrix<f64>> {
    check_mesh(matrix, mesh)?;
    let n = mesh.len();
    let sw: Vec<f64> = mesh.weights.iter().map(|w| w.sqrt()).collect();
    let s = DMatrix::from_fn(n, n, |i, j| matrix.data[(i, j)] * (sw[i] / sw[j]));
    let scale = s.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let max_imag = s.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if max_imag > tol {
        return Err(Error::NotSymmetrizable(format!(
            "imaginary part {max_imag:.3e} exceeds tolerance"
        )));
    }
    let re = s.map(|z| z.re);
    let asym = (&re - re.transpose()).amax();
    if asym > tol {
        return Err(Error::NotSymmetrizable(format!(
            "asymmetry {asym:.3e} exceeds tolerance"
        )));
    }
    Ok((&re + re.transpose()) * 0.5)
}

/// Full eigendecomposition of a real, weight-symmetrizable same-mesh
/// operator, sorted by descending eigenvalue.
pub fn eig_sym(matrix: &OperatorMatrix, mesh: &QuadratureMesh) -> Result<Vec<EigenPair>> {
    let s = symmetrized(matrix, mesh)?;
    let eig = SymmetricEigen::new(s);
    let mut order: Vec<usize> = (0..mesh.len()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(order
        .into_iter()
        .enumerate()
        .map(|(rank, k)| {
            let v = eig.eigenvectors.column(k);
            let mut u: Vec<Complex64> = v
                .iter()
                .zip(&mesh.weights)
                .map(|(x, w)| Complex64::new(x / w.sqrt(), 0.0))
                .collect();
            fix_phase(&mut u);
            EigenPair {
                value: eig.eigenvalues[k],
                vector: u,
                index: rank,
            }
        })
        .collect())
}

/// Eigenpair of largest modulus. Uses the full decomposition for small
/// meshes and power iteration on the symmetrized matrix otherwise.
pub fn leading_eigenpair(matrix: &OperatorMatrix, mesh: &QuadratureMesh) -> Result<EigenPair> {
    if mesh.len() <= 1500 {
        let pairs = eig_sym(matrix, mesh)?;
        let best = pairs
            .iter()
            .max_by(|a, b| a.value.abs().partial_cmp(&b.value.abs()).unwrap())
            .cloned()
            .ok_or(Error::EmptyMesh)?;
        return Ok(best);
    }
    let s = symmetrized(matrix, mesh)?;
    let n = mesh.len();
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut lambda = 0.0;
    let mut converged = false;
    for _ in 0..5000 {
        let sv = &s * &v;
        let next_lambda = v.dot(&sv);
        let norm = sv.norm();
        if norm == 0.0 {
            return Err(Error::NotSymmetrizable("operator is zero".into()));
        }
        let next = sv / norm * next_lambda.signum();
        let change = (&next - &v).norm();
        v = next;
        let done = (next_lambda - lambda).abs() <= 1e-15 * next_lambda.abs() && change < 1e-11;
        lambda = next_lambda;
        if done {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            best: Complex64::new(lambda, 0.0),
            residual: f64::NAN,
            iterations: 5000,
        });
    }
    let mut u: Vec<Complex64> = v
        .iter()
        .zip(&mesh.weights)
        .map(|(x, w)| Complex64::new(x / w.sqrt(), 0.0))
        .collect();
    fix_phase(&mut u);
    Ok(EigenPair {
        value: lambda,
        vector: u,
        index: 0,
    })
}

/// The normalised indicator `Î_D = 1/√|D|` and `λ₋₁ = −|D|/2π`, the only
/// nonzero eigenpair of the 2D constant kernel.
pub fn indicator_pair(mesh: &QuadratureMesh) -> Result<EigenPair> {
    if mesh.dim != Dim::Two {
        return Err(Error::InvalidInput("indicator pair is 2D only".into()));
    }
    let measure = mesh.measure();
    Ok(EigenPair {
        value: -measure / (2.0 * std::f64::consts::PI),
        vector: vec![Complex64::new(1.0 / measure.sqrt(), 0.0); mesh.len()],
        index: 0,
    })
}

/// `‖A u − λ u‖ / ‖u‖` in the discrete `L²` norm.
pub fn eigen_residual(
    matrix: &OperatorMatrix,
    mesh: &QuadratureMesh,
    lambda: Complex64,
    u: &[Complex64],
) -> f64 {
    let au = matrix.apply(u);
    let mut num = 0.0;
    let mut den = 0.0;
    for ((a, x), w) in au.iter().zip(u).zip(&mesh.weights) {
        num += (a - lambda * x).norm_sqr() * w;
        den += x.norm_sqr() * w;
    }
    (num / den).sqrt()
}

/// Eigenvalue of a (generally complex) same-mesh operator nearest to
/// `shift`, by shifted inverse iteration. Intended for validation.
pub fn nearest_eigenvalue(
    matrix: &OperatorMatrix,
    mesh: &QuadratureMesh,
    shift: Complex64,
) -> Result<(Complex64, Vec<Complex64>)> {
    check_mesh(matrix, mesh)?;
    let n = mesh.len();
    let sw: Vec<f64> = mesh.weights.iter().map(|w| w.sqrt()).collect();
    let s = DMatrix::from_fn(n, n, |i, j| matrix.data[(i, j)] * (sw[i] / sw[j]));
    let shifted = &s - DMatrix::from_diagonal_element(n, n, shift);
    let lu = shifted.lu();
    let mut v = DVector::from_element(n, Complex64::new(1.0 / (n as f64).sqrt(), 0.0));
    let mut lambda = shift;
    let mut converged = false;
    for _ in 0..500 {
        let next = lu
            .solve(&v)
            .ok_or_else(|| Error::NotSymmetrizable("shift is an exact eigenvalue".into()))?;
        let norm = next.norm();
        v = next / Complex64::new(norm, 0.0);
        let sv = &s * &v;
        // bilinear Rayleigh quotient for complex-symmetric S
        let num: Complex64 = v.iter().zip(sv.iter()).map(|(a, b)| a * b).sum();
        let den: Complex64 = v.iter().map(|a| a * a).sum();
        lambda = num / den;
        let residual = (&sv - &v * lambda).norm();
        if residual <= 1e-13 * lambda.norm() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            best: lambda,
            residual: f64::NAN,
            iterations: 500,
        });
    }
    let mut u: Vec<Complex64> = v.iter().zip(&sw).map(|(x, s)| x / s).collect();
    let norm: f64 = u
        .iter()
        .zip(&mesh.weights)
        .map(|(x, w)| x.norm_sqr() * w)
        .sum::<f64>()
        .sqrt();
    u.iter_mut().for_each(|x| *x /= norm);
    fix_phase(&mut u);
    Ok((lambda, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_mesh, scale_translate, DomainSpec};
    use crate::kernel::Convention;
    use std::f64::consts::PI;

    fn c1() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn constant_kernel_2d_is_rank_one() {
        let mesh = build_mesh(&DomainSpec::ellipse(1.0, 0.5), 12).unwrap();
        let a = assemble(
            &mesh,
            &mesh,
            KernelKind::series(Dim::Two, -1, Convention::Consistent),
        )
        .unwrap();
        for i in 0..mesh.len() {
            for j in 0..mesh.len() {
                let want = -mesh.weights[j] / (2.0 * PI);
                assert!((a.get(i, j).re - want).abs() < 1e-15);
            }
        }
        let pairs = eig_sym(&a, &mesh).unwrap();
        let lam = -mesh.measure() / (2.0 * PI);
        assert!((pairs.last().unwrap().value - lam).abs() < 1e-12);
        assert!(pairs[..pairs.len() - 1]
            .iter()
            .all(|p| p.value.abs() < 1e-12));
        let u = &pairs.last().unwrap().vector;
        let want = 1.0 / mesh.measure().sqrt();
        assert!(u.iter().all(|x| (x.re - want).abs() < 1e-10));
    }

    #[test]
    fn paper_first_order_3d_kernel_is_constant() {
        let mesh = build_mesh(&DomainSpec::ball(1.0), 6).unwrap();
        let a = assemble(
            &mesh,
            &mesh,
            KernelKind::series(Dim::Three, 1, Convention::PaperLiteral),
        )
        .unwrap();
        for i in 0..mesh.len() {
            for j in 0..mesh.len() {
                let want = Complex64::new(0.0, -mesh.weights[j] / (4.0 * PI));
                assert!((a.get(i, j) - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn single_node_self_term() {
        let mut mesh = build_mesh(&DomainSpec::ball(1.0), 2).unwrap();
        mesh.nodes.truncate(1);
        mesh.weights.truncate(1);
        let w = mesh.weights[0];
        let a = assemble(
            &mesh,
            &mesh,
            KernelKind::series(Dim::Three, 0, Convention::Consistent),
        )
        .unwrap();
        let radius = (3.0 * w / (4.0 * PI)).cbrt();
        // radial quadrature of ∫_ball 1/|y| dy
        let n = 100_000;
        let dr = radius / n as f64;
        let quad: f64 = (0..n).map(|i| 4.0 * PI * (i as f64 + 0.5) * dr * dr).sum();
        assert!((a.get(0, 0).re - quad / (4.0 * PI)).abs() < 1e-10);
        let p = assemble(
            &mesh,
            &mesh,
            KernelKind::series(Dim::Three, 0, Convention::PaperLiteral),
        )
        .unwrap();
        assert!((p.get(0, 0) + a.get(0, 0)).norm() < 1e-16);
    }

    #[test]
    fn overlapping_meshes_rejected() {
        let a = build_mesh(&DomainSpec::disk(1.0), 10).unwrap();
        let b = build_mesh(&DomainSpec::disk(1.0).at([0.5, 0.0, 0.0]), 10).unwrap();
        let k = KernelKind::series(Dim::Two, 0, Convention::Consistent);
        assert!(matches!(assemble(&a, &b, k), Err(Error::Overlap { .. })));
        let far = build_mesh(&DomainSpec::disk(1.0).at([3.0, 0.0, 0.0]), 10).unwrap();
        let m = assemble(&a, &far, k).unwrap();
        assert!(!m.same_mesh);
    }

    #[test]
    fn newtonian_3d_symmetric_and_positive() {
        let mesh = build_mesh(&DomainSpec::ball(1.0), 8).unwrap();
        let a = assemble(
            &mesh,
            &mesh,
            KernelKind::series(Dim::Three, 0, Convention::Consistent),
        )
        .unwrap();
        let pairs = eig_sym(&a, &mesh).unwrap();
        assert!(pairs.iter().all(|p| p.value > 0.0));
        for p in pairs.iter().take(3) {
            let r = eigen_residual(&a, &mesh, p.value.into(), &p.vector);
            assert!(r < 1e-10, "residual {r}");
            let norm: f64 = p
                .vector
                .iter()
                .zip(&mesh.weights)
                .map(|(u, w)| u.norm_sqr() * w)
                .sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        for w in pairs.windows(2) {
            assert!(w[0].value >= w[1].value);
        }
        let lead = leading_eigenpair(&a, &mesh).unwrap();
        assert_eq!(lead.value, pairs[0].value);
    }

    #[test]
    fn exact_kernel_is_not_symmetrizable() {
        let mesh = build_mesh(&DomainSpec::disk(1.0), 6).unwrap();
        let a = assemble(&mesh, &mesh, KernelKind::exact(Dim::Two, c1())).unwrap();
        assert!(matches!(
            eig_sym(&a, &mesh),
            Err(Error::NotSymmetrizable(_))
        ));
    }

    #[test]
    fn power_iteration_matches_full_decomposition() {
        let mesh = build_mesh(&DomainSpec::ball(1.0), 16).unwrap();
        assert!(mesh.len() > 1500);
        let a = assemble(
            &mesh,
            &mesh,
            KernelKind::series(Dim::Three, 0, Convention::Consistent),
        )
        .unwrap();
        let lead = leading_eigenpair(&a, &mesh).unwrap();
        let full = eig_sym(&a, &mesh).unwrap();
        assert!((lead.value - full[0].value).abs() < 1e-12 * full[0].value);
        let r = eigen_residual(&a, &mesh, lead.value.into(), &lead.vector);
        assert!(r < 1e-10);
    }

    #[test]
    fn inverse_iteration_recovers_symmetric_eigenvalue() {
        let mesh = build_mesh(&DomainSpec::disk(1.0), 10).unwrap();
        let a = assemble(
            &mesh,
            &mesh,
            KernelKind::series(Dim::Two, 0, Convention::Consistent),
        )
        .unwrap();
        let pairs = eig_sym(&a, &mesh).unwrap();
        let target = pairs[0].value;
        let (lam, u) = nearest_eigenvalue(&a, &mesh, Complex64::new(target * 1.01, 0.0)).unwrap();
        assert!((lam.re - target).abs() < 1e-12 && lam.im.abs() < 1e-12);
        assert!(eigen_residual(&a, &mesh, lam, &u) < 1e-10);
    }

    #[test]
    fn translation_preserves_spectrum() {
        let mesh = build_mesh(&DomainSpec::ellipse(1.0, 0.7), 12).unwrap();
        let moved = scale_translate(&mesh, 1.0, [5.0, -3.0, 0.0]).unwrap();
        let k = KernelKind::series(Dim::Two, 0, Convention::Consistent);
        let a = eig_sym(&assemble(&mesh, &mesh, k).unwrap(), &mesh).unwrap();
        let b = eig_sym(&assemble(&moved, &moved, k).unwrap(), &moved).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!((p.value - q.value).abs() < 1e-10);
        }
    }

    #[test]
    fn fix_phase_makes_pivot_positive() {
        let mut u = vec![Complex64::new(0.1, 0.2), Complex64::new(0.0, -2.0)];
        fix_phase(&mut u);
        assert!(u[1].im.abs() < 1e-15 && u[1].re > 0.0);
    }
}
