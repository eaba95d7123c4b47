//! Command implementations. Each returns the full text it would print, so
//! output is reproducible byte for byte.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{Incident, Placement, RunConfig};
use crate::dimer::{solve_dimer_2d, solve_dimer_3d, DimerConfig, DimerSolution};
use crate::error::{Error, Result};
use crate::geometry::{build_mesh, Dim, DomainSpec, Point, QuadratureMesh};
use crate::kernel::{Convention, KernelKind};
use crate::resonance::{
    scattered_field, solve_single_2d_with, solve_single_3d_with, FieldModel, ResonanceResult,
    Spectral2d, Spectral3d,
};
use crate::spectral::{assemble, leading_eigenpair};

pub const OUTPUT_VERSION: u32 = 1;

pub const EIGEN_COLUMNS: &str = "mode,dim,resolution,nodes,h,measure,lambda0,lambda_m1,nu0,\
b_re,b_im,f_re,f_im,p_re,p_im,g_re,g_im,s_re,s_im";

pub const SWEEP_COLUMNS: &str =
    "delta,re_omega_s,im_omega_s,re_omega_m,im_omega_m,re_omega_d,im_omega_d,spread,\
rel_spread,separation_diameters,distance,mode,resolution,residual_m,residual_d,ordered,error";

/// Text produced by a command plus the exit status it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    /// 0 on success, otherwise the exit code of the first failure.
    pub status: i32,
    /// Human-readable notes for stderr.
    pub notes: Vec<String>,
}

impl Output {
    fn new(text: String) -> Self {
        Output {
            text,
            status: 0,
            notes: Vec::new(),
        }
    }

    fn fail(&mut self, e: &Error) {
        if self.status == 0 {
            self.status = e.exit_code();
        }
        self.notes.push(e.to_string());
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn shape_label(d: &DomainSpec) -> &'static str {
    use crate::geometry::Shape;
    match (&d.shape, d.dim) {
        (Shape::Ball { .. }, Dim::Two) => "disk",
        (Shape::Ball { .. }, Dim::Three) => "ball",
        (Shape::Ellipsoid { .. }, Dim::Two) => "ellipse",
        (Shape::Ellipsoid { .. }, Dim::Three) => "ellipsoid",
        (Shape::Box { .. }, Dim::Two) => "rectangle",
        (Shape::Box { .. }, Dim::Three) => "box",
        (Shape::Raster(_), _) => "raster",
    }
}

fn header(command: &str, columns: &str, cfg: &RunConfig) -> String {
    let modes: Vec<_> = cfg.modes.iter().map(|m| m.label()).collect();
    let m = &cfg.material;
    let mut s = String::new();
    let _ = writeln!(s, "# resonance-{command} v{OUTPUT_VERSION}: {columns}");
    let _ = writeln!(
        s,
        "# dim={} shape={} resolution={} modes={} dispersion={} alpha={} beta={} gamma={} eta={} eps0={} mu0={}",
        cfg.domain.dim,
        shape_label(&cfg.domain),
        cfg.resolution,
        modes.join("+"),
        dispersion_text(cfg),
        m.alpha,
        m.beta,
        m.gamma,
        m.eta,
        m.eps0,
        m.mu0
    );
    let _ = writeln!(s, "{columns}");
    s
}

fn dispersion_text(cfg: &RunConfig) -> String {
    match cfg.dispersion {
        crate::resonance::BackgroundDispersion::FixedK0(k) => format!("fixed:{}", k.re),
        d => d.label().to_string(),
    }
}

/// Leading Newtonian eigenvalue and shape constants per mode.
pub fn cmd_eigen(cfg: &RunConfig) -> Result<Output> {
    let mesh = build_mesh(&cfg.domain, cfg.resolution)?;
    let mut text = header("eigen", EIGEN_COLUMNS, cfg);
    for &mode in &cfg.modes {
        let nan = f64::NAN;
        let (lambda0, lambda_m1, nu0, c) = match mesh.dim {
            Dim::Three => {
                let s = Spectral3d::compute(&mesh, mode)?;
                (s.lambda0, nan, nan, s.constants)
            }
            Dim::Two => {
                let s = Spectral2d::compute(&mesh, mode)?;
                let k0 = assemble(&mesh, &mesh, KernelKind::series(Dim::Two, 0, mode))?;
                let lead = leading_eigenpair(&k0, &mesh)?;
                (
                    lead.value,
                    s.lambda_m1,
                    -s.measure / (2.0 * PI),
                    s.constants,
                )
            }
        };
        let mut row = vec![
            mode.label().to_string(),
            mesh.dim.to_string(),
            cfg.resolution.to_string(),
            mesh.len().to_string(),
            num(mesh.h),
            num(mesh.measure()),
            num(lambda0),
            num(lambda_m1),
            num(nu0),
        ];
        for z in [c.b, c.f, c.p, c.g, c.s] {
            row.push(num(z.re));
            row.push(num(z.im));
        }
        let _ = writeln!(text, "{}", row.join(","));
    }
    Ok(Output::new(text))
}

#[derive(Serialize)]
struct SingleRecord {
    command: &'static str,
    mode: Convention,
    dim: usize,
    resolution: usize,
    delta: f64,
    omega_re: f64,
    omega_im: f64,
    k_re: f64,
    k_im: f64,
    k0_re: f64,
    k0_im: f64,
    residual: f64,
    iterations: usize,
    order_tag: String,
    evanescent: bool,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct FailureRecord {
    command: &'static str,
    mode: Convention,
    dim: usize,
    resolution: usize,
    error: String,
    exit_code: i32,
    best_re: Option<f64>,
    best_im: Option<f64>,
    residual: Option<f64>,
}

fn failure(command: &'static str, cfg: &RunConfig, mode: Convention, e: &Error) -> String {
    let (best, residual) = match e {
        Error::NonConvergence { best, residual, .. } => (Some(*best), Some(*residual)),
        _ => (None, None),
    };
    let rec = FailureRecord {
        command,
        mode,
        dim: cfg.domain.dim.as_usize(),
        resolution: cfg.resolution,
        error: e.to_string(),
        exit_code: e.exit_code(),
        best_re: best.map(|b| b.re),
        best_im: best.map(|b| b.im),
        residual,
    };
    serde_json::to_string(&rec).expect("plain record serializes")
}

enum Spectral {
    Two(Spectral2d),
    Three(Spectral3d),
}

fn spectral(mesh: &QuadratureMesh, mode: Convention) -> Result<Spectral> {
    Ok(match mesh.dim {
        Dim::Two => Spectral::Two(Spectral2d::compute(mesh, mode)?),
        Dim::Three => Spectral::Three(Spectral3d::compute(mesh, mode)?),
    })
}

fn solve_single(cfg: &RunConfig, s: &Spectral, delta: f64) -> Result<ResonanceResult> {
    match s {
        Spectral::Two(s) => solve_single_2d_with(
            &cfg.material,
            s,
            delta,
            cfg.dispersion,
            &cfg.options,
            cfg.variant,
        ),
        Spectral::Three(s) => {
            solve_single_3d_with(&cfg.material, s, delta, cfg.dispersion, &cfg.options)
        }
    }
}

/// One JSON line per mode with the single-particle resonance.
pub fn cmd_single(cfg: &RunConfig) -> Result<Output> {
    let mesh = build_mesh(&cfg.domain, cfg.resolution)?;
    let mut out = Output::new(String::new());
    for &mode in &cfg.modes {
        let run = cfg.with_mode(mode);
        let line = match spectral(&mesh, mode).and_then(|s| solve_single(&run, &s, cfg.delta)) {
            Ok(r) => {
                out.notes.extend(r.warnings.iter().cloned());
                let rec = SingleRecord {
                    command: "single",
                    mode,
                    dim: mesh.dim.as_usize(),
                    resolution: cfg.resolution,
                    delta: cfg.delta,
                    omega_re: r.omega.re,
                    omega_im: r.omega.im,
                    k_re: r.k.re,
                    k_im: r.k.im,
                    k0_re: r.k0.re,
                    k0_im: r.k0.im,
                    residual: r.residual,
                    iterations: r.iterations,
                    order_tag: r.order_tag.label().to_string(),
                    evanescent: r.evanescent,
                    warnings: r.warnings,
                };
                serde_json::to_string(&rec).expect("plain record serializes")
            }
            Err(e) => {
                out.fail(&e);
                failure("single", cfg, mode, &e)
            }
        };
        let _ = writeln!(out.text, "{line}");
    }
    Ok(out)
}

/// Reference shape of a dimer: the configured shape centred at the origin.
fn reference_domain(cfg: &RunConfig) -> DomainSpec {
    cfg.domain.clone().at([0.0; 3])
}

fn dimer_configs(cfg: &RunConfig, delta: f64) -> Result<Vec<DimerConfig>> {
    let domain = reference_domain(cfg);
    match &cfg.placement {
        Placement::Diameters(list) => list
            .iter()
            .map(|&s| DimerConfig::symmetric(domain.clone(), s, delta))
            .collect(),
        Placement::Distance(list) => list
            .iter()
            .map(|&d| {
                DimerConfig::new(
                    domain.clone(),
                    [-0.5 * d, 0.0, 0.0],
                    [0.5 * d, 0.0, 0.0],
                    delta,
                )
            })
            .collect(),
        Placement::Centers(a, b) => Ok(vec![DimerConfig::new(domain, *a, *b, delta)?]),
    }
}

fn solve_dimer(cfg: &RunConfig, dimer: &DimerConfig) -> Result<DimerSolution> {
    match dimer.domain.dim {
        Dim::Two => solve_dimer_2d(
            &cfg.material,
            dimer,
            cfg.resolution,
            cfg.dispersion,
            &cfg.options,
        ),
        Dim::Three => solve_dimer_3d(
            &cfg.material,
            dimer,
            cfg.resolution,
            cfg.dispersion,
            &cfg.options,
        ),
    }
}

#[derive(Serialize)]
struct DimerRecord {
    command: &'static str,
    mode: Convention,
    dim: usize,
    resolution: usize,
    delta: f64,
    separation_diameters: f64,
    distance: f64,
    omega_s_re: f64,
    omega_s_im: f64,
    omega_m_re: f64,
    omega_m_im: f64,
    omega_d_re: f64,
    omega_d_im: f64,
    k_re: f64,
    k_im: f64,
    coupling_k_re: f64,
    coupling_k_im: f64,
    coupling_m_re: f64,
    coupling_m_im: f64,
    eta_hat_re: Option<f64>,
    eta_hat_im: Option<f64>,
    residual_m: f64,
    residual_d: f64,
    iterations_m: usize,
    iterations_d: usize,
    ordered: bool,
    splitting: f64,
    decoupled: bool,
}

/// One JSON line per mode and separation with the hybridized pair.
///
/// 2D dimers always use the indicator expansion for the isolated particle.
pub fn cmd_dimer(cfg: &RunConfig) -> Result<Output> {
    let dimers = dimer_configs(cfg, cfg.delta)?;
    let mut out = Output::new(String::new());
    for &mode in &cfg.modes {
        let run = cfg.with_mode(mode);
        for d in &dimers {
            let line = match solve_dimer(&run, d) {
                Ok(sol) => {
                    let r = &sol.dimer;
                    let s = sol.single.omega;
                    let splitting = (r.omega_m - r.omega_d).norm() / s.norm();
                    if !r.ordered {
                        out.notes.push(format!(
                            "{mode}: Re ω_m ≥ Re ω_d at {:.3} diameters; branch labels kept",
                            d.separation_in_diameters()
                        ));
                    }
                    let rec = DimerRecord {
                        command: "dimer",
                        mode,
                        dim: d.domain.dim.as_usize(),
                        resolution: cfg.resolution,
                        delta: d.delta,
                        separation_diameters: d.separation_in_diameters(),
                        distance: d.separation(),
                        omega_s_re: s.re,
                        omega_s_im: s.im,
                        omega_m_re: r.omega_m.re,
                        omega_m_im: r.omega_m.im,
                        omega_d_re: r.omega_d.re,
                        omega_d_im: r.omega_d.im,
                        k_re: r.k.re,
                        k_im: r.k.im,
                        coupling_k_re: r.couplings.k.re,
                        coupling_k_im: r.couplings.k.im,
                        coupling_m_re: r.couplings.m.re,
                        coupling_m_im: r.couplings.m.im,
                        eta_hat_re: r.couplings.eta_hat.map(|z| z.re),
                        eta_hat_im: r.couplings.eta_hat.map(|z| z.im),
                        residual_m: r.residuals[0],
                        residual_d: r.residuals[1],
                        iterations_m: r.iterations[0],
                        iterations_d: r.iterations[1],
                        ordered: r.ordered,
                        splitting,
                        decoupled: splitting < cfg.decoupled_threshold,
                    };
                    serde_json::to_string(&rec).expect("plain record serializes")
                }
                Err(e) => {
                    out.fail(&e);
                    failure("dimer", cfg, mode, &e)
                }
            };
            let _ = writeln!(out.text, "{line}");
        }
    }
    Ok(out)
}

/// δ sweep of the isolated and hybridized resonances. Rows are computed in
/// parallel and written in input order; a failing row records its error
/// and the sweep continues.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<Output> {
    if cfg.deltas.len() < 3 {
        return Err(Error::Config(format!(
            "sweep needs at least 3 values in deltas, got {}",
            cfg.deltas.len()
        )));
    }
    let mut jobs = Vec::new();
    for &mode in &cfg.modes {
        for &delta in &cfg.deltas {
            for d in dimer_configs(cfg, delta)? {
                jobs.push((mode, d));
            }
        }
    }
    let rows: Vec<(String, Option<Error>)> = jobs
        .par_iter()
        .map(|(mode, d)| sweep_row(&cfg.with_mode(*mode), d))
        .collect();
    let mut out = Output::new(header("sweep", SWEEP_COLUMNS, cfg));
    for (row, err) in rows {
        if let Some(e) = err {
            out.fail(&e);
        }
        let _ = writeln!(out.text, "{row}");
    }
    Ok(out)
}

fn sweep_row(cfg: &RunConfig, d: &DimerConfig) -> (String, Option<Error>) {
    let mode = cfg.options.mode.label();
    let tail = |err: &str| {
        format!(
            "{},{},{mode},{},",
            num(d.separation_in_diameters()),
            num(d.separation()),
            cfg.resolution
        ) + err
    };
    match solve_dimer(cfg, d) {
        Ok(sol) => {
            let (s, m, dd) = (sol.single.omega, sol.dimer.omega_m, sol.dimer.omega_d);
            let spread = (m - s).norm().max((dd - s).norm());
            let cols = [
                d.delta,
                s.re,
                s.im,
                m.re,
                m.im,
                dd.re,
                dd.im,
                spread,
                spread / s.norm(),
            ]
            .map(num)
            .join(",");
            let t = tail("");
            let row = format!(
                "{cols},{}{},{},{},",
                t,
                num(sol.dimer.residuals[0]),
                num(sol.dimer.residuals[1]),
                sol.dimer.ordered
            );
            (row, None)
        }
        Err(e) => {
            let blanks = ",".repeat(8);
            let msg = e.to_string().replace([',', '\n'], ";");
            let t = tail("");
            (format!("{}{blanks},{t},,,{msg}", num(d.delta)), Some(e))
        }
    }
}

/// Scattered field on a grid in the frame of `D`, one row per point.
/// Points inside the particle or at a pole are flagged in `status`.
pub fn cmd_field(cfg: &RunConfig) -> Result<Output> {
    let mesh = build_mesh(&cfg.domain, cfg.resolution)?;
    let three = mesh.dim == Dim::Three;
    let columns = if three {
        "x,y,z,re_usc,im_usc,status,mode,resolution,omega"
    } else {
        "x,y,re_usc,im_usc,status,mode,resolution,omega"
    };
    let mut out = Output::new(header("field", columns, cfg));
    let f = &cfg.field;
    let mut points: Vec<Point> = Vec::new();
    for &x in &f.x.points() {
        for &y in &f.y.points() {
            for &z in &f.z.points() {
                points.push([x, y, if three { z } else { 0.0 }]);
            }
        }
    }
    for &mode in &cfg.modes {
        let run = cfg.with_mode(mode);
        let spec = spectral(&mesh, mode)?;
        let single = match solve_single(&run, &spec, cfg.delta) {
            Ok(r) => r,
            Err(e) => {
                out.fail(&e);
                continue;
            }
        };
        let omega = f.omega.map_or(Complex64::new(single.omega.re, 0.0), |w| {
            Complex64::new(w, 0.0)
        });
        let k0 = cfg.dispersion.k0(omega, &cfg.material);
        let model = match &spec {
            Spectral::Two(s) => FieldModel::from_2d(&mesh, s, cfg.delta, k0)?,
            Spectral::Three(s) => FieldModel::from_3d(&mesh, s, cfg.delta, k0)?,
        };
        let centroid = mesh.centroid();
        let dk = cfg.delta * k0;
        let incident = f.incident;
        let u_in = move |y: &Point| -> Complex64 {
            match incident {
                Incident::Plane(d) => {
                    let phase = d[0] * y[0] + d[1] * y[1] + d[2] * y[2];
                    (Complex64::new(0.0, 1.0) * dk * phase).exp()
                }
                Incident::Linear => Complex64::new(y[0] - centroid[0], 0.0),
            }
        };
        // circumradius of a cell
        let reach = 0.5 * mesh.h * (mesh.dim.as_usize() as f64).sqrt();
        let values: Vec<String> = points
            .par_iter()
            .map(|p| {
                let inside = mesh
                    .nodes
                    .iter()
                    .any(|n| crate::geometry::distance(n, p) < reach);
                let (v, status) = if inside {
                    (Complex64::new(f64::NAN, f64::NAN), "inside")
                } else {
                    match scattered_field(
                        p,
                        omega,
                        single.k,
                        &cfg.material,
                        &model,
                        &u_in,
                        &f.options,
                    ) {
                        Ok(v) => (v, "ok"),
                        Err(Error::Pole(_)) => (Complex64::new(f64::NAN, f64::NAN), "pole"),
                        Err(_) => (Complex64::new(f64::NAN, f64::NAN), "error"),
                    }
                };
                let coords = if three {
                    format!("{},{},{}", num(p[0]), num(p[1]), num(p[2]))
                } else {
                    format!("{},{}", num(p[0]), num(p[1]))
                };
                format!(
                    "{coords},{},{},{status},{},{},{}",
                    num(v.re),
                    num(v.im),
                    mode.label(),
                    cfg.resolution,
                    num(omega.re)
                )
            })
            .collect();
        for v in values {
            let _ = writeln!(out.text, "{v}");
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> RunConfig {
        RunConfig::from_str_kv(text).unwrap()
    }

    fn data_rows(text: &str) -> Vec<&str> {
        text.lines()
            .filter(|l| !l.starts_with('#'))
            .skip(1)
            .collect()
    }

    fn column(text: &str, name: &str) -> Vec<String> {
        let mut lines = text.lines().filter(|l| !l.starts_with('#'));
        let head: Vec<&str> = lines.next().unwrap().split(',').collect();
        let idx = head.iter().position(|h| *h == name).unwrap();
        lines
            .map(|l| l.split(',').nth(idx).unwrap().to_string())
            .collect()
    }

    #[test]
    fn eigen_unit_disk_nu0() {
        let out = cmd_eigen(&cfg("dim = 2\nresolution = 12")).unwrap();
        assert!(out.text.starts_with("# resonance-eigen v1"));
        let nu0: f64 = column(&out.text, "nu0")[0].parse().unwrap();
        let measure: f64 = column(&out.text, "measure")[0].parse().unwrap();
        assert!((nu0 + measure / (2.0 * PI)).abs() < 1e-15);
        assert!((nu0 + 0.5).abs() < 0.05);
    }

    #[test]
    fn eigen_translation_invariant() {
        let a = cmd_eigen(&cfg("dim = 2\nresolution = 10")).unwrap();
        let b = cmd_eigen(&cfg("dim = 2\nresolution = 10\ncenter = 3.5, -2")).unwrap();
        for col in ["lambda0", "lambda_m1", "p_re", "g_re"] {
            let x: f64 = column(&a.text, col)[0].parse().unwrap();
            let y: f64 = column(&b.text, col)[0].parse().unwrap();
            assert!((x - y).abs() <= 1e-10 * x.abs().max(1.0), "{col}");
        }
    }

    #[test]
    fn both_modes_emit_mode_column() {
        let mut c = cfg("dim = 3\nresolution = 6\ngamma = 0.2");
        c.modes = vec![Convention::PaperLiteral, Convention::Consistent];
        let out = cmd_single(&c).unwrap();
        let lines: Vec<_> = out.text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].contains("\"mode\":\"PaperLiteral\""));
        assert!(lines[1].contains("\"mode\":\"Consistent\""));
        for l in lines {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            assert!(v["residual"].as_f64().unwrap() <= 1e-10);
        }
    }

    #[test]
    fn lossless_single_reports_no_root() {
        let out = cmd_single(&cfg("dim = 3\nresolution = 6\ngamma = 0")).unwrap();
        assert_eq!(out.status, 4);
        assert!(out.text.contains("no physical root"));
    }

    #[test]
    fn dimer_mirror_couplings_equal() {
        let out = cmd_dimer(&cfg(
            "dim = 3\nresolution = 6\ndelta = 0.05\ndispersion = 1\nseparation = 4",
        ))
        .unwrap();
        assert_eq!(out.status, 0, "{:?}", out.notes);
        let v: serde_json::Value = serde_json::from_str(out.text.trim()).unwrap();
        let k = Complex64::new(
            v["coupling_k_re"].as_f64().unwrap(),
            v["coupling_k_im"].as_f64().unwrap(),
        );
        let m = Complex64::new(
            v["coupling_m_re"].as_f64().unwrap(),
            v["coupling_m_im"].as_f64().unwrap(),
        );
        assert!((k - m).norm() <= 1e-10 * k.norm());
        assert!(v["residual_m"].as_f64().unwrap() <= 1e-10);
        assert!(v["ordered"].as_bool().unwrap());
    }

    #[test]
    fn sweep_needs_three_deltas() {
        let e = cmd_sweep(&cfg("dim = 2\ndeltas = 0.01,0.02")).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn sweep_records_row_failures() {
        let out = cmd_sweep(&cfg(
            "dim = 2\nresolution = 8\ndeltas = 0.01,0.02,0.04\ngamma = 0\ndispersion = 1",
        ))
        .unwrap();
        assert_ne!(out.status, 0);
        let rows = data_rows(&out.text);
        assert_eq!(rows.len(), 3);
        for r in rows {
            assert_eq!(r.split(',').count(), SWEEP_COLUMNS.split(',').count());
            assert!(
                r.ends_with("no physical root: ω_δ has Re ≤ 0") || r.contains("no physical root")
            );
        }
    }

    #[test]
    fn field_grid_and_orthogonality() {
        let c = cfg(
            "dim = 2\nresolution = 10\ndispersion = 1\nfield_incident = linear\n\
                     grid_x = -6,6,4\ngrid_y = -6,6,3",
        );
        let out = cmd_field(&c).unwrap();
        let rows = data_rows(&out.text);
        assert_eq!(rows.len(), 12);
        let plane = cmd_field(&cfg(
            "dim = 2\nresolution = 10\ndispersion = 1\ngrid_x = -6,6,4\ngrid_y = -6,6,3",
        ))
        .unwrap();
        let scale = column(&plane.text, "re_usc")
            .iter()
            .map(|s| s.parse::<f64>().unwrap().abs())
            .fold(0.0, f64::max);
        for s in column(&out.text, "re_usc")
            .iter()
            .chain(&column(&out.text, "im_usc"))
        {
            assert!(s.parse::<f64>().unwrap().abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn field_flags_interior_points() {
        let out = cmd_field(&cfg(
            "dim = 2\nresolution = 10\ndispersion = 1\ngrid_x = 0,0,1\ngrid_y = 0,0,1",
        ))
        .unwrap();
        assert_eq!(column(&out.text, "status"), vec!["inside"]);
    }

    #[test]
    fn output_is_deterministic() {
        let c = cfg(
            "dim = 2\nresolution = 8\ndeltas = 0.01,0.02,0.04\ndispersion = 1\ndistance = 0.25",
        );
        assert_eq!(cmd_sweep(&c).unwrap().text, cmd_sweep(&c).unwrap().text);
    }
}
