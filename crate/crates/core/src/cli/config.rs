//! Run configuration: a flat `key = value` file (one key per line, `#`
//! comments) or a flat JSON object with the same keys.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Dim, DomainSpec, Point, RasterGrid, Shape};
use crate::kernel::Convention;
use crate::resonance::{
    BackgroundDispersion, FieldForm, FieldOptions, KClosure, KernelPoint, MaterialParams,
    SolveOptions, Tolerances, Variant2d,
};

/// Every key the reader understands.
pub const KNOWN_KEYS: &[&str] = &[
    "dim",
    "shape",
    "radius",
    "semi_axes",
    "half_widths",
    "raster",
    "center",
    "delta",
    "deltas",
    "mode",
    "dispersion",
    "closure",
    "variant",
    "correction",
    "alpha",
    "beta",
    "gamma",
    "eta",
    "eps0",
    "mu0",
    "resolution",
    "residual_tol",
    "max_iterations",
    "divergence",
    "separation",
    "distance",
    "z1",
    "z2",
    "decoupled_threshold",
    "grid_x",
    "grid_y",
    "grid_z",
    "field_omega",
    "field_incident",
    "field_direction",
    "field_form",
    "field_kernel_point",
    "field_single_omega_sq",
];

/// How the two dimer centers are placed. Lists produce one run per entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Placement {
    /// Center-to-center distance in units of `δ·diam(D)`, symmetric about
    /// the origin on the first axis.
    Diameters(Vec<f64>),
    /// Center-to-center distance in physical units.
    Distance(Vec<f64>),
    Centers(Point, Point),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Incident {
    /// `exp(i δk₀ d·y)` in the frame of `D`.
    Plane(Point),
    /// `y₁ − c₁`, odd about the centroid.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| self.min + step * i as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub x: Axis,
    pub y: Axis,
    pub z: Axis,
    /// Real evaluation frequency; `None` uses `Re ω_s`.
    pub omega: Option<f64>,
    pub incident: Incident,
    pub options: FieldOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub material: MaterialParams,
    pub dispersion: BackgroundDispersion,
    pub domain: DomainSpec,
    pub delta: f64,
    pub deltas: Vec<f64>,
    pub modes: Vec<Convention>,
    pub resolution: usize,
    pub options: SolveOptions,
    pub variant: Variant2d,
    pub placement: Placement,
    pub decoupled_threshold: f64,
    pub field: FieldSpec,
}

impl RunConfig {
    /// Reads a key-value file, or JSON when the extension is `.json` or the
    /// first non-blank character is `{`.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let json =
            path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
        let map = if json {
            parse_json(&text)?
        } else {
            parse_key_values(&text)?
        };
        Self::from_map(&map, base)
    }

    pub fn from_str_kv(text: &str) -> Result<Self> {
        Self::from_map(&parse_key_values(text)?, Path::new("."))
    }

    pub fn from_str_json(text: &str) -> Result<Self> {
        Self::from_map(&parse_json(text)?, Path::new("."))
    }

    /// Builds and validates a configuration; every problem found is reported
    /// in one `Error::Config`.
    pub fn from_map(map: &BTreeMap<String, String>, base: &Path) -> Result<Self> {
        let mut r = Reader {
            map,
            errors: Vec::new(),
        };
        for key in map.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                r.errors.push(format!("unknown key '{key}'"));
            }
        }
        let dim = match r.opt::<usize>("dim").unwrap_or(3) {
            2 => Dim::Two,
            3 => Dim::Three,
            d => {
                r.errors.push(format!("dim must be 2 or 3, got {d}"));
                Dim::Three
            }
        };
        let domain = r.domain(dim, base);
        let delta = r.opt::<f64>("delta").unwrap_or(0.05);
        let deltas = r.list("deltas").unwrap_or_default();
        let modes = vec![r
            .opt::<Convention>("mode")
            .unwrap_or(Convention::PaperLiteral)];
        let dispersion = r
            .opt::<BackgroundDispersion>("dispersion")
            .unwrap_or(BackgroundDispersion::Standard);
        let closure = match r.map.get("closure").map(|s| s.trim()) {
            None | Some("seed") => KClosure::FromSeed,
            Some("self-consistent") => KClosure::SelfConsistent,
            Some(s) => match s.parse::<f64>() {
                Ok(k) => KClosure::Fixed(Complex64::new(k, 0.0)),
                Err(_) => {
                    r.errors.push(format!(
                        "closure must be 'seed', 'self-consistent' or a number, got '{s}'"
                    ));
                    KClosure::FromSeed
                }
            },
        };
        let variant = match r.map.get("variant").map(|s| s.trim()) {
            None | Some("eigen") => Variant2d::Eigen,
            Some("indicator") => Variant2d::Indicator,
            Some(s) => {
                r.errors
                    .push(format!("variant must be 'eigen' or 'indicator', got '{s}'"));
                Variant2d::Eigen
            }
        };
        let material = MaterialParams {
            alpha: r.opt("alpha").unwrap_or(1.0),
            beta: r.opt("beta").unwrap_or(1.0),
            gamma: r.opt("gamma").unwrap_or(0.1),
            eta: r.opt("eta").unwrap_or(1.0),
            eps0: r.opt("eps0").unwrap_or(1.0),
            mu0: r.opt("mu0").unwrap_or(1.0),
        };
        let defaults = Tolerances::default();
        let tolerances = Tolerances {
            residual: r.opt("residual_tol").unwrap_or(defaults.residual),
            max_iterations: r.opt("max_iterations").unwrap_or(defaults.max_iterations),
            divergence: r.opt("divergence").unwrap_or(defaults.divergence),
            ..defaults
        };
        let options = SolveOptions {
            mode: modes[0],
            closure,
            tolerances,
            include_correction: r.opt("correction").unwrap_or(true),
        };
        let placement = r.placement(dim);
        let field = r.field(dim);
        let cfg = RunConfig {
            material,
            dispersion,
            domain,
            delta,
            deltas,
            modes,
            resolution: r.opt("resolution").unwrap_or(12),
            options,
            variant,
            placement,
            decoupled_threshold: r.opt("decoupled_threshold").unwrap_or(1e-6),
            field,
        };
        let mut errors = r.errors;
        errors.extend(cfg.problems());
        if errors.is_empty() {
            Ok(cfg)
        } else {
            Err(Error::Config(errors.join("; ")))
        }
    }

    /// Validation against the solver preconditions, one message per problem.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut push = |r: Result<()>| {
            if let Err(e) = r {
                out.push(e.to_string());
            }
        };
        push(self.material.validate());
        push(self.dispersion.validate());
        push(self.domain.validate());
        push(self.options.tolerances.validate());
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            out.push(format!("delta must be positive, got {}", self.delta));
        }
        if self.deltas.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
            out.push("deltas must all be positive".into());
        }
        if self.resolution < 2 {
            out.push(format!(
                "resolution must be at least 2, got {}",
                self.resolution
            ));
        }
        if self.modes.is_empty() {
            out.push("at least one mode is required".into());
        }
        match &self.placement {
            Placement::Diameters(v) | Placement::Distance(v)
                if v.is_empty() || v.iter().any(|s| !(*s > 0.0)) =>
            {
                out.push("separations must be positive".into())
            }
            _ => {}
        }
        if !(self.decoupled_threshold > 0.0) {
            out.push("decoupled_threshold must be positive".into());
        }
        let f = &self.field;
        for (name, a) in [("grid_x", f.x), ("grid_y", f.y), ("grid_z", f.z)] {
            if a.count == 0 || !(a.max >= a.min) {
                out.push(format!(
                    "{name} must be min,max,count with max ≥ min and count ≥ 1"
                ));
            }
        }
        if self.domain.dim == Dim::Two && f.z.count != 1 {
            out.push("grid_z is 3D only".into());
        }
        out
    }

    /// Copy with a single solver mode.
    pub fn with_mode(&self, mode: Convention) -> Self {
        let mut c = self.clone();
        c.modes = vec![mode];
        c.options.mode = mode;
        c
    }
}

/// `key = value` lines; `#` starts a comment; later keys override earlier.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    let mut errors = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) if !k.trim().is_empty() => {
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
            _ => errors.push(format!("line {}: expected key = value", n + 1)),
        }
    }
    if errors.is_empty() {
        Ok(map)
    } else {
        Err(Error::Config(errors.join("; ")))
    }
}

/// Flat JSON object; arrays become comma lists.
pub fn parse_json(text: &str) -> Result<BTreeMap<String, String>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Config("JSON config must be an object".into()))?;
    let scalar = |v: &serde_json::Value| match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        serde_json::Value::Bool(b) => Ok(b.to_string()),
        other => Err(other.to_string()),
    };
    let mut map = BTreeMap::new();
    let mut errors = Vec::new();
    for (k, v) in obj {
        let text = match v {
            serde_json::Value::Array(items) => items
                .iter()
                .map(scalar)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(|v| v.join(",")),
            other => scalar(other),
        };
        match text {
            Ok(s) => {
                map.insert(k.clone(), s);
            }
            Err(bad) => errors.push(format!("key '{k}': unsupported value {bad}")),
        }
    }
    if errors.is_empty() {
        Ok(map)
    } else {
        Err(Error::Config(errors.join("; ")))
    }
}

struct Reader<'a> {
    map: &'a BTreeMap<String, String>,
    errors: Vec<String>,
}

impl Reader<'_> {
    fn opt<T: FromStr>(&mut self, key: &str) -> Option<T> {
        let raw = self.map.get(key)?;
        match raw.parse::<T>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.errors
                    .push(format!("key '{key}': cannot parse '{raw}'"));
                None
            }
        }
    }

    fn list(&mut self, key: &str) -> Option<Vec<f64>> {
        let raw = self.map.get(key)?;
        let parsed: std::result::Result<Vec<f64>, _> = raw
            .split(',')
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect();
        match parsed {
            Ok(v) if !v.is_empty() => Some(v),
            _ => {
                self.errors.push(format!(
                    "key '{key}': expected a comma-separated list of numbers"
                ));
                None
            }
        }
    }

    fn fixed<const N: usize>(&mut self, key: &str) -> Option<[f64; N]> {
        let v = self.list(key)?;
        match <[f64; N]>::try_from(v.as_slice()) {
            Ok(a) => Some(a),
            Err(_) => {
                self.errors.push(format!(
                    "key '{key}': expected {N} numbers, got {}",
                    v.len()
                ));
                None
            }
        }
    }

    fn point(&mut self, key: &str, dim: Dim) -> Option<Point> {
        let v = self.list(key)?;
        if v.len() != dim.as_usize() {
            self.errors.push(format!(
                "key '{key}': expected {} coordinates",
                dim.as_usize()
            ));
            return None;
        }
        let mut p = [0.0; 3];
        p[..v.len()].copy_from_slice(&v);
        Some(p)
    }

    fn domain(&mut self, dim: Dim, base: &Path) -> DomainSpec {
        let shape = self
            .map
            .get("shape")
            .map(|s| s.trim().to_string())
            .unwrap_or_else(|| match dim {
                Dim::Two => "disk".into(),
                Dim::Three => "ball".into(),
            });
        let fallback = Shape::Ball { radius: 1.0 };
        let shape = match (shape.as_str(), dim) {
            ("disk", Dim::Two) | ("ball", Dim::Three) => Shape::Ball {
                radius: self.opt("radius").unwrap_or(1.0),
            },
            ("ellipse", Dim::Two) => match self.fixed::<2>("semi_axes") {
                Some([a, b]) => Shape::Ellipsoid {
                    semi_axes: [a, b, 0.0],
                },
                None => fallback,
            },
            ("ellipsoid", Dim::Three) => self
                .fixed::<3>("semi_axes")
                .map_or(fallback, |semi_axes| Shape::Ellipsoid { semi_axes }),
            ("rectangle", Dim::Two) => match self.fixed::<2>("half_widths") {
                Some([a, b]) => Shape::Box {
                    half_widths: [a, b, 0.0],
                },
                None => fallback,
            },
            ("box", Dim::Three) => self
                .fixed::<3>("half_widths")
                .map_or(fallback, |half_widths| Shape::Box { half_widths }),
            ("raster", Dim::Two) => match self.map.get("raster") {
                Some(p) => match RasterGrid::from_file(base.join(p)) {
                    Ok(g) => Shape::Raster(g),
                    Err(e) => {
                        self.errors.push(format!("raster '{p}': {e}"));
                        fallback
                    }
                },
                None => {
                    self.errors
                        .push("shape = raster needs a raster file".into());
                    fallback
                }
            },
            (other, d) => {
                self.errors
                    .push(format!("shape '{other}' is not available in {d}"));
                fallback
            }
        };
        let mut domain = DomainSpec::new(dim, shape);
        if let Some(c) = self.point("center", dim) {
            domain = domain.at(c);
        }
        domain
    }

    fn placement(&mut self, dim: Dim) -> Placement {
        let given = ["separation", "distance", "z1"]
            .iter()
            .filter(|k| self.map.contains_key(**k))
            .count();
        if given > 1 {
            self.errors
                .push("give only one of separation, distance or z1/z2".into());
        }
        if let Some(d) = self.list("distance") {
            return Placement::Distance(d);
        }
        if self.map.contains_key("z1") || self.map.contains_key("z2") {
            let z1 = self.point("z1", dim);
            let z2 = self.point("z2", dim);
            return match (z1, z2) {
                (Some(a), Some(b)) => Placement::Centers(a, b),
                _ => {
                    self.errors.push("z1 and z2 must both be given".into());
                    Placement::Diameters(vec![3.0])
                }
            };
        }
        Placement::Diameters(self.list("separation").unwrap_or_else(|| vec![3.0]))
    }

    fn axis(&mut self, key: &str, default: Axis) -> Axis {
        match self.fixed::<3>(key) {
            Some([min, max, n]) if n >= 1.0 && n.fract() == 0.0 => Axis {
                min,
                max,
                count: n as usize,
            },
            Some(_) => {
                self.errors
                    .push(format!("key '{key}': count must be a positive integer"));
                default
            }
            None => default,
        }
    }

    fn field(&mut self, dim: Dim) -> FieldSpec {
        let line = Axis {
            min: -10.0,
            max: 10.0,
            count: 5,
        };
        let x = self.axis("grid_x", line);
        let y = self.axis("grid_y", line);
        let z = self.axis(
            "grid_z",
            Axis {
                min: 0.0,
                max: 0.0,
                count: 1,
            },
        );
        let incident = match self.map.get("field_incident").map(|s| s.trim()) {
            None | Some("plane") => {
                let d = self
                    .point("field_direction", dim)
                    .unwrap_or([1.0, 0.0, 0.0]);
                let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                if n == 0.0 {
                    self.errors.push("field_direction must be nonzero".into());
                    Incident::Plane([1.0, 0.0, 0.0])
                } else {
                    Incident::Plane([d[0] / n, d[1] / n, d[2] / n])
                }
            }
            Some("linear") => Incident::Linear,
            Some(s) => {
                self.errors.push(format!(
                    "field_incident must be 'plane' or 'linear', got '{s}'"
                ));
                Incident::Linear
            }
        };
        let form = match self.map.get("field_form").map(|s| s.trim()) {
            None | Some("printed") => FieldForm::Printed,
            Some("pole-pencil") => FieldForm::PolePencil,
            Some(s) => {
                self.errors.push(format!(
                    "field_form must be 'printed' or 'pole-pencil', got '{s}'"
                ));
                FieldForm::Printed
            }
        };
        let kernel_point = match self.map.get("field_kernel_point").map(|s| s.trim()) {
            None | Some("centroid") => KernelPoint::Centroid,
            Some("mesh") => KernelPoint::MeshIntegral,
            Some(s) => {
                self.errors.push(format!(
                    "field_kernel_point must be 'centroid' or 'mesh', got '{s}'"
                ));
                KernelPoint::Centroid
            }
        };
        let omega = match self.map.get("field_omega").map(|s| s.trim()) {
            None | Some("resonance") => None,
            Some(_) => self.opt("field_omega"),
        };
        FieldSpec {
            x,
            y,
            z,
            omega,
            incident,
            options: FieldOptions {
                form,
                kernel_point,
                single_omega_sq: self.opt("field_single_omega_sq").unwrap_or(false),
            },
        }
    }
}
