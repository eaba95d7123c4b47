//! Resonator shapes and uniform cell-centred quadrature meshes.
//!
//! A mesh is a set of nodes at the centres of the grid cells whose centre
//! lies strictly inside the shape, each carrying the cell measure as weight.
//! Nodes are stored as `[f64; 3]` in both dimensions; 2D meshes keep the
//! third coordinate at zero.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub type Point = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn as_usize(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    pub fn from_usize(d: usize) -> Result<Dim> {
        match d {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            _ => invalid(format!("dimension must be 2 or 3, got {d}")),
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_usize())
    }
}

/// Binary image of a 2D cross-section. Row 0 is the top row; the grid is
/// centred at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RasterGrid {
    pub rows: usize,
    pub cols: usize,
    pub cell_size: f64,
    pub filled: Vec<bool>,
}

impl RasterGrid {
    pub fn new(rows: usize, cols: usize, cell_size: f64, filled: Vec<bool>) -> Result<Self> {
        let grid = RasterGrid {
            rows,
            cols,
            cell_size,
            filled,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Parses `rows cols cell_size` followed by `rows` lines of `0`/`1`
    /// characters (whitespace between characters is ignored).
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("raster: missing header".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return invalid("raster header must be `rows cols cell_size`");
        }
        let bad = |what: &str| Error::InvalidInput(format!("raster: bad {what} in header"));
        let rows: usize = fields[0].parse().map_err(|_| bad("rows"))?;
        let cols: usize = fields[1].parse().map_err(|_| bad("cols"))?;
        let cell_size: f64 = fields[2].parse().map_err(|_| bad("cell_size"))?;
        let mut filled = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::InvalidInput(format!("raster: missing row {r}")))?;
            let row: Vec<bool> = line
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::InvalidInput(format!(
                        "raster: unexpected character {other:?} in row {r}"
                    ))),
                })
                .collect::<Result<_>>()?;
            if row.len() != cols {
                return invalid(format!(
                    "raster: row {r} has {} entries, expected {cols}",
                    row.len()
                ));
            }
            filled.extend(row);
        }
        RasterGrid::new(rows, cols, cell_size, filled)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        RasterGrid::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return invalid("raster must have at least one row and column");
        }
        if !(self.cell_size > 0.0 && self.cell_size.is_finite()) {
            return invalid("raster cell_size must be positive");
        }
        if self.filled.len() != self.rows * self.cols {
            return invalid("raster data does not match rows * cols");
        }
        if !self.filled.iter().any(|&b| b) {
            return invalid("raster has no filled cells");
        }
        Ok(())
    }

    pub fn is_filled(&self, row: usize, col: usize) -> bool {
        self.filled[row * self.cols + col]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    /// Disk in 2D, ball in 3D.
    Ball { radius: f64 },
    /// Ellipse in 2D (third semi-axis ignored), ellipsoid in 3D.
    Ellipsoid { semi_axes: [f64; 3] },
    /// Rectangle in 2D, cuboid in 3D.
    Box { half_widths: [f64; 3] },
    /// Rasterised cross-section (2D only).
    Raster(RasterGrid),
}

/// A reference shape together with its placement `x ↦ scale·x + center`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub dim: Dim,
    pub shape: Shape,
    pub center: Point,
    pub scale: f64,
}

impl DomainSpec {
    pub fn new(dim: Dim, shape: Shape) -> Self {
        DomainSpec {
            dim,
            shape,
            center: [0.0; 3],
            scale: 1.0,
        }
    }

    pub fn disk(radius: f64) -> Self {
        Self::new(Dim::Two, Shape::Ball { radius })
    }

    pub fn ball(radius: f64) -> Self {
        Self::new(Dim::Three, Shape::Ball { radius })
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        Self::new(
            Dim::Two,
            Shape::Ellipsoid {
                semi_axes: [a, b, 0.0],
            },
        )
    }

    pub fn ellipsoid(a: f64, b: f64, c: f64) -> Self {
        Self::new(
            Dim::Three,
            Shape::Ellipsoid {
                semi_axes: [a, b, c],
            },
        )
    }

    pub fn rectangle(hx: f64, hy: f64) -> Self {
        Self::new(
            Dim::Two,
            Shape::Box {
                half_widths: [hx, hy, 0.0],
            },
        )
    }

    pub fn cuboid(hx: f64, hy: f64, hz: f64) -> Self {
        Self::new(
            Dim::Three,
            Shape::Box {
                half_widths: [hx, hy, hz],
            },
        )
    }

    pub fn raster(grid: RasterGrid) -> Self {
        Self::new(Dim::Two, Shape::Raster(grid))
    }

    pub fn at(mut self, center: Point) -> Self {
        self.center = center;
        self
    }

    pub fn scaled(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim.as_usize();
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return invalid(format!("scale must be positive, got {}", self.scale));
        }
        if self.center.iter().any(|c| !c.is_finite()) {
            return invalid("center must be finite");
        }
        if self.dim == Dim::Two && self.center[2] != 0.0 {
            return invalid("2D domains must have a zero third center coordinate");
        }
        let positive = |v: &[f64]| v.iter().all(|&x| x > 0.0 && x.is_finite());
        match &self.shape {
            Shape::Ball { radius } if !positive(&[*radius]) => invalid("radius must be positive"),
            Shape::Ellipsoid { semi_axes } if !positive(&semi_axes[..d]) => {
                invalid("semi-axes must be positive")
            }
            Shape::Box { half_widths } if !positive(&half_widths[..d]) => {
                invalid("half-widths must be positive")
            }
            Shape::Raster(grid) => {
                if self.dim != Dim::Two {
                    return invalid("raster shapes are 2D only");
                }
                grid.validate()
            }
            _ => Ok(()),
        }
    }

    /// Exact measure of the placed shape.
    pub fn measure(&self) -> f64 {
        let s = self.scale.powi(self.dim.as_usize() as i32);
        let pi = std::f64::consts::PI;
        let reference = match (&self.shape, self.dim) {
            (Shape::Ball { radius }, Dim::Two) => pi * radius * radius,
            (Shape::Ball { radius }, Dim::Three) => 4.0 / 3.0 * pi * radius.powi(3),
            (Shape::Ellipsoid { semi_axes: a }, Dim::Two) => pi * a[0] * a[1],
            (Shape::Ellipsoid { semi_axes: a }, Dim::Three) => 4.0 / 3.0 * pi * a[0] * a[1] * a[2],
            (Shape::Box { half_widths: h }, Dim::Two) => 4.0 * h[0] * h[1],
            (Shape::Box { half_widths: h }, Dim::Three) => 8.0 * h[0] * h[1] * h[2],
            (Shape::Raster(g), _) => {
                g.filled.iter().filter(|&&b| b).count() as f64 * g.cell_size * g.cell_size
            }
        };
        reference * s
    }

    /// Diameter of the placed shape (bounding-box diagonal for rasters).
    pub fn diameter(&self) -> f64 {
        let d = self.dim.as_usize();
        let reference = match &self.shape {
            Shape::Ball { radius } => 2.0 * radius,
            Shape::Ellipsoid { semi_axes } => {
                2.0 * semi_axes[..d].iter().cloned().fold(0.0, f64::max)
            }
            Shape::Box { .. } | Shape::Raster(_) => {
                2.0 * self.half_extents()[..d]
                    .iter()
                    .map(|h| h * h)
                    .sum::<f64>()
                    .sqrt()
            }
        };
        reference * self.scale
    }

    fn half_extents(&self) -> [f64; 3] {
        match &self.shape {
            Shape::Ball { radius } => [*radius; 3],
            Shape::Ellipsoid { semi_axes } => *semi_axes,
            Shape::Box { half_widths } => *half_widths,
            Shape::Raster(g) => [
                0.5 * g.cols as f64 * g.cell_size,
                0.5 * g.rows as f64 * g.cell_size,
                0.0,
            ],
        }
    }

    fn contains_reference(&self, x: &Point) -> bool {
        let d = self.dim.as_usize();
        match &self.shape {
            Shape::Ball { radius } => x[..d].iter().map(|v| v * v).sum::<f64>() < radius * radius,
            Shape::Ellipsoid { semi_axes } => {
                (0..d).map(|i| (x[i] / semi_axes[i]).powi(2)).sum::<f64>() < 1.0
            }
            Shape::Box { half_widths } => (0..d).all(|i| x[i].abs() < half_widths[i]),
            Shape::Raster(_) => unreachable!("raster meshes are built cell by cell"),
        }
    }
}

/// Uniform cell-centred quadrature on a shape.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureMesh {
    pub dim: Dim,
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
    /// Cell edge length.
    pub h: f64,
    pub domain: DomainSpec,
}

impl QuadratureMesh {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Sum of the weights.
    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn centroid(&self) -> Point {
        let m = self.measure();
        let mut c = [0.0; 3];
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            for i in 0..3 {
                c[i] += w * x[i];
            }
        }
        c.map(|v| v / m)
    }

    /// Radius of the disk or ball with the same measure as cell `i`.
    pub fn equal_measure_radius(&self, i: usize) -> f64 {
        let w = self.weights[i];
        match self.dim {
            Dim::Two => (w / std::f64::consts::PI).sqrt(),
            Dim::Three => (3.0 * w / (4.0 * std::f64::consts::PI)).cbrt(),
        }
    }

    /// FNV-1a hash over the node coordinates and weights. Two meshes with
    /// the same fingerprint are treated as the same mesh.
    pub fn fingerprint(&self) -> u64 {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |v: f64| {
            for b in v.to_bits().to_le_bytes() {
                hash ^= b as u64;
                hash = hash.wrapping_mul(0x0100_0000_01b3);
            }
        };
        feed(self.dim.as_usize() as f64);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            x.iter().for_each(|&c| feed(c));
            feed(*w);
        }
        hash
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        distance(&self.nodes[i], &self.nodes[j])
    }
}

pub fn distance(a: &Point, b: &Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Meshes `domain` with `cells_per_axis` cells across its largest extent,
/// then applies the domain's scale and centre.
pub fn build_mesh(domain: &DomainSpec, cells_per_axis: usize) -> Result<QuadratureMesh> {
    domain.validate()?;
    if cells_per_axis < 2 {
        return invalid(format!(
            "cells_per_axis must be at least 2, got {cells_per_axis}"
        ));
    }
    let reference = DomainSpec {
        center: [0.0; 3],
        scale: 1.0,
        ..domain.clone()
    };
    let mesh = match &domain.shape {
        Shape::Raster(grid) => raster_mesh(&reference, grid, cells_per_axis),
        _ => analytic_mesh(&reference, cells_per_axis),
    };
    if mesh.is_empty() {
        return Err(Error::EmptyMesh);
    }
    scale_translate(&mesh, domain.scale, domain.center)
}

fn analytic_mesh(domain: &DomainSpec, n: usize) -> QuadratureMesh {
    let d = domain.dim.as_usize();
    let ext = domain.half_extents();
    let max_ext = ext[..d].iter().cloned().fold(0.0, f64::max);
    let h = 2.0 * max_ext / n as f64;
    let mut counts = [1usize; 3];
    for i in 0..d {
        counts[i] = ((2.0 * ext[i] / h) - 1e-9).ceil().max(1.0) as usize;
    }
    let coord = |i: usize, axis: usize| (i as f64 + 0.5) * h - 0.5 * counts[axis] as f64 * h;
    let mut nodes = Vec::new();
    for ix in 0..counts[0] {
        for iy in 0..counts[1] {
            for iz in 0..counts[2] {
                let z = if d == 3 { coord(iz, 2) } else { 0.0 };
                let p = [coord(ix, 0), coord(iy, 1), z];
                if domain.contains_reference(&p) {
                    nodes.push(p);
                }
            }
        }
    }
    let w = h.powi(d as i32);
    QuadratureMesh {
        dim: domain.dim,
        weights: vec![w; nodes.len()],
        nodes,
        h,
        domain: domain.clone(),
    }
}

fn raster_mesh(domain: &DomainSpec, grid: &RasterGrid, n: usize) -> QuadratureMesh {
    let sub = n.div_ceil(grid.rows.max(grid.cols)).max(1);
    let h = grid.cell_size / sub as f64;
    let nx = grid.cols * sub;
    let ny = grid.rows * sub;
    let mut nodes = Vec::new();
    for ix in 0..nx {
        for iy in 0..ny {
            let col = ix / sub;
            // iy counts upwards from the bottom row
            let row = grid.rows - 1 - iy / sub;
            if grid.is_filled(row, col) {
                nodes.push([
                    (ix as f64 + 0.5) * h - 0.5 * nx as f64 * h,
                    (iy as f64 + 0.5) * h - 0.5 * ny as f64 * h,
                    0.0,
                ]);
            }
        }
    }
    QuadratureMesh {
        dim: Dim::Two,
        weights: vec![h * h; nodes.len()],
        nodes,
        h,
        domain: domain.clone(),
    }
}

/// Maps every node through `x ↦ δx + z`, scaling weights by `δ^d`.
pub fn scale_translate(mesh: &QuadratureMesh, delta: f64, z: Point) -> Result<QuadratureMesh> {
    if !(delta > 0.0 && delta.is_finite()) {
        return invalid(format!("scale must be positive, got {delta}"));
    }
    if mesh.dim == Dim::Two && z[2] != 0.0 {
        return invalid("2D translation must have a zero third component");
    }
    let wscale = delta.powi(mesh.dim.as_usize() as i32);
    let nodes = mesh
        .nodes
        .iter()
        .map(|x| {
            [
                delta * x[0] + z[0],
                delta * x[1] + z[1],
                delta * x[2] + z[2],
            ]
        })
        .collect();
    let c = mesh.domain.center;
    let domain = DomainSpec {
        center: [
            delta * c[0] + z[0],
            delta * c[1] + z[1],
            delta * c[2] + z[2],
        ],
        scale: mesh.domain.scale * delta,
        ..mesh.domain.clone()
    };
    Ok(QuadratureMesh {
        dim: mesh.dim,
        nodes,
        weights: mesh.weights.iter().map(|w| w * wscale).collect(),
        h: mesh.h * delta,
        domain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn diameters() {
        assert_eq!(DomainSpec::disk(1.5).diameter(), 3.0);
        assert_eq!(
            DomainSpec::ellipsoid(1.0, 2.0, 0.5).scaled(2.0).diameter(),
            8.0
        );
        assert!((DomainSpec::rectangle(3.0, 4.0).diameter() - 10.0).abs() < 1e-15);
    }

    #[test]
    fn disk_measure_converges() {
        let m = build_mesh(&DomainSpec::disk(1.0), 200).unwrap();
        assert!((m.measure() - PI).abs() / PI < 5e-3);
    }

    #[test]
    fn ball_measure_converges() {
        let m = build_mesh(&DomainSpec::ball(1.0), 40).unwrap();
        let exact = 4.0 / 3.0 * PI;
        assert!((m.measure() - exact).abs() / exact < 2e-2);
    }

    #[test]
    fn square_mesh_is_exact() {
        let m = build_mesh(&DomainSpec::rectangle(1.0, 1.0), 4).unwrap();
        assert_eq!(m.len(), 16);
        assert!((m.measure() - 4.0).abs() < 1e-14);
        assert!((m.h - 0.5).abs() < 1e-15);
    }

    #[test]
    fn nodes_are_lexicographic() {
        let m = build_mesh(&DomainSpec::rectangle(1.0, 0.5), 4).unwrap();
        assert_eq!(m.nodes[0], [-0.75, -0.25, 0.0]);
        assert_eq!(m.nodes[1], [-0.75, 0.25, 0.0]);
        assert_eq!(m.nodes[2], [-0.25, -0.25, 0.0]);
    }

    #[test]
    fn centroid_of_symmetric_shape_is_center() {
        let m = build_mesh(&DomainSpec::ellipse(1.0, 0.4).at([2.0, -1.0, 0.0]), 30).unwrap();
        let c = m.centroid();
        assert!((c[0] - 2.0).abs() < 1e-12 && (c[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(matches!(
            build_mesh(&DomainSpec::disk(-1.0), 10),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            build_mesh(&DomainSpec::disk(1.0), 1),
            Err(Error::InvalidInput(_))
        ));
        assert!(build_mesh(&DomainSpec::disk(1.0).scaled(0.0), 10).is_err());
        let grid = RasterGrid::new(1, 1, 1.0, vec![true]).unwrap();
        let mut dom = DomainSpec::raster(grid);
        dom.dim = Dim::Three;
        assert!(build_mesh(&dom, 4).is_err());
    }

    #[test]
    fn raster_roundtrip() {
        let text = "3 4 0.5\n0110\n1111\n0110\n";
        let grid = RasterGrid::parse(text).unwrap();
        assert_eq!(grid.rows, 3);
        assert!(grid.is_filled(1, 0) && !grid.is_filled(0, 0));
        let m = build_mesh(&DomainSpec::raster(grid.clone()), 8).unwrap();
        // 8 filled pixels, each split 2x2
        assert_eq!(m.len(), 32);
        assert!((m.measure() - 8.0 * 0.25).abs() < 1e-14);
        assert!((DomainSpec::raster(grid).measure() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn raster_orientation_top_row_first() {
        let grid = RasterGrid::parse("2 1 1.0\n1\n0\n").unwrap();
        let m = build_mesh(&DomainSpec::raster(grid), 2).unwrap();
        assert!(m.nodes.iter().all(|p| p[1] > 0.0));
    }

    #[test]
    fn raster_parse_errors() {
        assert!(RasterGrid::parse("").is_err());
        assert!(RasterGrid::parse("2 2 1.0\n11\n").is_err());
        assert!(RasterGrid::parse("1 2 1.0\n1x\n").is_err());
        assert!(RasterGrid::parse("1 2 1.0\n00\n").is_err());
    }

    #[test]
    fn fingerprint_distinguishes_meshes() {
        let a = build_mesh(&DomainSpec::disk(1.0), 10).unwrap();
        let b = build_mesh(&DomainSpec::disk(1.0).at([0.1, 0.0, 0.0]), 10).unwrap();
        assert_eq!(a.fingerprint(), a.clone().fingerprint());
        assert_ne!(a.fingerprint(), b.fingerprint());
    }

    proptest! {
        #[test]
        fn scale_translate_composes(d1 in 0.01f64..10.0, d2 in 0.01f64..10.0) {
            let m = build_mesh(&DomainSpec::ellipse(1.0, 0.6), 12).unwrap();
            let a = scale_translate(&scale_translate(&m, d1, [0.0; 3]).unwrap(), d2, [0.0; 3]).unwrap();
            let b = scale_translate(&m, d1 * d2, [0.0; 3]).unwrap();
            for (p, q) in a.nodes.iter().zip(&b.nodes) {
                for i in 0..3 {
                    prop_assert!((p[i] - q[i]).abs() <= 1e-14 * (1.0 + q[i].abs()));
                }
            }
            for (p, q) in a.weights.iter().zip(&b.weights) {
                prop_assert!((p - q).abs() <= 1e-14 * q);
            }
        }

        #[test]
        fn measure_scales_with_power(delta in 0.01f64..5.0) {
            let m = build_mesh(&DomainSpec::ball(1.0), 8).unwrap();
            let s = scale_translate(&m, delta, [1.0, 2.0, 3.0]).unwrap();
            prop_assert!((s.measure() - delta.powi(3) * m.measure()).abs() <= 1e-12 * s.measure());
        }

        #[test]
        fn nodes_strictly_inside(r in 0.2f64..3.0, n in 2usize..30) {
            let m = build_mesh(&DomainSpec::disk(r), n).unwrap();
            for p in &m.nodes {
                prop_assert!(p[0] * p[0] + p[1] * p[1] < r * r);
            }
        }
    }
}
