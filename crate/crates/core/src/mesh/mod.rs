//! Stochastic laminate stack and the structured T3 mesh built on it.
//!
//! Coordinates: `x` runs along the layers from the left (absorbing) edge to
//! the right (free) edge, `y` runs from the bottom (absorbing) edge up to the
//! top (free) surface. Layer stacks are ordered bottom to top.

mod io;

pub use io::{read_mesh, write_mesh};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("invalid laminate specification: {0}")]
    InvalidSpec(String),
    #[error("minimum stack thickness {min_total} m exceeds domain height {height} m")]
    StackTooThick { min_total: f64, height: f64 },
    #[error("layer {index} gives element rows of {row_height} m, below the minimum {min} m")]
    LayerTooThin { index: usize, row_height: f64, min: f64 },
    #[error("invalid crack: {0}")]
    InvalidCrack(String),
    #[error("crack line at y = {y} m is {distance} m from the nearest grid line (tolerance {tolerance} m)")]
    CrackNotSnappable { y: f64, distance: f64, tolerance: f64 },
    #[error("mesh file line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerKind {
    Epoxy,
    #[serde(rename = "weave_0_90")]
    Weave0_90,
    #[serde(rename = "weave_45_45")]
    Weave45_45,
}

impl LayerKind {
    pub const ALL: [LayerKind; 3] = [LayerKind::Epoxy, LayerKind::Weave0_90, LayerKind::Weave45_45];

    pub fn index(self) -> usize {
        match self {
            LayerKind::Epoxy => 0,
            LayerKind::Weave0_90 => 1,
            LayerKind::Weave45_45 => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn tag(self) -> &'static str {
        match self {
            LayerKind::Epoxy => "epoxy",
            LayerKind::Weave0_90 => "weave_0_90",
            LayerKind::Weave45_45 => "weave_45_45",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.tag() == s)
    }
}

/// Truncated normal thickness distribution (metres).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThicknessDist {
    pub mean: f64,
    pub stddev: f64,
    pub min: f64,
}

impl ThicknessDist {
    pub fn fixed(thickness: f64) -> Self {
        ThicknessDist { mean: thickness, stddev: 0.0, min: thickness }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaminateSpec {
    /// Number of (epoxy, carbon fibre) layer pairs.
    pub pair_count: usize,
    pub epoxy: ThicknessDist,
    pub weave_0_90: ThicknessDist,
    pub weave_45_45: ThicknessDist,
    pub rng_seed: u64,
    pub domain_width: f64,
    pub domain_height: f64,
}

impl LaminateSpec {
    pub fn dist(&self, kind: LayerKind) -> &ThicknessDist {
        match kind {
            LayerKind::Epoxy => &self.epoxy,
            LayerKind::Weave0_90 => &self.weave_0_90,
            LayerKind::Weave45_45 => &self.weave_45_45,
        }
    }

    pub fn validate(&self) -> Result<(), MeshError> {
        let bad = |m: String| Err(MeshError::InvalidSpec(m));
        if self.pair_count == 0 {
            return bad("pair_count must be at least 1".into());
        }
        if !(self.domain_width > 0.0 && self.domain_height > 0.0) {
            return bad("domain dimensions must be positive".into());
        }
        for kind in LayerKind::ALL {
            let d = self.dist(kind);
            if !(d.mean > 0.0 && d.min > 0.0 && d.stddev >= 0.0) {
                return bad(format!("{} thickness distribution needs mean > 0, min > 0, stddev >= 0", kind.tag()));
            }
        }
        Ok(())
    }

    /// Kind of the carbon-fibre layer in pair `pair`; the weave alternates.
    pub fn weave_for_pair(pair: usize) -> LayerKind {
        if pair % 2 == 0 {
            LayerKind::Weave0_90
        } else {
            LayerKind::Weave45_45
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub kind: LayerKind,
    pub thickness: f64,
}

/// Draw the layer stack (bottom to top) and rescale it to the domain height.
pub fn generate_layer_stack(spec: &LaminateSpec) -> Result<Vec<Layer>, MeshError> {
    spec.validate()?;
    let min_total: f64 = (0..spec.pair_count)
        .map(|p| spec.epoxy.min + spec.dist(LaminateSpec::weave_for_pair(p)).min)
        .sum();
    if min_total > spec.domain_height {
        return Err(MeshError::StackTooThick { min_total, height: spec.domain_height });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let mut draw = |d: &ThicknessDist| -> f64 {
        if d.stddev == 0.0 {
            return d.mean.max(d.min);
        }
        let normal = Normal::new(d.mean, d.stddev).expect("validated distribution");
        normal.sample(&mut rng).max(d.min)
    };

    let mut layers = Vec::with_capacity(2 * spec.pair_count);
    for pair in 0..spec.pair_count {
        let weave = LaminateSpec::weave_for_pair(pair);
        layers.push(Layer { kind: LayerKind::Epoxy, thickness: draw(&spec.epoxy) });
        layers.push(Layer { kind: weave, thickness: draw(spec.dist(weave)) });
    }

    let total: f64 = layers.iter().map(|l| l.thickness).sum();
    let scale = spec.domain_height / total;
    for l in layers.iter_mut() {
        l.thickness *= scale;
    }
    // close the stack exactly at the domain height
    let n = layers.len();
    let below: f64 = layers[..n - 1].iter().map(|l| l.thickness).sum();
    layers[n - 1].thickness = spec.domain_height - below;
    Ok(layers)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrackSpec {
    pub enabled: bool,
    pub y_position: f64,
    pub x_start: f64,
    pub x_end: f64,
}

impl CrackSpec {
    pub fn disabled() -> Self {
        CrackSpec { enabled: false, y_position: 0.0, x_start: 0.0, x_end: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryTag {
    FreeTop,
    FreeRight,
    AbsorbingBottom,
    AbsorbingLeft,
}

impl BoundaryTag {
    pub const ALL: [BoundaryTag; 4] =
        [BoundaryTag::FreeTop, BoundaryTag::FreeRight, BoundaryTag::AbsorbingBottom, BoundaryTag::AbsorbingLeft];

    pub fn tag(self) -> &'static str {
        match self {
            BoundaryTag::FreeTop => "free_top",
            BoundaryTag::FreeRight => "free_right",
            BoundaryTag::AbsorbingBottom => "absorbing_bottom",
            BoundaryTag::AbsorbingLeft => "absorbing_left",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.tag() == s)
    }

    pub fn is_absorbing(self) -> bool {
        matches!(self, BoundaryTag::AbsorbingBottom | BoundaryTag::AbsorbingLeft)
    }

    /// True for edges with constant `y` (top and bottom).
    pub fn is_horizontal(self) -> bool {
        matches!(self, BoundaryTag::FreeTop | BoundaryTag::AbsorbingBottom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub tag: BoundaryTag,
    /// Triangle owning the edge.
    pub element: usize,
}

/// Coincident node pair on the crack seam: slave below, master above.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrackPair {
    pub slave: usize,
    pub master: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corner {
    BottomLeft,
    BottomRight,
    TopLeft,
    TopRight,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshOptions {
    pub target_edge_length: f64,
    pub min_element_height: f64,
    /// Largest allowed distance between the crack line and a grid line.
    /// Defaults to half the target edge length.
    #[serde(default)]
    pub crack_snap_tolerance: Option<f64>,
    /// Corners whose x and y DOFs are fixed.
    #[serde(default = "default_fixed_corners")]
    pub fixed_corners: [Corner; 2],
}

fn default_fixed_corners() -> [Corner; 2] {
    [Corner::BottomRight, Corner::TopLeft]
}

impl MeshOptions {
    pub fn with_edge_length(h: f64) -> Self {
        MeshOptions {
            target_edge_length: h,
            min_element_height: h / 8.0,
            crack_snap_tolerance: None,
            fixed_corners: default_fixed_corners(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh<T> {
    pub nodes: Vec<[T; 2]>,
    /// Counter-clockwise node triples.
    pub triangles: Vec<[usize; 3]>,
    pub element_material: Vec<LayerKind>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub crack_pairs: Vec<CrackPair>,
    pub fixed_dofs: Vec<usize>,
    pub width: T,
    pub height: T,
}

impl<T: Real> Mesh<T> {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_dofs(&self) -> usize {
        2 * self.nodes.len()
    }

    pub fn element_coords(&self, e: usize) -> [[T; 2]; 3] {
        let t = self.triangles[e];
        [self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]]
    }

    pub fn signed_area(&self, e: usize) -> T {
        let [a, b, c] = self.element_coords(e);
        ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])) / T::two()
    }

    pub fn total_area(&self) -> T {
        (0..self.triangles.len()).map(|e| self.signed_area(e)).sum()
    }

    pub fn edge_length(&self, edge: &BoundaryEdge) -> T {
        let [a, b] = edge.nodes.map(|n| self.nodes[n]);
        ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
    }

    /// Sorted, de-duplicated nodes on boundary edges with the given tag.
    pub fn boundary_nodes(&self, tag: BoundaryTag) -> Vec<usize> {
        let mut v: Vec<usize> =
            self.boundary_edges.iter().filter(|e| e.tag == tag).flat_map(|e| e.nodes).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Nearest node to a point. Ties go to the lowest index.
    pub fn nearest_node(&self, x: T, y: T) -> usize {
        let mut best = 0;
        let mut best_d = T::infinity();
        for (i, p) in self.nodes.iter().enumerate() {
            let d = (p[0] - x).powi(2) + (p[1] - y).powi(2);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    /// Count how many triangles use each undirected edge.
    pub fn edge_use_counts(&self) -> std::collections::BTreeMap<(usize, usize), usize> {
        let mut counts = std::collections::BTreeMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        counts
    }
}

/// Build the structured mesh over a layer stack (bottom to top).
///
/// Every rectangle of the grid is split into two counter-clockwise
/// triangles. Grid rows are snapped to layer interfaces; the crack is snapped
/// to the nearest grid line and its interior nodes are duplicated.
pub fn build_mesh<T: Real>(
    stack: &[Layer],
    domain_width: f64,
    crack: &CrackSpec,
    opts: &MeshOptions,
) -> Result<Mesh<T>, MeshError> {
    let h = opts.target_edge_length;
    if !(h > 0.0) {
        return Err(MeshError::InvalidSpec("target_edge_length must be positive".into()));
    }
    if stack.is_empty() || !(domain_width > 0.0) {
        return Err(MeshError::InvalidSpec("empty stack or non-positive width".into()));
    }

    let nx = ((domain_width / h) - 1e-9).ceil().max(1.0) as usize;
    let dx = domain_width / nx as f64;
    let x_lines: Vec<f64> =
        (0..=nx).map(|i| if i == nx { domain_width } else { i as f64 * dx }).collect();

    let mut y_lines = vec![0.0];
    let mut row_kind = Vec::new();
    let mut bottom = 0.0;
    for (index, layer) in stack.iter().enumerate() {
        if !(layer.thickness > 0.0) {
            return Err(MeshError::InvalidSpec(format!("layer {index} has non-positive thickness")));
        }
        let rows = ((layer.thickness / h) - 1e-9).ceil().max(1.0) as usize;
        let row_height = layer.thickness / rows as f64;
        if row_height < opts.min_element_height {
            return Err(MeshError::LayerTooThin { index, row_height, min: opts.min_element_height });
        }
        let top = bottom + layer.thickness;
        for r in 1..=rows {
            y_lines.push(if r == rows { top } else { bottom + r as f64 * row_height });
            row_kind.push(layer.kind);
        }
        bottom = top;
    }
    let ny = row_kind.len();
    let height = y_lines[ny];

    let crack_cells = if crack.enabled {
        Some(snap_crack(crack, &x_lines, &y_lines, dx, opts)?)
    } else {
        None
    };

    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut nodes: Vec<[T; 2]> = Vec::with_capacity((nx + 1) * (ny + 1));
    for &y in &y_lines {
        for &x in &x_lines {
            nodes.push([T::lit(x), T::lit(y)]);
        }
    }

    let mut crack_pairs = Vec::new();
    let mut master_of = std::collections::HashMap::new();
    if let Some((jc, is, ie)) = crack_cells {
        for i in is + 1..ie {
            let slave = id(i, jc);
            let master = nodes.len();
            nodes.push(nodes[slave]);
            master_of.insert(slave, master);
            crack_pairs.push(CrackPair { slave, master });
        }
    }

    let mut triangles = Vec::with_capacity(2 * nx * ny);
    let mut element_material = Vec::with_capacity(2 * nx * ny);
    for (j, &kind) in row_kind.iter().enumerate() {
        for i in 0..nx {
            let mut n00 = id(i, j);
            let mut n10 = id(i + 1, j);
            let n01 = id(i, j + 1);
            let n11 = id(i + 1, j + 1);
            if let Some((jc, is, ie)) = crack_cells {
                if j == jc && i >= is && i < ie {
                    n00 = *master_of.get(&n00).unwrap_or(&n00);
                    n10 = *master_of.get(&n10).unwrap_or(&n10);
                }
            }
            triangles.push([n00, n10, n11]);
            triangles.push([n00, n11, n01]);
            element_material.push(kind);
            element_material.push(kind);
        }
    }

    let cell = |i: usize, j: usize| 2 * (j * nx + i);
    let mut boundary_edges = Vec::with_capacity(2 * (nx + ny));
    for i in 0..nx {
        boundary_edges.push(BoundaryEdge {
            nodes: [id(i, 0), id(i + 1, 0)],
            tag: BoundaryTag::AbsorbingBottom,
            element: cell(i, 0),
        });
    }
    for j in 0..ny {
        boundary_edges.push(BoundaryEdge {
            nodes: [id(nx, j), id(nx, j + 1)],
            tag: BoundaryTag::FreeRight,
            element: cell(nx - 1, j),
        });
    }
    for i in (0..nx).rev() {
        boundary_edges.push(BoundaryEdge {
            nodes: [id(i + 1, ny), id(i, ny)],
            tag: BoundaryTag::FreeTop,
            element: cell(i, ny - 1) + 1,
        });
    }
    for j in (0..ny).rev() {
        boundary_edges.push(BoundaryEdge {
            nodes: [id(0, j + 1), id(0, j)],
            tag: BoundaryTag::AbsorbingLeft,
            element: cell(0, j) + 1,
        });
    }

    let corner = |c: Corner| match c {
        Corner::BottomLeft => id(0, 0),
        Corner::BottomRight => id(nx, 0),
        Corner::TopLeft => id(0, ny),
        Corner::TopRight => id(nx, ny),
    };
    let mut fixed_dofs: Vec<usize> =
        opts.fixed_corners.iter().flat_map(|&c| [2 * corner(c), 2 * corner(c) + 1]).collect();
    fixed_dofs.sort_unstable();
    fixed_dofs.dedup();

    Ok(Mesh {
        nodes,
        triangles,
        element_material,
        boundary_edges,
        crack_pairs,
        fixed_dofs,
        width: T::lit(domain_width),
        height: T::lit(height),
    })
}

/// Returns (grid row index of the crack line, first column, last column).
fn snap_crack(
    crack: &CrackSpec,
    x_lines: &[f64],
    y_lines: &[f64],
    dx: f64,
    opts: &MeshOptions,
) -> Result<(usize, usize, usize), MeshError> {
    let width = *x_lines.last().unwrap();
    let height = *y_lines.last().unwrap();
    if !(crack.x_start < crack.x_end) {
        return Err(MeshError::InvalidCrack("x_start must be below x_end".into()));
    }
    if !(crack.x_start > 0.0 && crack.x_end < width && crack.y_position > 0.0 && crack.y_position < height) {
        return Err(MeshError::InvalidCrack("crack must lie strictly inside the domain".into()));
    }
    let tolerance = opts.crack_snap_tolerance.unwrap_or(opts.target_edge_length / 2.0);
    let (jc, distance) = y_lines
        .iter()
        .enumerate()
        .map(|(j, &y)| (j, (y - crack.y_position).abs()))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    if distance > tolerance || jc == 0 || jc + 1 == y_lines.len() {
        return Err(MeshError::CrackNotSnappable { y: crack.y_position, distance, tolerance });
    }
    let nx = x_lines.len() - 1;
    let is = (crack.x_start / dx).round() as usize;
    let ie = (crack.x_end / dx).round() as usize;
    if is < 1 || ie + 1 > nx || ie < is + 2 {
        return Err(MeshError::InvalidCrack(format!(
            "crack spans grid columns {is}..{ie}; it needs at least one interior node and must not reach the boundary"
        )));
    }
    Ok((jc, is, ie))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(pairs: usize, sd: f64) -> LaminateSpec {
        LaminateSpec {
            pair_count: pairs,
            epoxy: ThicknessDist { mean: 20e-6, stddev: sd * 5e-6, min: 8e-6 },
            weave_0_90: ThicknessDist { mean: 60e-6, stddev: sd * 15e-6, min: 20e-6 },
            weave_45_45: ThicknessDist { mean: 60e-6, stddev: sd * 15e-6, min: 20e-6 },
            rng_seed: 11,
            domain_width: 2e-3,
            domain_height: pairs as f64 * 80e-6,
        }
    }

    #[test]
    fn fifty_pairs_alternate_weave() {
        let mut s = spec(50, 1.0);
        s.domain_height = 4e-3;
        let stack = generate_layer_stack(&s).unwrap();
        assert_eq!(stack.len(), 100);
        for (p, pair) in stack.chunks(2).enumerate() {
            assert_eq!(pair[0].kind, LayerKind::Epoxy);
            let expect = if p % 2 == 0 { LayerKind::Weave0_90 } else { LayerKind::Weave45_45 };
            assert_eq!(pair[1].kind, expect);
        }
        let total: f64 = stack.iter().map(|l| l.thickness).sum();
        assert!((total - 4e-3).abs() < 1e-12 * 4e-3);
    }

    #[test]
    fn zero_stddev_gives_means() {
        let s = spec(4, 0.0);
        let stack = generate_layer_stack(&s).unwrap();
        for l in &stack {
            let expect = if l.kind == LayerKind::Epoxy { 20e-6 } else { 60e-6 };
            assert!((l.thickness - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn same_seed_same_stack() {
        let s = spec(10, 1.0);
        let a = generate_layer_stack(&s).unwrap();
        let b = generate_layer_stack(&s).unwrap();
        assert_eq!(a, b);
        let mut s2 = s.clone();
        s2.rng_seed += 1;
        assert_ne!(a, generate_layer_stack(&s2).unwrap());
    }

    #[test]
    fn rejects_overfull_stack() {
        let mut s = spec(10, 1.0);
        s.domain_height = 100e-6;
        assert!(matches!(generate_layer_stack(&s), Err(MeshError::StackTooThick { .. })));
        s.pair_count = 0;
        assert!(matches!(generate_layer_stack(&s), Err(MeshError::InvalidSpec(_))));
    }

    #[test]
    fn two_by_two_single_layer() {
        let stack = [Layer { kind: LayerKind::Epoxy, thickness: 2.0 }];
        let mesh: Mesh<f64> = build_mesh(&stack, 2.0, &CrackSpec::disabled(), &MeshOptions::with_edge_length(1.0)).unwrap();
        assert_eq!(mesh.n_nodes(), 9);
        assert_eq!(mesh.triangles.len(), 8);
        assert!(mesh.crack_pairs.is_empty());
        assert_eq!(mesh.fixed_dofs.len(), 4);
        assert_eq!(mesh.boundary_edges.len(), 8);
        // bottom-right is node 2, top-left is node 6
        assert_eq!(mesh.fixed_dofs, vec![4, 5, 12, 13]);
    }

    #[test]
    fn crack_seam_is_duplicated_and_closed() {
        let stack = [
            Layer { kind: LayerKind::Epoxy, thickness: 1.0 },
            Layer { kind: LayerKind::Weave0_90, thickness: 1.0 },
        ];
        let crack = CrackSpec { enabled: true, y_position: 1.05, x_start: 1.0, x_end: 3.0 };
        let mesh: Mesh<f64> = build_mesh(&stack, 4.0, &crack, &MeshOptions::with_edge_length(0.5)).unwrap();
        assert_eq!(mesh.crack_pairs.len(), 3);
        for p in &mesh.crack_pairs {
            assert_eq!(mesh.nodes[p.slave], mesh.nodes[p.master]);
            assert_eq!(mesh.nodes[p.slave][1], 1.0);
        }
        let counts = mesh.edge_use_counts();
        let single = counts.values().filter(|&&c| c == 1).count();
        // 24 outer edges plus 4 seam edges on each side
        assert_eq!(single, 24 + 8);
        assert!(counts.values().all(|&c| c == 1 || c == 2));
    }

    #[test]
    fn rejects_bad_cracks() {
        let stack = [Layer { kind: LayerKind::Epoxy, thickness: 1.0 }];
        let opts = MeshOptions::with_edge_length(0.25);
        let outside = CrackSpec { enabled: true, y_position: 0.5, x_start: 0.0, x_end: 0.5 };
        assert!(build_mesh::<f64>(&stack, 1.0, &outside, &opts).is_err());
        let short = CrackSpec { enabled: true, y_position: 0.5, x_start: 0.4, x_end: 0.5 };
        assert!(build_mesh::<f64>(&stack, 1.0, &short, &opts).is_err());
        let mut tight = opts.clone();
        tight.crack_snap_tolerance = Some(0.01);
        let off = CrackSpec { enabled: true, y_position: 0.6, x_start: 0.25, x_end: 0.75 };
        assert!(matches!(build_mesh::<f64>(&stack, 1.0, &off, &tight), Err(MeshError::CrackNotSnappable { .. })));
    }

    #[test]
    fn thin_layer_rejected() {
        let stack = [
            Layer { kind: LayerKind::Epoxy, thickness: 0.01 },
            Layer { kind: LayerKind::Weave0_90, thickness: 1.0 },
        ];
        let err = build_mesh::<f64>(&stack, 1.0, &CrackSpec::disabled(), &MeshOptions::with_edge_length(0.25));
        assert!(matches!(err, Err(MeshError::LayerTooThin { index: 0, .. })));
    }
}
