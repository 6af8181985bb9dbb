//! Plain-text mesh tables.
//!
//! ```text
//! nltr-mesh 1
//! size <width> <height>
//! nodes <n>
//! <index> <x> <y>
//! triangles <m>
//! <n1> <n2> <n3> <material tag>
//! crack_pairs <k>
//! <slave> <master>
//! boundary_edges <b>
//! <n1> <n2> <boundary tag> <element>
//! fixed_dofs <f>
//! <dof>
//! ```
//!
//! Floats are written in shortest round-trip form, so export followed by
//! import reproduces the mesh exactly.

use std::io::{BufRead, Write};

use super::{BoundaryEdge, BoundaryTag, CrackPair, LayerKind, Mesh, MeshError};
use crate::scalar::Real;

const MAGIC: &str = "nltr-mesh 1";

pub fn write_mesh<T: Real, W: Write>(mesh: &Mesh<T>, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "size {} {}", mesh.width.to_f64_lossy(), mesh.height.to_f64_lossy())?;
    writeln!(w, "nodes {}", mesh.nodes.len())?;
    for (i, p) in mesh.nodes.iter().enumerate() {
        writeln!(w, "{i} {} {}", p[0].to_f64_lossy(), p[1].to_f64_lossy())?;
    }
    writeln!(w, "triangles {}", mesh.triangles.len())?;
    for (t, kind) in mesh.triangles.iter().zip(&mesh.element_material) {
        writeln!(w, "{} {} {} {}", t[0], t[1], t[2], kind.tag())?;
    }
    writeln!(w, "crack_pairs {}", mesh.crack_pairs.len())?;
    for p in &mesh.crack_pairs {
        writeln!(w, "{} {}", p.slave, p.master)?;
    }
    writeln!(w, "boundary_edges {}", mesh.boundary_edges.len())?;
    for e in &mesh.boundary_edges {
        writeln!(w, "{} {} {} {}", e.nodes[0], e.nodes[1], e.tag.tag(), e.element)?;
    }
    writeln!(w, "fixed_dofs {}", mesh.fixed_dofs.len())?;
    for d in &mesh.fixed_dofs {
        writeln!(w, "{d}")?;
    }
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_fields(&mut self) -> Result<Vec<String>, MeshError> {
        self.line += 1;
        match self.inner.next() {
            Some(l) => Ok(l?.split_whitespace().map(str::to_owned).collect()),
            None => Err(self.err("unexpected end of file")),
        }
    }

    fn err(&self, msg: impl Into<String>) -> MeshError {
        MeshError::Parse { line: self.line, msg: msg.into() }
    }

    fn header(&mut self, name: &str) -> Result<usize, MeshError> {
        let f = self.next_fields()?;
        if f.len() != 2 || f[0] != name {
            return Err(self.err(format!("expected `{name} <count>`")));
        }
        self.parse(&f[1])
    }

    fn parse<V: std::str::FromStr>(&self, s: &str) -> Result<V, MeshError> {
        s.parse().map_err(|_| self.err(format!("cannot parse `{s}`")))
    }

    fn row(&mut self, n: usize) -> Result<Vec<String>, MeshError> {
        let f = self.next_fields()?;
        if f.len() != n {
            return Err(self.err(format!("expected {n} fields, found {}", f.len())));
        }
        Ok(f)
    }
}

pub fn read_mesh<T: Real, R: BufRead>(r: R) -> Result<Mesh<T>, MeshError> {
    let mut lines = Lines { inner: r.lines(), line: 0 };
    if lines.next_fields()?.join(" ") != MAGIC {
        return Err(lines.err("missing mesh header"));
    }
    let size = lines.row(3)?;
    if size[0] != "size" {
        return Err(lines.err("expected `size <width> <height>`"));
    }
    let width = T::lit(lines.parse::<f64>(&size[1])?);
    let height = T::lit(lines.parse::<f64>(&size[2])?);

    let n = lines.header("nodes")?;
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let f = lines.row(3)?;
        if lines.parse::<usize>(&f[0])? != i {
            return Err(lines.err("node indices must be consecutive"));
        }
        nodes.push([T::lit(lines.parse(&f[1])?), T::lit(lines.parse(&f[2])?)]);
    }

    let m = lines.header("triangles")?;
    let mut triangles = Vec::with_capacity(m);
    let mut element_material = Vec::with_capacity(m);
    for _ in 0..m {
        let f = lines.row(4)?;
        let t = [lines.parse(&f[0])?, lines.parse(&f[1])?, lines.parse(&f[2])?];
        if t.iter().any(|&k: &usize| k >= n) {
            return Err(lines.err("triangle references a missing node"));
        }
        triangles.push(t);
        element_material.push(LayerKind::from_tag(&f[3]).ok_or_else(|| lines.err("unknown material tag"))?);
    }

    let k = lines.header("crack_pairs")?;
    let mut crack_pairs = Vec::with_capacity(k);
    for _ in 0..k {
        let f = lines.row(2)?;
        crack_pairs.push(CrackPair { slave: lines.parse(&f[0])?, master: lines.parse(&f[1])? });
    }

    let b = lines.header("boundary_edges")?;
    let mut boundary_edges = Vec::with_capacity(b);
    for _ in 0..b {
        let f = lines.row(4)?;
        boundary_edges.push(BoundaryEdge {
            nodes: [lines.parse(&f[0])?, lines.parse(&f[1])?],
            tag: BoundaryTag::from_tag(&f[2]).ok_or_else(|| lines.err("unknown boundary tag"))?,
            element: lines.parse(&f[3])?,
        });
    }

    let d = lines.header("fixed_dofs")?;
    let mut fixed_dofs = Vec::with_capacity(d);
    for _ in 0..d {
        let f = lines.row(1)?;
        fixed_dofs.push(lines.parse(&f[0])?);
    }

    Ok(Mesh { nodes, triangles, element_material, boundary_edges, crack_pairs, fixed_dofs, width, height })
}
