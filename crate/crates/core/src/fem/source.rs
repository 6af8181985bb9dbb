use super::FemError;
use crate::mesh::{BoundaryTag, Mesh};
use crate::scalar::Real;
use crate::signals::Signal;

/// Pressure pulse applied over a patch of boundary nodes.
///
/// The total force per unit depth `p(t) * span` is divided equally over the
/// nodes and points along `direction`.
#[derive(Clone, Debug, PartialEq)]
pub struct TractionSource<T> {
    pub nodes: Vec<usize>,
    pub direction: [T; 2],
    /// Pressure in Pa.
    pub amplitude: Signal<T>,
    pub span: T,
    pub max_pressure: T,
}

/// Unit tangent (increasing coordinate) and inward normal of a side.
pub fn boundary_frame<T: Real>(side: BoundaryTag) -> ([T; 2], [T; 2]) {
    let (o, z) = (T::one(), T::zero());
    match side {
        BoundaryTag::FreeTop => ([o, z], [z, -o]),
        BoundaryTag::AbsorbingBottom => ([o, z], [z, o]),
        BoundaryTag::FreeRight => ([z, o], [-o, z]),
        BoundaryTag::AbsorbingLeft => ([z, o], [o, z]),
    }
}

impl<T: Real> TractionSource<T> {
    pub fn new(
        nodes: Vec<usize>,
        direction: [T; 2],
        amplitude: Signal<T>,
        span: T,
        max_pressure: T,
    ) -> Result<Self, FemError> {
        if nodes.is_empty() {
            return Err(FemError::InvalidSource("no source nodes".into()));
        }
        let norm = (direction[0] * direction[0] + direction[1] * direction[1]).sqrt();
        if !((norm - T::one()).abs() < T::lit(1e-9)) {
            return Err(FemError::InvalidSource("direction must be a unit vector".into()));
        }
        if !(span > T::zero()) {
            return Err(FemError::InvalidSource("span must be positive".into()));
        }
        let peak = amplitude.max_abs();
        if peak > max_pressure {
            return Err(FemError::SourceAmplitude { pressure: peak.to_f64_lossy(), limit: max_pressure.to_f64_lossy() });
        }
        Ok(TractionSource { nodes, direction, amplitude, span, max_pressure })
    }

    /// Source on the nodes of `side` within `span / 2` of `center`, which is
    /// measured along the side's tangent.
    ///
    /// The direction makes `angle_deg` with the boundary line, rotating from
    /// the tangent toward the inward normal: `cos(a) t + sin(a) n`.
    pub fn on_boundary(
        mesh: &Mesh<T>,
        side: BoundaryTag,
        center: T,
        span: T,
        angle_deg: T,
        amplitude: Signal<T>,
        max_pressure: T,
    ) -> Result<Self, FemError> {
        let axis = if side.is_horizontal() { 0 } else { 1 };
        let half = span / T::two();
        let tol = span * T::lit(1e-9);
        let nodes: Vec<usize> = mesh
            .boundary_nodes(side)
            .into_iter()
            .filter(|&n| (mesh.nodes[n][axis] - center).abs() <= half + tol)
            .collect();
        if nodes.is_empty() {
            return Err(FemError::InvalidSource(format!("no {} nodes within the source span", side.tag())));
        }
        let (t, n) = boundary_frame::<T>(side);
        let a = angle_deg.to_radians();
        let direction = [a.cos() * t[0] + a.sin() * n[0], a.cos() * t[1] + a.sin() * n[1]];
        Self::new(nodes, direction, amplitude, span, max_pressure)
    }

    /// Pressure at `t`, interpolated and zero outside the record.
    pub fn pressure_at(&self, t: T) -> T {
        self.amplitude.value_at(t)
    }
}

/// Add the source's nodal forces at time `t` to `f`.
pub fn apply_traction<T: Real>(src: &TractionSource<T>, t: T, f: &mut [T]) -> Result<(), FemError> {
    let p = src.pressure_at(t);
    if p.abs() > src.max_pressure {
        return Err(FemError::SourceAmplitude { pressure: p.to_f64_lossy(), limit: src.max_pressure.to_f64_lossy() });
    }
    if p == T::zero() {
        return Ok(());
    }
    let per_node = p * src.span / T::of_usize(src.nodes.len());
    for &n in &src.nodes {
        let (ix, iy) = (2 * n, 2 * n + 1);
        if iy >= f.len() {
            return Err(FemError::DimensionMismatch { expected: iy + 1, found: f.len() });
        }
        f[ix] += per_node * src.direction[0];
        f[iy] += per_node * src.direction[1];
    }
    Ok(())
}
