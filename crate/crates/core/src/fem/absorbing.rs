use serde::{Deserialize, Serialize};

use super::{FemError, MaterialTable};
use crate::mesh::{BoundaryTag, Mesh};
use crate::scalar::Real;

/// Lysmer-Kuhlemeyer dashpot parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"), default)]
pub struct AbsorbingParams<T> {
    pub vp: T,
    pub vs: T,
    /// Scaling of the normal dashpot.
    pub a: T,
    /// Scaling of the shear dashpot.
    pub b: T,
    /// Boundary sides that get dashpots.
    pub sides: Vec<BoundaryTag>,
}

impl<T: Real> Default for AbsorbingParams<T> {
    fn default() -> Self {
        AbsorbingParams {
            vp: T::lit(2972.0),
            vs: T::lit(1956.0),
            a: T::one(),
            b: T::one(),
            sides: vec![BoundaryTag::AbsorbingBottom, BoundaryTag::AbsorbingLeft],
        }
    }
}

/// Diagonal viscous damping from the absorbing boundary edges.
///
/// Each edge of length `l` adds `a rho Vp l / 2` to the boundary-normal DOF
/// and `b rho Vs l / 2` to the tangential DOF of both end nodes, with `rho`
/// taken from the element owning the edge.
pub fn absorbing_damping<T: Real>(
    mesh: &Mesh<T>,
    materials: &MaterialTable<T>,
    params: &AbsorbingParams<T>,
) -> Result<Vec<T>, FemError> {
    if !(params.vp > params.vs && params.vs > T::zero()) {
        return Err(FemError::InvalidBoundary("wave speeds need Vp > Vs > 0".into()));
    }
    if !(params.a >= T::zero() && params.b >= T::zero()) {
        return Err(FemError::InvalidBoundary("dashpot scalings must be non-negative".into()));
    }
    if let Some(bad) = params.sides.iter().find(|s| !s.is_absorbing()) {
        return Err(FemError::InvalidBoundary(format!("{} is not an absorbing side", bad.tag())));
    }

    let mut damping = vec![T::zero(); mesh.n_dofs()];
    let half = T::lit(0.5);
    for edge in mesh.boundary_edges.iter().filter(|e| params.sides.contains(&e.tag)) {
        let on_line = edge.nodes.iter().all(|&n| {
            let p = mesh.nodes[n];
            match edge.tag {
                BoundaryTag::AbsorbingBottom => p[1] == T::zero(),
                BoundaryTag::AbsorbingLeft => p[0] == T::zero(),
                BoundaryTag::FreeTop => p[1] == mesh.height,
                BoundaryTag::FreeRight => p[0] == mesh.width,
            }
        });
        if !on_line {
            return Err(FemError::InvalidBoundary(format!(
                "edge {:?} tagged {} is not on the outer boundary",
                edge.nodes,
                edge.tag.tag()
            )));
        }
        let rho = materials.get(mesh.element_material[edge.element]).rho;
        let len = mesh.edge_length(edge);
        let normal = params.a * rho * params.vp * len * half;
        let shear = params.b * rho * params.vs * len * half;
        let (normal_dof, shear_dof) = if edge.tag.is_horizontal() { (1, 0) } else { (0, 1) };
        for &n in &edge.nodes {
            damping[2 * n + normal_dof] += normal;
            damping[2 * n + shear_dof] += shear;
        }
    }
    Ok(damping)
}
