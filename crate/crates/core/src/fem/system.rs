use nalgebra::{Matrix6, SymmetricEigen};

use super::{
    absorbing_damping, element_lumped_mass, element_stiffness, plane_strain_constitutive, AbsorbingParams,
    ConstitutiveMatrix, ElementOperator, FemError, MaterialTable,
};
use crate::mesh::{LayerKind, Mesh};
use crate::scalar::Real;

/// Per-element data kept for the matrix-free stiffness action.
///
/// `dndx[i] = beta_i / 2A` and `dndy[i] = gamma_i / 2A` are the constant
/// shape-function gradients.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementData<T> {
    pub nodes: [usize; 3],
    pub dndx: [T; 3],
    pub dndy: [T; 3],
    pub area: T,
    pub material: usize,
}

/// Lumped mass, diagonal damping and element operators of a mesh.
#[derive(Clone, Debug)]
pub struct GlobalSystem<T> {
    pub n_nodes: usize,
    pub mass: Vec<T>,
    pub damping: Vec<T>,
    pub elements: Vec<ElementData<T>>,
    pub constitutive: Vec<ConstitutiveMatrix<T>>,
    pub density: Vec<T>,
    pub fixed_dofs: Vec<usize>,
}

impl<T: Real> GlobalSystem<T> {
    pub fn assemble(
        mesh: &Mesh<T>,
        materials: &MaterialTable<T>,
        absorbing: &AbsorbingParams<T>,
    ) -> Result<Self, FemError> {
        let constitutive = LayerKind::ALL
            .iter()
            .map(|&k| plane_strain_constitutive(materials.get(k)))
            .collect::<Result<Vec<_>, _>>()?;
        let density: Vec<T> = LayerKind::ALL.iter().map(|&k| materials.get(k).rho).collect();

        let n_nodes = mesh.n_nodes();
        let mut mass = vec![T::zero(); 2 * n_nodes];
        let mut elements = Vec::with_capacity(mesh.triangles.len());
        for (e, tri) in mesh.triangles.iter().enumerate() {
            let coords = mesh.element_coords(e);
            let (beta, gamma, twice_area) = super::shape_coefficients(&coords);
            if !(twice_area > T::zero()) {
                return Err(FemError::DegenerateElement);
            }
            let material = mesh.element_material[e].index();
            let area = twice_area / T::two();
            let me = element_lumped_mass(area, density[material])?;
            for (local, &node) in tri.iter().enumerate() {
                mass[2 * node] += me[2 * local];
                mass[2 * node + 1] += me[2 * local + 1];
            }
            elements.push(ElementData {
                nodes: *tri,
                dndx: beta.map(|b| b / twice_area),
                dndy: gamma.map(|g| g / twice_area),
                area,
                material,
            });
        }

        let damping = absorbing_damping(mesh, materials, absorbing)?;
        let sys = GlobalSystem { n_nodes, mass, damping, elements, constitutive, density, fixed_dofs: mesh.fixed_dofs.clone() };
        sys.check_mass()?;
        Ok(sys)
    }

    /// System without elements, for lumped point-mass models.
    pub fn from_parts(mass: Vec<T>, damping: Vec<T>, fixed_dofs: Vec<usize>) -> Result<Self, FemError> {
        if mass.len() % 2 != 0 || damping.len() != mass.len() {
            return Err(FemError::DimensionMismatch { expected: mass.len(), found: damping.len() });
        }
        let sys = GlobalSystem {
            n_nodes: mass.len() / 2,
            mass,
            damping,
            elements: Vec::new(),
            constitutive: Vec::new(),
            density: Vec::new(),
            fixed_dofs,
        };
        sys.check_mass()?;
        Ok(sys)
    }

    fn check_mass(&self) -> Result<(), FemError> {
        for (dof, &m) in self.mass.iter().enumerate() {
            if !(m > T::zero()) && !self.fixed_dofs.contains(&dof) {
                return Err(FemError::MissingMass { dof });
            }
        }
        Ok(())
    }

    pub fn n_dofs(&self) -> usize {
        2 * self.n_nodes
    }

    /// Sum of the lumped mass over x DOFs, i.e. the physical mass per unit depth.
    pub fn total_mass(&self) -> T {
        self.mass.iter().step_by(2).copied().sum()
    }

    /// `out = K u`, evaluated element by element in a fixed order.
    pub fn internal_force(&self, u: &[T], out: &mut [T]) {
        out.iter_mut().for_each(|v| *v = T::zero());
        for el in &self.elements {
            let c = &self.constitutive[el.material].c;
            let [a, b, d] = el.nodes;
            let ux = [u[2 * a], u[2 * b], u[2 * d]];
            let uy = [u[2 * a + 1], u[2 * b + 1], u[2 * d + 1]];
            let exx = el.dndx[0] * ux[0] + el.dndx[1] * ux[1] + el.dndx[2] * ux[2];
            let eyy = el.dndy[0] * uy[0] + el.dndy[1] * uy[1] + el.dndy[2] * uy[2];
            let gxy = el.dndy[0] * ux[0] + el.dndy[1] * ux[1] + el.dndy[2] * ux[2]
                + el.dndx[0] * uy[0]
                + el.dndx[1] * uy[1]
                + el.dndx[2] * uy[2];
            let sxx = (c[0][0] * exx + c[0][1] * eyy + c[0][2] * gxy) * el.area;
            let syy = (c[1][0] * exx + c[1][1] * eyy + c[1][2] * gxy) * el.area;
            let sxy = (c[2][0] * exx + c[2][1] * eyy + c[2][2] * gxy) * el.area;
            for (i, &n) in el.nodes.iter().enumerate() {
                out[2 * n] += el.dndx[i] * sxx + el.dndy[i] * sxy;
                out[2 * n + 1] += el.dndy[i] * syy + el.dndx[i] * sxy;
            }
        }
    }

    pub fn apply_stiffness(&self, u: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); u.len()];
        self.internal_force(u, &mut out);
        out
    }

    /// `0.5 u^T K u`.
    pub fn strain_energy(&self, u: &[T]) -> T {
        let ku = self.apply_stiffness(u);
        T::lit(0.5) * u.iter().zip(&ku).map(|(a, b)| *a * *b).sum::<T>()
    }

    pub fn element_operator(&self, coords: &[[T; 2]; 3], e: usize) -> Result<ElementOperator<T>, FemError> {
        element_stiffness(coords, &self.constitutive[self.elements[e].material])
    }

    /// Largest time step allowed by the element eigenvalue bound,
    /// `min_e 2 / sqrt(lambda_max(M_e^-1 K_e))`, which bounds the lumped
    /// system's highest frequency from above.
    pub fn critical_time_step(&self) -> f64 {
        let mut omega_sq_max = 0.0f64;
        for el in &self.elements {
            let c = &self.constitutive[el.material].c;
            let cf = |i: usize, j: usize| c[i][j].to_f64_lossy();
            let mut b = [[0.0f64; 6]; 3];
            for i in 0..3 {
                let bx = el.dndx[i].to_f64_lossy();
                let by = el.dndy[i].to_f64_lossy();
                b[0][2 * i] = bx;
                b[1][2 * i + 1] = by;
                b[2][2 * i] = by;
                b[2][2 * i + 1] = bx;
            }
            let area = el.area.to_f64_lossy();
            let k = Matrix6::from_fn(|i, j| {
                let mut s = 0.0;
                for r in 0..3 {
                    for q in 0..3 {
                        s += b[r][i] * cf(r, q) * b[q][j];
                    }
                }
                s * area
            });
            let lambda = SymmetricEigen::new(k).eigenvalues.max();
            let nodal_mass = self.density[el.material].to_f64_lossy() * area / 3.0;
            omega_sq_max = omega_sq_max.max(lambda / nodal_mass);
        }
        if omega_sq_max > 0.0 {
            2.0 / omega_sq_max.sqrt()
        } else {
            f64::INFINITY
        }
    }
}
