use serde::{Deserialize, Serialize};

use super::FemError;
use crate::mesh::LayerKind;
use crate::scalar::{Field, Real};

/// Elastic constants of a layer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound(deserialize = "T: Deserialize<'de> + Default"))]
pub enum Elasticity<T> {
    Isotropic { e: T, nu: T },
    /// Orthotropic in the x-y plane with `E3 = E2` and `nu13 = nu23 = nu_out`.
    TransverselyIsotropic {
        e1: T,
        e2: T,
        g12: T,
        nu12: T,
        #[serde(default)]
        nu_out: T,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de> + Default"))]
pub struct Material<T> {
    #[serde(flatten)]
    pub elasticity: Elasticity<T>,
    pub rho: T,
}

impl<T: Field> Material<T> {
    pub fn isotropic(e: T, nu: T, rho: T) -> Self {
        Material { elasticity: Elasticity::Isotropic { e, nu }, rho }
    }

    pub fn transversely_isotropic(e1: T, e2: T, g12: T, nu12: T, rho: T) -> Self {
        Material {
            elasticity: Elasticity::TransverselyIsotropic { e1, e2, g12, nu12, nu_out: T::zero() },
            rho,
        }
    }
}

impl<T: Real> Material<T> {
    /// Pure epoxy: E = 3.7 GPa, nu = 0.4, rho = 1200 kg/m^3.
    pub fn epoxy() -> Self {
        Self::isotropic(T::lit(3.7e9), T::lit(0.4), T::lit(1200.0))
    }

    /// 0/90 weave: E1 = E2 = 70 GPa, G12 = 5 GPa, nu12 = 0.1, rho = 1600 kg/m^3.
    pub fn weave_0_90() -> Self {
        Self::transversely_isotropic(T::lit(70e9), T::lit(70e9), T::lit(5e9), T::lit(0.1), T::lit(1600.0))
    }

    /// 45/45 weave: E1 = E2 = 20 GPa, G12 = 30 GPa, nu12 = 0.74, rho = 1600 kg/m^3.
    pub fn weave_45_45() -> Self {
        Self::transversely_isotropic(T::lit(20e9), T::lit(20e9), T::lit(30e9), T::lit(0.74), T::lit(1600.0))
    }

    /// Plane-strain P-wave speed along x, `sqrt(c11 / rho)`.
    pub fn p_wave_speed(&self) -> Result<T, FemError> {
        Ok((plane_strain_constitutive(self)?.c[0][0] / self.rho).sqrt())
    }
}

/// Plane-strain constitutive matrix in Voigt order (xx, yy, xy) with
/// engineering shear strain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstitutiveMatrix<T> {
    pub c: [[T; 3]; 3],
}

impl<T: Field> ConstitutiveMatrix<T> {
    pub fn apply(&self, strain: [T; 3]) -> [T; 3] {
        let c = &self.c;
        [
            c[0][0] * strain[0] + c[0][1] * strain[1] + c[0][2] * strain[2],
            c[1][0] * strain[0] + c[1][1] * strain[1] + c[1][2] * strain[2],
            c[2][0] * strain[0] + c[2][1] * strain[1] + c[2][2] * strain[2],
        ]
    }

    /// Sylvester's criterion on the leading minors.
    pub fn is_positive_definite(&self) -> bool {
        let c = &self.c;
        let m1 = c[0][0];
        let m2 = c[0][0] * c[1][1] - c[0][1] * c[1][0];
        let m3 = c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1]) - c[0][1] * (c[1][0] * c[2][2] - c[1][2] * c[2][0])
            + c[0][2] * (c[1][0] * c[2][1] - c[1][1] * c[2][0]);
        m1 > T::zero() && m2 > T::zero() && m3 > T::zero()
    }
}

/// Material constants for each layer kind.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de> + Default"))]
pub struct MaterialTable<T> {
    pub epoxy: Material<T>,
    pub weave_0_90: Material<T>,
    pub weave_45_45: Material<T>,
}

impl<T: Real> Default for MaterialTable<T> {
    fn default() -> Self {
        MaterialTable { epoxy: Material::epoxy(), weave_0_90: Material::weave_0_90(), weave_45_45: Material::weave_45_45() }
    }
}

impl<T> MaterialTable<T> {
    pub fn get(&self, kind: LayerKind) -> &Material<T> {
        match kind {
            LayerKind::Epoxy => &self.epoxy,
            LayerKind::Weave0_90 => &self.weave_0_90,
            LayerKind::Weave45_45 => &self.weave_45_45,
        }
    }

    /// Same material for every layer kind.
    pub fn uniform(m: Material<T>) -> Self
    where
        T: Copy,
    {
        MaterialTable { epoxy: m, weave_0_90: m, weave_45_45: m }
    }
}

/// Build the plane-strain constitutive matrix.
///
/// Isotropic: the Lame form. Transversely isotropic: condense the 3D
/// orthotropic compliance with `eps_zz = 0`,
/// `S'_ij = S_ij - S_i3 S_j3 / S_33`, invert the in-plane block and take
/// `c33 = G12`. With `nu_out = 0` this reduces to the familiar
/// `E1 / (1 - nu12 nu21)` reduced stiffness.
pub fn plane_strain_constitutive<T: Field>(m: &Material<T>) -> Result<ConstitutiveMatrix<T>, FemError> {
    let zero = T::zero();
    let one = T::one();
    let two = T::two();
    if !(m.rho > zero) {
        return Err(FemError::InadmissibleMaterial("density must be positive".into()));
    }
    let c = match m.elasticity {
        Elasticity::Isotropic { e, nu } => {
            if !(e > zero) {
                return Err(FemError::InadmissibleMaterial("Young's modulus must be positive".into()));
            }
            if !(nu < one / two && nu > -one) {
                return Err(FemError::InadmissibleMaterial("isotropic Poisson ratio must lie in (-1, 0.5)".into()));
            }
            let f = e / ((one + nu) * (one - two * nu));
            let c11 = f * (one - nu);
            let c12 = f * nu;
            let c33 = e / (two * (one + nu));
            [[c11, c12, zero], [c12, c11, zero], [zero, zero, c33]]
        }
        Elasticity::TransverselyIsotropic { e1, e2, g12, nu12, nu_out } => {
            if !(e1 > zero && e2 > zero && g12 > zero) {
                return Err(FemError::InadmissibleMaterial("moduli must be positive".into()));
            }
            let nu21 = nu12 * e2 / e1;
            if !(one - nu12 * nu21 > zero) {
                return Err(FemError::InadmissibleMaterial("1 - nu12 * nu21 must be positive".into()));
            }
            let e3 = e2;
            let s11 = one / e1;
            let s22 = one / e2;
            let s33 = one / e3;
            let s12 = -nu12 / e1;
            let s13 = -nu_out / e1;
            let s23 = -nu_out / e2;
            let r11 = s11 - s13 * s13 / s33;
            let r22 = s22 - s23 * s23 / s33;
            let r12 = s12 - s13 * s23 / s33;
            let det = r11 * r22 - r12 * r12;
            if !(det > zero && r11 > zero) {
                return Err(FemError::InadmissibleMaterial(
                    "plane-strain reduced compliance is not positive definite".into(),
                ));
            }
            [[r22 / det, -r12 / det, zero], [-r12 / det, r11 / det, zero], [zero, zero, g12]]
        }
    };
    let out = ConstitutiveMatrix { c };
    if !out.is_positive_definite() {
        return Err(FemError::InadmissibleMaterial("constitutive matrix is not positive definite".into()));
    }
    Ok(out)
}
