//! Constant-strain triangle (T3) operators.

use super::{ConstitutiveMatrix, FemError};
use crate::scalar::Field;

/// Strain-displacement matrix, area and stiffness of one T3 element.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementOperator<T> {
    pub b_matrix: [[T; 6]; 3],
    pub area: T,
    pub k_e: [[T; 6]; 6],
}

/// Shape-function derivative coefficients `(beta_i, gamma_i)` and the doubled
/// signed area of a triangle.
pub fn shape_coefficients<T: Field>(coords: &[[T; 2]; 3]) -> ([T; 3], [T; 3], T) {
    let [[x1, y1], [x2, y2], [x3, y3]] = *coords;
    let beta = [y2 - y3, y3 - y1, y1 - y2];
    let gamma = [x3 - x2, x1 - x3, x2 - x1];
    let twice_area = beta[0] * gamma[1] - beta[1] * gamma[0];
    (beta, gamma, twice_area)
}

/// `B` with rows (eps_xx, eps_yy, gamma_xy) acting on (u1x, u1y, u2x, ...).
pub fn strain_displacement<T: Field>(beta: &[T; 3], gamma: &[T; 3], twice_area: T) -> [[T; 6]; 3] {
    let z = T::zero();
    let mut b = [[z; 6]; 3];
    for i in 0..3 {
        b[0][2 * i] = beta[i] / twice_area;
        b[1][2 * i + 1] = gamma[i] / twice_area;
        b[2][2 * i] = gamma[i] / twice_area;
        b[2][2 * i + 1] = beta[i] / twice_area;
    }
    b
}

/// `k_e = A_e B^T C B` for a counter-clockwise triangle.
pub fn element_stiffness<T: Field>(
    coords: &[[T; 2]; 3],
    c: &ConstitutiveMatrix<T>,
) -> Result<ElementOperator<T>, FemError> {
    let (beta, gamma, twice_area) = shape_coefficients(coords);
    if !(twice_area > T::zero()) {
        return Err(FemError::DegenerateElement);
    }
    let area = twice_area / T::two();
    let b = strain_displacement(&beta, &gamma, twice_area);

    let z = T::zero();
    let mut cb = [[z; 6]; 3];
    for r in 0..3 {
        for col in 0..6 {
            cb[r][col] = c.c[r][0] * b[0][col] + c.c[r][1] * b[1][col] + c.c[r][2] * b[2][col];
        }
    }
    let mut k = [[z; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            k[i][j] = area * (b[0][i] * cb[0][j] + b[1][i] * cb[1][j] + b[2][i] * cb[2][j]);
        }
    }
    Ok(ElementOperator { b_matrix: b, area, k_e: k })
}

/// Row-sum lumped mass: `rho A / 3` on each of the six DOFs.
pub fn element_lumped_mass<T: Field>(area: T, rho: T) -> Result<[T; 6], FemError> {
    if !(area > T::zero() && rho > T::zero()) {
        return Err(FemError::DegenerateElement);
    }
    let three = T::two() + T::one();
    Ok([rho * area / three; 6])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{plane_strain_constitutive, Material};
    use num_rational::Ratio;

    type Q = Ratio<i128>;

    fn q(n: i128) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn unit_triangle_exact() {
        // E = 1, nu = 0: C = diag(1, 1, 1/2)
        let c = plane_strain_constitutive(&Material::isotropic(q(1), q(0), q(1))).unwrap();
        let coords = [[q(0), q(0)], [q(1), q(0)], [q(0), q(1)]];
        let op = element_stiffness(&coords, &c).unwrap();
        let h = Q::new(1, 2);
        let qq = Q::new(1, 4);
        let z = q(0);
        // hand-integrated A * B^T C B with A = 1/2
        let expect = [
            [h + qq, qq, -h, -qq, -qq, z],
            [qq, h + qq, z, -qq, -qq, -h],
            [-h, z, h, z, z, z],
            [-qq, -qq, z, qq, qq, z],
            [-qq, -qq, z, qq, qq, z],
            [z, -h, z, z, z, h],
        ];
        assert_eq!(op.k_e, expect);
        assert_eq!(op.area, h);
    }

    #[test]
    fn rigid_translation_in_null_space() {
        let c = plane_strain_constitutive(&Material::<f64>::weave_45_45()).unwrap();
        let op = element_stiffness(&[[0.1, 0.2], [1.3, 0.1], [0.4, 0.9]], &c).unwrap();
        for u in [[1.0, 0.0, 1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0, 0.0, 1.0]] {
            for row in &op.k_e {
                let f: f64 = row.iter().zip(&u).map(|(k, x)| k * x).sum();
                assert!(f.abs() < 1e-9 * 30e9);
            }
        }
    }

    #[test]
    fn scale_invariant() {
        let c = plane_strain_constitutive(&Material::isotropic(q(3), Q::new(1, 4), q(1))).unwrap();
        let a = [[q(0), q(0)], [q(3), q(1)], [q(1), q(2)]];
        let b = a.map(|p| p.map(|v| v * q(2)));
        assert_eq!(element_stiffness(&a, &c).unwrap().k_e, element_stiffness(&b, &c).unwrap().k_e);
    }

    #[test]
    fn degenerate_and_clockwise_rejected() {
        let c = plane_strain_constitutive(&Material::isotropic(1.0, 0.0, 1.0)).unwrap();
        assert!(element_stiffness(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]], &c).is_err());
        assert!(element_stiffness(&[[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]], &c).is_err());
    }

    #[test]
    fn lumped_mass_values() {
        assert_eq!(element_lumped_mass(3.0, 1.0).unwrap(), [1.0; 6]);
        let m = element_lumped_mass(1e-8f64, 1600.0).unwrap();
        assert!((m[0] - 5.333_333_333_333_333e-6).abs() < 1e-20);
        assert_eq!(element_lumped_mass(q(3), Q::new(1, 2)).unwrap(), [Q::new(1, 2); 6]);
        assert!(element_lumped_mass(0.0, 1.0).is_err());
    }
}
