//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod criteria;

use nalgebra::{DMatrix, Matrix3, Matrix6};
use nltr_core::fem::Elasticity;
use nltr_core::{Material64, MaterialTable64, Mesh64};

/// Plane-strain stiffness as the in-plane block of the inverted 3D
/// compliance.
pub fn oracle_constitutive(m: &Material64) -> Matrix3<f64> {
    let s = match m.elasticity {
        Elasticity::Isotropic { e, nu } => {
            let g = e / (2.0 * (1.0 + nu));
            let mut s = Matrix6::zeros();
            for i in 0..3 {
                for j in 0..3 {
                    s[(i, j)] = if i == j { 1.0 / e } else { -nu / e };
                }
                s[(i + 3, i + 3)] = 1.0 / g;
            }
            s
        }
        Elasticity::TransverselyIsotropic { e1, e2, g12, nu12, nu_out } => {
            let e3 = e2;
            let mut s = Matrix6::zeros();
            s[(0, 0)] = 1.0 / e1;
            s[(1, 1)] = 1.0 / e2;
            s[(2, 2)] = 1.0 / e3;
            s[(0, 1)] = -nu12 / e1;
            s[(1, 0)] = -nu12 / e1;
            s[(0, 2)] = -nu_out / e1;
            s[(2, 0)] = -nu_out / e1;
            s[(1, 2)] = -nu_out / e2;
            s[(2, 1)] = -nu_out / e2;
            s[(3, 3)] = 1.0 / g12;
            s[(4, 4)] = 1.0 / g12;
            s[(5, 5)] = 1.0 / g12;
            s
        }
    };
    let c = s.try_inverse().expect("compliance is invertible");
    let idx = [0, 1, 5];
    Matrix3::from_fn(|i, j| c[(idx[i], idx[j])])
}

pub fn oracle_stiffness(p: &[[f64; 2]; 3], c: &Matrix3<f64>) -> ([[f64; 6]; 6], f64) {
    // N_i(x, y) = a_i + b_i x + c_i y with V [a; b; c]_i = e_i
    let v = Matrix3::from_fn(|r, col| match col {
        0 => 1.0,
        1 => p[r][0],
        _ => p[r][1],
    });
    let coef = v.try_inverse().expect("non-degenerate triangle");
    let area = 0.5 * v.determinant();
    let mut b = nalgebra::SMatrix::<f64, 3, 6>::zeros();
    for i in 0..3 {
        let (dx, dy) = (coef[(1, i)], coef[(2, i)]);
        b[(0, 2 * i)] = dx;
        b[(1, 2 * i + 1)] = dy;
        b[(2, 2 * i)] = dy;
        b[(2, 2 * i + 1)] = dx;
    }
    let k = b.transpose() * c * b * area;
    let mut out = [[0.0; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            out[i][j] = k[(i, j)];
        }
    }
    (out, area)
}

/// Dense global stiffness from the oracle element matrices.
pub fn dense_stiffness(mesh: &Mesh64, mats: &MaterialTable64) -> DMatrix<f64> {
    let n = mesh.n_dofs();
    let mut k = DMatrix::zeros(n, n);
    for (e, tri) in mesh.triangles.iter().enumerate() {
        let c = oracle_constitutive(mats.get(mesh.element_material[e]));
        let (ke, _) = oracle_stiffness(&mesh.element_coords(e), &c);
        let dofs: Vec<usize> = tri.iter().flat_map(|&n| [2 * n, 2 * n + 1]).collect();
        for i in 0..6 {
            for j in 0..6 {
                k[(dofs[i], dofs[j])] += ke[i][j];
            }
        }
    }
    k
}

/// Lumped mass, a third of each element's mass on each of its nodes.
pub fn lumped_mass(mesh: &Mesh64, mats: &MaterialTable64) -> Vec<f64> {
    let mut m = vec![0.0; mesh.n_dofs()];
    for (e, tri) in mesh.triangles.iter().enumerate() {
        let p = mesh.element_coords(e);
        let area = 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]));
        let share = mats.get(mesh.element_material[e]).rho * area / 3.0;
        for &n in tri {
            m[2 * n] += share;
            m[2 * n + 1] += share;
        }
    }
    m
}
