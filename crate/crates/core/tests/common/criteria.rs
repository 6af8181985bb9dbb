//! Measurements behind the element, patch, energy and boundary checks,
//! shared by the core tests and the acceptance run.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use nltr_core::fem::{
    element_lumped_mass, element_stiffness, plane_strain_constitutive, AbsorbingParams, GlobalSystem, Material,
    MaterialTable, SimState, Stepper, StepperOptions,
};
use nltr_core::mesh::{
    build_mesh, generate_layer_stack, BoundaryTag, CrackSpec, LaminateSpec, Layer, LayerKind, MeshOptions,
    ThicknessDist,
};
use nltr_core::{Material64, Mesh64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{oracle_constitutive, oracle_stiffness};

/// Random counter-clockwise triangle with no angle too small, 10 um to 1 mm.
pub fn random_triangle(rng: &mut ChaCha8Rng) -> [[f64; 2]; 3] {
    loop {
        let scale = 10f64.powf(rng.random_range(-5.0..-3.0));
        let p: [[f64; 2]; 3] =
            std::array::from_fn(|_| [rng.random_range(0.0..1.0) * scale, rng.random_range(0.0..1.0) * scale]);
        let twice = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
        let longest = (0..3)
            .map(|i| {
                let (a, b) = (p[i], p[(i + 1) % 3]);
                (a[0] - b[0]).hypot(a[1] - b[1])
            })
            .fold(0.0f64, f64::max);
        if twice.abs() > 0.1 * longest * longest {
            return if twice > 0.0 { p } else { [p[0], p[2], p[1]] };
        }
    }
}

#[derive(Clone, Debug)]
pub struct ElementSuite {
    pub worst_constitutive: f64,
    /// Largest entry error relative to the oracle's largest entry, per element.
    pub worst_stiffness: f64,
    pub worst_area: f64,
    pub mass_exact: bool,
    pub elapsed_s: f64,
}

/// 20 random triangles times the three laminate materials.
pub fn element_suite(seed: u64) -> ElementSuite {
    let start = Instant::now();
    let materials = [Material64::epoxy(), Material64::weave_0_90(), Material64::weave_45_45()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ElementSuite { worst_constitutive: 0.0, worst_stiffness: 0.0, worst_area: 0.0, mass_exact: true, elapsed_s: 0.0 };
    for _ in 0..20 {
        let p = random_triangle(&mut rng);
        for m in &materials {
            let c_code = plane_strain_constitutive(m).unwrap();
            let c_oracle = oracle_constitutive(m);
            for i in 0..3 {
                for j in 0..3 {
                    let d = (c_code.c[i][j] - c_oracle[(i, j)]).abs() / c_oracle[(0, 0)];
                    out.worst_constitutive = out.worst_constitutive.max(d);
                }
            }
            let op = element_stiffness(&p, &c_code).unwrap();
            let (k, area) = oracle_stiffness(&p, &c_oracle);
            let scale = k.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
            for i in 0..6 {
                for j in 0..6 {
                    out.worst_stiffness = out.worst_stiffness.max((op.k_e[i][j] - k[i][j]).abs() / scale);
                }
            }
            out.worst_area = out.worst_area.max((op.area - area).abs() / area);
            let mass = element_lumped_mass(op.area, m.rho).unwrap();
            out.mass_exact &= mass.iter().all(|&v| v == m.rho * op.area / 3.0);
        }
    }
    out.elapsed_s = start.elapsed().as_secs_f64();
    out
}

pub const PATCH_WIDTH: f64 = 1.0e-3;

pub fn patch_stack() -> Vec<Layer> {
    vec![
        Layer { kind: LayerKind::Epoxy, thickness: 0.3e-3 },
        Layer { kind: LayerKind::Weave0_90, thickness: 0.4e-3 },
        Layer { kind: LayerKind::Weave45_45, thickness: 0.3e-3 },
    ]
}

/// 10 x 10 cells over three layers with the interior columns jittered.
pub fn patch_mesh(stack: &[Layer]) -> Mesh64 {
    let mut mesh: Mesh64 =
        build_mesh(stack, PATCH_WIDTH, &CrackSpec::disabled(), &MeshOptions::with_edge_length(0.1e-3)).unwrap();
    assert_eq!(mesh.triangles.len(), 2 * 10 * 10);
    // rows stay on the layer interfaces
    let dx = PATCH_WIDTH / 10.0;
    for (k, p) in mesh.nodes.iter_mut().enumerate() {
        let on_side = p[0] == 0.0 || p[0] == PATCH_WIDTH;
        if !on_side {
            p[0] += 0.25 * dx * (((k * 7919) % 13) as f64 / 6.0 - 1.0);
        }
    }
    for e in 0..mesh.triangles.len() {
        assert!(mesh.signed_area(e) > 0.0);
    }
    mesh
}

/// Per-layer strain `(eps_yy, gamma_xy)` giving the same `sigma_yy` and
/// `sigma_xy` in every layer for a common `eps_xx`.
pub fn layered_strains(mats: &MaterialTable<f64>, kind: LayerKind, exx: f64, syy: f64, sxy: f64) -> (f64, f64) {
    let c = plane_strain_constitutive(mats.get(kind)).unwrap().c;
    let a = nalgebra::Matrix2::new(c[1][1], c[1][2], c[2][1], c[2][2]);
    let rhs = nalgebra::Vector2::new(syy - c[1][0] * exx, sxy - c[2][0] * exx);
    let s = a.lu().solve(&rhs).unwrap();
    (s[0], s[1])
}

/// Exact displacement of the layered state at every node.
pub fn layered_field(mesh: &Mesh64, stack: &[Layer], mats: &MaterialTable<f64>, exx: f64, syy: f64, sxy: f64) -> Vec<f64> {
    let mut u = vec![0.0; mesh.n_dofs()];
    for (n, p) in mesh.nodes.iter().enumerate() {
        let (mut f, mut g, mut bottom) = (0.0, 0.0, 0.0);
        for l in stack {
            let (eyy, gxy) = layered_strains(mats, l.kind, exx, syy, sxy);
            let top = bottom + l.thickness;
            let span = (p[1].min(top) - bottom).max(0.0);
            f += gxy * span;
            g += eyy * span;
            bottom = top;
        }
        u[2 * n] = exx * p[0] + f;
        u[2 * n + 1] = g;
    }
    u
}

fn assembled_dense(sys: &GlobalSystem<f64>) -> DMatrix<f64> {
    let n = sys.n_dofs();
    let mut k = DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = sys.apply_stiffness(&e);
        for i in 0..n {
            k[(i, j)] = col[i];
        }
        e[j] = 0.0;
    }
    k
}

/// Fix the boundary nodes to `exact`, solve for the interior and return the
/// largest nodal error relative to the largest exact displacement.
pub fn solve_patch(mesh: &Mesh64, mats: &MaterialTable<f64>, exact: &[f64]) -> f64 {
    let sys = GlobalSystem::assemble(mesh, mats, &AbsorbingParams::default()).unwrap();
    let k = assembled_dense(&sys);
    let on_boundary: Vec<bool> = mesh
        .nodes
        .iter()
        .map(|p| p[0] == 0.0 || p[0] == PATCH_WIDTH || p[1] == 0.0 || p[1] == mesh.height)
        .collect();
    let interior: Vec<usize> = (0..mesh.n_dofs()).filter(|d| !on_boundary[d / 2]).collect();
    let boundary: Vec<usize> = (0..mesh.n_dofs()).filter(|d| on_boundary[d / 2]).collect();
    let kii = DMatrix::from_fn(interior.len(), interior.len(), |i, j| k[(interior[i], interior[j])]);
    let rhs = DVector::from_fn(interior.len(), |i, _| -boundary.iter().map(|&b| k[(interior[i], b)] * exact[b]).sum::<f64>());
    let ui = kii.lu().solve(&rhs).expect("interior stiffness is regular");
    let scale = exact.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    interior.iter().zip(ui.iter()).map(|(&d, v)| (v - exact[d]).abs() / scale).fold(0.0, f64::max)
}

/// Error of the layered uniform-strain patch over the three materials.
pub fn layered_patch_error() -> f64 {
    let stack = patch_stack();
    let mesh = patch_mesh(&stack);
    let mats = MaterialTable::default();
    let exact = layered_field(&mesh, &stack, &mats, 1e-4, 2e5, -1e5);
    solve_patch(&mesh, &mats, &exact)
}

pub fn laminate_mesh() -> Mesh64 {
    let spec = LaminateSpec {
        pair_count: 2,
        epoxy: ThicknessDist { mean: 60e-6, stddev: 10e-6, min: 40e-6 },
        weave_0_90: ThicknessDist { mean: 150e-6, stddev: 20e-6, min: 100e-6 },
        weave_45_45: ThicknessDist { mean: 150e-6, stddev: 20e-6, min: 100e-6 },
        rng_seed: 3,
        domain_width: 0.6e-3,
        domain_height: 0.45e-3,
    };
    let stack = generate_layer_stack(&spec).unwrap();
    build_mesh(&stack, spec.domain_width, &CrackSpec::disabled(), &MeshOptions::with_edge_length(50e-6)).unwrap()
}

/// Displacement hump centred in the domain, zero on fixed DOFs.
pub fn hump(mesh: &Mesh64, sys: &GlobalSystem<f64>) -> Vec<f64> {
    let (cx, cy, r) = (0.5 * mesh.width, 0.5 * mesh.height, 0.2 * mesh.width);
    let mut u = vec![0.0; mesh.n_dofs()];
    for (n, p) in mesh.nodes.iter().enumerate() {
        let d2 = ((p[0] - cx).powi(2) + (p[1] - cy).powi(2)) / (r * r);
        let a = 1e-9 * (-d2).exp();
        u[2 * n] = 0.3 * a;
        u[2 * n + 1] = a;
    }
    for &d in &sys.fixed_dofs {
        u[d] = 0.0;
    }
    u
}

/// Largest relative energy drift over `steps` undamped, unforced steps,
/// and the final kinetic share of the initial energy.
pub fn undamped_drift(steps: usize) -> (f64, f64) {
    let mesh = laminate_mesh();
    let mut sys = GlobalSystem::assemble(&mesh, &MaterialTable::default(), &AbsorbingParams::default()).unwrap();
    sys.damping.iter_mut().for_each(|c| *c = 0.0);
    let dt = 0.8 * sys.critical_time_step();
    let mut stepper = Stepper::new(&sys, dt, StepperOptions::default()).unwrap();
    let mut s = SimState::quiescent(sys.n_dofs(), dt);
    s.u_curr = hump(&mesh, &sys);
    s.u_prev = s.u_curr.clone();
    let f = vec![0.0; sys.n_dofs()];
    let e0 = stepper.discrete_energy(&s);
    let mut drift = 0.0f64;
    for _ in 0..steps {
        stepper.advance(&mut s, &f, None).unwrap();
        drift = drift.max((stepper.discrete_energy(&s) - e0).abs() / e0);
    }
    (drift, stepper.kinetic_energy(&s) / e0)
}

#[derive(Clone, Debug)]
pub struct DampedDecay {
    /// Largest `E_{n+1} / E_n - 1` after the source stops.
    pub worst_increase: f64,
    pub e_stop: f64,
    pub e_end: f64,
}

/// Top-surface load for `source_steps`, then free decay into the dashpots.
pub fn damped_decay(source_steps: usize, total: usize) -> DampedDecay {
    let mesh = laminate_mesh();
    let sys = GlobalSystem::assemble(&mesh, &MaterialTable::default(), &AbsorbingParams::default()).unwrap();
    let dt = 0.8 * sys.critical_time_step();
    let mut stepper = Stepper::new(&sys, dt, StepperOptions::default()).unwrap();
    let mut s = SimState::quiescent(sys.n_dofs(), dt);
    let top = mesh.boundary_nodes(BoundaryTag::FreeTop);
    let mut f = vec![0.0; sys.n_dofs()];
    let mut prev = f64::INFINITY;
    let mut out = DampedDecay { worst_increase: f64::NEG_INFINITY, e_stop: 0.0, e_end: 0.0 };
    for k in 0..total {
        f.iter_mut().for_each(|v| *v = 0.0);
        if k < source_steps {
            let w = (std::f64::consts::PI * k as f64 / source_steps as f64).sin().powi(2);
            for &n in &top {
                f[2 * n + 1] = -1e-2 * w;
            }
        }
        stepper.advance(&mut s, &f, None).unwrap();
        let e = stepper.discrete_energy(&s);
        // the step that used the last non-zero load completes at k = source_steps - 1
        if k >= source_steps {
            out.worst_increase = out.worst_increase.max(e / prev - 1.0);
        } else {
            out.e_stop = e;
        }
        prev = e;
    }
    out.e_end = prev;
    out
}

pub const RHO: f64 = 1600.0;
pub const VP: f64 = 2972.0;
pub const VS: f64 = 1956.0;
const COLUMN_HEIGHT: f64 = 40e-3;
const COLUMN_H: f64 = 0.1e-3;
const F0: f64 = 0.5e6;
const CYCLES: f64 = 3.0;

/// Isotropic material whose P and S speeds equal the dashpot speeds.
pub fn matched_material() -> Material<f64> {
    let mu = RHO * VS * VS;
    let lambda = RHO * VP * VP - 2.0 * mu;
    let e = mu * (3.0 * lambda + 2.0 * mu) / (lambda + mu);
    let nu = lambda / (2.0 * (lambda + mu));
    Material::isotropic(e, nu, RHO)
}

fn pulse(t: f64) -> f64 {
    let len = CYCLES / F0;
    if !(0.0..=len).contains(&t) {
        return 0.0;
    }
    let w = (std::f64::consts::PI * t / len).sin().powi(2);
    w * (2.0 * std::f64::consts::PI * F0 * t).sin()
}

/// Normal-incidence P pulse down a one-cell-wide column with every x DOF
/// held fixed and dashpot factors `(a, b)` on the bottom.
///
/// Returns the peak mid-height velocity of the incident and the returning
/// pulse, and the peak applied traction.
pub fn incident_and_reflected(a: f64, b: f64) -> (f64, f64, f64) {
    let stack = [Layer { kind: LayerKind::Epoxy, thickness: COLUMN_HEIGHT }];
    let mesh: Mesh64 =
        build_mesh(&stack, COLUMN_H, &CrackSpec::disabled(), &MeshOptions::with_edge_length(COLUMN_H)).unwrap();
    let mats = MaterialTable::uniform(matched_material());
    assert!((mats.epoxy.p_wave_speed().unwrap() - VP).abs() < 1e-9 * VP);
    let abs = AbsorbingParams { vp: VP, vs: VS, a, b, sides: vec![BoundaryTag::AbsorbingBottom] };
    let mut sys = GlobalSystem::assemble(&mesh, &mats, &abs).unwrap();
    sys.fixed_dofs = (0..sys.n_dofs()).step_by(2).collect();

    let dt = 0.8 * sys.critical_time_step();
    let mut stepper = Stepper::new(&sys, dt, StepperOptions::default()).unwrap();
    let mut s = SimState::quiescent(sys.n_dofs(), dt);
    let top = mesh.boundary_nodes(BoundaryTag::FreeTop);
    assert_eq!(top.len(), 2);
    let probe = mesh.nearest_node(0.0, 0.5 * COLUMN_HEIGHT);

    // the incident pulse has passed the mid-height probe by H / (2 Vp) plus
    // its length; the bottom reflection arrives at 1.5 H / Vp and the top
    // re-reflection at 2.5 H / Vp
    let len = CYCLES / F0;
    let t_split = 0.5 * (0.5 * COLUMN_HEIGHT / VP + len + 1.5 * COLUMN_HEIGHT / VP);
    let t_end = 2.5 * COLUMN_HEIGHT / VP;
    assert!(0.5 * COLUMN_HEIGHT / VP + len < 1.5 * COLUMN_HEIGHT / VP);
    let mut f = vec![0.0; sys.n_dofs()];
    let (mut inc, mut refl, mut peak) = (0.0f64, 0.0f64, 0.0f64);
    while s.time() < t_end {
        let p = 1e3 * pulse(s.time());
        peak = peak.max(p.abs());
        for &n in &top {
            f[2 * n + 1] = -p * COLUMN_H / 2.0;
        }
        stepper.advance(&mut s, &f, None).unwrap();
        let v = (s.u_curr[2 * probe + 1] - s.u_prev[2 * probe + 1]) / dt;
        if s.time() < t_split {
            inc = inc.max(v.abs());
        } else {
            refl = refl.max(v.abs());
        }
    }
    (inc, refl, peak)
}
