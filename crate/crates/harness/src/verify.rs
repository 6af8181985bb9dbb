//! Invariant audit run by the `verify` command.

use std::fmt;

use nltr_core::fem::{GlobalSystem, SimState, Stepper};

use crate::error::HarnessError;
use crate::experiments::first_pass;
use crate::model::Model;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(Check { name, passed, detail });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{:<22} {}  {}", c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail)?;
        }
        Ok(())
    }
}

/// Smooth deterministic test field.
fn probe_field(n: usize, phase: f64) -> Vec<f64> {
    (0..n).map(|d| 1e-9 * (0.37 * d as f64 + phase).sin()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Mesh, operator, stability, energy and contact checks on `model`.
///
/// `energy_steps` undamped steps are taken from a smooth initial field; the
/// contact audit transmits the chirp once when the crack is enabled.
pub fn verify(model: &Model, energy_steps: usize) -> Result<VerifyReport, HarnessError> {
    let mut report = VerifyReport::default();
    let mesh = &model.mesh;

    let min_area = (0..mesh.triangles.len()).map(|e| mesh.signed_area(e)).fold(f64::INFINITY, f64::min);
    let area = mesh.total_area();
    let expected = mesh.width * mesh.height;
    let area_err = (area - expected).abs() / expected;
    report.push(
        "mesh_area",
        min_area > 0.0 && area_err < 1e-12,
        format!("min element area {min_area:e} m^2, total area error {area_err:e}"),
    );
    let coincident = mesh.crack_pairs.iter().all(|p| mesh.nodes[p.slave] == mesh.nodes[p.master]);
    let bad_edges = mesh.edge_use_counts().values().filter(|&&c| c > 2).count();
    report.push(
        "mesh_topology",
        coincident && bad_edges == 0,
        format!("{} crack pairs, {bad_edges} over-shared edges", mesh.crack_pairs.len()),
    );

    let sys = &model.sys;
    let n = sys.n_dofs();
    let (u, v) = (probe_field(n, 0.3), probe_field(n, 1.9));
    let (ku, kv) = (sys.apply_stiffness(&u), sys.apply_stiffness(&v));
    let (a, b) = (dot(&v, &ku), dot(&u, &kv));
    let asym = (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    report.push("stiffness_symmetry", asym < 1e-10, format!("|<v,Ku> - <u,Kv>| / |<v,Ku>| = {asym:e}"));
    let shift: Vec<f64> = (0..n).map(|d| if d % 2 == 0 { 1e-9 } else { -2e-9 }).collect();
    let k_shift = sys.apply_stiffness(&shift);
    let rigid = k_shift.iter().fold(0.0f64, |m, x| m.max(x.abs())) / ku.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    report.push("rigid_translation", rigid < 1e-9, format!("max |K t| / max |K u| = {rigid:e}"));

    let dt = model.dt();
    let limit = model.cfg.time.cfl_safety * model.critical_dt;
    report.push(
        "cfl",
        dt <= limit || model.cfg.time.allow_cfl_override,
        format!("dt = {dt:e} s, critical {:e} s, safety {}", model.critical_dt, model.cfg.time.cfl_safety),
    );

    if energy_steps > 0 {
        let undamped = GlobalSystem { damping: vec![0.0; n], ..sys.clone() };
        let mut stepper = Stepper::with_critical_dt(&undamped, dt, model.stepper_options(), model.critical_dt)?;
        let mut state = SimState::quiescent(n, dt);
        state.u_curr = probe_field(n, 0.3);
        state.u_prev = state.u_curr.clone();
        for &d in &undamped.fixed_dofs {
            state.u_curr[d] = 0.0;
            state.u_prev[d] = 0.0;
        }
        let f = vec![0.0; n];
        let e0 = stepper.discrete_energy(&state);
        let mut drift = 0.0f64;
        for _ in 0..energy_steps {
            stepper.advance(&mut state, &f, None)?;
            drift = drift.max((stepper.discrete_energy(&state) - e0).abs() / e0);
        }
        report.push("energy_conservation", drift < 1e-3, format!("{energy_steps} undamped steps, max drift {drift:e}"));
    }

    if !mesh.crack_pairs.is_empty() {
        let pass = first_pass(model, 1.0)?;
        let s = pass.contact.unwrap_or_default();
        report.push(
            "contact_kuhn_tucker",
            s.all_ok() && s.max_force_sum_rel < 1e-12,
            format!(
                "{} steps, {} with contact, max iterations {}, penetration ratio {:e}, min lambda_N {:e}, \
                 complementarity ratio {:e}, seam force sum {:e}",
                s.steps,
                s.contact_steps,
                s.max_iterations,
                s.max_penetration_ratio,
                s.min_lambda_n,
                s.max_complementarity_ratio,
                s.max_force_sum_rel
            ),
        );
    }
    Ok(report)
}
