//! Mesh, system and source built from a configuration, and the stepping
//! loop shared by every experiment.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use nltr_core::contact::{AuditSummary, ContactSolver};
use nltr_core::fem::snapshot::{write_index, write_snapshot, IndexEntry};
use nltr_core::fem::{apply_traction, GlobalSystem, SimState, Stepper, StepperOptions, TractionSource};
use nltr_core::mesh::{build_mesh, generate_layer_stack, Layer};
use nltr_core::signals::make_chirp;
use nltr_core::{Mesh64, Signal64};

use crate::config::ExperimentConfig;
use crate::error::HarnessError;

/// Everything derived from a configuration before time stepping.
#[derive(Debug)]
pub struct Model {
    pub cfg: ExperimentConfig,
    pub hash: String,
    pub stack: Vec<Layer>,
    pub mesh: Mesh64,
    pub sys: GlobalSystem<f64>,
    pub critical_dt: f64,
    pub source_nodes: Vec<usize>,
    pub source_direction: [f64; 2],
    pub receiver_nodes: Vec<usize>,
}

/// Displacement history at one receiver node.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub name: String,
    pub node: usize,
    pub ux: Signal64,
    pub uy: Signal64,
}

impl Trace {
    pub fn scaled(&self, a: f64) -> Trace {
        Trace { name: self.name.clone(), node: self.node, ux: self.ux.scaled(a), uy: self.uy.scaled(a) }
    }
}

/// Where and when to write field snapshots.
#[derive(Clone, Debug)]
pub struct SnapshotPlan {
    pub dir: PathBuf,
    pub steps: BTreeSet<usize>,
}

impl SnapshotPlan {
    /// Steps `k * stride` for `k >= 1` plus the steps nearest to `times`.
    pub fn from_config(cfg: &ExperimentConfig, dir: &Path) -> Self {
        let n = cfg.n_steps();
        let mut steps = BTreeSet::new();
        let stride = cfg.output.snapshot_stride;
        if stride > 0 {
            steps.extend((1..=n / stride).map(|k| k * stride));
        }
        for &t in &cfg.output.snapshot_times {
            steps.insert(((t / cfg.time.dt).round() as usize).min(n));
        }
        SnapshotPlan { dir: dir.to_path_buf(), steps }
    }
}

#[derive(Default)]
pub struct RunOptions {
    pub snapshots: Option<SnapshotPlan>,
    pub audit: Option<Box<dyn Write>>,
    /// Record the discrete energy after every step.
    pub energy: bool,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub traces: Vec<Trace>,
    pub contact: Option<AuditSummary<f64>>,
    pub snapshots: Vec<IndexEntry>,
    pub energy: Vec<f64>,
    pub elapsed_s: f64,
}

impl Model {
    pub fn build(cfg: &ExperimentConfig) -> Result<Self, HarnessError> {
        cfg.validate()?;
        let stack = generate_layer_stack(&cfg.laminate)?;
        let crack = if cfg.crack.enabled { cfg.crack } else { nltr_core::mesh::CrackSpec::disabled() };
        let mesh: Mesh64 = build_mesh(&stack, cfg.laminate.domain_width, &crack, &cfg.mesh)?;
        let sys = GlobalSystem::assemble(&mesh, &cfg.materials, &cfg.absorbing)?;
        let critical_dt = sys.critical_time_step();

        let tx = &cfg.transmitter;
        let probe = Signal64::new(vec![0.0], cfg.time.dt, 0.0)?;
        let src = TractionSource::on_boundary(&mesh, tx.side, tx.center, tx.span, tx.angle_deg, probe, tx.max_pressure)?;
        let receiver_nodes = cfg.receivers.iter().map(|r| mesh.nearest_node(r.x, r.y)).collect();

        let model = Model {
            cfg: cfg.clone(),
            hash: cfg.hash(),
            stack,
            mesh,
            sys,
            critical_dt,
            source_nodes: src.nodes,
            source_direction: src.direction,
            receiver_nodes,
        };
        // fail on CFL before any experiment starts
        model.stepper()?;
        Ok(model)
    }

    pub fn n_steps(&self) -> usize {
        self.cfg.n_steps()
    }

    pub fn dt(&self) -> f64 {
        self.cfg.time.dt
    }

    pub fn stepper_options(&self) -> StepperOptions {
        StepperOptions {
            cfl_safety: self.cfg.time.cfl_safety,
            allow_cfl_override: self.cfg.time.allow_cfl_override,
            blowup_threshold: self.cfg.time.blowup_threshold,
        }
    }

    pub fn stepper(&self) -> Result<Stepper<'_, f64>, HarnessError> {
        Ok(Stepper::with_critical_dt(&self.sys, self.dt(), self.stepper_options(), self.critical_dt)?)
    }

    /// The configured chirp times `sign`, sampled on the simulation grid.
    pub fn chirp(&self, sign: f64) -> Result<Signal64, HarnessError> {
        let spec = self.cfg.chirp.with_amplitude(sign * self.cfg.chirp.amplitude);
        Ok(make_chirp(&spec, self.dt())?)
    }

    pub fn source(&self, drive: &Signal64) -> Result<TractionSource<f64>, HarnessError> {
        Ok(TractionSource::new(
            self.source_nodes.clone(),
            self.source_direction,
            drive.clone(),
            self.cfg.transmitter.span,
            self.cfg.transmitter.max_pressure,
        )?)
    }

    /// Run the window from rest under the pressure history `drive` (Pa on
    /// the simulation grid, zero after its last sample).
    ///
    /// Every receiver is sampled at steps `0 ..= n_steps`.
    pub fn simulate(&self, drive: &Signal64, mut opts: RunOptions) -> Result<RunOutput, HarnessError> {
        let start = Instant::now();
        let dt = self.dt();
        if drive.dt != dt || drive.t0 != 0.0 {
            return Err(HarnessError::Config("drive must be sampled on the simulation grid from t = 0".into()));
        }
        let src = self.source(drive)?;
        let mut stepper = self.stepper()?;
        let mut contact = if self.mesh.crack_pairs.is_empty() {
            None
        } else {
            let mut solver = ContactSolver::new(&self.mesh, self.cfg.contact.clone())?;
            if let Some(sink) = opts.audit.take() {
                solver.set_audit_sink(sink)?;
            }
            Some(solver)
        };

        let n_steps = self.n_steps();
        let n_dofs = self.sys.n_dofs();
        let mut state = SimState::quiescent(n_dofs, dt);
        let mut f = vec![0.0; n_dofs];
        let mut ux: Vec<Vec<f64>> = vec![Vec::with_capacity(n_steps + 1); self.receiver_nodes.len()];
        let mut uy = ux.clone();
        let mut energy = Vec::new();
        let mut index = Vec::new();
        if let Some(plan) = &opts.snapshots {
            std::fs::create_dir_all(&plan.dir)?;
        }

        for n in 0..=n_steps {
            for (r, &node) in self.receiver_nodes.iter().enumerate() {
                ux[r].push(state.u_curr[2 * node]);
                uy[r].push(state.u_curr[2 * node + 1]);
            }
            if opts.energy {
                energy.push(stepper.discrete_energy(&state));
            }
            if let Some(plan) = &opts.snapshots {
                if plan.steps.contains(&n) {
                    let file = format!("snap_{n:07}.bin");
                    let time = n as f64 * dt;
                    let mut w = BufWriter::new(File::create(plan.dir.join(&file))?);
                    write_snapshot(&mut w, time, &state.u_curr)?;
                    w.flush()?;
                    index.push(IndexEntry { index: n, time, file });
                }
            }
            if n == n_steps {
                break;
            }
            for &node in &src.nodes {
                f[2 * node] = 0.0;
                f[2 * node + 1] = 0.0;
            }
            apply_traction(&src, state.time(), &mut f)?;
            stepper.advance(&mut state, &f, contact.as_mut())?;
        }

        if let Some(plan) = &opts.snapshots {
            let mut w = BufWriter::new(File::create(plan.dir.join("index.csv"))?);
            write_index(&mut w, &index)?;
            w.flush()?;
        }
        let summary = match contact.as_mut() {
            Some(solver) => {
                solver.flush_audit()?;
                Some(solver.summary.clone())
            }
            None => None,
        };
        let traces = self
            .cfg
            .receivers
            .iter()
            .zip(&self.receiver_nodes)
            .zip(ux.into_iter().zip(uy))
            .map(|((r, &node), (x, y))| {
                Ok(Trace { name: r.name.clone(), node, ux: Signal64::new(x, dt, 0.0)?, uy: Signal64::new(y, dt, 0.0)? })
            })
            .collect::<Result<Vec<_>, HarnessError>>()?;
        Ok(RunOutput { traces, contact: summary, snapshots: index, energy, elapsed_s: start.elapsed().as_secs_f64() })
    }
}
