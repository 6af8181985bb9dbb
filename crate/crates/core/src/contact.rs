//! Node-to-node frictional contact on the crack seam.
//!
//! Each pair couples a slave node (below the crack) with a coincident master
//! node (above). Inside a time step the normal force is found by the
//! augmented update `lambda_N <- max(lambda_N + b g_N, 0)` with `g_N > 0`
//! meaning penetration, and friction by a penalty stick predictor projected
//! onto the Coulomb cone. Forces enter the explicit update as extra nodal
//! loads, so re-solving the step only touches the seam DOFs.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::fem::FemError;
use crate::mesh::{CrackPair, Mesh};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactStatus {
    #[default]
    Open,
    Slip,
    Stick,
}

impl ContactStatus {
    pub fn tag(self) -> &'static str {
        match self {
            ContactStatus::Open => "open",
            ContactStatus::Slip => "slip",
            ContactStatus::Stick => "stick",
        }
    }
}

/// What to do when a step does not converge within `max_iters`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonConvergence {
    #[default]
    Abort,
    /// Keep the last iterate and count the step.
    Warn,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"), default)]
pub struct ContactParams<T> {
    pub mu: T,
    /// Normal penalty as a multiple of the pair's effective explicit
    /// stiffness `1 / (1/L_s + 1/L_m)`, where `L = m/dt^2 + c/(2 dt)` is the
    /// diagonal of the explicit update. Used when `penalty_b` is unset.
    pub penalty_scale: T,
    /// Absolute normal penalty in N/m for every pair.
    pub penalty_b: Option<T>,
    /// Tangential penalty in N/m; defaults to the normal penalty.
    pub tangential_penalty: Option<T>,
    /// Tolerance on the L2 norm of the penetration vector, in m.
    pub eps_pen: T,
    pub max_iters: usize,
    pub on_nonconvergence: NonConvergence,
}

impl<T: Real> Default for ContactParams<T> {
    fn default() -> Self {
        ContactParams {
            mu: T::lit(0.6),
            penalty_scale: T::one(),
            penalty_b: None,
            tangential_penalty: None,
            eps_pen: T::lit(1e-15),
            max_iters: 20,
            on_nonconvergence: NonConvergence::Abort,
        }
    }
}

impl<T: Real> ContactParams<T> {
    pub fn validate(&self) -> Result<(), FemError> {
        let bad = |m: &str| Err(FemError::InvalidContact(m.into()));
        if !(self.mu >= T::zero()) {
            return bad("mu must be non-negative");
        }
        if !(self.penalty_scale > T::zero()) || self.penalty_b.is_some_and(|b| !(b > T::zero())) {
            return bad("penalty must be positive");
        }
        if self.tangential_penalty.is_some_and(|k| !(k > T::zero())) {
            return bad("tangential penalty must be positive");
        }
        if !(self.eps_pen > T::zero()) {
            return bad("eps_pen must be positive");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PairState<T> {
    /// Compression-positive normal force.
    pub lambda_n: T,
    pub lambda_t: T,
    pub status: ContactStatus,
    /// Tangential gap at stick inception.
    pub stick_ref: T,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ContactState<T> {
    pub pairs: Vec<PairState<T>>,
}

impl<T: Real> ContactState<T> {
    pub fn new(n: usize) -> Self {
        ContactState { pairs: vec![PairState::default(); n] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapResult<T> {
    /// `y_slave - y_master`, positive when penetrating.
    pub g_n: T,
    /// `x_slave - x_master`.
    pub g_t: T,
    /// `max(g_N, 0)`.
    pub g_p: T,
}

/// Gaps from current positions `X + u`.
///
/// The reference offset and the displacement difference are formed
/// separately so coincident pairs keep full relative precision.
pub fn compute_gaps<T: Real>(nodes: &[[T; 2]], pairs: &[CrackPair], u: &[T]) -> Vec<GapResult<T>> {
    pairs
        .iter()
        .map(|p| {
            let (s, m) = (p.slave, p.master);
            let g_n = (nodes[s][1] - nodes[m][1]) + (u[2 * s + 1] - u[2 * m + 1]);
            let g_t = (nodes[s][0] - nodes[m][0]) + (u[2 * s] - u[2 * m]);
            GapResult { g_n, g_t, g_p: g_n.max(T::zero()) }
        })
        .collect()
}

/// One update of the contact forces from the current gaps.
///
/// Normal: `lambda_N <- max(lambda_N + b g_N, 0)`; a pair whose force drops
/// to zero opens. Tangential: a pair that was open or slipping carries only
/// the normal force and starts sticking at the current tangential gap; a
/// sticking pair takes the trial `lambda_T + k_t (g_T - g_ref)`, capped at
/// `mu lambda_N` with the pair then slipping.
pub fn contact_iteration<T: Real>(
    state: &mut ContactState<T>,
    gaps: &[GapResult<T>],
    penalty: &[(T, T)],
    mu: T,
) {
    for ((p, g), &(b, k_t)) in state.pairs.iter_mut().zip(gaps).zip(penalty) {
        p.lambda_n = (p.lambda_n + b * g.g_n).max(T::zero());
        if p.lambda_n == T::zero() {
            *p = PairState { stick_ref: p.stick_ref, ..PairState::default() };
            continue;
        }
        match p.status {
            ContactStatus::Open | ContactStatus::Slip => {
                p.lambda_t = T::zero();
                p.status = ContactStatus::Stick;
                p.stick_ref = g.g_t;
            }
            ContactStatus::Stick => {
                let trial = p.lambda_t + k_t * (g.g_t - p.stick_ref);
                let cap = mu * p.lambda_n;
                if trial.abs() <= cap {
                    p.lambda_t = trial;
                } else {
                    p.lambda_t = cap.copysign(trial);
                    p.status = ContactStatus::Slip;
                }
            }
        }
    }
}

/// `(dof, force)` contributions of the pair forces: the slave is pushed
/// down and back by `lambda`, the master up and forward.
pub fn seam_forces<T: Real>(pairs: &[CrackPair], state: &ContactState<T>) -> Vec<(usize, T)> {
    let mut out = Vec::with_capacity(4 * pairs.len());
    for (p, s) in pairs.iter().zip(&state.pairs) {
        out.push((2 * p.slave, -s.lambda_t));
        out.push((2 * p.slave + 1, -s.lambda_n));
        out.push((2 * p.master, s.lambda_t));
        out.push((2 * p.master + 1, s.lambda_n));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KtTolerances<T> {
    /// Largest admissible penetration, m.
    pub gap: T,
    /// Largest admissible tensile force, N.
    pub force: T,
    /// Largest admissible `|g_N lambda_N|`, N m.
    pub complementarity: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KtReport<T> {
    pub max_penetration: T,
    pub min_lambda_n: T,
    pub max_complementarity: T,
    /// Indices of pairs violating any condition.
    pub violations: Vec<usize>,
}

impl<T: Real> KtReport<T> {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check `g_N <= tol_g`, `lambda_N >= -tol_f` and `|g_N lambda_N| <= tol_c`
/// pair by pair.
pub fn verify_kuhn_tucker<T: Real>(gaps: &[GapResult<T>], state: &ContactState<T>, tol: &KtTolerances<T>) -> KtReport<T> {
    let mut report = KtReport {
        max_penetration: T::neg_infinity(),
        min_lambda_n: T::infinity(),
        max_complementarity: T::zero(),
        violations: Vec::new(),
    };
    for (i, (g, p)) in gaps.iter().zip(&state.pairs).enumerate() {
        let comp = (g.g_n * p.lambda_n).abs();
        report.max_penetration = report.max_penetration.max(g.g_n);
        report.min_lambda_n = report.min_lambda_n.min(p.lambda_n);
        report.max_complementarity = report.max_complementarity.max(comp);
        if g.g_n > tol.gap || p.lambda_n < -tol.force || comp > tol.complementarity {
            report.violations.push(i);
        }
    }
    report
}

/// Outcome of the contact solve for one step.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ContactStepReport<T> {
    pub iterations: usize,
    pub converged: bool,
    pub penetration_sq: T,
    pub closed_pairs: usize,
    /// Largest `|sum of seam forces|` over x and y.
    pub force_sum: T,
    pub max_lambda_n: T,
}

/// Running audit over every step solved so far.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AuditSummary<T> {
    pub steps: usize,
    pub contact_steps: usize,
    pub nonconverged_steps: usize,
    pub max_iterations: usize,
    /// Largest ratio `<g_P|g_P> / eps_pen^2` on converged steps.
    pub max_penetration_ratio: T,
    pub min_lambda_n: T,
    /// Largest ratio of `|g_N lambda_N|` to its tolerance.
    pub max_complementarity_ratio: T,
    /// Largest seam force sum relative to the largest normal force.
    pub max_force_sum_rel: T,
    pub kt_violation_steps: usize,
}

impl<T: Real> AuditSummary<T> {
    pub fn all_ok(&self) -> bool {
        self.nonconverged_steps == 0
            && self.kt_violation_steps == 0
            && self.max_penetration_ratio < T::one()
            && self.min_lambda_n >= T::zero()
    }
}

/// Contact solver owned by the stepping loop.
pub struct ContactSolver<T> {
    pub pairs: Vec<CrackPair>,
    reference: Vec<[T; 2]>,
    pub params: ContactParams<T>,
    pub state: ContactState<T>,
    pub summary: AuditSummary<T>,
    audit: Option<Box<dyn Write>>,
    base: Vec<[T; 4]>,
    penalty: Vec<(T, T)>,
}

impl<T: Real> std::fmt::Debug for ContactSolver<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ContactSolver")
            .field("pairs", &self.pairs.len())
            .field("params", &self.params)
            .field("summary", &self.summary)
            .finish()
    }
}

impl<T: Real> ContactSolver<T> {
    pub fn new(mesh: &Mesh<T>, params: ContactParams<T>) -> Result<Self, FemError> {
        Self::from_pairs(&mesh.nodes, mesh.crack_pairs.clone(), params)
    }

    pub fn from_pairs(nodes: &[[T; 2]], pairs: Vec<CrackPair>, params: ContactParams<T>) -> Result<Self, FemError> {
        params.validate()?;
        if let Some(p) = pairs.iter().find(|p| p.slave.max(p.master) >= nodes.len() || p.slave == p.master) {
            return Err(FemError::InvalidContact(format!("bad pair {} / {}", p.slave, p.master)));
        }
        let mut reference = Vec::with_capacity(pairs.len());
        for p in &pairs {
            reference.push(nodes[p.slave]);
            reference.push(nodes[p.master]);
        }
        let n = pairs.len();
        let summary = AuditSummary { min_lambda_n: T::zero(), ..AuditSummary::default() };
        Ok(ContactSolver {
            pairs,
            reference,
            params,
            state: ContactState::new(n),
            summary,
            audit: None,
            base: vec![[T::zero(); 4]; n],
            penalty: Vec::new(),
        })
    }

    /// Stream `step,pair_id,g_N,g_T,lambda_N,lambda_T,status` rows for every
    /// closed pair of every step.
    pub fn set_audit_sink(&mut self, mut sink: Box<dyn Write>) -> std::io::Result<()> {
        writeln!(sink, "step,pair_id,g_N,g_T,lambda_N,lambda_T,status")?;
        self.audit = Some(sink);
        Ok(())
    }

    pub fn flush_audit(&mut self) -> std::io::Result<()> {
        match self.audit.as_mut() {
            Some(w) => w.flush(),
            None => Ok(()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Normal and tangential penalty per pair for the given explicit-update
    /// inverse diagonal.
    pub fn penalties(&self, inv_lhs: &[T]) -> Vec<(T, T)> {
        self.pairs
            .iter()
            .map(|p| {
                let ys = inv_lhs[2 * p.slave + 1] + inv_lhs[2 * p.master + 1];
                let xs = inv_lhs[2 * p.slave] + inv_lhs[2 * p.master];
                let b = self.params.penalty_b.unwrap_or_else(|| self.params.penalty_scale / ys);
                let k_t = self.params.tangential_penalty.unwrap_or(if self.params.penalty_b.is_some() {
                    b
                } else {
                    self.params.penalty_scale / xs
                });
                (b, k_t)
            })
            .collect()
    }

    fn gaps(&self, u: &[T]) -> Vec<GapResult<T>> {
        let mut out = Vec::with_capacity(self.pairs.len());
        for (i, p) in self.pairs.iter().enumerate() {
            let (xs, xm) = (self.reference[2 * i], self.reference[2 * i + 1]);
            let g_n = (xs[1] - xm[1]) + (u[2 * p.slave + 1] - u[2 * p.master + 1]);
            let g_t = (xs[0] - xm[0]) + (u[2 * p.slave] - u[2 * p.master]);
            out.push(GapResult { g_n, g_t, g_p: g_n.max(T::zero()) });
        }
        out
    }

    /// Set the seam DOFs of `u` to the contact-free update plus the response
    /// to the current pair forces.
    fn apply(&self, u: &mut [T], inv_lhs: &[T]) {
        for ((p, s), b) in self.pairs.iter().zip(&self.state.pairs).zip(&self.base) {
            let (sx, sy, mx, my) = (2 * p.slave, 2 * p.slave + 1, 2 * p.master, 2 * p.master + 1);
            u[sx] = b[0] - s.lambda_t * inv_lhs[sx];
            u[sy] = b[1] - s.lambda_n * inv_lhs[sy];
            u[mx] = b[2] + s.lambda_t * inv_lhs[mx];
            u[my] = b[3] + s.lambda_n * inv_lhs[my];
        }
    }

    /// Resolve contact for the step whose contact-free update is `u_next`.
    ///
    /// `inv_lhs` is the per-DOF inverse of `M/dt^2 + C/(2 dt)`; a seam force
    /// `f` on DOF `d` moves `u_next[d]` by `f inv_lhs[d]`.
    pub fn resolve(&mut self, step: usize, u_next: &mut [T], inv_lhs: &[T]) -> Result<ContactStepReport<T>, FemError> {
        if self.pairs.is_empty() {
            return Ok(ContactStepReport { converged: true, ..ContactStepReport::default() });
        }
        if self.penalty.is_empty() {
            self.penalty = self.penalties(inv_lhs);
        }
        for (p, b) in self.pairs.iter().zip(self.base.iter_mut()) {
            *b = [u_next[2 * p.slave], u_next[2 * p.slave + 1], u_next[2 * p.master], u_next[2 * p.master + 1]];
        }
        for p in &mut self.state.pairs {
            p.lambda_n = T::zero();
            p.lambda_t = T::zero();
        }

        let eps_sq = self.params.eps_pen * self.params.eps_pen;
        let mut iterations = 0;
        let mut converged = false;
        let mut gaps;
        let mut pen_sq;
        loop {
            iterations += 1;
            self.apply(u_next, inv_lhs);
            gaps = self.gaps(u_next);
            pen_sq = gaps.iter().map(|g| g.g_p * g.g_p).sum::<T>();
            if pen_sq < eps_sq {
                converged = true;
                break;
            }
            if iterations >= self.params.max_iters {
                break;
            }
            contact_iteration(&mut self.state, &gaps, &self.penalty, self.params.mu);
        }
        for p in &mut self.state.pairs {
            if p.lambda_n == T::zero() {
                p.status = ContactStatus::Open;
                p.lambda_t = T::zero();
            }
        }

        let report = self.record(step, &gaps, iterations, converged, pen_sq)?;
        if !converged && self.params.on_nonconvergence == NonConvergence::Abort {
            return Err(FemError::ContactNotConverged { step, iterations, penetration_sq: pen_sq.to_f64_lossy() });
        }
        Ok(report)
    }

    fn record(
        &mut self,
        step: usize,
        gaps: &[GapResult<T>],
        iterations: usize,
        converged: bool,
        pen_sq: T,
    ) -> Result<ContactStepReport<T>, FemError> {
        let max_lambda_n = self.state.pairs.iter().fold(T::zero(), |m, p| m.max(p.lambda_n));
        let closed_pairs = self.state.pairs.iter().filter(|p| p.status != ContactStatus::Open).count();
        let (mut fx, mut fy) = (T::zero(), T::zero());
        for (dof, f) in seam_forces(&self.pairs, &self.state) {
            if dof % 2 == 0 {
                fx += f;
            } else {
                fy += f;
            }
        }
        let force_sum = fx.abs().max(fy.abs());

        let eps = self.params.eps_pen;
        let tol = KtTolerances { gap: eps, force: T::zero(), complementarity: eps * max_lambda_n };
        let kt = verify_kuhn_tucker(gaps, &self.state, &tol);

        let s = &mut self.summary;
        s.steps += 1;
        if closed_pairs > 0 {
            s.contact_steps += 1;
        }
        s.max_iterations = s.max_iterations.max(iterations);
        if converged {
            s.max_penetration_ratio = s.max_penetration_ratio.max(pen_sq / (eps * eps));
        } else {
            s.nonconverged_steps += 1;
        }
        s.min_lambda_n = s.min_lambda_n.min(kt.min_lambda_n);
        if max_lambda_n > T::zero() {
            s.max_complementarity_ratio = s.max_complementarity_ratio.max(kt.max_complementarity / tol.complementarity);
            s.max_force_sum_rel = s.max_force_sum_rel.max(force_sum / max_lambda_n);
        }
        if converged && !kt.ok() {
            s.kt_violation_steps += 1;
        }

        if let Some(w) = self.audit.as_mut() {
            for (i, (g, p)) in gaps.iter().zip(&self.state.pairs).enumerate() {
                if p.status != ContactStatus::Open {
                    writeln!(w, "{step},{i},{:e},{:e},{:e},{:e},{}", g.g_n, g.g_t, p.lambda_n, p.lambda_t, p.status.tag())
                        .map_err(|e| FemError::InvalidContact(format!("audit write failed: {e}")))?;
                }
            }
        }
        Ok(ContactStepReport { iterations, converged, penetration_sq: pen_sq, closed_pairs, force_sum, max_lambda_n })
    }
}
