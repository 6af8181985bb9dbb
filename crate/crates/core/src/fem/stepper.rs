use super::{FemError, GlobalSystem};
use crate::contact::{ContactSolver, ContactStepReport};
use crate::scalar::Real;

/// Two consecutive displacement fields of the explicit scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct SimState<T> {
    pub u_prev: Vec<T>,
    pub u_curr: Vec<T>,
    pub step_index: usize,
    pub dt: T,
}

impl<T: Real> SimState<T> {
    /// `u_{-1} = u_0 = 0`.
    pub fn quiescent(n_dofs: usize, dt: T) -> Self {
        SimState { u_prev: vec![T::zero(); n_dofs], u_curr: vec![T::zero(); n_dofs], step_index: 0, dt }
    }

    pub fn time(&self) -> T {
        T::of_usize(self.step_index) * self.dt
    }

    /// Centered velocity `(u_n - u_{n-1}) / dt`.
    pub fn velocity(&self) -> Vec<T> {
        self.u_curr.iter().zip(&self.u_prev).map(|(a, b)| (*a - *b) / self.dt).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepperOptions {
    /// Largest allowed fraction of the critical time step.
    pub cfl_safety: f64,
    /// Run even when `dt` exceeds the safe step.
    pub allow_cfl_override: bool,
    /// Largest |u| in m before the run is declared unstable.
    pub blowup_threshold: f64,
}

impl Default for StepperOptions {
    fn default() -> Self {
        StepperOptions { cfl_safety: 0.8, allow_cfl_override: false, blowup_threshold: 1e-3 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepReport<T> {
    pub step_index: usize,
    pub max_abs_u: T,
    pub contact: Option<ContactStepReport<T>>,
}

/// Central-difference integrator for a fixed system and time step.
///
/// `u_{n+1} = [F_n - K u_n + 2M/dt^2 u_n - (M/dt^2 - C/(2 dt)) u_{n-1}] / (M/dt^2 + C/(2 dt))`,
/// with `M` and `C` diagonal and `K u` evaluated element by element.
#[derive(Debug)]
pub struct Stepper<'a, T> {
    pub sys: &'a GlobalSystem<T>,
    pub dt: T,
    pub options: StepperOptions,
    pub critical_dt: f64,
    inv_lhs: Vec<T>,
    two_m: Vec<T>,
    prev_coef: Vec<T>,
    fixed: Vec<bool>,
    ku: Vec<T>,
    next: Vec<T>,
}

impl<'a, T: Real> Stepper<'a, T> {
    pub fn new(sys: &'a GlobalSystem<T>, dt: T, options: StepperOptions) -> Result<Self, FemError> {
        let critical_dt = sys.critical_time_step();
        Self::with_critical_dt(sys, dt, options, critical_dt)
    }

    /// As [`Stepper::new`] with the critical step already known.
    pub fn with_critical_dt(
        sys: &'a GlobalSystem<T>,
        dt: T,
        options: StepperOptions,
        critical_dt: f64,
    ) -> Result<Self, FemError> {
        if !(dt > T::zero() && dt.is_finite()) {
            return Err(FemError::CflViolation { dt: dt.to_f64_lossy(), critical: critical_dt, safety: options.cfl_safety });
        }
        let dtf = dt.to_f64_lossy();
        if dtf > options.cfl_safety * critical_dt && !options.allow_cfl_override {
            return Err(FemError::CflViolation { dt: dtf, critical: critical_dt, safety: options.cfl_safety });
        }
        let n = sys.n_dofs();
        let mut fixed = vec![false; n];
        for &d in &sys.fixed_dofs {
            if d >= n {
                return Err(FemError::DimensionMismatch { expected: n, found: d + 1 });
            }
            fixed[d] = true;
        }
        let dt2 = dt * dt;
        let two_dt = T::two() * dt;
        let mut inv_lhs = vec![T::zero(); n];
        let mut two_m = vec![T::zero(); n];
        let mut prev_coef = vec![T::zero(); n];
        for d in 0..n {
            if fixed[d] {
                continue;
            }
            let m = sys.mass[d] / dt2;
            let c = sys.damping[d] / two_dt;
            inv_lhs[d] = T::one() / (m + c);
            two_m[d] = T::two() * m;
            prev_coef[d] = m - c;
        }
        Ok(Stepper { sys, dt, options, critical_dt, inv_lhs, two_m, prev_coef, fixed, ku: vec![T::zero(); n], next: vec![T::zero(); n] })
    }

    /// Per-DOF `1 / (M/dt^2 + C/(2 dt))`, zero on fixed DOFs.
    pub fn inverse_lhs(&self) -> &[T] {
        &self.inv_lhs
    }

    /// Advance `state` by one step under the nodal load `f_ext`.
    pub fn advance(
        &mut self,
        state: &mut SimState<T>,
        f_ext: &[T],
        contact: Option<&mut ContactSolver<T>>,
    ) -> Result<StepReport<T>, FemError> {
        let n = self.sys.n_dofs();
        for len in [f_ext.len(), state.u_curr.len(), state.u_prev.len()] {
            if len != n {
                return Err(FemError::DimensionMismatch { expected: n, found: len });
            }
        }
        self.sys.internal_force(&state.u_curr, &mut self.ku);
        for d in 0..n {
            self.next[d] = if self.fixed[d] {
                T::zero()
            } else {
                (f_ext[d] - self.ku[d] + self.two_m[d] * state.u_curr[d] - self.prev_coef[d] * state.u_prev[d])
                    * self.inv_lhs[d]
            };
        }
        let contact = match contact {
            Some(solver) if !solver.is_empty() => Some(solver.resolve(state.step_index + 1, &mut self.next, &self.inv_lhs)?),
            _ => None,
        };

        let mut max_abs_u = T::zero();
        let mut finite = true;
        for v in &self.next {
            finite &= v.is_finite();
            max_abs_u = max_abs_u.max(v.abs());
        }
        if !finite || max_abs_u.to_f64_lossy() > self.options.blowup_threshold {
            return Err(FemError::Instability {
                step: state.step_index + 1,
                magnitude: if finite { max_abs_u.to_f64_lossy() } else { f64::INFINITY },
            });
        }

        std::mem::swap(&mut state.u_prev, &mut state.u_curr);
        std::mem::swap(&mut state.u_curr, &mut self.next);
        state.step_index += 1;
        Ok(StepReport { step_index: state.step_index, max_abs_u, contact })
    }

    /// `0.5 v^T M v + 0.5 u_{n-1}^T K u_n` with `v = (u_n - u_{n-1}) / dt`.
    ///
    /// Exactly conserved by the undamped, unforced scheme; with damping it
    /// can only decrease.
    pub fn discrete_energy(&self, state: &SimState<T>) -> T {
        let ku = self.sys.apply_stiffness(&state.u_curr);
        let half = T::lit(0.5);
        let mut kinetic = T::zero();
        let mut strain = T::zero();
        for d in 0..state.u_curr.len() {
            let v = (state.u_curr[d] - state.u_prev[d]) / self.dt;
            kinetic += self.sys.mass[d] * v * v;
            strain += state.u_prev[d] * ku[d];
        }
        half * (kinetic + strain)
    }

    /// Kinetic energy from the centered velocity.
    pub fn kinetic_energy(&self, state: &SimState<T>) -> T {
        let half = T::lit(0.5);
        state
            .u_curr
            .iter()
            .zip(&state.u_prev)
            .zip(&self.sys.mass)
            .map(|((a, b), m)| {
                let v = (*a - *b) / self.dt;
                half * *m * v * v
            })
            .sum()
    }
}

/// One step of the scheme on a fresh stepper, checking the CFL bound.
pub fn step<T: Real>(state: &SimState<T>, sys: &GlobalSystem<T>, f_ext: &[T]) -> Result<SimState<T>, FemError> {
    let mut stepper = Stepper::new(sys, state.dt, StepperOptions::default())?;
    let mut next = state.clone();
    stepper.advance(&mut next, f_ext, None)?;
    Ok(next)
}
