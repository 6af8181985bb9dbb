use serde::{Deserialize, Serialize};

use super::{Signal, SignalError};
use crate::scalar::Real;

/// How a delay that is not a whole number of samples is applied.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelayMode {
    /// Round every delay to the nearest sample.
    #[default]
    Nearest,
    /// Interpolate linearly between samples.
    Linear,
}

/// Taps `(a_i, tau_i)` for time-delayed superposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelaySchedule<T> {
    pub taps: Vec<(T, T)>,
    #[serde(default)]
    pub mode: DelayMode,
}

impl<T: Real> DelaySchedule<T> {
    pub fn new(taps: Vec<(T, T)>) -> Result<Self, SignalError> {
        let s = DelaySchedule { taps, mode: DelayMode::Nearest };
        s.validate()?;
        Ok(s)
    }

    /// `n` taps of weight `a` at `0, dtau, 2 dtau, ...`.
    pub fn uniform(n: usize, a: T, dtau: T) -> Result<Self, SignalError> {
        Self::new((0..n).map(|i| (a, T::of_usize(i) * dtau)).collect())
    }

    pub fn identity() -> Self {
        DelaySchedule { taps: vec![(T::one(), T::zero())], mode: DelayMode::Nearest }
    }

    pub fn validate(&self) -> Result<(), SignalError> {
        if self.taps.is_empty() {
            return Err(SignalError::InvalidSchedule("no taps".into()));
        }
        if self.taps.iter().any(|(a, tau)| !a.is_finite() || !tau.is_finite()) {
            return Err(SignalError::InvalidSchedule("taps must be finite".into()));
        }
        if self.taps.windows(2).any(|w| w[1].1 < w[0].1) {
            return Err(SignalError::InvalidSchedule("delays must be non-decreasing".into()));
        }
        Ok(())
    }

    /// Common spacing when the delays are equispaced.
    pub fn uniform_spacing(&self) -> Option<T> {
        let d = self.taps.get(1)?.1 - self.taps[0].1;
        let tol = d.abs() * T::lit(1e-9);
        self.taps.windows(2).all(|w| (w[1].1 - w[0].1 - d).abs() <= tol).then_some(d)
    }

    fn sample(&self, s: &Signal<T>, t: T) -> T {
        match self.mode {
            DelayMode::Nearest => s.nearest(t),
            DelayMode::Linear => s.value_at(t),
        }
    }
}

/// Drive signal `x_s(t_j) = sum_i a_i G(T - t_j + tau_i)` on `t_j = j dt`,
/// `j = 0 .. n_samples`.
///
/// With the single tap `(1, 0)` this is the plain time reversal of `G`
/// about `T`, restricted to `t >= 0`.
pub fn delayed_superposition<T: Real>(
    gamma: &Signal<T>,
    sched: &DelaySchedule<T>,
    t_focus: T,
    n_samples: usize,
) -> Result<Signal<T>, SignalError> {
    sched.validate()?;
    let end = gamma.t_last();
    let half = gamma.dt * T::lit(0.5);
    for &(_, tau) in &sched.taps {
        if t_focus + tau > end + half {
            return Err(SignalError::DelayExceedsBuffer {
                lag: (t_focus + tau).to_f64_lossy(),
                end: end.to_f64_lossy(),
            });
        }
    }
    let samples = (0..n_samples)
        .map(|j| {
            let t = T::of_usize(j) * gamma.dt;
            sched.taps.iter().fold(T::zero(), |acc, &(a, tau)| acc + a * sched.sample(gamma, t_focus - t + tau))
        })
        .collect();
    Signal::new(samples, gamma.dt, T::zero())
}

/// Linear prediction `sum_i a_i y_TR(t - tau_i)` on the grid of `y_tr`.
pub fn predict_delayed_focus<T: Real>(y_tr: &Signal<T>, sched: &DelaySchedule<T>) -> Result<Signal<T>, SignalError> {
    sched.validate()?;
    let samples = (0..y_tr.len())
        .map(|j| {
            let t = y_tr.time(j);
            sched.taps.iter().fold(T::zero(), |acc, &(a, tau)| acc + a * sched.sample(y_tr, t - tau))
        })
        .collect();
    Signal::new(samples, y_tr.dt, y_tr.t0)
}
