use serde::{Deserialize, Serialize};

use super::{Signal, SignalError};
use crate::scalar::Real;

/// Linear up-sweep `A sin(2 pi (f0 t + (f1 - f0) t^2 / (2 D)))` on `[0, D]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChirpSpec<T> {
    pub amplitude: T,
    pub f0: T,
    pub f1: T,
    pub duration: T,
}

impl<T: Real> ChirpSpec<T> {
    pub fn validate(&self) -> Result<(), SignalError> {
        if !(self.duration > T::zero()) {
            return Err(SignalError::InvalidChirp("duration must be positive".into()));
        }
        if !(self.f0 >= T::zero() && self.f1 > self.f0) {
            return Err(SignalError::InvalidChirp("need 0 <= f0 < f1".into()));
        }
        if !self.amplitude.is_finite() {
            return Err(SignalError::InvalidChirp("amplitude must be finite".into()));
        }
        Ok(())
    }

    pub fn phase(&self, t: T) -> T {
        T::TAU() * (self.f0 * t + (self.f1 - self.f0) * t * t / (T::two() * self.duration))
    }

    /// Instantaneous frequency in Hz.
    pub fn frequency(&self, t: T) -> T {
        self.f0 + (self.f1 - self.f0) * t / self.duration
    }

    pub fn value(&self, t: T) -> T {
        if t < T::zero() || t > self.duration {
            T::zero()
        } else {
            self.amplitude * self.phase(t).sin()
        }
    }

    pub fn with_amplitude(&self, amplitude: T) -> Self {
        ChirpSpec { amplitude, ..*self }
    }
}

/// Sample the chirp at `k dt` for every `k dt <= duration`.
pub fn make_chirp<T: Real>(spec: &ChirpSpec<T>, dt: T) -> Result<Signal<T>, SignalError> {
    spec.validate()?;
    if !(dt > T::zero()) {
        return Err(SignalError::InvalidDt);
    }
    if !(dt * spec.f1 * T::two() < T::one()) {
        return Err(SignalError::SamplingBound { dt: dt.to_f64_lossy(), f1: spec.f1.to_f64_lossy() });
    }
    // guard against `duration / dt` landing a hair below an integer
    let n = (spec.duration / dt * (T::one() + T::epsilon() * T::lit(4.0))).floor().to_usize().unwrap_or(0) + 1;
    let samples = (0..n).map(|k| spec.value(T::of_usize(k) * dt)).collect();
    Signal::new(samples, dt, T::zero())
}
