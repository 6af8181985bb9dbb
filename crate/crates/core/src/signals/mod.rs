//! Uniformly sampled signals and the TR-NEWS processing chain: chirp
//! synthesis, correlation, time reversal, pulse inversion, delayed
//! superposition with its linear prediction, low-pass filtering and
//! envelopes.

mod chirp;
mod correlate;
mod delay;
mod filter;

pub use chirp::{make_chirp, ChirpSpec};
pub use correlate::{cross_correlate, pulse_inversion_difference, pulse_inversion_residual, time_reverse};
pub use delay::{delayed_superposition, predict_delayed_focus, DelayMode, DelaySchedule};
pub use filter::{envelope, lowpass, lowpass_order, ButterworthSos};

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("sample interval must be positive and finite")]
    InvalidDt,
    #[error("sample {index} is not finite")]
    NonFinite { index: usize },
    #[error("signals are not on the same grid")]
    GridMismatch,
    #[error("empty signal")]
    Empty,
    #[error("invalid chirp: {0}")]
    InvalidChirp(String),
    #[error("dt = {dt} s does not resolve {f1} Hz")]
    SamplingBound { dt: f64, f1: f64 },
    #[error("cutoff {cutoff} Hz must lie in (0, {nyquist}) Hz")]
    InvalidCutoff { cutoff: f64, nyquist: f64 },
    #[error("invalid delay schedule: {0}")]
    InvalidSchedule(String),
    #[error("lag {lag} s lies beyond the correlation record, which ends at {end} s")]
    DelayExceedsBuffer { lag: f64, end: f64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Real samples at `t0 + i dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal<T> {
    pub samples: Vec<T>,
    pub dt: T,
    pub t0: T,
}

impl<T: Real> Signal<T> {
    pub fn new(samples: Vec<T>, dt: T, t0: T) -> Result<Self, SignalError> {
        if !(dt > T::zero() && dt.is_finite() && t0.is_finite()) {
            return Err(SignalError::InvalidDt);
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(SignalError::NonFinite { index });
        }
        Ok(Signal { samples, dt, t0 })
    }

    pub fn zeros(n: usize, dt: T, t0: T) -> Result<Self, SignalError> {
        Self::new(vec![T::zero(); n], dt, t0)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, i: usize) -> T {
        self.t0 + T::of_usize(i) * self.dt
    }

    pub fn t_last(&self) -> T {
        self.time(self.len().saturating_sub(1))
    }

    /// Linear interpolation between samples, zero outside the record.
    pub fn value_at(&self, t: T) -> T {
        if self.samples.is_empty() {
            return T::zero();
        }
        let x = (t - self.t0) / self.dt;
        let last = T::of_usize(self.len() - 1);
        if x < T::zero() || x > last || !x.is_finite() {
            return T::zero();
        }
        // grid times reproduce their sample exactly despite rounding in x
        let r = x.round();
        if (x - r).abs() <= T::epsilon() * T::lit(8.0) * r.max(T::one()) {
            return r.to_usize().and_then(|i| self.samples.get(i).copied()).unwrap_or(T::zero());
        }
        let i = x.floor();
        let frac = x - i;
        let i = i.to_usize().unwrap_or(0);
        if i + 1 >= self.len() || frac == T::zero() {
            return self.samples[i];
        }
        self.samples[i] + frac * (self.samples[i + 1] - self.samples[i])
    }

    /// Sample whose time is nearest to `t`, zero outside the record.
    pub fn nearest(&self, t: T) -> T {
        match self.index_of(t) {
            Some(i) => self.samples[i],
            None => T::zero(),
        }
    }

    pub fn index_of(&self, t: T) -> Option<usize> {
        let x = ((t - self.t0) / self.dt).round();
        if x < T::zero() || !x.is_finite() {
            return None;
        }
        x.to_usize().filter(|&i| i < self.len())
    }

    pub fn max_abs(&self) -> T {
        self.samples.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Index of the first sample attaining the largest magnitude.
    pub fn argmax_abs(&self) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for (i, v) in self.samples.iter().enumerate() {
            if best.is_none_or(|(_, b)| v.abs() > b) {
                best = Some((i, v.abs()));
            }
        }
        best.map(|(i, _)| i)
    }

    pub fn norm_l2(&self) -> T {
        self.samples.iter().map(|v| *v * *v).sum::<T>().sqrt()
    }

    pub fn scaled(&self, a: T) -> Self {
        Signal { samples: self.samples.iter().map(|v| *v * a).collect(), dt: self.dt, t0: self.t0 }
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.dt == other.dt && self.t0 == other.t0 && self.len() == other.len()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self, SignalError> {
        if !self.same_grid(other) {
            return Err(SignalError::GridMismatch);
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| f(*a, *b)).collect();
        Ok(Signal { samples, dt: self.dt, t0: self.t0 })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SignalError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SignalError> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Samples with `t_start <= t <= t_end`, keeping the grid.
    pub fn crop(&self, t_start: T, t_end: T) -> Self {
        let half = self.dt * T::lit(0.5);
        let idx: Vec<usize> = (0..self.len())
            .filter(|&i| {
                let t = self.time(i);
                t >= t_start - half && t <= t_end + half
            })
            .collect();
        match (idx.first(), idx.last()) {
            (Some(&a), Some(&b)) => {
                Signal { samples: self.samples[a..=b].to_vec(), dt: self.dt, t0: self.time(a) }
            }
            _ => Signal { samples: Vec::new(), dt: self.dt, t0: t_start },
        }
    }

    /// Resample onto `n` points starting at `t0` with this signal's `dt`,
    /// taking the nearest sample and zero outside the record.
    pub fn on_grid(&self, t0: T, n: usize) -> Self {
        let samples = (0..n).map(|j| self.nearest(t0 + T::of_usize(j) * self.dt)).collect();
        Signal { samples, dt: self.dt, t0 }
    }

    /// CSV with header `t_s,value`; every float is written in shortest
    /// round-trip form.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t_s,value")?;
        for (i, v) in self.samples.iter().enumerate() {
            writeln!(w, "{:e},{:e}", self.time(i), v)?;
        }
        Ok(())
    }
}

/// `||a - b|| / ||b||`.
pub fn relative_l2<T: Real>(a: &[T], b: &[T]) -> T {
    let num: T = a.iter().zip(b).map(|(x, y)| (*x - *y) * (*x - *y)).sum();
    let den: T = b.iter().map(|y| *y * *y).sum();
    if den == T::zero() {
        if num == T::zero() {
            T::zero()
        } else {
            T::infinity()
        }
    } else {
        (num / den).sqrt()
    }
}

/// Mirror residual `||s(T + tau) - s(T - tau)|| / ||s(T - tau)||` over
/// `0 < tau <= half_width`, sampled on the signal grid.
pub fn symmetry_residual<T: Real>(s: &Signal<T>, t_focus: T, half_width: T) -> Result<T, SignalError> {
    let centre = s.index_of(t_focus).ok_or(SignalError::Empty)?;
    let k_max = (half_width / s.dt).round().to_usize().unwrap_or(0);
    if k_max == 0 || centre < k_max || centre + k_max >= s.len() {
        return Err(SignalError::InvalidSchedule(
            "symmetry window does not fit inside the record".into(),
        ));
    }
    let left: Vec<T> = (1..=k_max).map(|k| s.samples[centre - k]).collect();
    let right: Vec<T> = (1..=k_max).map(|k| s.samples[centre + k]).collect();
    Ok(relative_l2(&right, &left))
}

impl Signal<f64> {
    /// Read the `t_s,value` CSV written by [`Signal::write_csv`].
    ///
    /// Samples are read back bit for bit. The grid is recovered as the `dt`
    /// that regenerates every stored time stamp, so re-exporting reproduces
    /// the file.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self, SignalError> {
        let mut times = Vec::new();
        let mut samples = Vec::new();
        for (n, line) in r.lines().enumerate() {
            let line = line?;
            if n == 0 {
                if line.trim() != "t_s,value" {
                    return Err(SignalError::Parse { line: 1, msg: "expected header `t_s,value`".into() });
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let parse = |s: Option<&str>| -> Result<f64, SignalError> {
                s.and_then(|v| v.trim().parse::<f64>().ok())
                    .ok_or_else(|| SignalError::Parse { line: n + 1, msg: "expected two numbers".into() })
            };
            let mut it = line.split(',');
            times.push(parse(it.next())?);
            samples.push(parse(it.next())?);
        }
        Self::from_times(&times, samples)
    }

    /// Signal from explicit time stamps on a uniform grid.
    ///
    /// The grid spacing is the `dt` that regenerates every stamp as
    /// `t0 + i dt`, searched in a few ulps around the obvious estimates.
    pub fn from_times(times: &[f64], samples: Vec<f64>) -> Result<Self, SignalError> {
        if times.len() != samples.len() {
            return Err(SignalError::GridMismatch);
        }
        match times.len() {
            0 => Err(SignalError::Empty),
            1 => Signal::new(samples, 1.0, times[0]),
            n => {
                let t0 = times[0];
                let regenerates = |dt: f64| times.iter().enumerate().all(|(i, &t)| t0 + i as f64 * dt == t);
                let guesses = [(times[n - 1] - t0) / (n - 1) as f64, times[1] - t0];
                let dt = guesses
                    .iter()
                    .flat_map(|g| (-8i64..=8).map(move |k| f64::from_bits((g.to_bits() as i64 + k) as u64)))
                    .find(|&dt| regenerates(dt))
                    .unwrap_or(guesses[0]);
                Signal::new(samples, dt, t0)
            }
        }
    }
}
