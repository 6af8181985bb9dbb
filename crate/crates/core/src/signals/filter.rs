use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::{Signal, SignalError};
use crate::scalar::Real;

/// Order used by [`lowpass`].
pub const DEFAULT_ORDER: usize = 4;

/// Digital Butterworth low-pass as normalized second-order sections
/// `[b0, b1, b2, a1, a2]` (first-order sections have `b2 = a2 = 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct ButterworthSos<T> {
    pub sections: Vec<[T; 5]>,
}

impl<T: Real> ButterworthSos<T> {
    /// Bilinear transform of the analog prototype, prewarped so the -3 dB
    /// point lands exactly on `cutoff`.
    pub fn design(order: usize, cutoff: T, fs: T) -> Result<Self, SignalError> {
        let nyquist = fs / T::two();
        if order == 0 || !(cutoff > T::zero() && cutoff < nyquist) {
            return Err(SignalError::InvalidCutoff { cutoff: cutoff.to_f64_lossy(), nyquist: nyquist.to_f64_lossy() });
        }
        let k = T::two() * fs;
        let wc = k * (T::PI() * cutoff / fs).tan();
        let wc2 = wc * wc;
        let mut sections = Vec::new();
        for i in 0..order / 2 {
            // pole pair at angle theta from the negative real axis
            let theta = T::PI() * T::of_usize(2 * i + 1) / T::of_usize(2 * order);
            let q = T::two() * theta.cos() * wc;
            let a0 = k * k + q * k + wc2;
            let a1 = T::two() * wc2 - T::two() * k * k;
            let a2 = k * k - q * k + wc2;
            sections.push([wc2 / a0, T::two() * wc2 / a0, wc2 / a0, a1 / a0, a2 / a0]);
        }
        if order % 2 == 1 {
            let a0 = k + wc;
            sections.push([wc / a0, wc / a0, T::zero(), (wc - k) / a0, T::zero()]);
        }
        Ok(ButterworthSos { sections })
    }

    /// `|H(e^{i 2 pi f / fs})|`.
    pub fn magnitude(&self, f: T, fs: T) -> T {
        let w = T::TAU() * f / fs;
        let z1 = Complex::new(w.cos(), -w.sin());
        let z2 = z1 * z1;
        self.sections.iter().fold(T::one(), |acc, s| {
            let num = Complex::new(s[0], T::zero()) + z1 * s[1] + z2 * s[2];
            let den = Complex::new(T::one(), T::zero()) + z1 * s[3] + z2 * s[4];
            acc * (num.norm() / den.norm())
        })
    }

    /// Steady-state transposed direct-form states for a unit step input.
    fn step_states(&self) -> Vec<[T; 2]> {
        let mut gain = T::one();
        self.sections
            .iter()
            .map(|s| {
                let g = (s[0] + s[1] + s[2]) / (T::one() + s[3] + s[4]);
                let z2 = (s[2] - s[4] * g) * gain;
                let z1 = (g - s[0]) * gain;
                gain = gain * g;
                [z1, z2]
            })
            .collect()
    }

    fn filter_in_place(&self, x: &mut [T]) {
        if x.is_empty() {
            return;
        }
        let x0 = x[0];
        let mut states = self.step_states();
        for st in &mut states {
            st[0] = st[0] * x0;
            st[1] = st[1] * x0;
        }
        for v in x.iter_mut() {
            let mut input = *v;
            for (s, st) in self.sections.iter().zip(states.iter_mut()) {
                let y = s[0] * input + st[0];
                st[0] = s[1] * input - s[3] * y + st[1];
                st[1] = s[2] * input - s[4] * y;
                input = y;
            }
            *v = input;
        }
    }

    /// Zero-phase forward-backward filtering with odd-extension padding.
    pub fn filtfilt(&self, x: &[T]) -> Vec<T> {
        let n = x.len();
        if n < 2 {
            return x.to_vec();
        }
        let pad = (3 * (2 * self.sections.len() + 1)).min(n - 1);
        let two = T::two();
        let mut ext = Vec::with_capacity(n + 2 * pad);
        ext.extend((1..=pad).rev().map(|i| two * x[0] - x[i]));
        ext.extend_from_slice(x);
        ext.extend((1..=pad).map(|i| two * x[n - 1] - x[n - 1 - i]));
        self.filter_in_place(&mut ext);
        ext.reverse();
        self.filter_in_place(&mut ext);
        ext.reverse();
        ext[pad..pad + n].to_vec()
    }
}

/// Zero-phase 4th-order Butterworth low-pass.
pub fn lowpass<T: Real>(s: &Signal<T>, cutoff: T) -> Result<Signal<T>, SignalError> {
    lowpass_order(s, cutoff, DEFAULT_ORDER)
}

pub fn lowpass_order<T: Real>(s: &Signal<T>, cutoff: T, order: usize) -> Result<Signal<T>, SignalError> {
    let sos = ButterworthSos::design(order, cutoff, T::one() / s.dt)?;
    Ok(Signal { samples: sos.filtfilt(&s.samples), dt: s.dt, t0: s.t0 })
}

/// Magnitude of the analytic signal, built by zeroing negative frequencies.
pub fn envelope<T: Real>(s: &Signal<T>) -> Result<Signal<T>, SignalError> {
    let n = s.len();
    if n == 0 {
        return Err(SignalError::Empty);
    }
    let mut buf: Vec<Complex<T>> = s.samples.iter().map(|&v| Complex::new(v, T::zero())).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let two = T::two();
    let half = n / 2;
    for (i, z) in buf.iter_mut().enumerate() {
        let w = if i == 0 || (n % 2 == 0 && i == half) {
            T::one()
        } else if i <= (n - 1) / 2 {
            two
        } else {
            T::zero()
        };
        *z = *z * w;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = T::of_usize(n);
    Ok(Signal { samples: buf.iter().map(|z| z.norm() / scale).collect(), dt: s.dt, t0: s.t0 })
}
