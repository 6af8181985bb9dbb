use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::{Signal, SignalError};
use crate::scalar::Real;

/// Full linear cross-correlation `G(tau) = dt sum_k y(t_k + tau) c(t_k)`.
///
/// The result holds every lag where the records overlap, so it has
/// `len(y) + len(c) - 1` samples starting at
/// `t0 = y.t0 - c.t0 - (len(c) - 1) dt`.
pub fn cross_correlate<T: Real>(y: &Signal<T>, c: &Signal<T>) -> Result<Signal<T>, SignalError> {
    if y.dt != c.dt {
        return Err(SignalError::GridMismatch);
    }
    if y.is_empty() || c.is_empty() {
        return Err(SignalError::Empty);
    }
    let (ny, nc) = (y.len(), c.len());
    let n_out = ny + nc - 1;
    let n_fft = n_out.next_power_of_two();
    let zero = Complex::new(T::zero(), T::zero());

    let mut a: Vec<Complex<T>> = y.samples.iter().map(|&v| Complex::new(v, T::zero())).collect();
    a.resize(n_fft, zero);
    let mut b: Vec<Complex<T>> = c.samples.iter().rev().map(|&v| Complex::new(v, T::zero())).collect();
    b.resize(n_fft, zero);

    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n_fft);
    let inv = planner.plan_fft_inverse(n_fft);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (x, z) in a.iter_mut().zip(&b) {
        *x = *x * *z;
    }
    inv.process(&mut a);

    let scale = y.dt / T::of_usize(n_fft);
    let samples = a[..n_out].iter().map(|z| z.re * scale).collect();
    let t0 = y.t0 - c.t0 - T::of_usize(nc - 1) * y.dt;
    Signal::new(samples, y.dt, t0)
}

/// `out(t) = s(T - t)` on the mirrored grid.
pub fn time_reverse<T: Real>(s: &Signal<T>, t_focus: T) -> Signal<T> {
    let samples = s.samples.iter().rev().copied().collect();
    Signal { samples, dt: s.dt, t0: t_focus - s.t_last() }
}

/// `y_plus + y_minus`: odd (linear) content cancels, what remains is the
/// even-order nonlinear part.
pub fn pulse_inversion_residual<T: Real>(y_plus: &Signal<T>, y_minus: &Signal<T>) -> Result<Signal<T>, SignalError> {
    y_plus.try_add(y_minus)
}

/// `y_minus - y_plus`, the plain difference of the two excitations.
pub fn pulse_inversion_difference<T: Real>(y_plus: &Signal<T>, y_minus: &Signal<T>) -> Result<Signal<T>, SignalError> {
    y_minus.try_sub(y_plus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::{make_chirp, ChirpSpec};

    fn chirp() -> Signal<f64> {
        make_chirp(&ChirpSpec { amplitude: 1.0, f0: 0.0, f1: 2.0e6, duration: 10e-6 }, 2e-9).unwrap()
    }

    fn direct(y: &Signal<f64>, c: &Signal<f64>) -> Vec<f64> {
        let (ny, nc) = (y.len() as i64, c.len() as i64);
        (-(nc - 1)..ny)
            .map(|lag| {
                (0..nc).filter(|k| k + lag >= 0 && k + lag < ny).map(|k| y.samples[(k + lag) as usize] * c.samples[k as usize]).sum::<f64>()
                    * y.dt
            })
            .collect()
    }

    #[test]
    fn matches_direct_sum() {
        let y = Signal::new(vec![1.0, -2.0, 0.5, 3.0, 0.0, 1.5], 0.1, 0.2).unwrap();
        let c = Signal::new(vec![0.3, 1.0, -0.7], 0.1, 0.0).unwrap();
        let g = cross_correlate(&y, &c).unwrap();
        let d = direct(&y, &c);
        assert_eq!(g.len(), d.len());
        for (a, b) in g.samples.iter().zip(&d) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((g.t0 - (0.2 - 0.2)).abs() < 1e-15);
    }

    #[test]
    fn autocorrelation_peaks_at_zero_lag() {
        let c = chirp();
        let g = cross_correlate(&c, &c).unwrap();
        let i = g.argmax_abs().unwrap();
        assert!(g.time(i).abs() < 1e-15);
    }

    #[test]
    fn delayed_copy_peaks_at_delay() {
        let c = chirp();
        let d = 137;
        let mut samples = vec![0.0; d];
        samples.extend(&c.samples);
        let y = Signal::new(samples, c.dt, 0.0).unwrap();
        let g = cross_correlate(&y, &c).unwrap();
        let t = g.time(g.argmax_abs().unwrap());
        assert!((t - d as f64 * c.dt).abs() <= c.dt);
    }

    #[test]
    fn bilinear_in_response() {
        let c = chirp();
        let g1 = cross_correlate(&c, &c).unwrap();
        let g3 = cross_correlate(&c.scaled(-3.0), &c).unwrap();
        let scale = g1.max_abs();
        for (a, b) in g3.samples.iter().zip(&g1.samples) {
            assert!((a + 3.0 * b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn negation_is_bitwise() {
        let c = chirp();
        let y = Signal::new(c.samples.iter().map(|v| v * 0.3 + 1e-3).collect(), c.dt, 0.0).unwrap();
        let a = cross_correlate(&y, &c).unwrap();
        let b = cross_correlate(&y.scaled(-1.0), &c).unwrap();
        assert!(a.samples.iter().zip(&b.samples).all(|(x, y)| *x == -*y));
    }

    #[test]
    fn reversal_is_an_involution() {
        let s = Signal::new(vec![1.0, 2.0, 5.0, -1.0], 0.5, 0.25).unwrap();
        let r = time_reverse(&s, 3.0);
        assert_eq!(r.samples, vec![-1.0, 5.0, 2.0, 1.0]);
        assert_eq!(r.value_at(3.0 - 0.75), 2.0);
        assert_eq!(time_reverse(&r, 3.0), s);
        // a pulse symmetric about T/2 is a fixed point
        let p = Signal::new(vec![1.0, 3.0, 4.0, 3.0, 1.0], 1.0, 0.0).unwrap();
        assert_eq!(time_reverse(&p, 4.0), p);
    }

    #[test]
    fn pulse_inversion_cases() {
        let c = chirp();
        let neg = c.scaled(-1.0);
        assert!(pulse_inversion_residual(&c, &neg).unwrap().samples.iter().all(|v| *v == 0.0));
        // memoryless quadratic channel
        let sq = |s: &Signal<f64>| Signal::new(s.samples.iter().map(|v| v * v).collect(), s.dt, s.t0).unwrap();
        let r = pulse_inversion_residual(&sq(&c), &sq(&neg)).unwrap();
        for (a, b) in r.samples.iter().zip(&c.samples) {
            assert_eq!(*a, 2.0 * b * b);
        }
        assert!(r.max_abs() > 1.0);
        let d = pulse_inversion_difference(&c, &neg).unwrap();
        assert_eq!(d.samples[10], -2.0 * c.samples[10]);
        let shifted = Signal { t0: 1.0, ..c.clone() };
        assert!(pulse_inversion_residual(&c, &shifted).is_err());
    }
}
