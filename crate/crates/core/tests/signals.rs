//! Signal chain properties against direct-sum oracles.

use nltr_core::signals::{
    cross_correlate, delayed_superposition, envelope, lowpass, make_chirp, predict_delayed_focus,
    pulse_inversion_difference, pulse_inversion_residual, symmetry_residual, time_reverse, ChirpSpec, DelaySchedule,
};
use nltr_core::Signal64;
use proptest::prelude::*;

fn signal(samples: Vec<f64>, dt: f64, t0: f64) -> Signal64 {
    Signal64::new(samples, dt, t0).unwrap()
}

/// `dt sum_k y(t_k + tau) c(t_k)` for every overlapping lag.
fn direct_correlation(y: &Signal64, c: &Signal64) -> Vec<f64> {
    let (ny, nc) = (y.len() as i64, c.len() as i64);
    (-(nc - 1)..ny)
        .map(|lag| {
            (0..nc)
                .filter(|k| (0..ny).contains(&(k + lag)))
                .map(|k| y.samples[(k + lag) as usize] * c.samples[k as usize])
                .sum::<f64>()
                * y.dt
        })
        .collect()
}

/// `dt sum_i a_i b_{k-i}` on the grid starting at `a.t0 + b.t0`.
fn convolve(a: &Signal64, b: &Signal64) -> Signal64 {
    let n = a.len() + b.len() - 1;
    let mut out = vec![0.0; n];
    for (i, x) in a.samples.iter().enumerate() {
        for (j, z) in b.samples.iter().enumerate() {
            out[i + j] += x * z * a.dt;
        }
    }
    signal(out, a.dt, a.t0 + b.t0)
}

fn samples(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 1..max_len)
}

fn scale(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

proptest! {
    #[test]
    fn correlation_matches_the_direct_sum(y in samples(80), c in samples(80), t0y in -5i32..5, t0c in -5i32..5) {
        let dt = 0.25;
        let (y, c) = (signal(y, dt, t0y as f64 * dt), signal(c, dt, t0c as f64 * dt));
        let g = cross_correlate(&y, &c).unwrap();
        let d = direct_correlation(&y, &c);
        prop_assert_eq!(g.len(), d.len());
        prop_assert_eq!(g.t0, y.t0 - c.t0 - (c.len() - 1) as f64 * dt);
        let tol = 1e-12 * (y.norm_l2() * c.norm_l2() * dt).max(1e-300);
        for (a, b) in g.samples.iter().zip(&d) {
            prop_assert!((a - b).abs() <= tol, "{} vs {}", a, b);
        }
    }

    #[test]
    fn autocorrelation_is_even_and_peaks_at_zero_lag(c in samples(120)) {
        let c = signal(c, 1e-9, 0.0);
        let g = cross_correlate(&c, &c).unwrap();
        let n = c.len();
        let energy = c.samples.iter().map(|v| v * v).sum::<f64>() * c.dt;
        let tol = 1e-12 * energy.max(1e-300);
        prop_assert!((g.samples[n - 1] - energy).abs() <= tol);
        for k in 1..n {
            prop_assert!((g.samples[n - 1 + k] - g.samples[n - 1 - k]).abs() <= tol);
            prop_assert!(g.samples[n - 1 + k].abs() <= energy + tol);
        }
    }

    #[test]
    fn time_reversal_is_an_involution(s in samples(60), t0 in -20i32..20, t in -20i32..20) {
        let dt = 0.5;
        let s = signal(s, dt, t0 as f64 * dt);
        let t_focus = t as f64 * dt;
        let r = time_reverse(&s, t_focus);
        for i in 0..s.len() {
            prop_assert_eq!(r.value_at(t_focus - s.time(i)), s.samples[i]);
        }
        let back = time_reverse(&r, t_focus);
        prop_assert_eq!(&back.samples, &s.samples);
        prop_assert_eq!(back.t0, s.t0);
    }

    #[test]
    fn pulse_inversion_cancels_odd_response(y in samples(60), e in samples(60)) {
        let n = y.len().min(e.len());
        // odd part y, even part e^2
        let plus: Vec<f64> = (0..n).map(|i| y[i] + e[i] * e[i]).collect();
        let minus: Vec<f64> = (0..n).map(|i| -y[i] + e[i] * e[i]).collect();
        let (p, m) = (signal(plus, 1.0, 0.0), signal(minus, 1.0, 0.0));
        let r = pulse_inversion_residual(&p, &m).unwrap();
        for i in 0..n {
            prop_assert!((r.samples[i] - 2.0 * e[i] * e[i]).abs() <= 1e-15 * (1.0 + y[i].abs()));
        }
        prop_assert_eq!(&r, &pulse_inversion_residual(&m, &p).unwrap());
        let linear = signal(y[..n].to_vec(), 1.0, 0.0);
        let zero = pulse_inversion_residual(&linear, &linear.scaled(-1.0)).unwrap();
        prop_assert!(zero.samples.iter().all(|v| *v == 0.0));
        let d = pulse_inversion_difference(&p, &m).unwrap();
        for i in 0..n {
            prop_assert!((d.samples[i] + 2.0 * y[i]).abs() <= 1e-15 * (1.0 + e[i] * e[i]));
        }
    }

    #[test]
    fn retransmitted_reversal_is_symmetric_about_the_focus(h in samples(12), c in samples(40), t in 0i32..30) {
        // linear medium y = h * c; correlation, reversal, second pass h
        let (h, c) = (signal(h, 1.0, 0.0), signal(c, 1.0, 0.0));
        let y = convolve(&h, &c);
        let gamma = cross_correlate(&y, &c).unwrap();
        let t_focus = t as f64;
        let drive = time_reverse(&gamma, t_focus);
        let y2 = convolve(&h, &drive);
        let half = (h.len() + c.len() - 2) as f64;
        if half >= 1.0 {
            let error = symmetry_residual(&y2, t_focus, half).unwrap();
            let left = (1..=half as usize).map(|k| y2.value_at(t_focus - k as f64).powi(2)).sum::<f64>().sqrt();
            prop_assert!(error * left <= 1e-10 * y2.norm_l2(), "residual {}", error);
        }
        // the focus sample is the energy of the first arrival
        let focus = y2.value_at(t_focus);
        let energy = y.samples.iter().map(|v| v * v).sum::<f64>();
        prop_assert!((focus - energy).abs() <= 1e-10 * energy.max(1e-300));
        prop_assert!(y2.samples.iter().all(|v| v.abs() <= focus * (1.0 + 1e-10) + 1e-300));
    }

    #[test]
    fn delayed_superposition_is_linear(g1 in samples(50), g2 in samples(50), a in -2.0f64..2.0, b in -2.0f64..2.0,
                                       w in prop::collection::vec(-1.0f64..1.0, 1..4)) {
        let n = g1.len().min(g2.len()).max(12);
        let pad = |v: &[f64]| { let mut v = v.to_vec(); v.resize(n, 0.0); v };
        let (g1, g2) = (signal(pad(&g1), 1.0, -3.0), signal(pad(&g2), 1.0, -3.0));
        let mix = g1.scaled(a).try_add(&g2.scaled(b)).unwrap();
        let taps: Vec<(f64, f64)> = w.iter().enumerate().map(|(i, &wi)| (wi, i as f64)).collect();
        let sched = DelaySchedule::new(taps).unwrap();
        let t_focus = 2.0;
        let k = 6;
        let x1 = delayed_superposition(&g1, &sched, t_focus, k).unwrap();
        let x2 = delayed_superposition(&g2, &sched, t_focus, k).unwrap();
        let xm = delayed_superposition(&mix, &sched, t_focus, k).unwrap();
        for j in 0..k {
            let expect = a * x1.samples[j] + b * x2.samples[j];
            prop_assert!((xm.samples[j] - expect).abs() <= 1e-12 * (1.0 + expect.abs()));
        }
        // the tap sum is the sum of single-tap reversals
        let mut sum = vec![0.0; k];
        for &(wi, tau) in &sched.taps {
            let one = delayed_superposition(&g1, &DelaySchedule::new(vec![(wi, tau)]).unwrap(), t_focus, k).unwrap();
            sum.iter_mut().zip(&one.samples).for_each(|(s, v)| *s += v);
        }
        for j in 0..k {
            prop_assert!((x1.samples[j] - sum[j]).abs() <= 1e-12 * (1.0 + sum[j].abs()));
        }
    }

    #[test]
    fn single_tap_is_plain_reversal(g in samples(50), t in 0i32..20) {
        let g = signal(g, 1.0, -10.0);
        let t_focus = t as f64;
        prop_assume!(t_focus <= g.t_last());
        let k = (t_focus - g.t0) as usize + 1;
        let x = delayed_superposition(&g, &DelaySchedule::identity(), t_focus, k).unwrap();
        let r = time_reverse(&g, t_focus);
        for j in 0..k {
            prop_assert_eq!(x.samples[j], r.value_at(j as f64));
        }
        let y = signal(g.samples.clone(), 1.0, 0.0);
        prop_assert_eq!(predict_delayed_focus(&y, &DelaySchedule::identity()).unwrap(), y);
    }

    #[test]
    fn lowpass_is_linear(x in samples(200), z in samples(200), a in -3.0f64..3.0) {
        let n = x.len().min(z.len()).max(4);
        let pad = |v: &[f64]| { let mut v = v.to_vec(); v.resize(n, 0.0); v };
        let (x, z) = (signal(pad(&x), 1e-8, 0.0), signal(pad(&z), 1e-8, 0.0));
        let cut = 5e6;
        let lx = lowpass(&x, cut).unwrap();
        let lz = lowpass(&z, cut).unwrap();
        let lm = lowpass(&x.scaled(a).try_add(&z).unwrap(), cut).unwrap();
        let s = scale(&lx.samples).max(scale(&lz.samples)) * (1.0 + a.abs());
        for i in 0..n {
            prop_assert!((lm.samples[i] - (a * lx.samples[i] + lz.samples[i])).abs() <= 1e-12 * s.max(1e-300));
        }
    }

    #[test]
    fn envelope_bounds_the_signal(x in samples(300)) {
        let s = signal(x, 1.0, 0.0);
        let e = envelope(&s).unwrap();
        for (v, env) in s.samples.iter().zip(&e.samples) {
            prop_assert!(*env >= v.abs() - 1e-12 * (1.0 + scale(&s.samples)));
        }
    }

    #[test]
    fn csv_round_trip_is_exact(x in samples(100), dt in 1e-10f64..1e-6, k in -50i32..50) {
        let s = signal(x, dt, k as f64 * dt);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let back = Signal64::read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(&back.samples, &s.samples);
        let mut again = Vec::new();
        back.write_csv(&mut again).unwrap();
        prop_assert_eq!(again, buf);
    }
}

#[test]
fn chirp_sweeps_linearly_and_stays_bounded() {
    let spec: ChirpSpec<f64> = ChirpSpec { amplitude: 2.0, f0: 0.5e6, f1: 3.0e6, duration: 20e-6 };
    let c = make_chirp(&spec, 2e-9).unwrap();
    assert_eq!(c.len(), 10001);
    assert!(c.samples.iter().all(|v| v.abs() <= 2.0));
    assert_eq!(c.samples[0], 0.0);
    // zero crossings follow the instantaneous frequency
    for &(t, f) in &[(2e-6, 0.75e6), (10e-6, 1.75e6), (18e-6, 2.75e6)] {
        assert!((spec.frequency(t) - f).abs() < 1e-6 * f);
        let window = 1.0 / f;
        let crossings = c
            .crop(t - window, t + window)
            .samples
            .windows(2)
            .filter(|w| w[0] * w[1] < 0.0)
            .count();
        assert!((3..=5).contains(&crossings), "{crossings} crossings near {t:e}");
    }
    // phase derivative equals 2 pi f
    let h = 1e-12;
    for t in [1e-6, 7e-6, 15e-6] {
        let d = (spec.phase(t + h) - spec.phase(t - h)) / (2.0 * h);
        assert!((d - std::f64::consts::TAU * spec.frequency(t)).abs() < 1e-4 * d);
    }
    assert!(make_chirp(&spec, 2e-7).is_err());
}
