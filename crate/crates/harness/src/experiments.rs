//! Two-pass TR-NEWS, pulse inversion and delayed superposition.

use nltr_core::contact::AuditSummary;
use nltr_core::signals::{
    cross_correlate, delayed_superposition, envelope, lowpass_order, predict_delayed_focus, pulse_inversion_difference,
    pulse_inversion_residual, relative_l2, symmetry_residual, DelaySchedule,
};
use nltr_core::Signal64;

use crate::error::HarnessError;
use crate::model::{Model, RunOptions, RunOutput, Trace};

/// Chirp transmission recorded at every receiver.
#[derive(Clone, Debug)]
pub struct FirstPass {
    pub config_hash: String,
    /// Sign applied to the configured chirp amplitude.
    pub sign: f64,
    pub chirp: Signal64,
    pub responses: Vec<Trace>,
    pub contact: Option<AuditSummary<f64>>,
    pub elapsed_s: f64,
}

/// One complete TR-NEWS experiment for one focus receiver.
#[derive(Clone, Debug)]
pub struct TRNewsRecord {
    pub config_hash: String,
    pub focus: String,
    pub focal_time: f64,
    pub sign: f64,
    /// Chirp used in the first pass, with its sign.
    pub chirp: Signal64,
    pub responses: Vec<Trace>,
    /// Correlation of the focus response with the unsigned chirp.
    pub gamma: Signal64,
    pub schedule: DelaySchedule<f64>,
    /// Pressure transmitted in the second pass, `gain` times the reversed
    /// correlation.
    pub drive: Signal64,
    pub gain: f64,
    /// Second-pass displacements divided by `gain`, so they are in units of
    /// the correlation and comparable across runs.
    pub y_tr: Vec<Trace>,
    pub contact: Option<AuditSummary<f64>>,
    pub pass1_s: f64,
    pub pass2_s: f64,
}

impl TRNewsRecord {
    pub fn trace(&self, name: &str) -> Option<&Trace> {
        self.y_tr.iter().find(|t| t.name == name)
    }

    pub fn focus_trace(&self) -> &Trace {
        self.trace(&self.focus).expect("focus receiver is recorded")
    }

    /// Second-pass `u_y` at `name` in metres.
    pub fn physical_uy(&self, name: &str) -> Option<Signal64> {
        self.trace(name).map(|t| t.uy.scaled(self.gain))
    }
}

pub fn first_pass(model: &Model, sign: f64) -> Result<FirstPass, HarnessError> {
    first_pass_with(model, sign, RunOptions::default())
}

pub fn first_pass_with(model: &Model, sign: f64, opts: RunOptions) -> Result<FirstPass, HarnessError> {
    let chirp = model.chirp(sign)?;
    let out = model.simulate(&chirp, opts)?;
    Ok(FirstPass {
        config_hash: model.hash.clone(),
        sign,
        chirp,
        responses: out.traces,
        contact: out.contact,
        elapsed_s: out.elapsed_s,
    })
}

fn check_hash(model: &Model, record: &str) -> Result<(), HarnessError> {
    if record != model.hash {
        return Err(HarnessError::HashMismatch { record: record.to_string(), current: model.hash.clone() });
    }
    Ok(())
}

/// Scale `x` so its peak equals the configured chirp amplitude. The gain is
/// nudged down if rounding would push the peak past the transmitter limit.
fn drive_gain(model: &Model, x: &Signal64) -> Result<f64, HarnessError> {
    let peak = x.max_abs();
    if !(peak > 0.0 && peak.is_finite()) {
        return Err(HarnessError::Config("second-pass drive is identically zero".into()));
    }
    let limit = model.cfg.chirp.amplitude.abs();
    let mut gain = limit / peak;
    while gain * peak > model.cfg.transmitter.max_pressure {
        gain = f64::from_bits(gain.to_bits() - 1);
    }
    Ok(gain)
}

/// Transmit `sum a_i G(T - t + tau_i)` built from `gamma`.
fn refocus(
    model: &Model,
    gamma: &Signal64,
    sched: &DelaySchedule<f64>,
    opts: RunOptions,
) -> Result<(Signal64, f64, RunOutput), HarnessError> {
    let x = delayed_superposition(gamma, sched, model.cfg.focal_time(), model.n_steps() + 1)?;
    let gain = drive_gain(model, &x)?;
    let drive = x.scaled(gain);
    let out = model.simulate(&drive, opts)?;
    Ok((drive, gain, out))
}

/// Second pass for `focus` from an existing chirp transmission.
pub fn second_pass(
    model: &Model,
    pass: &FirstPass,
    focus: &str,
    sched: &DelaySchedule<f64>,
    opts: RunOptions,
) -> Result<TRNewsRecord, HarnessError> {
    check_hash(model, &pass.config_hash)?;
    let r = model.cfg.receiver_index(focus)?;
    let reference = model.chirp(1.0)?;
    let gamma = cross_correlate(&pass.responses[r].uy, &reference)?;
    let (drive, gain, out) = refocus(model, &gamma, sched, opts)?;
    Ok(TRNewsRecord {
        config_hash: model.hash.clone(),
        focus: focus.to_string(),
        focal_time: model.cfg.focal_time(),
        sign: pass.sign,
        chirp: pass.chirp.clone(),
        responses: pass.responses.clone(),
        gamma,
        schedule: sched.clone(),
        drive,
        gain,
        y_tr: out.traces.iter().map(|t| t.scaled(1.0 / gain)).collect(),
        contact: out.contact,
        pass1_s: pass.elapsed_s,
        pass2_s: out.elapsed_s,
    })
}

/// Chirp, correlate at `focus`, transmit the reversed correlation.
pub fn run_tr_news(model: &Model, focus: &str) -> Result<TRNewsRecord, HarnessError> {
    let pass = first_pass(model, 1.0)?;
    second_pass(model, &pass, focus, &DelaySchedule::identity(), RunOptions::default())
}

/// Where the focused signal peaks and how symmetric it is about `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct FocusMetrics {
    pub receiver: String,
    pub peak_time: f64,
    /// `(t_peak - T) / dt`.
    pub peak_offset_samples: f64,
    pub peak_abs: f64,
    /// `||y(T + k dt) - y(T - k dt)|| / ||y(T - k dt)||` over the half width.
    pub asymmetry: f64,
}

pub fn focus_metrics(y: &Signal64, name: &str, focal_time: f64, half_width: f64) -> Result<FocusMetrics, HarnessError> {
    let i = y.argmax_abs().ok_or(nltr_core::signals::SignalError::Empty)?;
    let peak_time = y.time(i);
    Ok(FocusMetrics {
        receiver: name.to_string(),
        peak_time,
        peak_offset_samples: (peak_time - focal_time) / y.dt,
        peak_abs: y.samples[i].abs(),
        asymmetry: symmetry_residual(y, focal_time, half_width)?,
    })
}

/// Pulse-inversion outcome at one receiver.
#[derive(Clone, Debug)]
pub struct PiReceiver {
    pub name: String,
    /// `y_TR+ + y_TR-`.
    pub residual: Signal64,
    /// `y_TR- - y_TR+`.
    pub difference: Signal64,
    /// Envelope of the low-passed residual.
    pub envelope: Signal64,
    /// `||residual|| / ||y_TR+||`, unfiltered.
    pub relative_residual: f64,
    /// Peak of `envelope`.
    pub score_raw: f64,
    /// `score_raw` over the peak of the low-passed `y_TR+`.
    pub score: f64,
}

#[derive(Clone, Debug)]
pub struct PiRecord {
    pub plus: TRNewsRecord,
    pub minus: TRNewsRecord,
    pub receivers: Vec<PiReceiver>,
}

impl PiRecord {
    pub fn receiver(&self, name: &str) -> Option<&PiReceiver> {
        self.receivers.iter().find(|r| r.name == name)
    }
}

/// Combine the two signed second passes.
pub fn pulse_inversion(model: &Model, plus: TRNewsRecord, minus: TRNewsRecord) -> Result<PiRecord, HarnessError> {
    check_hash(model, &plus.config_hash)?;
    check_hash(model, &minus.config_hash)?;
    let p = &model.cfg.processing;
    let mut receivers = Vec::with_capacity(plus.y_tr.len());
    for (a, b) in plus.y_tr.iter().zip(&minus.y_tr) {
        let residual = pulse_inversion_residual(&a.uy, &b.uy)?;
        let difference = pulse_inversion_difference(&a.uy, &b.uy)?;
        let filtered = lowpass_order(&residual, p.lowpass_cutoff, p.filter_order)?;
        let env = envelope(&filtered)?;
        let score_raw = env.max_abs();
        let reference = lowpass_order(&a.uy, p.lowpass_cutoff, p.filter_order)?.max_abs();
        receivers.push(PiReceiver {
            name: a.name.clone(),
            relative_residual: residual.norm_l2() / a.uy.norm_l2(),
            residual,
            difference,
            envelope: env,
            score_raw,
            score: if reference > 0.0 { score_raw / reference } else { 0.0 },
        });
    }
    Ok(PiRecord { plus, minus, receivers })
}

/// TR-NEWS with the chirp amplitude `+A` and `-A`.
pub fn run_pulse_inversion(model: &Model, focus: &str) -> Result<PiRecord, HarnessError> {
    let plus = first_pass(model, 1.0)?;
    let minus = first_pass(model, -1.0)?;
    let id = DelaySchedule::identity();
    let p = second_pass(model, &plus, focus, &id, RunOptions::default())?;
    let m = second_pass(model, &minus, focus, &id, RunOptions::default())?;
    pulse_inversion(model, p, m)
}

/// Simulated against predicted delayed focusing.
#[derive(Clone, Debug)]
pub struct DelayedResult {
    pub focus: String,
    pub schedule: DelaySchedule<f64>,
    pub drive: Signal64,
    pub gain: f64,
    /// Focus `u_y` divided by the gain.
    pub simulated: Signal64,
    pub predicted: Signal64,
    /// Relative L2 difference over the focal window.
    pub mismatch: f64,
    pub window: (f64, f64),
}

/// Re-propagate the delayed superposition of a base record's correlation
/// and compare with the linear prediction from its focused signal.
pub fn run_delayed_tr(model: &Model, base: &TRNewsRecord, sched: &DelaySchedule<f64>) -> Result<DelayedResult, HarnessError> {
    check_hash(model, &base.config_hash)?;
    if base.schedule != DelaySchedule::identity() {
        return Err(HarnessError::Config("delayed focusing needs a plain TR-NEWS base record".into()));
    }
    let r = model.cfg.receiver_index(&base.focus)?;
    let (drive, gain, out) = refocus(model, &base.gamma, sched, RunOptions::default())?;
    let simulated = out.traces[r].uy.scaled(1.0 / gain);
    let predicted = predict_delayed_focus(&base.focus_trace().uy, sched)?;

    let hw = model.cfg.processing.focal_half_width;
    let t = base.focal_time;
    let tau_max = sched.taps.iter().fold(0.0f64, |m, tap| m.max(tap.1));
    let tau_min = sched.taps.iter().fold(0.0f64, |m, tap| m.min(tap.1));
    let window = (t + tau_min - hw, t + tau_max + hw);
    let s = simulated.crop(window.0, window.1);
    let p = predicted.crop(window.0, window.1);
    Ok(DelayedResult {
        focus: base.focus.clone(),
        schedule: sched.clone(),
        drive,
        gain,
        mismatch: relative_l2(&s.samples, &p.samples),
        simulated,
        predicted,
        window,
    })
}
