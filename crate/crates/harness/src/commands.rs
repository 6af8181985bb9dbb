//! The command-line verbs, each writing one run directory.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use nltr_core::signals::DelaySchedule;

use crate::config::ExperimentConfig;
use crate::error::HarnessError;
use crate::experiments::{
    first_pass, first_pass_with, focus_metrics, pulse_inversion, run_delayed_tr, second_pass, FirstPass, TRNewsRecord,
};
use crate::io::RunDir;
use crate::model::{Model, RunOptions, SnapshotPlan};
use crate::verify::verify;

/// Receivers to focus on: the requested names, or all of them.
pub fn focus_list(cfg: &ExperimentConfig, requested: &[String]) -> Result<Vec<String>, HarnessError> {
    if requested.is_empty() {
        return Ok(cfg.receivers.iter().map(|r| r.name.clone()).collect());
    }
    for name in requested {
        cfg.receiver_index(name)?;
    }
    Ok(requested.to_vec())
}

fn start(model: &Model, out: &Path) -> Result<RunDir, HarnessError> {
    let mut run = RunDir::create(out)?;
    run.config(&model.cfg)?;
    run.mesh("mesh.txt", &model.mesh)?;
    run.metric("nodes", model.mesh.n_nodes() as i64);
    run.metric("elements", model.mesh.triangles.len() as i64);
    run.metric("crack_pairs", model.mesh.crack_pairs.len() as i64);
    run.metric("dt_s", model.dt());
    run.metric("critical_dt_s", model.critical_dt);
    run.metric("steps", model.n_steps() as i64);
    run.metric("focal_time_s", model.cfg.focal_time());
    Ok(run)
}

fn audit_sink(run: &mut RunDir, model: &Model, rel: &str) -> Result<Option<Box<dyn Write>>, HarnessError> {
    if !model.cfg.output.contact_audit || model.mesh.crack_pairs.is_empty() {
        return Ok(None);
    }
    let path = run.path(rel);
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    run.register(rel);
    Ok(Some(Box::new(BufWriter::new(File::create(path)?))))
}

fn write_pass(run: &mut RunDir, pass: &FirstPass, dir: &str) -> Result<(), HarnessError> {
    run.signal(&format!("{dir}/chirp.csv"), &pass.chirp)?;
    for t in &pass.responses {
        run.trace(&format!("{dir}/{}.csv", t.name), t)?;
    }
    run.metric(&format!("{dir}_seconds"), pass.elapsed_s);
    Ok(())
}

fn write_record(run: &mut RunDir, rec: &TRNewsRecord, dir: &str) -> Result<(), HarnessError> {
    run.signal(&format!("{dir}/gamma.csv"), &rec.gamma)?;
    run.signal(&format!("{dir}/drive.csv"), &rec.drive)?;
    for t in &rec.y_tr {
        run.trace(&format!("{dir}/y_tr_{}.csv", t.name), &t.scaled(rec.gain))?;
    }
    let hw = run_half_width(run);
    let m = focus_metrics(&rec.focus_trace().uy, &rec.focus, rec.focal_time, hw)?;
    run.metric(&format!("{dir}_gain"), rec.gain);
    run.metric(&format!("{dir}_peak_offset_samples"), m.peak_offset_samples);
    run.metric(&format!("{dir}_asymmetry"), m.asymmetry);
    run.metric(&format!("{dir}_focus_amplitude_m"), m.peak_abs * rec.gain);
    run.metric(&format!("{dir}_seconds"), rec.pass2_s);
    if let Some(s) = &rec.contact {
        run.metric(&format!("{dir}_contact_ok"), s.all_ok());
        run.metric(&format!("{dir}_contact_steps"), s.contact_steps as i64);
    }
    Ok(())
}

fn run_half_width(run: &RunDir) -> f64 {
    run.metrics.get("focal_half_width_s").and_then(|v| v.as_float()).unwrap_or(0.0)
}

pub fn cmd_mesh(cfg: &ExperimentConfig, out: &Path) -> Result<(), HarnessError> {
    let model = Model::build(cfg)?;
    let mut run = start(&model, out)?;
    let stack = model.stack.clone();
    run.write_with("layers.csv", |w| {
        writeln!(w, "index,kind,thickness_m")?;
        for (i, l) in stack.iter().enumerate() {
            writeln!(w, "{i},{},{:e}", l.kind.tag(), l.thickness)?;
        }
        Ok(())
    })?;
    run.finish("mesh", cfg)?;
    Ok(())
}

pub fn cmd_trnews(cfg: &ExperimentConfig, out: &Path, focus: &[String]) -> Result<(), HarnessError> {
    let model = Model::build(cfg)?;
    let focus = focus_list(cfg, focus)?;
    let mut run = start(&model, out)?;
    run.metric("focal_half_width_s", cfg.processing.focal_half_width);
    let audit = audit_sink(&mut run, &model, "pass1/contact_audit.csv")?;
    let pass = first_pass_with(&model, 1.0, RunOptions { audit, ..RunOptions::default() })?;
    write_pass(&mut run, &pass, "pass1")?;
    for name in &focus {
        let rec = second_pass(&model, &pass, name, &DelaySchedule::identity(), RunOptions::default())?;
        write_record(&mut run, &rec, &format!("focus_{name}"))?;
    }
    run.finish("run-trnews", cfg)?;
    Ok(())
}

pub fn cmd_pi(cfg: &ExperimentConfig, out: &Path, focus: &[String]) -> Result<(), HarnessError> {
    let model = Model::build(cfg)?;
    let focus = focus_list(cfg, focus)?;
    let mut run = start(&model, out)?;
    run.metric("focal_half_width_s", cfg.processing.focal_half_width);
    let plus = first_pass(&model, 1.0)?;
    let minus = first_pass(&model, -1.0)?;
    write_pass(&mut run, &plus, "pass1_plus")?;
    write_pass(&mut run, &minus, "pass1_minus")?;
    let id = DelaySchedule::identity();
    for name in &focus {
        let p = second_pass(&model, &plus, name, &id, RunOptions::default())?;
        let m = second_pass(&model, &minus, name, &id, RunOptions::default())?;
        let dir = format!("focus_{name}");
        write_record(&mut run, &p, &format!("{dir}/plus"))?;
        write_record(&mut run, &m, &format!("{dir}/minus"))?;
        let pi = pulse_inversion(&model, p, m)?;
        for r in &pi.receivers {
            run.signal(&format!("{dir}/residual_{}.csv", r.name), &r.residual)?;
            run.signal(&format!("{dir}/difference_{}.csv", r.name), &r.difference)?;
            run.signal(&format!("{dir}/envelope_{}.csv", r.name), &r.envelope)?;
        }
        let own = pi.receiver(name).expect("focus receiver is recorded");
        run.metric(&format!("{dir}_score"), own.score);
        run.metric(&format!("{dir}_score_raw"), own.score_raw);
        run.metric(&format!("{dir}_relative_residual"), own.relative_residual);
    }
    run.finish("run-pi", cfg)?;
    Ok(())
}

pub fn cmd_dtr(cfg: &ExperimentConfig, out: &Path, focus: &[String]) -> Result<(), HarnessError> {
    let model = Model::build(cfg)?;
    let focus = focus_list(cfg, focus)?;
    let sched = cfg.delay_schedule()?;
    let mut run = start(&model, out)?;
    run.metric("focal_half_width_s", cfg.processing.focal_half_width);
    let pass = first_pass(&model, 1.0)?;
    write_pass(&mut run, &pass, "pass1")?;
    for name in &focus {
        let base = second_pass(&model, &pass, name, &DelaySchedule::identity(), RunOptions::default())?;
        let dir = format!("focus_{name}");
        write_record(&mut run, &base, &dir)?;
        let d = run_delayed_tr(&model, &base, &sched)?;
        run.signal(&format!("{dir}/delayed_drive.csv"), &d.drive)?;
        run.signal(&format!("{dir}/delayed_simulated.csv"), &d.simulated)?;
        run.signal(&format!("{dir}/delayed_predicted.csv"), &d.predicted)?;
        run.metric(&format!("{dir}_delayed_mismatch"), d.mismatch);
    }
    run.finish("run-dtr", cfg)?;
    Ok(())
}

pub fn cmd_snapshots(cfg: &ExperimentConfig, out: &Path, focus: &[String]) -> Result<(), HarnessError> {
    let model = Model::build(cfg)?;
    let focus = match focus_list(cfg, focus)? {
        names if names.len() == cfg.receivers.len() => names[names.len() / 2].clone(),
        names => names[0].clone(),
    };
    let mut run = start(&model, out)?;
    run.metric("focal_half_width_s", cfg.processing.focal_half_width);
    let plan = SnapshotPlan::from_config(cfg, &run.path("snapshots"));
    if plan.steps.is_empty() {
        return Err(HarnessError::Config("no snapshots requested: set output.snapshot_stride or snapshot_times".into()));
    }
    let pass = first_pass(&model, 1.0)?;
    let rec = second_pass(&model, &pass, &focus, &DelaySchedule::identity(), RunOptions { snapshots: Some(plan), ..RunOptions::default() })?;
    write_record(&mut run, &rec, &format!("focus_{focus}"))?;
    run.register("snapshots/index.csv");
    let index = nltr_core::fem::snapshot::read_index(std::io::BufReader::new(File::open(run.path("snapshots/index.csv"))?))?;
    for e in &index {
        run.register(&format!("snapshots/{}", e.file));
    }
    run.metric("snapshot_count", index.len() as i64);
    run.metric("snapshot_focus", focus);
    run.finish("snapshots", cfg)?;
    Ok(())
}

/// Returns whether every check passed.
pub fn cmd_verify(cfg: &ExperimentConfig, out: &Path) -> Result<bool, HarnessError> {
    let model = Model::build(cfg)?;
    let mut run = start(&model, out)?;
    let report = verify(&model, 2000)?;
    let text = report.to_string();
    print!("{text}");
    run.write_with("verify.txt", |w| w.write_all(text.as_bytes()))?;
    for c in &report.checks {
        run.metric(c.name, c.passed);
    }
    run.finish("verify", cfg)?;
    Ok(report.passed())
}
