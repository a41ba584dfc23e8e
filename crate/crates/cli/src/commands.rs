use std::process::ExitCode;

use anyhow::anyhow;
use decoupler_core::dynamics::{
    coherence_metric, convergence_sweep, evolve_schedule, pulse_width_sweep, PulseShape, SimConfig, SweepMetric,
    SweepProblem,
};
use decoupler_core::operator::OperatorJson;
use decoupler_core::program::{universality_audit, Control, ControlSchedule, CycleSpec};
use decoupler_core::{DecouplingGroup64, Error};
use serde::Serialize;
use serde_json::json;

use crate::inputs::{self, Seeds};
use crate::output::{self, Manifest};
use crate::{
    CheckArgs, Failure, Global, MetricArg, Outcome, PhysicsArgs, ProjectArgs, SimulateArgs, SweepArgs, UniversalityArgs,
};

fn group_label(text: &Option<String>, json: &Option<std::path::PathBuf>) -> String {
    match (text, json) {
        (Some(t), _) => t.clone(),
        (None, Some(p)) => p.display().to_string(),
        (None, None) => String::new(),
    }
}

#[derive(Serialize)]
struct ProjectReport {
    group: String,
    order: usize,
    dim: usize,
    hamiltonian: OperatorJson,
    projection: OperatorJson,
    in_centralizer: bool,
    verdict: &'static str,
    /// Largest `‖[H, g]‖_HS` over the group.
    centralizer_defect: f64,
    /// `‖H − Π_G(H)‖_HS`.
    removed_norm: f64,
}

pub fn project(global: &Global, args: &ProjectArgs) -> Outcome {
    let seed = Seeds::from(global.seed).hamiltonian;
    let (group_text, group_json) = (args.group.as_deref(), args.group_json.as_deref());
    let (h_text, h_json) = (args.h.as_deref(), args.h_json.as_deref());
    let (group, h) = if inputs::group_needs_hint(group_text, group_json)? {
        let h = inputs::operator(h_text, h_json, None, seed)?;
        (inputs::group(group_text, group_json, Some(h.dim()))?, h)
    } else {
        let group = inputs::group(group_text, group_json, None)?;
        let h = inputs::operator(h_text, h_json, Some(group.dim()), seed)?;
        (group, h)
    };
    h.ensure_hermitian(global.tol, "H")?;
    let projection = group.project(&h)?;
    let inside = group.in_centralizer(&h, global.tol);
    output::print_json(&ProjectReport {
        group: group_label(&args.group, &args.group_json),
        order: group.order(),
        dim: group.dim(),
        hamiltonian: OperatorJson::from(&h),
        projection: OperatorJson::from(&projection),
        in_centralizer: inside,
        verdict: if inside { "in centralizer" } else { "not in centralizer" },
        centralizer_defect: group.centralizer_defect(&h),
        removed_norm: (&h - &projection).hs_norm(),
    })?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ResidualRow {
    generator: String,
    /// `‖Π_G(E)‖_HS`.
    residual: f64,
    averaged_out: bool,
}

#[derive(Serialize)]
struct CheckReport {
    group: String,
    order: usize,
    dim: usize,
    error_space_size: usize,
    correctable: bool,
    verdict: &'static str,
    residuals: Vec<ResidualRow>,
}

pub fn check(global: &Global, args: &CheckArgs) -> Outcome {
    let errors = inputs::error_space(&args.errors, args.errors_json.as_deref())?;
    let group = inputs::group(args.group.as_deref(), args.group_json.as_deref(), Some(errors.dim()))?;
    let verdict = errors.correctability(&group, global.tol)?;
    let labels = inputs::error_labels(&args.errors, args.errors_json.as_deref(), errors.len());
    let residuals = labels
        .into_iter()
        .zip(&verdict.residuals)
        .map(|(generator, &residual)| ResidualRow { generator, residual, averaged_out: residual <= global.tol })
        .collect();
    output::print_json(&CheckReport {
        group: group_label(&args.group, &args.group_json),
        order: group.order(),
        dim: group.dim(),
        error_space_size: errors.len(),
        correctable: verdict.correctable,
        verdict: if verdict.correctable { "correctable" } else { "not correctable" },
        residuals,
    })?;
    Ok(if verdict.correctable { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

pub fn universality(_global: &Global, args: &UniversalityArgs) -> Outcome {
    let (compiled, _) = inputs::program(&args.program)?;
    let mut slow = Vec::new();
    let mut fast = Vec::new();
    for w in compiled.schedule.windows() {
        match &w.control {
            Control::ParallelSlow { a } => slow.push(a.clone()),
            other => fast.push(other.clone()),
        }
    }
    if slow.is_empty() && fast.is_empty() {
        return Err(Failure::invalid(anyhow!("{}: no windows, nothing to audit", args.program.display())));
    }
    let report = universality_audit(compiled.spec.group(), &slow, &fast)?;
    output::print_json(&report)?;
    Ok(ExitCode::SUCCESS)
}

fn physics_config(args: &PhysicsArgs) -> Result<serde_json::Value, Failure> {
    let h_json = args.h_json.as_deref().map(inputs::read).transpose()?;
    Ok(json!({
        "bath": args.bath,
        "h": args.h,
        "h_json": h_json,
        "state": format!("{:?}", args.state).to_lowercase(),
        "tau": args.tau,
        "pulse_mode": format!("{:?}", args.pulse_mode).to_lowercase(),
    }))
}

fn whole_cycles(duration: f64, t_c: f64) -> Result<usize, Failure> {
    let ratio = duration / t_c;
    let n = ratio.round();
    if !(duration > 0.0) || n < 1.0 || (ratio - n).abs() > 1e-9 * n {
        return Err(Error::Synchronization(format!(
            "duration {duration} is not a whole number of cycles of length {t_c}"
        ))
        .into());
    }
    Ok(n as usize)
}

pub fn simulate(global: &Global, args: &SimulateArgs) -> Outcome {
    let (compiled, text) = inputs::program(&args.program)?;
    let ds = compiled.spec.group().dim();
    let phys = inputs::physics(&args.physics, ds, global.seed)?;
    let t_c = compiled.spec.cycle_time();
    let n = match (args.cycles, args.duration) {
        (Some(n), _) => n,
        (None, Some(d)) => whole_cycles(d, t_c)?,
        (None, None) => return Err(Failure::invalid(anyhow!("give --cycles or --duration"))),
    };
    let (spec, schedule) = if args.no_decoupling {
        (CycleSpec::with_cycle_time(DecouplingGroup64::trivial(ds), t_c)?, ControlSchedule::empty())
    } else {
        (compiled.spec.clone(), compiled.schedule.clone())
    };
    let observable_text = args.observable.as_deref().unwrap_or("pauli(1,x)");
    let observable = inputs::operator(Some(observable_text), None, Some(ds), global.seed)?;

    let cfg = SimConfig::new(spec, n, phys.initial_state.clone()).with_pulse(phys.pulse);
    let trajectory = evolve_schedule(&cfg, &phys.joint_hamiltonian, &schedule)?;
    let metric = coherence_metric(&trajectory, &observable)?;

    let out = output::resolve_out(global, &args.out)?;
    let mut w = output::csv_writer(&out)?;
    w.write_record(["cycle_index", "time", "metric"]).map_err(Failure::runtime)?;
    for (k, (t, v)) in trajectory.times().iter().zip(&metric).enumerate() {
        w.write_record([k.to_string(), format!("{t:e}"), format!("{v:e}")]).map_err(Failure::runtime)?;
    }
    w.flush()?;

    let config = json!({
        "program_path": args.program.display().to_string(),
        "program": text,
        "physics": physics_config(&args.physics)?,
        "cycles": n,
        "observable": observable_text,
        "no_decoupling": args.no_decoupling,
        "tol": global.tol,
    });
    let tau_c = phys.bath.tau_c();
    let result = json!({
        "samples": metric.len(),
        "cycle_time": t_c,
        "final_metric": metric.last(),
        "tau_c": tau_c.is_finite().then_some(tau_c),
    });
    Manifest::new("simulate", global.seed, config).with_result(result).write_next_to(&out)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    parameter: &'a str,
    metric: &'a str,
    fitted_slope: f64,
    prefactor: f64,
    monotone: bool,
    points: usize,
}

pub fn sweep(global: &Global, args: &SweepArgs) -> Outcome {
    let (compiled, text) = inputs::program(&args.program)?;
    if !compiled.schedule.windows().is_empty() {
        eprintln!("{}: warning: sweeps run the bare decoupler; control windows are ignored", args.program.display());
    }
    let ds = compiled.spec.group().dim();
    let phys = inputs::physics(&args.physics, ds, global.seed)?;
    let mut problem = SweepProblem {
        group: compiled.spec.group().clone(),
        hamiltonian: phys.joint_hamiltonian.clone(),
        system_dim: ds,
        initial_state: phys.initial_state.clone(),
        total_time: args.total_time,
        pulse: phys.pulse,
    };
    let result = match args.metric {
        MetricArg::TauInfidelity => {
            problem.pulse = PulseShape::finite(0.0, inputs::pulse_mode(args.physics.pulse_mode));
            let t_c = args.tc.unwrap_or(compiled.spec.cycle_time());
            pulse_width_sweep(&problem, t_c, &args.tau_list)?
        }
        m => {
            let metric = match m {
                MetricArg::Residual => SweepMetric::AvgHamiltonianResidual,
                MetricArg::Defect => SweepMetric::CycleDefect,
                _ => SweepMetric::FinalInfidelity,
            };
            convergence_sweep(&problem, metric, &args.tc_list)?
        }
    }
    .with_seed(global.seed);

    let out = output::resolve_out(global, &args.out)?;
    std::fs::write(&out, result.to_csv())?;

    let config = json!({
        "program_path": args.program.display().to_string(),
        "program": text,
        "physics": physics_config(&args.physics)?,
        "metric": format!("{:?}", args.metric),
        "tc_list": args.tc_list,
        "tau_list": args.tau_list,
        "tc": args.tc,
        "total_time": args.total_time,
    });
    let value = serde_json::to_value(&result).map_err(Failure::runtime)?;
    Manifest::new("sweep", global.seed, config).with_result(value).write_next_to(&out)?;
    output::print_json(&SweepSummary {
        parameter: &result.parameter,
        metric: &result.metric,
        fitted_slope: result.fitted_slope,
        prefactor: result.prefactor,
        monotone: result.monotone,
        points: result.rows.len(),
    })?;
    Ok(ExitCode::SUCCESS)
}
