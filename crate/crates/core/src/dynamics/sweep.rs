use rayon::prelude::*;
use serde::Serialize;

use super::{
    cycle_propagator, evolution, evolve_schedule, extract_avg_hamiltonian, ideal_decoupled_state, PulseShape, SimConfig,
};
use crate::error::{Error, Result};
use crate::operator::{system_infidelity, Operator, StateVector};
use crate::program::{ControlSchedule, CycleSpec};
use crate::scalar::Real;
use crate::symmetrize::DecouplingGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMetric {
    /// `‖extract_avg_hamiltonian(U(T_c)) − Π_G(H)‖_HS` for one cycle.
    AvgHamiltonianResidual,
    /// `‖U(T_c) − exp(−iΠ_G(H)T_c)‖` (spectral norm) for one cycle.
    CycleDefect,
    /// System infidelity after the total time against `exp(−iΠ_G(H)T)|ψ₀⟩`.
    FinalInfidelity,
}

impl SweepMetric {
    pub fn name(self) -> &'static str {
        match self {
            SweepMetric::AvgHamiltonianResidual => "avg_hamiltonian_residual",
            SweepMetric::CycleDefect => "cycle_defect",
            SweepMetric::FinalInfidelity => "final_infidelity",
        }
    }
}

/// Everything a sweep point needs besides the swept parameter.
#[derive(Debug, Clone)]
pub struct SweepProblem<R: Real> {
    pub group: DecouplingGroup<R>,
    /// Joint Hamiltonian (system ⊗ bath, system on the left).
    pub hamiltonian: Operator<R>,
    pub system_dim: usize,
    pub initial_state: StateVector<R>,
    /// Fixed evolution time for [`SweepMetric::FinalInfidelity`].
    pub total_time: R,
    pub pulse: PulseShape<R>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    /// CSV name of the swept parameter: `t_c` or `tau`.
    pub parameter: String,
    pub metric: String,
    pub rows: Vec<SweepRow>,
    pub fitted_slope: f64,
    pub prefactor: f64,
    /// Whether the metric is non-decreasing in the swept parameter.
    pub monotone: bool,
    pub seed: Option<u64>,
}

impl SweepResult {
    /// CSV with header `<parameter>,metric,value`.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},metric,value\n", self.parameter);
        for r in &self.rows {
            out.push_str(&format!("{:e},{},{:e}\n", r.x, self.metric, r.value));
        }
        out
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Least-squares fit of `log y = slope·log x + log prefactor`.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Argument("log-log fit needs at least two paired points".into()));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::Argument("log-log fit needs positive finite values".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Argument("log-log fit needs distinct x values".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, (my - slope * mx).exp()))
}

fn check_points(values: &[f64], what: &str) -> Result<()> {
    if values.len() < 3 {
        return Err(Error::Argument(format!("a sweep needs at least 3 {what} points, got {}", values.len())));
    }
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(Error::Argument(format!("{what} values must be strictly increasing or decreasing")));
    }
    if values.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::Argument(format!("{what} values must be positive")));
    }
    Ok(())
}

fn whole_cycles(total: f64, t_c: f64) -> Result<usize> {
    let ratio = total / t_c;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > 1e-9 * n {
        return Err(Error::Synchronization(format!(
            "total time {total} is not a whole number of cycles of length {t_c}"
        )));
    }
    Ok(n as usize)
}

fn finish(parameter: &str, metric: SweepMetric, xs: &[f64], values: Vec<f64>) -> Result<SweepResult> {
    let (fitted_slope, prefactor) = loglog_fit(xs, &values)?;
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());
    let monotone = order.windows(2).all(|w| values[w[1]] >= values[w[0]]);
    Ok(SweepResult {
        parameter: parameter.into(),
        metric: metric.name().into(),
        rows: xs.iter().zip(&values).map(|(&x, &value)| SweepRow { x, value }).collect(),
        fitted_slope,
        prefactor,
        monotone,
        seed: None,
    })
}

fn final_infidelity<R: Real>(problem: &SweepProblem<R>, spec: CycleSpec<R>, pulse: PulseShape<R>) -> Result<f64> {
    let n = whole_cycles(problem.total_time.as_f64(), spec.cycle_time().as_f64())?;
    let ideal = ideal_decoupled_state(&spec, &problem.hamiltonian, &problem.initial_state, n)?;
    let cfg = SimConfig::new(spec, n, problem.initial_state.clone()).with_pulse(pulse);
    let traj = evolve_schedule(&cfg, &problem.hamiltonian, &ControlSchedule::empty())?;
    Ok(system_infidelity(traj.final_state(), &ideal, problem.system_dim)?.as_f64())
}

fn point<R: Real>(problem: &SweepProblem<R>, metric: SweepMetric, t_c: f64) -> Result<f64> {
    let spec = CycleSpec::with_cycle_time(problem.group.clone(), R::lit(t_c))?;
    let h = &problem.hamiltonian;
    match metric {
        SweepMetric::AvgHamiltonianResidual | SweepMetric::CycleDefect => {
            let u = cycle_propagator(&spec, h, &problem.pulse)?;
            let target = problem.group.lift_to(h.dim())?.project(h)?;
            let tc = spec.cycle_time();
            let value = if metric == SweepMetric::CycleDefect {
                (&u - &evolution(&target, tc)?).spectral_norm()
            } else {
                (&extract_avg_hamiltonian(&u, tc)? - &target).hs_norm()
            };
            Ok(value.as_f64())
        }
        SweepMetric::FinalInfidelity => final_infidelity(problem, spec, problem.pulse),
    }
}

/// Run `metric` at every cycle time in `tc_list` (in parallel; rows keep the
/// input order) and fit the log-log slope.
pub fn convergence_sweep<R: Real>(
    problem: &SweepProblem<R>,
    metric: SweepMetric,
    tc_list: &[f64],
) -> Result<SweepResult> {
    check_points(tc_list, "cycle-time")?;
    let lo = tc_list.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = tc_list.iter().cloned().fold(0.0, f64::max);
    if hi / lo < 10.0 * (1.0 - 1e-9) {
        return Err(Error::Argument(format!("cycle times must span at least one decade, got [{lo}, {hi}]")));
    }
    let values = tc_list.par_iter().map(|&t| point(problem, metric, t)).collect::<Result<Vec<_>>>()?;
    finish("t_c", metric, tc_list, values)
}

/// Final infidelity at fixed cycle time `t_c` for each pulse width in
/// `tau_list`, with the pulse mode taken from `problem.pulse`.
pub fn pulse_width_sweep<R: Real>(problem: &SweepProblem<R>, t_c: f64, tau_list: &[f64]) -> Result<SweepResult> {
    check_points(tau_list, "pulse-width")?;
    let spec = CycleSpec::with_cycle_time(problem.group.clone(), R::lit(t_c))?;
    let values = tau_list
        .par_iter()
        .map(|&tau| {
            let pulse = PulseShape::finite(R::lit(tau), problem.pulse.mode);
            final_infidelity(problem, spec.clone(), pulse)
        })
        .collect::<Result<Vec<_>>>()?;
    finish("tau", SweepMetric::FinalInfidelity, tau_list, values)
}
