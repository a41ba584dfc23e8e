//! Finite-cycle-time simulation of decoupled dynamics.
//!
//! Everything here is exact joint unitary evolution of a system coupled to
//! an explicit finite bath. The system is always the left tensor factor, so a
//! system operator `X` acts on the joint space as `X ⊗ 𝟙_B`.

mod bath;
mod sweep;

use crate::error::{Error, Result};
use crate::operator::{expm, logm_principal, Operator, StateVector};
use crate::program::{pulses_from_group, Control, ControlSchedule, CycleSpec};
use crate::scalar::{c, Real};
use crate::schedfmt::{EventKind, EventList};
use crate::symmetrize::DecouplingGroup;

pub use bath::BathModel;
pub use sweep::{convergence_sweep, loglog_fit, pulse_width_sweep, SweepMetric, SweepProblem, SweepResult, SweepRow};

/// Norm drift beyond which a trajectory is rejected.
pub const NORM_DRIFT_LIMIT: f64 = 1e-8;

/// Whether the free Hamiltonian stays on while a finite-width pulse runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PulseMode {
    #[default]
    HamiltonianOn,
    HamiltonianOff,
}

/// Pulse duration `τ` (zero for ideal bang-bang pulses) and mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseShape<R: Real> {
    pub width: R,
    pub mode: PulseMode,
}

impl<R: Real> PulseShape<R> {
    pub fn ideal() -> Self {
        Self { width: R::zero(), mode: PulseMode::HamiltonianOn }
    }

    pub fn finite(width: R, mode: PulseMode) -> Self {
        Self { width, mode }
    }

    pub fn is_ideal(&self) -> bool {
        self.width == R::zero()
    }

    fn check(&self, delta_t: R) -> Result<()> {
        if !(self.width >= R::zero()) || !self.width.is_finite() {
            return Err(Error::Argument(format!("pulse width must be non-negative, got {}", self.width)));
        }
        if self.width >= delta_t {
            return Err(Error::Argument(format!(
                "pulse width {} must be shorter than the subinterval {delta_t}",
                self.width
            )));
        }
        Ok(())
    }
}

impl<R: Real> Default for PulseShape<R> {
    fn default() -> Self {
        Self::ideal()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig<R: Real> {
    pub spec: CycleSpec<R>,
    pub n_cycles: usize,
    pub pulse: PulseShape<R>,
    pub initial_state: StateVector<R>,
}

impl<R: Real> SimConfig<R> {
    pub fn new(spec: CycleSpec<R>, n_cycles: usize, initial_state: StateVector<R>) -> Self {
        Self { spec, n_cycles, pulse: PulseShape::ideal(), initial_state }
    }

    pub fn with_pulse(mut self, pulse: PulseShape<R>) -> Self {
        self.pulse = pulse;
        self
    }

    pub fn total_time(&self) -> R {
        R::from_usize(self.n_cycles).unwrap() * self.spec.cycle_time()
    }

    fn check(&self, joint_dim: usize) -> Result<()> {
        if self.n_cycles == 0 {
            return Err(Error::Argument("n_cycles must be at least 1".into()));
        }
        self.pulse.check(self.spec.delta_t())?;
        if self.initial_state.len() != joint_dim {
            return Err(Error::DimensionMismatch { expected: joint_dim, found: self.initial_state.len() });
        }
        let drift = (self.initial_state.norm() - R::one()).abs();
        if drift > R::tol(1e-9) {
            return Err(Error::Argument(format!("initial state is not normalized (‖ψ‖ − 1 = {drift:e})")));
        }
        Ok(())
    }
}

/// Dimensionless pulse generator `G` with `expm(−iG) = D` up to a global
/// phase, so a pulse of width `τ` is driven by `G/τ`.
///
/// The phase is chosen to put the widest gap of `D`'s eigenphases on the
/// branch cut, which keeps the logarithm well defined for every unitary.
pub fn pulse_generator<R: Real>(d: &Operator<R>) -> Result<Operator<R>> {
    let eig = crate::operator::unitary_eigen(d)?;
    let two_pi = std::f64::consts::TAU;
    let mut phases: Vec<f64> = eig.phases.iter().map(|p| p.as_f64().rem_euclid(two_pi)).collect();
    phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut best = (two_pi - phases[phases.len() - 1] + phases[0], phases[phases.len() - 1]);
    for w in phases.windows(2) {
        if w[1] - w[0] > best.0 + 1e-12 {
            best = (w[1] - w[0], w[0]);
        }
    }
    let mid = best.1 + best.0 / 2.0;
    let shift = std::f64::consts::PI - mid;
    let rotated = d.scale(c(shift.cos(), shift.sin()));
    Ok(logm_principal(&rotated)?.scale(c(0.0, 1.0)))
}

/// Lab-frame Hamiltonian during each subinterval of a cycle under `control`.
///
/// `group`, `h` and the control operands must already share one dimension.
pub(crate) fn segment_hamiltonians<R: Real>(
    group: &DecouplingGroup<R>,
    h: &Operator<R>,
    control: Option<&Control<R>>,
) -> Vec<Operator<R>> {
    let n = group.order();
    match control {
        None => vec![h.clone(); n],
        Some(Control::ParallelSlow { a }) | Some(Control::TwistedSlow { a, .. }) => vec![h + a; n],
        Some(Control::DriftIdentityFrame { b }) => {
            let mut segs = vec![h.clone(); n];
            segs[0] = h + b;
            segs
        }
        Some(Control::DriftStrengthRestored { b }) => {
            group.elements().iter().map(|g| h + &b.conjugate_by(&g.adjoint())).collect()
        }
    }
}

/// The pulses of one cycle as they act on the joint space, with their
/// finite-width generators when `τ > 0`.
pub(crate) struct PulseTrain<R: Real> {
    pub unitaries: Vec<Operator<R>>,
    pub generators: Option<Vec<Operator<R>>>,
}

impl<R: Real> PulseTrain<R> {
    pub(crate) fn new(spec: &CycleSpec<R>, joint_dim: usize, pulse: &PulseShape<R>) -> Result<Self> {
        let system = pulses_from_group(spec);
        let generators = if pulse.is_ideal() {
            None
        } else {
            Some(
                system
                    .iter()
                    .map(|d| pulse_generator(d).and_then(|g| g.lift_to(joint_dim)))
                    .collect::<Result<Vec<_>>>()?,
            )
        };
        let unitaries = system.iter().map(|d| d.lift_to(joint_dim)).collect::<Result<Vec<_>>>()?;
        Ok(Self { unitaries, generators })
    }

    /// Propagator of pulse `j` (the one closing subinterval `j`).
    pub(crate) fn propagator(&self, j: usize, segment: &Operator<R>, pulse: &PulseShape<R>) -> Result<Operator<R>> {
        match &self.generators {
            None => Ok(self.unitaries[j].clone()),
            Some(gens) => expm(&pulse_exponent(&gens[j], segment, pulse)),
        }
    }
}

/// `−i(G_j + τ·H)` (or `−iG_j` with the Hamiltonian off) for a finite pulse.
pub(crate) fn pulse_exponent<R: Real>(
    generator: &Operator<R>,
    segment: &Operator<R>,
    pulse: &PulseShape<R>,
) -> Operator<R> {
    let total = match pulse.mode {
        PulseMode::HamiltonianOn => generator + &segment.scale_re(pulse.width),
        PulseMode::HamiltonianOff => generator.clone(),
    };
    total.scale(c(0.0, -1.0))
}

fn evolution<R: Real>(h: &Operator<R>, t: R) -> Result<Operator<R>> {
    expm(&h.scale(num_complex::Complex::new(R::zero(), -t)))
}

fn cycle_from_segments<R: Real>(
    spec: &CycleSpec<R>,
    segments: &[Operator<R>],
    train: &PulseTrain<R>,
    pulse: &PulseShape<R>,
) -> Result<Operator<R>> {
    let free = spec.delta_t() - pulse.width;
    let mut u = Operator::identity(segments[0].dim());
    for (j, seg) in segments.iter().enumerate() {
        u = &evolution(seg, free)? * &u;
        u = &train.propagator(j, seg, pulse)? * &u;
    }
    Ok(u)
}

/// Propagator of one decoupling cycle, `U(T_c) = Π_j g_j† U_0(Δt) g_j`
/// (`j = 0` acting first).
///
/// `h` may live on a system-bath space; the group is lifted to it. With a
/// finite pulse width each subinterval runs freely for `Δt − τ` and then the
/// pulse is driven for `τ`.
pub fn cycle_propagator<R: Real>(spec: &CycleSpec<R>, h: &Operator<R>, pulse: &PulseShape<R>) -> Result<Operator<R>> {
    controlled_cycle_propagator(spec, h, None, pulse)
}

/// Cycle propagator with a window control switched on (excluding the
/// bracketing pulses of a twisted window).
pub fn controlled_cycle_propagator<R: Real>(
    spec: &CycleSpec<R>,
    h: &Operator<R>,
    control: Option<&Control<R>>,
    pulse: &PulseShape<R>,
) -> Result<Operator<R>> {
    h.ensure_hermitian(R::tol(1e-10), "Hamiltonian")?;
    pulse.check(spec.delta_t())?;
    let dim = h.dim();
    let lifted = spec.lift_to(dim)?;
    let control = control.map(|c| c.lift_to(dim)).transpose()?;
    let segments = segment_hamiltonians(lifted.group(), h, control.as_ref());
    let train = PulseTrain::new(spec, dim, pulse)?;
    cycle_from_segments(spec, &segments, &train, pulse)
}

/// `H_avg = i·logm(U)/T_c`.
pub fn extract_avg_hamiltonian<R: Real>(u: &Operator<R>, t_c: R) -> Result<Operator<R>> {
    if !(t_c > R::zero()) {
        return Err(Error::Argument(format!("cycle time must be positive, got {t_c}")));
    }
    let l = logm_principal(u)?;
    Ok(l.scale(c(0.0, 1.0)).scale_re(R::one() / t_c).hermitian_part())
}

/// States at every cycle boundary, starting with the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<R: Real> {
    pub cycle_time: R,
    pub states: Vec<StateVector<R>>,
}

impl<R: Real> Trajectory<R> {
    pub fn final_state(&self) -> &StateVector<R> {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn times(&self) -> Vec<R> {
        (0..self.states.len()).map(|k| R::from_usize(k).unwrap() * self.cycle_time).collect()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

fn check_norm<R: Real>(psi: &StateVector<R>, cycle: usize) -> Result<()> {
    let drift = (psi.norm() - R::one()).abs();
    if drift > R::tol(NORM_DRIFT_LIMIT) {
        return Err(Error::NumericalIntegrity(format!("state norm drifted by {drift:e} after cycle {cycle}")));
    }
    Ok(())
}

/// Evolve under the decoupler and a control schedule for `cfg.n_cycles`
/// cycles, sampling the state stroboscopically.
///
/// Windows run back to back from `t = 0`; cycles after the last window are
/// plain decoupling. A twisted window applies `P` (ideal) before its first
/// cycle and `P†` after its last.
pub fn evolve_schedule<R: Real>(
    cfg: &SimConfig<R>,
    h_total: &Operator<R>,
    schedule: &ControlSchedule<R>,
) -> Result<Trajectory<R>> {
    let dim = h_total.dim();
    cfg.check(dim)?;
    h_total.ensure_hermitian(R::tol(1e-10), "Hamiltonian")?;
    schedule.check(&cfg.spec, None)?;
    if schedule.total_cycles() > cfg.n_cycles {
        return Err(Error::Bounds(format!(
            "windows span {} cycles but the run has only {}",
            schedule.total_cycles(),
            cfg.n_cycles
        )));
    }
    let lifted = cfg.spec.lift_to(dim)?;
    let train = PulseTrain::new(&cfg.spec, dim, &cfg.pulse)?;

    let mut psi = cfg.initial_state.clone();
    let mut states = Vec::with_capacity(cfg.n_cycles + 1);
    states.push(psi.clone());
    let mut cycle = 0;

    let plain = Window { control: None, cycles: cfg.n_cycles - schedule.total_cycles() };
    let windows = schedule
        .windows()
        .iter()
        .map(|w| Ok(Window { control: Some(w.control.lift_to(dim)?), cycles: w.cycles }))
        .collect::<Result<Vec<_>>>()?;

    for w in windows.iter().chain(std::iter::once(&plain)) {
        if w.cycles == 0 {
            continue;
        }
        let segments = segment_hamiltonians(lifted.group(), h_total, w.control.as_ref());
        let u = cycle_from_segments(&cfg.spec, &segments, &train, &cfg.pulse)?;
        let frame = w.control.as_ref().and_then(|c| c.pulse());
        if let Some(p) = frame {
            psi = p.apply(&psi);
        }
        for k in 0..w.cycles {
            psi = u.apply(&psi);
            if k + 1 == w.cycles {
                if let Some(p) = frame {
                    psi = p.adjoint().apply(&psi);
                }
            }
            cycle += 1;
            check_norm(&psi, cycle)?;
            states.push(psi.clone());
        }
    }
    Ok(Trajectory { cycle_time: cfg.spec.cycle_time(), states })
}

struct Window<R: Real> {
    control: Option<Control<R>>,
    cycles: usize,
}

/// `|tr(ρ_S(t)·O)|` at every sample, with `ρ_S` the bath-traced state.
pub fn coherence_metric<R: Real>(trajectory: &Trajectory<R>, observable: &Operator<R>) -> Result<Vec<R>> {
    let ds = observable.dim();
    trajectory
        .states
        .iter()
        .map(|psi| {
            let rho = crate::operator::partial_trace_bath(psi, ds)?;
            Ok((&rho * observable).trace().norm_sqr().sqrt())
        })
        .collect()
}

/// Ideal first-order evolution `exp(−iΠ_G(H)·T)|ψ₀⟩` with `T` a whole number
/// of cycles.
pub fn ideal_decoupled_state<R: Real>(
    spec: &CycleSpec<R>,
    h_total: &Operator<R>,
    initial: &StateVector<R>,
    n_cycles: usize,
) -> Result<StateVector<R>> {
    let group = spec.group().lift_to(h_total.dim())?;
    let h_eff = group.project(h_total)?;
    let t = R::from_usize(n_cycles).unwrap() * spec.cycle_time();
    Ok(evolution(&h_eff, t)?.apply(initial))
}

/// Execute an event list on `initial`, one event at a time.
pub fn simulate_events<R: Real>(events: &EventList<R>, initial: &StateVector<R>) -> Result<StateVector<R>> {
    let mut psi = initial.clone();
    for (k, e) in events.events.iter().enumerate() {
        let u = match &e.kind {
            EventKind::Segment { hamiltonian, duration } => evolution(hamiltonian, *duration)?,
            EventKind::Pulse { drive: Some(h), width, .. } => evolution(h, *width)?,
            EventKind::Pulse { unitary, .. } => unitary.clone(),
        };
        psi = u.apply(&psi);
        check_norm(&psi, k)?;
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::operator::random::{random_hermitian, random_state, seeded_rng};
    use crate::operator::{basis_state, plus_state, product_state, Axis};

    type Op = Operator<f64>;

    fn echo_spec(dt: f64) -> CycleSpec<f64> {
        CycleSpec::new(builtins::spin_echo(), dt).unwrap()
    }

    #[test]
    fn trivial_group_is_free_evolution() {
        let mut rng = seeded_rng(3);
        let h = random_hermitian::<f64>(3, &mut rng);
        let spec = CycleSpec::new(DecouplingGroup::trivial(3), 0.7).unwrap();
        let u = cycle_propagator(&spec, &h, &PulseShape::ideal()).unwrap();
        assert!(u.max_abs_diff(&evolution(&h, 0.7).unwrap()) < 1e-14);
    }

    #[test]
    fn exact_spin_echo_at_large_dt() {
        let h = Op::pauli(Axis::Z).kron(&Op::pauli(Axis::Z).scale_re(0.8));
        let u = cycle_propagator(&echo_spec(0.5), &h, &PulseShape::ideal()).unwrap();
        assert!(u.eq_up_to_phase(&Op::identity(4), 1e-12));
    }

    #[test]
    fn cycle_matches_conjugation_product() {
        let mut rng = seeded_rng(11);
        let h = random_hermitian::<f64>(4, &mut rng);
        let spec = CycleSpec::new(builtins::collective_pauli(2).unwrap(), 0.05).unwrap();
        let u0 = evolution(&h, 0.05).unwrap();
        let oracle = spec.group().elements().iter().fold(Op::identity(4), |acc, g| &u0.conjugate_by(g) * &acc);
        let u = cycle_propagator(&spec, &h, &PulseShape::ideal()).unwrap();
        assert!(u.max_abs_diff(&oracle) < 1e-13);
    }

    #[test]
    fn extract_round_trip() {
        let u = evolution(&Op::pauli(Axis::Z), 0.2).unwrap();
        let h = extract_avg_hamiltonian(&u, 0.2).unwrap();
        assert!(h.max_abs_diff(&Op::pauli(Axis::Z)) < 1e-9);
        assert!(extract_avg_hamiltonian(&Op::identity(2), 0.3).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn pulse_generators_reproduce_pulses() {
        let spec = CycleSpec::new(builtins::collective_pauli(2).unwrap(), 0.1).unwrap();
        for d in pulses_from_group(&spec) {
            let g = pulse_generator(&d).unwrap();
            assert!(g.is_hermitian(1e-10));
            let back = expm(&g.scale(c(0.0, -1.0))).unwrap();
            assert!(back.eq_up_to_phase(&d, 1e-10));
        }
        let g = pulse_generator(&Op::identity(2)).unwrap();
        assert!(g.max_abs() < 1e-12);
    }

    #[test]
    fn finite_pulse_width_validation() {
        let h = Op::pauli(Axis::Z);
        let spec = echo_spec(0.1);
        assert!(cycle_propagator(&spec, &h, &PulseShape::finite(0.1, PulseMode::HamiltonianOn)).is_err());
        let off = cycle_propagator(&spec, &Op::zeros(2), &PulseShape::finite(0.01, PulseMode::HamiltonianOff)).unwrap();
        assert!(off.eq_up_to_phase(&Op::identity(2), 1e-12));
    }

    #[test]
    fn empty_schedule_with_zero_hamiltonian() {
        let psi = random_state::<f64>(2, &mut seeded_rng(1));
        let cfg = SimConfig::new(CycleSpec::new(DecouplingGroup::trivial(2), 0.1).unwrap(), 5, psi.clone());
        let traj = evolve_schedule(&cfg, &Op::zeros(2), &ControlSchedule::empty()).unwrap();
        assert_eq!(traj.len(), 6);
        assert!((traj.final_state() - &psi).norm() < 1e-15);
    }

    #[test]
    fn spin_echo_preserves_coherence() {
        let h = Op::pauli(Axis::Z).kron(&Op::pauli(Axis::Z).scale_re(0.3));
        let psi0 = product_state(&[plus_state(), plus_state()]);
        let cfg = SimConfig::new(echo_spec(0.2), 20, psi0);
        let traj = evolve_schedule(&cfg, &h, &ControlSchedule::empty()).unwrap();
        let sigma_plus = Op::from_parts(&[vec![0.0, 1.0], vec![0.0, 0.0]], &[vec![0.0; 2], vec![0.0; 2]]).unwrap();
        let metric = coherence_metric(&traj, &sigma_plus).unwrap();
        for m in metric {
            assert!((m - 0.5).abs() < 1e-10);
        }
    }

    #[test]
    fn window_total_is_bounded() {
        let psi = basis_state::<f64>(2, 0);
        let cfg = SimConfig::new(echo_spec(0.1), 2, psi);
        let w = crate::program::Window::new(Control::DriftIdentityFrame { b: Op::pauli(Axis::X) }, 3).unwrap();
        let err = evolve_schedule(&cfg, &Op::zeros(2), &ControlSchedule::new(vec![w])).unwrap_err();
        assert!(matches!(err, Error::Bounds(_)));
    }

    #[test]
    fn twisted_window_is_conjugated_evolution() {
        let spec = CycleSpec::new(builtins::collective_pauli(2).unwrap(), 0.03).unwrap();
        let mut rng = seeded_rng(5);
        let h = random_hermitian::<f64>(4, &mut rng);
        let p = &builtins::rotation::<f64>(2, 1, Axis::Y, std::f64::consts::FRAC_PI_4).unwrap()
            * &builtins::rotation(2, 2, Axis::X, std::f64::consts::FRAC_PI_4).unwrap();
        let a = builtins::heisenberg(2, 1, 2).unwrap();
        let psi = random_state(4, &mut rng);
        let n = 7;
        let w = crate::program::Window::new(Control::TwistedSlow { p: p.clone(), a: a.clone() }, n).unwrap();
        let cfg = SimConfig::new(spec.clone(), n, psi.clone());
        let traj = evolve_schedule(&cfg, &h, &ControlSchedule::new(vec![w])).unwrap();

        // Same window seen as the twisted group acting on P†(H + A)P.
        let twisted = CycleSpec::new(spec.group().twist(&p).unwrap(), 0.03).unwrap();
        let v = cycle_propagator(&twisted, &(&h + &a).conjugate_by(&p), &PulseShape::ideal()).unwrap();
        let mut expected = psi;
        for _ in 0..n {
            expected = v.apply(&expected);
        }
        assert!((traj.final_state() - &expected).norm() < 1e-10);
    }
}
