//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion with the
//! measured quantities. Runs without the libtest harness so every line is
//! printed; the process fails if any criterion does.
//!
//! `cargo test -p decoupler-core --test acceptance`

use std::time::{Duration, Instant};

use decoupler_core::builtins::{self, Registry};
use decoupler_core::dynamics::{
    convergence_sweep, cycle_propagator, evolve_schedule, ideal_decoupled_state, pulse_width_sweep, simulate_events,
    BathModel, PulseMode, PulseShape, SimConfig, SweepMetric, SweepProblem,
};
use decoupler_core::operator::random::{random_hermitian, random_state, random_unitary, seeded_rng};
use decoupler_core::operator::{expm, plus_state, product_state, system_infidelity, Axis, Operator, StateVector};
use decoupler_core::program::{lie_closure, universality_audit, Control, ControlSchedule, CycleSpec, Window};
use decoupler_core::schedfmt::{self, flatten, parse, serialize, Arg, Ctor, Program, SchemeKw, WindowDecl};
use decoupler_core::symmetrize::{centralizer_basis, DecouplingGroup};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

type Op = Operator<f64>;
type Group = DecouplingGroup<f64>;

fn report(id: u32, name: &str, pass: bool, detail: String, elapsed: Duration, budget: Option<Duration>) -> bool {
    let within = budget.is_none_or(|b| elapsed <= b);
    let ok = pass && within;
    let budget_text = budget.map(|b| format!(" (budget {:.0}s)", b.as_secs_f64())).unwrap_or_default();
    println!(
        "[{}] criterion {id:>2}: {name} | {detail} | {:.2}s{budget_text}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    ok
}

fn minus_i(h: &Op, t: f64) -> Op {
    h.scale(Complex64::new(0.0, -t))
}

fn inner(a: &Op, b: &Op) -> Complex64 {
    a.hs_inner(b)
}

/// Orthonormal basis of the commutant `{X : [X, g] = 0 ∀g}`, computed as the
/// null space of the stacked commutator superoperators. Independent of the
/// group-average projector.
fn commutant_basis(group: &Group) -> Vec<DMatrix<Complex64>> {
    let d = group.dim();
    let n = d * d;
    let mut rows = DMatrix::<Complex64>::zeros(n * group.order(), n);
    for (k, g) in group.elements().iter().enumerate() {
        // vec(XG − GX) with row-major vec: (𝟙 ⊗ Gᵀ − G ⊗ 𝟙) vec(X)
        let gm = g.matrix();
        for i in 0..d {
            for j in 0..d {
                let row = k * n + i * d + j;
                for l in 0..d {
                    rows[(row, i * d + l)] += gm[(l, j)];
                    rows[(row, l * d + j)] -= gm[(i, l)];
                }
            }
        }
    }
    let gram = rows.adjoint() * &rows;
    let eig = nalgebra::SymmetricEigen::new(gram);
    (0..n)
        .filter(|&k| eig.eigenvalues[k].abs() < 1e-9)
        .map(|k| DMatrix::from_fn(d, d, |i, j| eig.eigenvectors[(i * d + j, k)]))
        .collect()
}

fn commutant_projection(basis: &[DMatrix<Complex64>], h: &Op) -> Op {
    let d = h.dim();
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    for b in basis {
        let coeff = b.dotc(h.matrix());
        out += b * coeff;
    }
    Op::from_matrix(out).unwrap()
}

fn criterion_01_projector_laws() -> bool {
    let start = Instant::now();
    let groups: Vec<(&str, Group)> = vec![
        ("spin_echo", builtins::spin_echo()),
        ("collective_pauli(1)", builtins::collective_pauli(1).unwrap()),
        ("collective_pauli(2)", builtins::collective_pauli(2).unwrap()),
        ("collective_pauli(3)", builtins::collective_pauli(3).unwrap()),
        ("full_pauli(1)", builtins::full_pauli(1).unwrap()),
        ("full_pauli(2)", builtins::full_pauli(2).unwrap()),
    ];
    let mut rng = seeded_rng(101);
    let mut worst = [0.0f64; 5];
    let mut count = 0;
    let oracles: Vec<_> = groups.iter().map(|(_, g)| commutant_basis(g)).collect();
    for k in 0..200 {
        let (_, g) = &groups[k % groups.len()];
        let basis = &oracles[k % groups.len()];
        let d = g.dim();
        let h = random_hermitian::<f64>(d, &mut rng);
        let y = random_hermitian::<f64>(d, &mut rng);
        let ph = g.project(&h).unwrap();
        let py = g.project(&y).unwrap();
        worst[0] = worst[0].max((&g.project(&ph).unwrap() - &ph).hs_norm());
        worst[1] = worst[1].max((ph.trace() - h.trace()).norm());
        worst[2] = worst[2].max((inner(&y, &ph) - inner(&py, &h)).norm());
        worst[3] = worst[3].max(g.centralizer_defect(&ph));
        worst[4] = worst[4].max((&ph - &commutant_projection(basis, &h)).hs_norm());
        count += 1;
    }
    let pass = worst.iter().all(|w| *w < 1e-10);
    report(
        1,
        "projector laws",
        pass,
        format!(
            "{count} draws over d∈{{2,4,8}}; max idempotence {:.1e}, trace {:.1e}, self-adjoint {:.1e}, centralizer {:.1e}, vs commutant oracle {:.1e} (tol 1e-10)",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
        start.elapsed(),
        Some(Duration::from_secs(10)),
    )
}

fn criterion_02_worked_correctability() -> bool {
    let start = Instant::now();
    let mut detail = Vec::new();
    let mut pass = true;
    for k in 1..=3 {
        let g = builtins::collective_pauli::<f64>(k).unwrap();
        let errors = builtins::error_space::<f64>(&[Ctor::call("independent", vec![Arg::Number(k as f64)])]).unwrap();
        let c = errors.correctability(&g, 1e-12).unwrap();
        let worst = c.residuals.iter().cloned().fold(0.0, f64::max);
        pass &= c.correctable && errors.len() == 3 * k && worst < 1e-12;
        detail.push(format!("K={k}: {} generators, max residual {worst:.1e}", errors.len()));
    }
    let basis = centralizer_basis(&builtins::full_pauli::<f64>(1).unwrap());
    let id_overlap = (basis[0].hs_inner(&Op::identity(2)).norm() - 2f64.sqrt()).abs();
    pass &= basis.len() == 1 && id_overlap < 1e-12;
    detail.push(format!("full_pauli(1) centralizer basis size {}", basis.len()));
    report(2, "worked correctability", pass, detail.join("; "), start.elapsed(), Some(Duration::from_secs(1)))
}

fn criterion_03_twisting_identity() -> bool {
    let start = Instant::now();
    let mut rng = seeded_rng(303);
    let groups: Vec<Group> = vec![
        builtins::spin_echo(),
        builtins::collective_pauli(1).unwrap(),
        builtins::collective_pauli(2).unwrap(),
        builtins::full_pauli(2).unwrap(),
        builtins::collective_pauli(3).unwrap(),
    ];
    let double = &builtins::rotation::<f64>(2, 1, Axis::Y, std::f64::consts::FRAC_PI_4).unwrap()
        * &builtins::rotation(2, 2, Axis::X, std::f64::consts::FRAC_PI_4).unwrap();
    let mut worst = 0.0f64;
    for k in 0..100 {
        let (g, p) = if k == 0 {
            (builtins::collective_pauli(2).unwrap(), double.clone())
        } else {
            let g = groups[k % groups.len()].clone();
            let p = random_unitary::<f64>(g.dim(), &mut rng);
            (g, p)
        };
        let h = random_hermitian::<f64>(g.dim(), &mut rng);
        let lhs = g.twist(&p).unwrap().project(&h.conjugate_by(&p)).unwrap();
        let rhs = g.project(&h).unwrap().conjugate_by(&p);
        worst = worst.max((&lhs - &rhs).hs_norm());
    }
    let g2 = builtins::collective_pauli::<f64>(2).unwrap();
    let linear = builtins::error_space::<f64>(&[Ctor::call("independent", vec![Arg::Number(2.0)])]).unwrap();
    let preserved = linear.preserved_by(&double, 1e-10);
    let twisted = linear.correctability(&g2.twist(&double).unwrap(), 1e-10).unwrap();
    let pass = worst < 1e-10 && preserved && twisted.correctable;
    report(
        3,
        "twisting identity",
        pass,
        format!(
            "100 (H,P) pairs incl. double π/2 pulse: max deviation {worst:.1e} (tol 1e-10); P†EP = E: {preserved}; twisted group corrects independent(2): {}",
            twisted.correctable
        ),
        start.elapsed(),
        Some(Duration::from_secs(5)),
    )
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

fn criterion_04_average_hamiltonian_convergence() -> bool {
    let start = Instant::now();
    let mut rng = seeded_rng(404);
    let h = random_hermitian::<f64>(4, &mut rng);
    let problem = SweepProblem {
        group: builtins::collective_pauli(2).unwrap(),
        hamiltonian: h,
        system_dim: 4,
        initial_state: random_state(4, &mut rng),
        total_time: 1.0,
        pulse: PulseShape::ideal(),
    };
    let grid = log_grid(1e-3, 1e-1, 9);
    let residual = convergence_sweep(&problem, SweepMetric::AvgHamiltonianResidual, &grid).unwrap();
    let defect = convergence_sweep(&problem, SweepMetric::CycleDefect, &grid).unwrap();
    let pass = (residual.fitted_slope - 1.0).abs() <= 0.2 && (defect.fitted_slope - 2.0).abs() <= 0.2;
    report(
        4,
        "average-Hamiltonian convergence",
        pass,
        format!(
            "residual slope {:.3} (want 1.0±0.2), per-cycle defect slope {:.3} (want 2.0±0.2) over T_c∈[1e-3,1e-1]",
            residual.fitted_slope, defect.fitted_slope
        ),
        start.elapsed(),
        Some(Duration::from_secs(30)),
    )
}

fn criterion_05_exact_spin_echo() -> bool {
    let start = Instant::now();
    let mut rng = seeded_rng(505);
    let b = random_hermitian::<f64>(4, &mut rng);
    let bath = BathModel::new(2, Op::zeros(4), vec![(Op::pauli(Axis::Z), b)]).unwrap();
    let h = bath.joint_hamiltonian(&Op::zeros(2)).unwrap();
    let spec = CycleSpec::new(builtins::spin_echo(), 0.5).unwrap();
    let u = cycle_propagator(&spec, &h, &PulseShape::ideal()).unwrap();
    let phase = u.trace() / Complex64::new(u.trace().norm(), 0.0);
    let dev = (&u - &Op::identity(8).scale(phase)).max_abs();
    report(
        5,
        "exact spin echo",
        dev < 1e-10,
        format!("Δt = 0.5, ‖U(T_c) − e^{{iφ}}𝟙‖_max = {dev:.1e} (tol 1e-10)"),
        start.elapsed(),
        None,
    )
}

struct DephasingSetup {
    h: Op,
    psi0: StateVector<f64>,
}

/// 1 system qubit + 2 bath qubits, ‖H_B‖ = 1, dephasing coupling of norm 0.5.
fn dephasing_setup() -> DephasingSetup {
    let bath = BathModel::<f64>::random_spin_bath(1, 2, 0.5, false, 606).unwrap();
    assert!((bath.tau_c() - 1.0).abs() < 1e-12);
    let h = bath.joint_hamiltonian(&Op::zeros(2)).unwrap();
    let bath_state = random_state::<f64>(4, &mut seeded_rng(607));
    DephasingSetup { h, psi0: product_state(&[plus_state(), bath_state]) }
}

fn criterion_06_decoherence_suppression() -> bool {
    let start = Instant::now();
    let setup = dephasing_setup();
    let total = 5.0;
    let echo = builtins::spin_echo::<f64>();

    let spec = CycleSpec::with_cycle_time(echo.clone(), 0.01).unwrap();
    let n = 500;
    let ideal = ideal_decoupled_state(&spec, &setup.h, &setup.psi0, n).unwrap();
    let cfg = SimConfig::new(spec, n, setup.psi0.clone());
    let decoupled = evolve_schedule(&cfg, &setup.h, &ControlSchedule::empty()).unwrap();
    let inf_dd = system_infidelity(decoupled.final_state(), &ideal, 2).unwrap();
    let free = expm(&minus_i(&setup.h, total)).unwrap().apply(&setup.psi0);
    let inf_free = system_infidelity(&free, &ideal, 2).unwrap();

    let problem = SweepProblem {
        group: echo,
        hamiltonian: setup.h.clone(),
        system_dim: 2,
        initial_state: setup.psi0.clone(),
        total_time: total,
        pulse: PulseShape::ideal(),
    };
    let sweep = convergence_sweep(&problem, SweepMetric::FinalInfidelity, &[0.005, 0.01, 0.02, 0.05, 0.1]).unwrap();
    let ratio = inf_free / inf_dd;
    let pass = ratio >= 100.0 && sweep.fitted_slope >= 0.8;
    report(
        6,
        "decoherence suppression",
        pass,
        format!(
            "T=5, τ_c=1: free infidelity {inf_free:.3e}, echo at T_c=0.01 {inf_dd:.3e}, ratio {ratio:.1} (want ≥100); slope over T_c∈[0.005,0.1] {:.3} (want ≥0.8)",
            sweep.fitted_slope
        ),
        start.elapsed(),
        Some(Duration::from_secs(60)),
    )
}

fn criterion_07_drift_schemes() -> bool {
    let start = Instant::now();
    let mut rng = seeded_rng(707);
    let coeffs: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
    let h0: Op = Axis::ALL.iter().zip(&coeffs).map(|(&a, &c)| Op::pauli(a).scale_re(c)).sum();
    let h = h0.scale_re(1.0 / h0.spectral_norm());
    let b = Op::pauli(Axis::X);
    let psi0 = random_state::<f64>(2, &mut rng);
    let total = 1.0;
    let group = builtins::collective_pauli::<f64>(1).unwrap();

    let run = |control: Control<f64>, t_c: f64| -> f64 {
        let spec = CycleSpec::with_cycle_time(group.clone(), t_c).unwrap();
        let n = (total / t_c).round() as usize;
        let window = Window::new(control.clone(), n).unwrap();
        let cfg = SimConfig::new(spec, n, psi0.clone());
        let traj = evolve_schedule(&cfg, &h, &ControlSchedule::new(vec![window])).unwrap();
        let strength = if matches!(control, Control::DriftIdentityFrame { .. }) { 0.25 } else { 1.0 };
        let target = expm(&minus_i(&b, strength * total)).unwrap().apply(&psi0);
        (traj.final_state() - &target).norm()
    };
    let t0 = 0.04;
    let mut detail = Vec::new();
    let mut pass = true;
    for (name, control) in [
        ("identity-frame → exp(−iBT/4)", Control::DriftIdentityFrame { b: b.clone() }),
        ("strength-restored → exp(−iBT)", Control::DriftStrengthRestored { b: b.clone() }),
    ] {
        let errs: Vec<f64> = [t0, t0 / 2.0, t0 / 4.0].iter().map(|&t| run(control.clone(), t)).collect();
        let r1 = errs[0] / errs[1];
        let r2 = errs[1] / errs[2];
        pass &= (r1 - 2.0).abs() <= 0.4 && (r2 - 2.0).abs() <= 0.4;
        detail.push(format!(
            "{name}: errors {:.2e}/{:.2e}/{:.2e}, halving ratios {r1:.3}, {r2:.3}",
            errs[0], errs[1], errs[2]
        ));
    }
    report(7, "drift schemes", pass, format!("{} (want 2±20%)", detail.join("; ")), start.elapsed(), None)
}

fn criterion_08_universality_checker() -> bool {
    let start = Instant::now();
    let x = lie_closure(&[Op::pauli(Axis::X)], None).unwrap();
    let xz = lie_closure(&[Op::pauli(Axis::X), Op::pauli(Axis::Z)], None).unwrap();
    let heis = builtins::heisenberg::<f64>(2, 1, 2).unwrap();
    let local =
        lie_closure(&[heis.clone(), Op::pauli_on(2, 1, Axis::X).unwrap(), Op::pauli_on(2, 1, Axis::Z).unwrap()], None)
            .unwrap();
    let slow_only = universality_audit(&builtins::collective_pauli(2).unwrap(), &[heis], &[]).unwrap();
    let pass = x.closure_dimension == 1
        && !x.universal
        && xz.closure_dimension == 3
        && xz.universal
        && local.closure_dimension == 15
        && local.universal
        && !slow_only.universal;
    report(
        8,
        "universality checker",
        pass,
        format!(
            "{{σx}} dim {} universal {}; {{σx,σz}} dim {} universal {}; {{heis,σx¹,σz¹}} dim {} universal {}; slow heis under collective_pauli(2) universal {}",
            x.closure_dimension,
            x.universal,
            xz.closure_dimension,
            xz.universal,
            local.closure_dimension,
            local.universal,
            slow_only.universal
        ),
        start.elapsed(),
        Some(Duration::from_secs(5)),
    )
}

fn random_number(rng: &mut impl Rng) -> f64 {
    match rng.random_range(0..3) {
        0 => rng.random_range(1..1000) as f64,
        1 => rng.random_range(1e-4..10.0),
        _ => rng.random_range(-5.0..5.0f64) * 10f64.powi(rng.random_range(-8..8)),
    }
}

fn random_axis(rng: &mut impl Rng) -> Arg {
    Arg::Ident(Axis::ALL[rng.random_range(0..3)].name().to_string())
}

fn random_operator_ctor(rng: &mut impl Rng, k: usize) -> Ctor {
    let site = |rng: &mut dyn rand::RngCore| Arg::Number(rng.random_range(1..=k) as f64);
    match rng.random_range(0..6) {
        0 => Ctor::call("pauli", vec![site(rng), random_axis(rng)]),
        1 => Ctor::call("heisenberg", vec![Arg::Number(1.0), Arg::Number(2.0)]),
        2 => {
            let letters: String = (0..k).map(|_| ['i', 'x', 'y', 'z'][rng.random_range(0..4)]).collect();
            Ctor::call("pauli_string", vec![Arg::Ident(letters)])
        }
        3 => Ctor::call("rot", vec![site(rng), random_axis(rng), Arg::Number(random_number(rng))]),
        4 => Ctor::bare("zero"),
        _ => Ctor::bare("identity"),
    }
}

/// Syntactically valid program over the builtin vocabulary.
fn random_program(rng: &mut impl Rng) -> Program {
    let k = rng.random_range(2..=3);
    let group = match rng.random_range(0..4) {
        0 => Ctor::call("collective_pauli", vec![Arg::Number(k as f64)]),
        1 => Ctor::call("full_pauli", vec![Arg::Number(rng.random_range(1..=2) as f64)]),
        2 => Ctor::bare("spin_echo"),
        _ => Ctor::call("identity", vec![Arg::Number(k as f64)]),
    };
    let errors = (0..rng.random_range(0..3))
        .map(|_| {
            Ctor::call(["independent", "collective", "dephasing"][rng.random_range(0..3)], vec![Arg::Number(k as f64)])
        })
        .collect();
    let windows = (0..rng.random_range(0..5))
        .map(|_| {
            let scheme = SchemeKw::ALL[rng.random_range(0..4)];
            WindowDecl {
                scheme,
                pulse: scheme.needs_pulse().then(|| random_operator_ctor(rng, k)),
                hamiltonian: random_operator_ctor(rng, k),
                cycles: rng.random_range(0..10_000),
            }
        })
        .collect();
    Program { group, dt: random_number(rng).abs(), errors, windows }
}

/// Semantically valid program together with a system Hamiltonian and bath
/// size, for the flatten-vs-evolve comparison.
fn random_runnable(rng: &mut impl Rng) -> (String, usize) {
    let dt = [0.05, 0.1, 0.125, 0.2][rng.random_range(0..4)];
    let mut windows = Vec::new();
    let (header, k) = match rng.random_range(0..3) {
        0 => (format!("group spin_echo; dt {dt}; errors dephasing(1);"), 1),
        1 => (format!("group collective_pauli(2); dt {dt}; errors independent(2);"), 2),
        _ => (format!("group collective_pauli(1); dt {dt};"), 1),
    };
    for _ in 0..rng.random_range(0..4) {
        let cycles = rng.random_range(1..4);
        let theta = rng.random_range(0.1..1.2);
        let site = rng.random_range(1..=k);
        let axis = ["x", "y", "z"][rng.random_range(0..3)];
        let w = match (rng.random_range(0..4), k) {
            (0, 2) => format!("window slow A=heisenberg(1,2) cycles={cycles};"),
            (0, _) => format!("window slow A=identity cycles={cycles};"),
            (1, 2) => format!("window twisted P=double_pi2(1,y,2,x) A=heisenberg(1,2) cycles={cycles};"),
            (1, _) => format!("window twisted P=rot(1,{axis},{theta}) A=zero cycles={cycles};"),
            (2, _) => format!("window drift_identity B=pauli({site},{axis}) cycles={cycles};"),
            _ => format!("window drift_restored B=rot(1,z,0) cycles={cycles};"),
        };
        windows.push(w);
    }
    (format!("{header}\n{}", windows.join("\n")), k)
}

fn criterion_09_schedfmt_round_trip_and_oracle() -> bool {
    let start = Instant::now();
    let mut rng = seeded_rng(909);
    let mut stable = 0;
    for _ in 0..500 {
        let p = random_program(&mut rng);
        let text = serialize(&p);
        let parsed = parse(&text).unwrap_or_else(|d| panic!("{d}\n{text}"));
        if parsed.program == p && serialize(&parsed.program) == text {
            stable += 1;
        }
    }

    let mut worst = 0.0f64;
    let mut runs = 0;
    while runs < 20 {
        let (src, k) = random_runnable(&mut rng);
        let compiled = match schedfmt::load::<f64>(&src, &Registry::new()) {
            Ok(c) => c,
            Err(e) => panic!("generated program rejected: {e}\n{src}"),
        };
        let bath_qubits = rng.random_range(0..=1);
        let dim = (1 << k) << bath_qubits;
        let h = random_hermitian::<f64>(dim, &mut rng);
        let psi0 = random_state::<f64>(dim, &mut rng);
        let n_total = compiled.schedule.total_cycles() + rng.random_range(1..3);
        let pulse = if runs % 4 == 3 {
            PulseShape::finite(compiled.spec.delta_t() * 0.1, PulseMode::HamiltonianOn)
        } else {
            PulseShape::ideal()
        };
        let events = flatten(&compiled, &h, n_total, &pulse).unwrap();
        assert!(events.cyclicity_defect() < 1e-10);
        let via_events = simulate_events(&events, &psi0).unwrap();
        let cfg = SimConfig::new(compiled.spec.clone(), n_total, psi0).with_pulse(pulse);
        let traj = evolve_schedule(&cfg, &h, &compiled.schedule).unwrap();
        worst = worst.max((traj.final_state() - &via_events).norm());
        runs += 1;
    }
    let pass = stable == 500 && worst < 1e-10;
    report(
        9,
        "schedfmt round-trip and oracle equivalence",
        pass,
        format!(
            "{stable}/500 programs byte-stable; 20 flattened runs max ‖ψ_events − ψ_evolve‖ = {worst:.1e} (tol 1e-10)"
        ),
        start.elapsed(),
        None,
    )
}

fn criterion_10_finite_pulse_width() -> bool {
    let start = Instant::now();
    let setup = dephasing_setup();
    let problem = SweepProblem {
        group: builtins::spin_echo(),
        hamiltonian: setup.h.clone(),
        system_dim: 2,
        initial_state: setup.psi0.clone(),
        total_time: 5.0,
        pulse: PulseShape::finite(0.0, PulseMode::HamiltonianOn),
    };
    let taus = [1e-4, 2e-4, 5e-4, 1e-3, 2e-3];
    let sweep = pulse_width_sweep(&problem, 0.01, &taus).unwrap();
    let values: Vec<String> = sweep.rows.iter().map(|r| format!("{:.2e}", r.value)).collect();
    let pass = (sweep.fitted_slope - 1.0).abs() <= 0.3;
    report(
        10,
        "finite pulse width",
        pass,
        format!(
            "T_c=0.01, τ∈[1e-4,2e-3]: infidelities [{}], slope {:.3} (want 1.0±0.3)",
            values.join(", "),
            sweep.fitted_slope
        ),
        start.elapsed(),
        None,
    )
}

fn main() {
    let criteria: [fn() -> bool; 10] = [
        criterion_01_projector_laws,
        criterion_02_worked_correctability,
        criterion_03_twisting_identity,
        criterion_04_average_hamiltonian_convergence,
        criterion_05_exact_spin_echo,
        criterion_06_decoherence_suppression,
        criterion_07_drift_schemes,
        criterion_08_universality_checker,
        criterion_09_schedfmt_round_trip_and_oracle,
        criterion_10_finite_pulse_width,
    ];
    let mut failed = Vec::new();
    for (k, criterion) in criteria.iter().enumerate() {
        let ok = std::panic::catch_unwind(criterion).unwrap_or_else(|_| {
            println!("[FAIL] criterion {:>2}: panicked", k + 1);
            false
        });
        if !ok {
            failed.push(k + 1);
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        println!("failed: {failed:?}");
        std::process::exit(1);
    }
}
