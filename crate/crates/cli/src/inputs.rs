//! Turning command-line text and files into library objects.

use std::path::Path;

use anyhow::{anyhow, Context as _};
use decoupler_core::builtins::{self, Context, Registry};
use decoupler_core::dynamics::{BathModel, PulseMode, PulseShape};
use decoupler_core::interchange::{ErrorSpaceDoc, GroupDoc, ProgramDoc};
use decoupler_core::operator::random::{random_hermitian, random_state, seeded_rng};
use decoupler_core::operator::{basis_state, product_state, StateVector};
use decoupler_core::schedfmt::{self, parse_ctor, Compiled, Ctor};
use decoupler_core::{DecouplingGroup64, Error, ErrorSpace64, Operator64};
use num_complex::Complex64;

use crate::{Failure, InitialState, PhysicsArgs, PulseModeArg};

pub fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(Failure::invalid)
}

fn ctor(text: &str) -> Result<Ctor, Failure> {
    parse_ctor(text).map_err(|d| Failure::invalid(anyhow!("in '{text}': {d}")))
}

fn is_bare_identity(text: &str) -> bool {
    matches!(parse_ctor(text), Ok(c) if c.name == "identity" && c.args.is_empty())
}

/// Group from `--group` text or a `--group-json` document. A bare
/// `identity` takes its dimension from `hint`.
pub fn group(text: Option<&str>, json: Option<&Path>, hint: Option<usize>) -> Result<DecouplingGroup64, Failure> {
    let ctx = hint.map(Context::with_dim).unwrap_or_default();
    match (text, json) {
        (Some(t), _) => Ok(builtins::group(&ctor(t)?, ctx)?),
        (None, Some(p)) => {
            let doc: GroupDoc = serde_json::from_str(&read(p)?).map_err(|e| Failure::invalid(Error::from(e)))?;
            Ok(doc.resolve(ctx)?)
        }
        (None, None) => Err(Failure::invalid(anyhow!("no group given"))),
    }
}

/// Whether the group input is a bare `identity`, whose size must come from
/// another argument.
pub fn group_needs_hint(text: Option<&str>, json: Option<&Path>) -> Result<bool, Failure> {
    match (text, json) {
        (Some(t), _) => Ok(is_bare_identity(t)),
        (None, Some(p)) => {
            let doc: GroupDoc = serde_json::from_str(&read(p)?).map_err(|e| Failure::invalid(Error::from(e)))?;
            Ok(matches!(doc, GroupDoc::Builtin { builtin } if is_bare_identity(&builtin)))
        }
        (None, None) => Ok(false),
    }
}

/// Operator from constructor text or an operator document. `random` draws a
/// Hermitian operator of spectral norm 1 from `seed`.
pub fn operator(text: Option<&str>, json: Option<&Path>, dim: Option<usize>, seed: u64) -> Result<Operator64, Failure> {
    let op = match (text, json) {
        (Some("random"), _) => {
            let d = dim.ok_or_else(|| Failure::invalid(anyhow!("'random' needs a known dimension")))?;
            random_hermitian(d, &mut seeded_rng(seed))
        }
        (Some(t), _) => {
            let ctx = dim.map(Context::with_dim).unwrap_or_default();
            builtins::operator(&ctor(t)?, ctx, &Registry::new())?
        }
        (None, Some(p)) => Operator64::from_json(&read(p)?)?,
        (None, None) => return Err(Failure::invalid(anyhow!("no operator given"))),
    };
    if let Some(d) = dim {
        op.ensure_dim(d)?;
    }
    Ok(op)
}

pub fn error_space(texts: &[String], json: Option<&Path>) -> Result<ErrorSpace64, Failure> {
    if let Some(p) = json {
        let doc: ErrorSpaceDoc = serde_json::from_str(&read(p)?).map_err(|e| Failure::invalid(Error::from(e)))?;
        return Ok(doc.resolve()?);
    }
    let ctors = texts.iter().map(|t| ctor(t)).collect::<Result<Vec<_>, _>>()?;
    Ok(builtins::error_space(&ctors)?)
}

/// Row labels for the residual table.
pub fn error_labels(texts: &[String], json: Option<&Path>, count: usize) -> Vec<String> {
    if json.is_some() {
        return (0..count).map(|k| format!("generator {k}")).collect();
    }
    let mut labels = Vec::with_capacity(count);
    for t in texts {
        let n = parse_ctor(t).ok().and_then(|c| builtins::error_generators::<f64>(&c).ok()).map_or(0, |g| g.len());
        labels.extend((0..n).map(|k| format!("{t}[{k}]")));
    }
    labels.resize_with(count, || "generator".into());
    labels
}

/// Load a text or JSON pulse program, reporting diagnostics on stderr.
pub fn program(path: &Path) -> Result<(Compiled<f64>, String), Failure> {
    let text = read(path)?;
    let shown = path.display();
    if path.extension().is_some_and(|e| e == "json") {
        let doc = ProgramDoc::from_json(&text).map_err(|e| Failure::invalid(anyhow!("{shown}: {e}")))?;
        let compiled = doc.compile(&Registry::new()).map_err(|e| Failure::invalid(anyhow!("{shown}: {e}")))?;
        return Ok((compiled, text));
    }
    let parsed = match schedfmt::parse(&text) {
        Ok(p) => p,
        Err(d) => {
            eprintln!("{shown}:{d}");
            return Err(Failure::invalid(anyhow!("{shown}: parse failed")));
        }
    };
    match schedfmt::compile(&parsed, &Registry::new()) {
        Ok(c) => {
            for w in &c.warnings {
                eprintln!("{shown}:{w}");
            }
            Ok((c, text))
        }
        Err(Error::Invalid(diags)) => {
            for d in &diags {
                eprintln!("{shown}:{d}");
            }
            let errors = diags.iter().filter(|d| d.is_error()).count();
            Err(Failure::invalid(anyhow!("{shown}: program rejected with {errors} error(s)")))
        }
        Err(e) => Err(e.into()),
    }
}

fn qubits(dim: usize, what: &str) -> Result<usize, Failure> {
    if dim.is_power_of_two() && dim > 1 {
        Ok(dim.trailing_zeros() as usize)
    } else {
        Err(Failure::invalid(anyhow!("{what} needs a qubit register, system dimension is {dim}")))
    }
}

fn num(c: &Ctor, k: usize) -> Result<f64, Failure> {
    match c.args.get(k) {
        Some(decoupler_core::schedfmt::Arg::Number(x)) => Ok(*x),
        _ => Err(Failure::invalid(anyhow!("bath '{c}': argument {} must be a number", k + 1))),
    }
}

/// Bath from `none`, `static_dephasing(g)`, `spin_bath(n,g)` or
/// `spin_bath_full(n,g)`. Random baths draw from `seed`.
pub fn bath(text: &str, system_dim: usize, seed: u64) -> Result<BathModel<f64>, Failure> {
    let c = ctor(text)?;
    let arity = |n: usize| {
        if c.args.len() == n {
            Ok(())
        } else {
            Err(Failure::invalid(anyhow!("bath '{c}' takes {n} argument(s)")))
        }
    };
    match c.name.as_str() {
        "none" => {
            arity(0)?;
            Ok(BathModel::none(system_dim))
        }
        "static_dephasing" => {
            arity(1)?;
            if system_dim != 2 {
                return Err(Failure::invalid(anyhow!(
                    "static_dephasing acts on one system qubit, system dimension is {system_dim}"
                )));
            }
            Ok(BathModel::static_dephasing(num(&c, 0)?))
        }
        "spin_bath" | "spin_bath_full" => {
            arity(2)?;
            let n = num(&c, 0)?;
            if n.fract() != 0.0 || n < 1.0 {
                return Err(Failure::invalid(anyhow!("bath '{c}': qubit count must be a positive integer")));
            }
            let k = qubits(system_dim, "spin_bath")?;
            Ok(BathModel::random_spin_bath(k, n as usize, num(&c, 1)?, c.name == "spin_bath_full", seed)?)
        }
        other => Err(Failure::invalid(anyhow!(
            "unknown bath '{other}'; available: none, static_dephasing, spin_bath, spin_bath_full"
        ))),
    }
}

pub fn pulse_mode(arg: PulseModeArg) -> PulseMode {
    match arg {
        PulseModeArg::On => PulseMode::HamiltonianOn,
        PulseModeArg::Off => PulseMode::HamiltonianOff,
    }
}

pub fn pulse(args: &PhysicsArgs) -> PulseShape<f64> {
    match args.tau {
        None => PulseShape::ideal(),
        Some(t) => PulseShape::finite(t, pulse_mode(args.pulse_mode)),
    }
}

/// Seeds for the independent random draws of one run.
pub struct Seeds {
    pub bath: u64,
    pub hamiltonian: u64,
    pub state: u64,
}

impl Seeds {
    pub fn from(seed: u64) -> Self {
        Self { bath: seed, hamiltonian: seed.wrapping_add(1), state: seed.wrapping_add(2) }
    }
}

/// Joint initial state: the chosen system state times a seeded random bath
/// state (nothing for a one-dimensional bath).
pub fn initial_state(kind: InitialState, system_dim: usize, bath_dim: usize, seed: u64) -> StateVector<f64> {
    let mut rng = seeded_rng(seed);
    let system = match kind {
        InitialState::Plus => {
            let amp = Complex64::new(1.0 / (system_dim as f64).sqrt(), 0.0);
            StateVector::from_element(system_dim, amp)
        }
        InitialState::Zero => basis_state(system_dim, 0),
        InitialState::Random => random_state(system_dim, &mut rng),
    };
    if bath_dim == 1 {
        system
    } else {
        product_state(&[system, random_state(bath_dim, &mut rng)])
    }
}

/// Everything a simulation or sweep needs besides the program itself.
pub struct Physics {
    pub bath: BathModel<f64>,
    pub joint_hamiltonian: Operator64,
    pub initial_state: StateVector<f64>,
    pub pulse: PulseShape<f64>,
}

pub fn physics(args: &PhysicsArgs, system_dim: usize, seed: u64) -> Result<Physics, Failure> {
    let seeds = Seeds::from(seed);
    let bath = bath(&args.bath, system_dim, seeds.bath)?;
    let h_s = match (&args.h, &args.h_json) {
        (None, None) => Operator64::zeros(system_dim),
        (t, j) => operator(t.as_deref(), j.as_deref(), Some(system_dim), seeds.hamiltonian)?,
    };
    h_s.ensure_hermitian(1e-10, "system Hamiltonian")?;
    let joint = bath.joint_hamiltonian(&h_s)?;
    let psi0 = initial_state(args.state, system_dim, bath.bath_dim(), seeds.state);
    Ok(Physics { bath, joint_hamiltonian: joint, initial_state: psi0, pulse: pulse(args) })
}
