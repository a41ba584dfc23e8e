//! Named constructors for groups, error spaces and operators.
//!
//! These back both the pulse-program language and the CLI flags. Qubit
//! counts that a constructor does not spell out are taken from the context
//! (normally the decoupling group's register size).

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::operator::{expm, Axis, Operator};
use crate::scalar::{c, Real};
use crate::schedfmt::{Arg, Ctor};
use crate::symmetrize::{DecouplingGroup, ErrorSpace};

pub const GROUP_BUILTINS: &[&str] = &["identity", "spin_echo", "collective_pauli", "full_pauli"];
pub const ERROR_BUILTINS: &[&str] = &["independent", "collective", "dephasing"];
pub const OPERATOR_BUILTINS: &[&str] =
    &["pauli", "heisenberg", "pauli_string", "rot", "double_pi2", "zero", "identity"];

/// Named inline operators (typically loaded from JSON files).
pub type Registry<R> = BTreeMap<String, Operator<R>>;

/// Dimension information available while resolving a constructor.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Context {
    pub dim: Option<usize>,
}

impl Context {
    pub fn with_dim(dim: usize) -> Self {
        Self { dim: Some(dim) }
    }

    fn qubits(&self, what: &str) -> Result<usize> {
        match self.dim {
            Some(d) if d.is_power_of_two() && d > 1 => Ok(d.trailing_zeros() as usize),
            Some(d) => Err(Error::Argument(format!("{what}: context dimension {d} is not a qubit register"))),
            None => Err(Error::Argument(format!("{what}: qubit count not given and no context to infer it from"))),
        }
    }

    fn dim(&self, what: &str) -> Result<usize> {
        self.dim.ok_or_else(|| Error::Argument(format!("{what}: dimension cannot be inferred here")))
    }
}

fn unknown(kind: &str, name: &str, available: &[&str]) -> Error {
    Error::Argument(format!("unknown {kind} '{name}'; available: {}", available.join(", ")))
}

fn arity(ctor: &Ctor, allowed: &[usize]) -> Result<()> {
    if allowed.contains(&ctor.args.len()) {
        Ok(())
    } else {
        let want: Vec<String> = allowed.iter().map(|n| n.to_string()).collect();
        Err(Error::Argument(format!("{} takes {} argument(s), got {}", ctor.name, want.join(" or "), ctor.args.len())))
    }
}

fn int_arg(ctor: &Ctor, k: usize) -> Result<usize> {
    match &ctor.args[k] {
        Arg::Number(x) if x.fract() == 0.0 && *x >= 0.0 && *x < 1e9 => Ok(*x as usize),
        other => Err(Error::Argument(format!(
            "{}: argument {} must be a non-negative integer, got {other}",
            ctor.name,
            k + 1
        ))),
    }
}

fn num_arg(ctor: &Ctor, k: usize) -> Result<f64> {
    match &ctor.args[k] {
        Arg::Number(x) => Ok(*x),
        other => Err(Error::Argument(format!("{}: argument {} must be a number, got {other}", ctor.name, k + 1))),
    }
}

fn axis_arg(ctor: &Ctor, k: usize) -> Result<Axis> {
    match &ctor.args[k] {
        Arg::Ident(s) => Axis::from_name(s),
        Arg::Number(_) => None,
    }
    .ok_or_else(|| Error::Argument(format!("{}: argument {} must be an axis x, y or z", ctor.name, k + 1)))
}

fn qubit_count(ctor: &Ctor) -> Result<usize> {
    arity(ctor, &[1])?;
    let k = int_arg(ctor, 0)?;
    if k == 0 || k > 8 {
        return Err(Error::Argument(format!("{}: qubit count {k} outside 1..=8", ctor.name)));
    }
    Ok(k)
}

pub fn collective_pauli<R: Real>(k: usize) -> Result<DecouplingGroup<R>> {
    let mut elements = vec![Operator::identity(1 << k)];
    elements.extend(Axis::ALL.iter().map(|&a| Operator::pauli_string(&vec![Some(a); k])));
    DecouplingGroup::verify(elements)
}

pub fn full_pauli<R: Real>(k: usize) -> Result<DecouplingGroup<R>> {
    let mut elements = Vec::with_capacity(1 << (2 * k));
    for code in 0..(1usize << (2 * k)) {
        let factors: Vec<Option<Axis>> = (0..k)
            .map(|q| match (code >> (2 * (k - 1 - q))) & 3 {
                0 => None,
                a => Some(Axis::ALL[a - 1]),
            })
            .collect();
        elements.push(Operator::pauli_string(&factors));
    }
    DecouplingGroup::verify(elements)
}

pub fn spin_echo<R: Real>() -> DecouplingGroup<R> {
    DecouplingGroup::verify(vec![Operator::identity(2), Operator::pauli(Axis::X)]).expect("spin echo is a group")
}

/// `Σ_a σ_a^(i) σ_a^(j)` on a `k`-qubit register.
pub fn heisenberg<R: Real>(k: usize, i: usize, j: usize) -> Result<Operator<R>> {
    if i == j {
        return Err(Error::Argument("heisenberg: sites must differ".into()));
    }
    let mut terms = Vec::with_capacity(3);
    for a in Axis::ALL {
        terms.push(&Operator::pauli_on(k, i, a)? * &Operator::pauli_on(k, j, a)?);
    }
    Ok(terms.into_iter().sum())
}

/// `exp(−i θ σ_axis^(site))`.
pub fn rotation<R: Real>(k: usize, site: usize, axis: Axis, theta: f64) -> Result<Operator<R>> {
    expm(&Operator::pauli_on(k, site, axis)?.scale(c(0.0, -theta)))
}

pub fn group<R: Real>(ctor: &Ctor, ctx: Context) -> Result<DecouplingGroup<R>> {
    match ctor.name.as_str() {
        "identity" => {
            arity(ctor, &[0, 1])?;
            let d = if ctor.args.is_empty() { ctx.dim("identity")? } else { 1 << qubit_count(ctor)? };
            Ok(DecouplingGroup::trivial(d))
        }
        "spin_echo" => {
            arity(ctor, &[0])?;
            Ok(spin_echo())
        }
        "collective_pauli" => collective_pauli(qubit_count(ctor)?),
        "full_pauli" => {
            let k = qubit_count(ctor)?;
            if k > 6 {
                return Err(Error::Argument("full_pauli: at most 6 qubits (group order 4096)".into()));
            }
            full_pauli(k)
        }
        name => Err(unknown("group builtin", name, GROUP_BUILTINS)),
    }
}

pub fn error_generators<R: Real>(ctor: &Ctor) -> Result<Vec<Operator<R>>> {
    let k = match ctor.name.as_str() {
        name if ERROR_BUILTINS.contains(&name) => qubit_count(ctor)?,
        name => return Err(unknown("error-space builtin", name, ERROR_BUILTINS)),
    };
    let mut out = Vec::new();
    match ctor.name.as_str() {
        "independent" => {
            for i in 1..=k {
                for a in Axis::ALL {
                    out.push(Operator::pauli_on(k, i, a)?);
                }
            }
        }
        "collective" => {
            for a in Axis::ALL {
                out.push((1..=k).map(|i| Operator::pauli_on(k, i, a)).collect::<Result<Vec<_>>>()?.into_iter().sum());
            }
        }
        _ => {
            for i in 1..=k {
                out.push(Operator::pauli_on(k, i, Axis::Z)?);
            }
        }
    }
    Ok(out)
}

pub fn error_space<R: Real>(ctors: &[Ctor]) -> Result<ErrorSpace<R>> {
    let mut gens = Vec::new();
    for ctor in ctors {
        gens.extend(error_generators(ctor)?);
    }
    ErrorSpace::new(gens)
}

pub fn operator<R: Real>(ctor: &Ctor, ctx: Context, registry: &Registry<R>) -> Result<Operator<R>> {
    if ctor.args.is_empty() {
        if let Some(op) = registry.get(&ctor.name) {
            return Ok(op.clone());
        }
    }
    let op = match ctor.name.as_str() {
        "pauli" => {
            arity(ctor, &[2, 3])?;
            let (k, off) = if ctor.args.len() == 3 { (int_arg(ctor, 0)?, 1) } else { (ctx.qubits("pauli")?, 0) };
            Operator::pauli_on(k, int_arg(ctor, off)?, axis_arg(ctor, off + 1)?)?
        }
        "heisenberg" => {
            arity(ctor, &[2, 3])?;
            let (k, off) = if ctor.args.len() == 3 { (int_arg(ctor, 0)?, 1) } else { (ctx.qubits("heisenberg")?, 0) };
            heisenberg(k, int_arg(ctor, off)?, int_arg(ctor, off + 1)?)?
        }
        "pauli_string" => {
            arity(ctor, &[1])?;
            let Arg::Ident(letters) = &ctor.args[0] else {
                return Err(Error::Argument("pauli_string: expected letters such as xiz".into()));
            };
            let factors = letters
                .chars()
                .map(|ch| match ch {
                    'i' | 'I' => Ok(None),
                    other => Axis::from_name(&other.to_string())
                        .map(Some)
                        .ok_or_else(|| Error::Argument(format!("pauli_string: bad letter '{other}'"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if factors.is_empty() || factors.len() > 8 {
                return Err(Error::Argument("pauli_string: 1..=8 letters".into()));
            }
            Operator::pauli_string(&factors)
        }
        "rot" => {
            arity(ctor, &[3])?;
            rotation(ctx.qubits("rot")?, int_arg(ctor, 0)?, axis_arg(ctor, 1)?, num_arg(ctor, 2)?)?
        }
        "double_pi2" => {
            arity(ctor, &[4])?;
            let k = ctx.qubits("double_pi2")?;
            let first = rotation::<R>(k, int_arg(ctor, 0)?, axis_arg(ctor, 1)?, FRAC_PI_4)?;
            let second = rotation::<R>(k, int_arg(ctor, 2)?, axis_arg(ctor, 3)?, FRAC_PI_4)?;
            &first * &second
        }
        "zero" => {
            arity(ctor, &[0])?;
            Operator::zeros(ctx.dim("zero")?)
        }
        "identity" => {
            arity(ctor, &[0])?;
            Operator::identity(ctx.dim("identity")?)
        }
        name => {
            let mut available: Vec<&str> = OPERATOR_BUILTINS.to_vec();
            available.extend(registry.keys().map(String::as_str));
            return Err(unknown("operator", name, &available));
        }
    };
    if let Some(d) = ctx.dim {
        if op.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: op.dim() });
        }
    }
    Ok(op)
}

/// Whether `name` is a builtin of any kind or a registry entry.
pub fn is_known_name<R: Real>(name: &str, registry: &Registry<R>) -> bool {
    GROUP_BUILTINS.contains(&name)
        || ERROR_BUILTINS.contains(&name)
        || OPERATOR_BUILTINS.contains(&name)
        || registry.contains_key(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Ctor {
        crate::schedfmt::parse_ctor(s).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(group::<f64>(&parse("collective_pauli(3)"), Context::default()).unwrap().order(), 4);
        assert_eq!(group::<f64>(&parse("full_pauli(2)"), Context::default()).unwrap().order(), 16);
        assert_eq!(group::<f64>(&parse("spin_echo"), Context::default()).unwrap().order(), 2);
        assert_eq!(group::<f64>(&parse("identity"), Context::with_dim(4)).unwrap().order(), 1);
        assert!(group::<f64>(&parse("identity"), Context::default()).is_err());
    }

    #[test]
    fn unknown_names_list_builtins() {
        let err = group::<f64>(&parse("bogus(2)"), Context::default()).unwrap_err().to_string();
        assert!(err.contains("collective_pauli") && err.contains("full_pauli"));
    }

    #[test]
    fn error_space_sizes() {
        assert_eq!(error_space::<f64>(&[parse("independent(3)")]).unwrap().len(), 9);
        assert_eq!(error_space::<f64>(&[parse("collective(3)")]).unwrap().len(), 3);
        assert_eq!(error_space::<f64>(&[parse("dephasing(2)")]).unwrap().len(), 2);
    }

    #[test]
    fn operator_forms() {
        let reg = Registry::<f64>::new();
        let explicit = operator(&parse("pauli(2,1,x)"), Context::default(), &reg).unwrap();
        let implied = operator(&parse("pauli(1,x)"), Context::with_dim(4), &reg).unwrap();
        assert_eq!(explicit, implied);
        assert!(operator(&parse("heisenberg(1,2)"), Context::default(), &reg).is_err());
        let xx = operator(&parse("pauli_string(xx)"), Context::default(), &reg).unwrap();
        assert_eq!(xx.dim(), 4);
        let p = operator(&parse("double_pi2(1,y,2,x)"), Context::with_dim(4), &reg).unwrap();
        assert!(p.is_unitary(1e-12));
    }
}
