//! JSON documents for groups, error spaces and control schedules.
//!
//! ```json
//! {
//!   "group": {"builtin": "collective_pauli(2)"},
//!   "dt": 0.01,
//!   "errors": {"builtin": ["independent(2)"]},
//!   "operators": {"my_a": {"dim": 4, "re": [[...]], "im": [[...]]}},
//!   "windows": [
//!     {"scheme": "parallel_slow", "hamiltonian": "heisenberg(1,2)", "cycles": 10},
//!     {"scheme": "twisted_slow", "hamiltonian": "my_a", "pulse": "double_pi2(1,y,2,x)", "cycles": 5}
//!   ]
//! }
//! ```
//!
//! Operators are either constructor text (a builtin or a key of
//! `operators`) or an inline matrix object.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::builtins::{self, Context, Registry};
use crate::error::{Error, Result};
use crate::operator::{Operator, OperatorJson};
use crate::program::{Control, ControlSchedule, CycleSpec, Scheme, Window};
use crate::scalar::Real;
use crate::schedfmt::{parse_ctor, Compiled, Ctor};
use crate::symmetrize::{DecouplingGroup, ErrorSpace};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupDoc {
    Builtin { builtin: String },
    Elements { elements: Vec<OperatorJson> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ErrorSpaceDoc {
    Builtin { builtin: Vec<String> },
    Generators { generators: Vec<OperatorJson> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorRef {
    Named(String),
    Inline(OperatorJson),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowDoc {
    pub scheme: Scheme,
    pub hamiltonian: OperatorRef,
    pub cycles: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse: Option<OperatorRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgramDoc {
    pub group: GroupDoc,
    pub dt: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub errors: Option<ErrorSpaceDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub operators: BTreeMap<String, OperatorJson>,
    #[serde(default)]
    pub windows: Vec<WindowDoc>,
}

fn ctor(text: &str) -> Result<Ctor> {
    parse_ctor(text).map_err(Error::Parse)
}

impl GroupDoc {
    pub fn resolve<R: Real>(&self, ctx: Context) -> Result<DecouplingGroup<R>> {
        match self {
            GroupDoc::Builtin { builtin } => builtins::group(&ctor(builtin)?, ctx),
            GroupDoc::Elements { elements } => {
                let ops = elements.iter().cloned().map(Operator::try_from).collect::<Result<Vec<_>>>()?;
                DecouplingGroup::verify(ops)
            }
        }
    }
}

impl ErrorSpaceDoc {
    pub fn resolve<R: Real>(&self) -> Result<ErrorSpace<R>> {
        match self {
            ErrorSpaceDoc::Builtin { builtin } => {
                let ctors = builtin.iter().map(|s| ctor(s)).collect::<Result<Vec<_>>>()?;
                builtins::error_space(&ctors)
            }
            ErrorSpaceDoc::Generators { generators } => {
                ErrorSpace::new(generators.iter().cloned().map(Operator::try_from).collect::<Result<Vec<_>>>()?)
            }
        }
    }
}

impl OperatorRef {
    pub fn resolve<R: Real>(&self, ctx: Context, registry: &Registry<R>) -> Result<Operator<R>> {
        let op = match self {
            OperatorRef::Named(text) => builtins::operator(&ctor(text)?, ctx, registry)?,
            OperatorRef::Inline(doc) => Operator::try_from(doc.clone())?,
        };
        if let Some(d) = ctx.dim {
            op.ensure_dim(d)?;
        }
        Ok(op)
    }
}

impl ProgramDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Resolve every reference and check the schedule invariants. Unlike the
    /// text format this reports the first problem as an error rather than a
    /// list of positioned diagnostics.
    pub fn compile<R: Real>(&self, extra: &Registry<R>) -> Result<Compiled<R>> {
        let mut registry = extra.clone();
        for (name, doc) in &self.operators {
            registry.insert(name.clone(), Operator::try_from(doc.clone())?);
        }
        let hint = registry.values().next().map(Operator::dim);
        let group: DecouplingGroup<R> = match (&self.group, hint) {
            (GroupDoc::Builtin { .. }, Some(d)) => self.group.resolve(Context::with_dim(d)),
            _ => self.group.resolve(Context::default()),
        }?;
        let spec = CycleSpec::new(group.clone(), R::lit(self.dt))?;
        let errors = match &self.errors {
            None => None,
            Some(doc) => {
                let space: ErrorSpace<R> = doc.resolve()?;
                space.generators()[0].ensure_dim(group.dim())?;
                let verdict = space.correctability(&group, R::tol(1e-10))?;
                if !verdict.correctable {
                    return Err(Error::Constraint("error space is not correctable by the group".into()));
                }
                Some(space)
            }
        };
        let ctx = Context::with_dim(group.dim());
        let mut windows = Vec::with_capacity(self.windows.len());
        for (k, w) in self.windows.iter().enumerate() {
            let h = w.hamiltonian.resolve(ctx, &registry)?;
            let pulse = w.pulse.as_ref().map(|p| p.resolve(ctx, &registry)).transpose()?;
            if pulse.is_some() != (w.scheme == Scheme::TwistedSlow) {
                return Err(Error::Argument(format!(
                    "window {k}: a pulse is required for twisted_slow and only there"
                )));
            }
            let control = match w.scheme {
                Scheme::ParallelSlow => Control::ParallelSlow { a: h },
                Scheme::TwistedSlow => Control::TwistedSlow { p: pulse.unwrap(), a: h },
                Scheme::DriftIdentityFrame => Control::DriftIdentityFrame { b: h },
                Scheme::DriftStrengthRestored => Control::DriftStrengthRestored { b: h },
            };
            windows.push(Window::new(control, w.cycles)?);
        }
        let schedule = ControlSchedule::new(windows);
        schedule.check(&spec, None)?;
        Ok(Compiled { spec, errors, schedule, warnings: Vec::new() })
    }
}
