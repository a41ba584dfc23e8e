use super::ast::{Ctor, SchemeKw};
use super::diag::{Diagnostic, Span};
use super::parser::{parse_with, Parsed};
use crate::builtins::{self, Context, Registry};
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::program::{Control, ControlSchedule, CycleSpec, Window};
use crate::scalar::Real;
use crate::symmetrize::{zero_tol, DecouplingGroup, ErrorSpace};

/// A validated program turned into library objects.
#[derive(Debug, Clone)]
pub struct Compiled<R: Real> {
    pub spec: CycleSpec<R>,
    pub errors: Option<ErrorSpace<R>>,
    pub schedule: ControlSchedule<R>,
    pub warnings: Vec<Diagnostic>,
}

/// All diagnostics for a parsed program; empty when the program is clean.
pub fn validate<R: Real>(parsed: &Parsed, registry: &Registry<R>) -> Vec<Diagnostic> {
    check(parsed, registry).1
}

/// Build the program's objects, failing with [`Error::Invalid`] when any
/// diagnostic is an error. Warnings are kept on the result.
pub fn compile<R: Real>(parsed: &Parsed, registry: &Registry<R>) -> Result<Compiled<R>> {
    let (compiled, diags) = check(parsed, registry);
    match compiled {
        Some(mut c) if !diags.iter().any(Diagnostic::is_error) => {
            c.warnings = diags;
            Ok(c)
        }
        _ => Err(Error::Invalid(diags)),
    }
}

/// Parse and compile in one step, resolving names against `registry`.
pub fn load<R: Real>(src: &str, registry: &Registry<R>) -> Result<Compiled<R>> {
    let names: Vec<String> = registry.keys().cloned().collect();
    let parsed = parse_with(src, &names).map_err(Error::Parse)?;
    compile(&parsed, registry)
}

fn err_at(span: Span, e: Error) -> Diagnostic {
    Diagnostic::error(span, e.to_string())
}

/// Dimension hint for a bare `identity` group: the first error builtin's
/// register, else the first registry operator.
fn identity_hint<R: Real>(parsed: &Parsed, registry: &Registry<R>) -> Option<usize> {
    if let Some(first) = parsed.program.errors.first() {
        if let Ok(gens) = builtins::error_generators::<R>(first) {
            return gens.first().map(Operator::dim);
        }
    }
    registry.values().next().map(Operator::dim)
}

fn resolve_group<R: Real>(parsed: &Parsed, registry: &Registry<R>) -> Result<DecouplingGroup<R>, Diagnostic> {
    let ctor = &parsed.program.group;
    let ctx = if ctor.name == "identity" && ctor.args.is_empty() {
        match identity_hint(parsed, registry) {
            Some(d) => Context::with_dim(d),
            None => {
                return Err(Diagnostic::error(
                    parsed.spans.group,
                    "bare 'identity' group needs a dimension: write identity(K) or declare errors",
                ))
            }
        }
    } else {
        Context::default()
    };
    builtins::group(ctor, ctx).map_err(|e| err_at(parsed.spans.group, e))
}

fn resolve_op<R: Real>(ctor: &Ctor, span: Span, dim: usize, registry: &Registry<R>) -> Result<Operator<R>, Diagnostic> {
    builtins::operator(ctor, Context::with_dim(dim), registry).map_err(|e| err_at(span, e))
}

fn check<R: Real>(parsed: &Parsed, registry: &Registry<R>) -> (Option<Compiled<R>>, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let program = &parsed.program;
    let spans = &parsed.spans;

    let group = match resolve_group(parsed, registry) {
        Ok(g) => g,
        Err(d) => return (None, vec![d]),
    };
    let d = group.dim();

    let spec = match CycleSpec::new(group.clone(), R::lit(program.dt)) {
        Ok(s) => Some(s),
        Err(_) => {
            diags.push(Diagnostic::error(spans.dt, format!("dt must be positive, got {}", program.dt)));
            None
        }
    };

    let mut errors = None;
    if !program.errors.is_empty() {
        let first = spans.errors[0];
        match builtins::error_space::<R>(&program.errors) {
            Err(e) => diags.push(err_at(first, e)),
            Ok(space) if space.dim() != d => diags.push(Diagnostic::error(
                first,
                format!("error space acts on dimension {} but the group on {d}", space.dim()),
            )),
            Ok(space) => match space.correctability(&group, R::tol(1e-10)) {
                Ok(c) if !c.correctable => {
                    let worst = c.residuals.iter().cloned().fold(R::zero(), |a, b| a.max(b));
                    diags.push(Diagnostic::error(
                        first,
                        format!("error space is not correctable by the group (largest residual {worst:e})"),
                    ));
                }
                Ok(_) => errors = Some(space),
                Err(e) => diags.push(err_at(first, e)),
            },
        }
    }

    let mut windows = Vec::new();
    for (w, ws) in program.windows.iter().zip(&spans.windows) {
        if w.cycles == 0 {
            diags.push(Diagnostic::error(ws.cycles, "window must last at least one cycle"));
        }
        let h = match resolve_op(&w.hamiltonian, ws.hamiltonian, d, registry) {
            Ok(h) => h,
            Err(diag) => {
                diags.push(diag);
                continue;
            }
        };
        let key = w.scheme.hamiltonian_key();
        if !h.is_hermitian(R::tol(1e-10)) {
            diags.push(Diagnostic::error(ws.hamiltonian, format!("{key} is not Hermitian")));
            continue;
        }
        let control = match w.scheme {
            SchemeKw::Slow | SchemeKw::Twisted => {
                let defect = group.centralizer_defect(&h);
                if defect > zero_tol(&h) {
                    diags.push(Diagnostic::error(
                        ws.hamiltonian,
                        format!("A = {} is not in centralizer Z(G) (max ‖[A,g]‖ = {defect:e})", w.hamiltonian),
                    ));
                    continue;
                }
                if w.scheme == SchemeKw::Slow {
                    Control::ParallelSlow { a: h }
                } else {
                    let (Some(pctor), Some(pspan)) = (&w.pulse, ws.pulse) else {
                        diags.push(Diagnostic::error(ws.keyword, "twisted window without P"));
                        continue;
                    };
                    let p = match resolve_op(pctor, pspan, d, registry) {
                        Ok(p) => p,
                        Err(diag) => {
                            diags.push(diag);
                            continue;
                        }
                    };
                    if !p.is_unitary(R::tol(1e-10)) {
                        diags.push(Diagnostic::error(pspan, format!("P = {pctor} is not unitary")));
                        continue;
                    }
                    if group.in_centralizer(&p, zero_tol(&p)) || group.contains(&p, R::tol(1e-9)) {
                        diags.push(Diagnostic::warning(pspan, "P ∈ Z(G) ∪ G: twist is trivial"));
                    }
                    if let Some(space) = &errors {
                        let twisted = group.twist(&p).expect("unitary P of the group's dimension");
                        if !space.correctability(&twisted, R::tol(1e-10)).is_ok_and(|c| c.correctable) {
                            diags.push(Diagnostic::warning(
                                pspan,
                                "twisted group P†GP does not correct the declared error space",
                            ));
                        }
                    }
                    Control::TwistedSlow { p, a: h }
                }
            }
            SchemeKw::DriftIdentity => Control::DriftIdentityFrame { b: h },
            SchemeKw::DriftRestored => Control::DriftStrengthRestored { b: h },
        };
        if w.cycles > 0 {
            windows.push(Window { control, cycles: w.cycles as usize });
        }
    }

    let compiled =
        spec.map(|spec| Compiled { spec, errors, schedule: ControlSchedule::new(windows), warnings: Vec::new() });
    (compiled, diags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedfmt::{parse, Severity};

    fn diags(src: &str) -> Vec<Diagnostic> {
        validate::<f64>(&parse(src).unwrap(), &Registry::new())
    }

    #[test]
    fn heisenberg_slow_window_is_clean() {
        assert!(diags("group collective_pauli(2); dt 0.01; window slow A=heisenberg(1,2) cycles=10;").is_empty());
    }

    #[test]
    fn local_field_is_not_in_centralizer() {
        let d = diags("group collective_pauli(2); dt 0.01; window slow A=pauli(1,z) cycles=10;");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, Severity::Error);
        assert!(d[0].message.contains("not in centralizer"));
        assert_eq!(d[0].span, Span { line: 1, col: 51 });
    }

    #[test]
    fn group_element_twist_is_a_warning() {
        let d =
            diags("group collective_pauli(2); dt 0.01; window twisted P=pauli_string(xx) A=heisenberg(1,2) cycles=2;");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, Severity::Warning);
        assert_eq!(d[0].message, "P ∈ Z(G) ∪ G: twist is trivial");
    }

    #[test]
    fn zero_cycles_and_bad_dt() {
        let d = diags("group spin_echo; dt -1; window drift_identity B=pauli(1,x) cycles=0;");
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(Diagnostic::is_error));
    }

    #[test]
    fn uncorrectable_error_space() {
        let d = diags("group spin_echo; dt 0.1; errors independent(1);");
        assert!(d[0].message.contains("not correctable"));
        assert!(diags("group spin_echo; dt 0.1; errors dephasing(1);").is_empty());
    }

    #[test]
    fn compile_builds_schedule() {
        let parsed =
            parse("group collective_pauli(2); dt 0.01; window drift_identity B=pauli(1,x) cycles=100;").unwrap();
        let c = compile::<f64>(&parsed, &Registry::new()).unwrap();
        assert_eq!(c.spec.order(), 4);
        assert!((c.spec.cycle_time() - 0.04).abs() < 1e-15);
        assert_eq!(c.schedule.windows().len(), 1);
        assert_eq!(c.schedule.total_cycles(), 100);
    }

    #[test]
    fn compile_rejects_errors() {
        let parsed = parse("group collective_pauli(2); dt 0.01; window slow A=pauli(1,z) cycles=1;").unwrap();
        assert!(matches!(compile::<f64>(&parsed, &Registry::new()), Err(Error::Invalid(d)) if d.len() == 1));
    }

    #[test]
    fn registry_operators_resolve() {
        let mut reg = Registry::<f64>::new();
        reg.insert("my_b".into(), Operator::pauli(crate::operator::Axis::Y));
        let c = load("group spin_echo; dt 0.5; window drift_restored B=my_b cycles=3;", &reg).unwrap();
        assert_eq!(c.schedule.total_cycles(), 3);
        assert!(matches!(
            load("group spin_echo; dt 0.5; window drift_restored B=other cycles=3;", &reg),
            Err(Error::Parse(_))
        ));
    }
}
