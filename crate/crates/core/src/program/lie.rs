use serde::Serialize;

use super::Control;
use crate::error::{Error, Result};
use crate::operator::{Operator, OperatorJson};
use crate::scalar::{c, Real};
use crate::symmetrize::DecouplingGroup;

/// Relative residual below which a new direction is treated as already in
/// the span.
pub const CLOSURE_CUTOFF: f64 = 1e-8;

/// Result of closing a set of Hamiltonians under commutation.
#[derive(Debug, Clone, Serialize)]
pub struct LieClosureReport {
    pub generator_count: usize,
    pub hilbert_dim: usize,
    /// Real dimension of the generated algebra (identity direction included).
    pub closure_dimension: usize,
    /// Real dimension of its traceless part.
    pub traceless_dimension: usize,
    /// `d² − 1`.
    pub target_dimension: usize,
    pub has_identity_component: bool,
    pub universal: bool,
    /// Orthonormal anti-Hermitian basis of the algebra.
    pub basis: Vec<OperatorJson>,
}

/// Real Gram–Schmidt in the Hilbert–Schmidt inner product `Re tr(X†Y)`.
struct RealSpan<R: Real> {
    basis: Vec<Operator<R>>,
}

impl<R: Real> RealSpan<R> {
    fn new() -> Self {
        Self { basis: Vec::new() }
    }

    /// Add `x` if it is independent of the current span; returns whether it
    /// was added.
    fn insert(&mut self, x: &Operator<R>) -> bool {
        let norm = x.hs_norm();
        let mut v = x.clone();
        for _ in 0..2 {
            for b in &self.basis {
                let coeff = b.hs_inner(&v).re;
                v = &v - &b.scale_re(coeff);
            }
        }
        let residual = v.hs_norm();
        if residual <= R::tol(CLOSURE_CUTOFF) * norm.max(R::one()) {
            return false;
        }
        self.basis.push(v.scale_re(R::one() / residual));
        true
    }
}

/// Close `i·generators` under commutation.
///
/// Breadth-first: every new basis element is commuted with the whole
/// current basis, generators first. `max_dim` defaults to `d²`, the size of
/// `u(d)`; exceeding it is a resource error carrying the partial dimension.
pub fn lie_closure<R: Real>(generators: &[Operator<R>], max_dim: Option<usize>) -> Result<LieClosureReport> {
    let first = generators.first().ok_or_else(|| Error::Argument("lie_closure needs at least one generator".into()))?;
    let d = first.dim();
    for (k, a) in generators.iter().enumerate() {
        a.ensure_dim(d)?;
        a.ensure_hermitian(R::tol(1e-10), &format!("generator {k}"))?;
    }
    let max_dim = max_dim.unwrap_or(d * d);
    let mut span = RealSpan::new();
    for a in generators {
        span.insert(&a.scale(c(0.0, 1.0)));
    }
    let mut frontier = 0;
    while frontier < span.basis.len() {
        let end = span.basis.len();
        for i in frontier..end {
            for j in 0..end {
                if j >= frontier && j <= i {
                    continue;
                }
                let x = &span.basis[i];
                let y = &span.basis[j];
                let comm = &(x * y) - &(y * x);
                if span.insert(&comm) && span.basis.len() > max_dim {
                    return Err(Error::Resource { max_dim, partial_dim: span.basis.len() });
                }
            }
        }
        frontier = end;
    }
    if span.basis.len() > max_dim {
        return Err(Error::Resource { max_dim, partial_dim: span.basis.len() });
    }

    let mut traceless = RealSpan::new();
    for b in &span.basis {
        traceless.insert(&b.traceless_part());
    }
    let identity_dir = Operator::<R>::identity(d).scale(c(0.0, 1.0));
    let mut probe = RealSpan { basis: span.basis.clone() };
    let has_identity_component = !probe.insert(&identity_dir);

    let target = d * d - 1;
    Ok(LieClosureReport {
        generator_count: generators.len(),
        hilbert_dim: d,
        closure_dimension: span.basis.len(),
        traceless_dimension: traceless.basis.len(),
        target_dimension: target,
        has_identity_component,
        universal: traceless.basis.len() == target,
        basis: span.basis.iter().map(OperatorJson::from).collect(),
    })
}

/// Universality of the Hamiltonians reachable on top of a decoupler: the
/// slow set (each member must commute with the group) plus the directions
/// contributed by fast controls.
pub fn universality_audit<R: Real>(
    group: &DecouplingGroup<R>,
    slow: &[Operator<R>],
    fast: &[Control<R>],
) -> Result<LieClosureReport> {
    let mut directions = Vec::with_capacity(slow.len() + fast.len());
    for (k, a) in slow.iter().enumerate() {
        Control::ParallelSlow { a: a.clone() }.check(group, None).map_err(|e| match e {
            Error::Constraint(msg) => Error::Constraint(format!("slow Hamiltonian {k}: {msg}")),
            other => other,
        })?;
        directions.push(a.clone());
    }
    for control in fast {
        control.check(group, None)?;
        directions.push(control.reachable_direction());
    }
    lie_closure(&directions, None)
}
