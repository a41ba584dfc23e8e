use nalgebra::DMatrix;

use super::DecouplingGroup;
use crate::error::{Error, Result};
use crate::operator::{hermitian_eigen, Operator};
use crate::scalar::Real;

/// Span of traceless Hermitian error generators `E_α` on the system factor.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSpace<R: Real> {
    generators: Vec<Operator<R>>,
}

/// Outcome of a correctability check: one residual `‖Π_G(E_α)‖_HS` per
/// generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Correctability<R: Real> {
    pub correctable: bool,
    pub residuals: Vec<R>,
}

impl<R: Real> ErrorSpace<R> {
    pub fn new(generators: Vec<Operator<R>>) -> Result<Self> {
        let first =
            generators.first().ok_or_else(|| Error::Argument("error space needs at least one generator".into()))?;
        let d = first.dim();
        let tol = R::tol(1e-10);
        for (a, e) in generators.iter().enumerate() {
            e.ensure_dim(d)?;
            e.ensure_hermitian(tol, &format!("error generator {a}"))?;
            let tr = e.trace().norm_sqr().sqrt();
            if tr > tol {
                return Err(Error::Argument(format!("error generator {a} is not traceless (|tr| = {tr:e})")));
            }
        }
        let rank = gram_rank(&generators);
        if rank < generators.len() {
            return Err(Error::Argument(format!(
                "error generators are linearly dependent (rank {rank} < {})",
                generators.len()
            )));
        }
        Ok(Self { generators })
    }

    pub fn generators(&self) -> &[Operator<R>] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generators embedded as `E_α ⊗ 𝟙_B`.
    pub fn embed(&self, bath_dim: usize) -> Self {
        Self { generators: self.generators.iter().map(|e| e.embed_left(bath_dim)).collect() }
    }

    /// Whether every `P† E_α P` stays inside the span.
    pub fn preserved_by(&self, p: &Operator<R>, tol: R) -> bool {
        let basis = orthonormal(&self.generators);
        self.generators.iter().all(|e| {
            let rotated = e.conjugate_by(p);
            let residual = basis.iter().fold(rotated.clone(), |acc, b| &acc - &b.scale(b.hs_inner(&rotated)));
            residual.hs_norm() <= tol * e.hs_norm().max(R::one())
        })
    }

    pub fn correctability(&self, group: &DecouplingGroup<R>, tol: R) -> Result<Correctability<R>> {
        let residuals =
            self.generators.iter().map(|e| group.project(e).map(|p| p.hs_norm())).collect::<Result<Vec<_>>>()?;
        let correctable = residuals.iter().all(|&r| r <= tol);
        Ok(Correctability { correctable, residuals })
    }
}

/// Rank of the Hilbert–Schmidt Gram matrix, eigenvalue cutoff `1e-9`
/// relative to the largest.
pub(crate) fn gram_rank<R: Real>(ops: &[Operator<R>]) -> usize {
    let n = ops.len();
    let gram = DMatrix::from_fn(n, n, |i, j| ops[i].hs_inner(&ops[j]));
    let (values, _) = hermitian_eigen(&Operator::wrap(gram));
    let top = values.iter().fold(R::zero(), |a, &b| a.max(b.abs()));
    if top <= R::zero() {
        return 0;
    }
    values.iter().filter(|&&v| v > top * R::tol(1e-9)).count()
}

fn orthonormal<R: Real>(ops: &[Operator<R>]) -> Vec<Operator<R>> {
    let mut basis: Vec<Operator<R>> = Vec::new();
    for op in ops {
        let mut v = op.clone();
        for _ in 0..2 {
            for b in &basis {
                v = &v - &b.scale(b.hs_inner(&v));
            }
        }
        let n = v.hs_norm();
        if n > R::tol(1e-9) * op.hs_norm() {
            basis.push(v.scale_re(R::one() / n));
        }
    }
    basis
}
