use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::scalar::Real;

/// Largest group order accepted before a generated set is treated as
/// accidentally infinite.
pub const MAX_GROUP_ORDER: usize = 4096;

/// Tolerance for identifying group elements up to a global phase.
pub const PHASE_TOL: f64 = 1e-9;

/// Order above which projections are summed in fixed-size chunks on the
/// rayon pool.
const PARALLEL_ORDER: usize = 64;
const CHUNK: usize = 16;

/// Finite group of unitaries, closed up to global phase, with `g_0 = 𝟙`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecouplingGroup<R: Real> {
    elements: Vec<Operator<R>>,
}

impl<R: Real> DecouplingGroup<R> {
    /// Validate a candidate element list.
    ///
    /// The element equal to 𝟙 up to phase is moved to the front and replaced
    /// by the exact identity; all other elements keep their relative order.
    pub fn verify(elements: Vec<Operator<R>>) -> Result<Self> {
        Self::verify_with(elements, R::tol(PHASE_TOL))
    }

    pub fn verify_with(mut elements: Vec<Operator<R>>, tol: R) -> Result<Self> {
        let first = elements.first().ok_or_else(|| Error::Structure("empty element list".into()))?;
        let d = first.dim();
        if elements.len() > MAX_GROUP_ORDER {
            return Err(Error::Closure(format!("order {} exceeds the cap of {MAX_GROUP_ORDER}", elements.len())));
        }
        for (j, g) in elements.iter().enumerate() {
            g.ensure_dim(d)?;
            g.ensure_unitary(R::tol(1e-10), &format!("element {j}"))?;
        }
        let id = Operator::identity(d);
        let pos = elements
            .iter()
            .position(|g| g.eq_up_to_phase(&id, tol))
            .ok_or_else(|| Error::Structure("no element equals the identity up to phase".into()))?;
        elements.remove(pos);
        elements.insert(0, id);

        for j in 0..elements.len() {
            for k in 0..j {
                if elements[j].eq_up_to_phase(&elements[k], tol) {
                    return Err(Error::Structure(format!("elements {k} and {j} coincide up to phase")));
                }
            }
        }
        let group = Self { elements };
        for j in 0..group.order() {
            if group.index_of(&group.elements[j].adjoint(), tol).is_none() {
                return Err(Error::Closure(format!("inverse of g[{j}] is not an element")));
            }
            for k in 0..group.order() {
                let prod = &group.elements[j] * &group.elements[k];
                if group.index_of(&prod, tol).is_none() {
                    return Err(Error::Closure(format!("g[{j}]·g[{k}] is not an element up to phase")));
                }
            }
        }
        Ok(group)
    }

    /// Close a generating set under multiplication (up to phase).
    pub fn generate(generators: &[Operator<R>]) -> Result<Self> {
        let first = generators.first().ok_or_else(|| Error::Structure("no generators".into()))?;
        let tol = R::tol(PHASE_TOL);
        let mut elements = vec![Operator::identity(first.dim())];
        let mut cursor = 0;
        while cursor < elements.len() {
            for s in generators {
                s.ensure_dim(first.dim())?;
                let candidate = s * &elements[cursor];
                if !elements.iter().any(|g| g.eq_up_to_phase(&candidate, tol)) {
                    if elements.len() == MAX_GROUP_ORDER {
                        return Err(Error::Closure(format!(
                            "generated set exceeds {MAX_GROUP_ORDER} elements; likely infinite"
                        )));
                    }
                    elements.push(candidate);
                }
            }
            cursor += 1;
        }
        Self::verify_with(elements, tol)
    }

    /// The trivial group `{𝟙}` on dimension `d`.
    pub fn trivial(d: usize) -> Self {
        Self { elements: vec![Operator::identity(d)] }
    }

    pub fn elements(&self) -> &[Operator<R>] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn index_of(&self, op: &Operator<R>, tol: R) -> Option<usize> {
        self.elements.iter().position(|g| op.eq_up_to_phase(g, tol))
    }

    pub fn contains(&self, op: &Operator<R>, tol: R) -> bool {
        self.index_of(op, tol).is_some()
    }

    /// The same group acting as `g ⊗ 𝟙_bath` on a system-bath space.
    pub fn embed(&self, bath_dim: usize) -> Self {
        Self { elements: self.elements.iter().map(|g| g.embed_left(bath_dim)).collect() }
    }

    /// Group lifted to a joint dimension `dim` (a multiple of the group's own).
    pub fn lift_to(&self, dim: usize) -> Result<Self> {
        if dim == self.dim() {
            return Ok(self.clone());
        }
        if !dim.is_multiple_of(self.dim()) {
            return Err(Error::DimensionMismatch { expected: dim, found: self.dim() });
        }
        Ok(self.embed(dim / self.dim()))
    }

    /// Group-average projection `Π_G(H) = |G|⁻¹ Σ_j g_j† H g_j`.
    ///
    /// Large groups are summed in fixed chunks reduced in index order, so the
    /// result does not depend on the number of worker threads.
    pub fn project(&self, h: &Operator<R>) -> Result<Operator<R>> {
        h.ensure_dim(self.dim())?;
        let conj = |g: &Operator<R>| h.conjugate_by(g);
        let sum = if self.order() >= PARALLEL_ORDER {
            let partials: Vec<Operator<R>> =
                self.elements.par_chunks(CHUNK).map(|chunk| chunk.iter().map(conj).sum()).collect();
            partials.into_iter().sum()
        } else {
            self.elements.iter().map(conj).sum::<Operator<R>>()
        };
        Ok(sum.scale_re(R::one() / R::from_usize(self.order()).unwrap()))
    }

    /// True iff `max_j ‖[O, g_j]‖_HS ≤ tol`.
    pub fn in_centralizer(&self, o: &Operator<R>, tol: R) -> bool {
        o.dim() == self.dim() && self.centralizer_defect(o) <= tol
    }

    pub fn centralizer_defect(&self, o: &Operator<R>) -> R {
        self.elements.iter().map(|g| (&(o * g) - &(g * o)).hs_norm()).fold(R::zero(), |a, b| a.max(b))
    }

    /// Twisted group `P† G P`.
    pub fn twist(&self, p: &Operator<R>) -> Result<Self> {
        p.ensure_dim(self.dim())?;
        p.ensure_unitary(R::tol(1e-10), "twisting pulse")?;
        let mut elements: Vec<_> = self.elements.iter().map(|g| g.conjugate_by(p)).collect();
        elements[0] = Operator::identity(self.dim());
        Ok(Self { elements })
    }
}

/// Default "equals zero" tolerance: `1e-10`, scaled by the input's size.
pub fn zero_tol<R: Real>(input: &Operator<R>) -> R {
    R::tol(1e-10) * input.hs_norm().max(R::one())
}
