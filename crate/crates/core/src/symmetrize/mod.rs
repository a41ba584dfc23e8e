//! Decoupling groups and the group-average projector.
//!
//! `Π_G(H) = |G|⁻¹ Σ_j g_j† H g_j` is the orthogonal (Hilbert–Schmidt)
//! projector onto the centralizer `Z(G)`; everything here is built on it.

mod error_space;
mod group;

use crate::error::Result;
use crate::operator::Operator;
use crate::scalar::Real;

pub use error_space::{Correctability, ErrorSpace};
pub use group::{zero_tol, DecouplingGroup, MAX_GROUP_ORDER, PHASE_TOL};

pub fn verify_group<R: Real>(elements: Vec<Operator<R>>) -> Result<DecouplingGroup<R>> {
    DecouplingGroup::verify(elements)
}

pub fn project<R: Real>(group: &DecouplingGroup<R>, h: &Operator<R>) -> Result<Operator<R>> {
    group.project(h)
}

pub fn in_centralizer<R: Real>(group: &DecouplingGroup<R>, o: &Operator<R>, tol: R) -> bool {
    group.in_centralizer(o, tol)
}

pub fn is_correctable<R: Real>(
    group: &DecouplingGroup<R>,
    errors: &ErrorSpace<R>,
    tol: R,
) -> Result<Correctability<R>> {
    errors.correctability(group, tol)
}

pub fn twist<R: Real>(group: &DecouplingGroup<R>, p: &Operator<R>) -> Result<DecouplingGroup<R>> {
    group.twist(p)
}

/// Hilbert–Schmidt orthonormal basis of `Z(G)`.
///
/// Projects each matrix unit `|a⟩⟨b|` and keeps the directions that survive
/// Gram–Schmidt (two passes) above a relative cutoff of `1e-9`.
pub fn centralizer_basis<R: Real>(group: &DecouplingGroup<R>) -> Vec<Operator<R>> {
    let d = group.dim();
    let cutoff = R::tol(1e-9);
    let mut basis: Vec<Operator<R>> = Vec::new();
    for a in 0..d {
        for b in 0..d {
            let mut unit = Operator::zeros(d).into_matrix();
            unit[(a, b)] = crate::scalar::cr(R::one());
            let mut v = group.project(&Operator::wrap(unit)).expect("dimension matches group");
            for _ in 0..2 {
                for q in &basis {
                    v = &v - &q.scale(q.hs_inner(&v));
                }
            }
            let n = v.hs_norm();
            if n > cutoff {
                basis.push(v.scale_re(R::one() / n));
            }
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Axis;

    type Op = Operator<f64>;

    #[test]
    fn trivial_group_fixes_everything() {
        assert_eq!(centralizer_basis(&DecouplingGroup::<f64>::trivial(2)).len(), 4);
    }

    #[test]
    fn full_pauli_single_qubit_is_maximal_averaging() {
        let g = DecouplingGroup::generate(&[Op::pauli(Axis::X), Op::pauli(Axis::Z)]).unwrap();
        let basis = centralizer_basis(&g);
        assert_eq!(basis.len(), 1);
        let expected = Op::identity(2).scale_re(std::f64::consts::FRAC_1_SQRT_2);
        assert!(basis[0].eq_up_to_phase(&expected, 1e-12));
    }
}
