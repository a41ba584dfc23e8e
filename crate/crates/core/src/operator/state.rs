//! Pure joint states, bath partial traces and fidelities.

use nalgebra::{DMatrix, DVector};

use super::funcs::sqrtm_psd;
use super::Operator;
use crate::error::{Error, Result};
use crate::scalar::{cr, Real, C};

pub type StateVector<R> = DVector<C<R>>;

/// Computational basis state `|index⟩` in dimension `dim`.
pub fn basis_state<R: Real>(dim: usize, index: usize) -> StateVector<R> {
    let mut v = DVector::zeros(dim);
    v[index] = cr(R::one());
    v
}

pub fn product_state<R: Real>(parts: &[StateVector<R>]) -> StateVector<R> {
    parts.iter().fold(DVector::from_element(1, cr(R::one())), |acc, p| acc.kronecker(p))
}

pub fn normalize<R: Real>(v: &StateVector<R>) -> Result<StateVector<R>> {
    let n = v.norm();
    if n <= R::zero() || !n.is_finite() {
        return Err(Error::Argument("cannot normalize a zero or non-finite state".into()));
    }
    Ok(v.map(|z| z / cr(n)))
}

/// `⟨a|b⟩`.
pub fn overlap<R: Real>(a: &StateVector<R>, b: &StateVector<R>) -> C<R> {
    a.dotc(b)
}

/// `1 − |⟨a|b⟩|²` for pure states.
pub fn state_infidelity<R: Real>(a: &StateVector<R>, b: &StateVector<R>) -> R {
    (R::one() - overlap(a, b).norm_sqr()).max(R::zero())
}

/// Reduced system density matrix `Tr_B |ψ⟩⟨ψ|` with the system as the left
/// tensor factor.
pub fn partial_trace_bath<R: Real>(psi: &StateVector<R>, system_dim: usize) -> Result<Operator<R>> {
    if system_dim == 0 || !psi.len().is_multiple_of(system_dim) {
        return Err(Error::DimensionMismatch { expected: system_dim, found: psi.len() });
    }
    let bath_dim = psi.len() / system_dim;
    // Reshape ψ into a (system × bath) matrix M; ρ_S = M M†.
    let m = DMatrix::from_fn(system_dim, bath_dim, |s, b| psi[s * bath_dim + b]);
    Ok(Operator::wrap(&m * m.adjoint()))
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`.
pub fn uhlmann_fidelity<R: Real>(rho: &Operator<R>, sigma: &Operator<R>) -> R {
    let s = sqrtm_psd(rho);
    let inner = &(&s * sigma) * &s;
    let root = sqrtm_psd(&inner);
    let t = root.trace().re;
    (t * t).min(R::one())
}

/// Infidelity of the bath-traced system states of two joint pure states.
pub fn system_infidelity<R: Real>(a: &StateVector<R>, b: &StateVector<R>, system_dim: usize) -> Result<R> {
    if system_dim == a.len() {
        return Ok(state_infidelity(a, b));
    }
    let ra = partial_trace_bath(a, system_dim)?;
    let rb = partial_trace_bath(b, system_dim)?;
    Ok((R::one() - uhlmann_fidelity(&ra, &rb)).max(R::zero()))
}

/// `(|0⟩ + |1⟩)/√2`.
pub fn plus_state<R: Real>() -> StateVector<R> {
    let h = cr(R::lit(std::f64::consts::FRAC_1_SQRT_2));
    DVector::from_vec(vec![h, h])
}
