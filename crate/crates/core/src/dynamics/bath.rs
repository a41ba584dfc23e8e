use rand::Rng;

use crate::error::{Error, Result};
use crate::operator::random::{random_hermitian, seeded_rng};
use crate::operator::{Axis, Operator};
use crate::scalar::Real;

/// Finite quantum bath linearly coupled to the system:
/// `H = H_S ⊗ 𝟙 + 𝟙 ⊗ H_B + Σ_α E_α ⊗ B_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct BathModel<R: Real> {
    system_dim: usize,
    h_b: Operator<R>,
    couplings: Vec<(Operator<R>, Operator<R>)>,
}

impl<R: Real> BathModel<R> {
    pub fn new(system_dim: usize, h_b: Operator<R>, couplings: Vec<(Operator<R>, Operator<R>)>) -> Result<Self> {
        let tol = R::tol(1e-10);
        h_b.ensure_hermitian(tol, "bath Hamiltonian")?;
        for (k, (e, b)) in couplings.iter().enumerate() {
            e.ensure_dim(system_dim)?;
            b.ensure_dim(h_b.dim())?;
            e.ensure_hermitian(tol, &format!("system coupling operator {k}"))?;
            b.ensure_hermitian(tol, &format!("bath coupling operator {k}"))?;
            if e.trace().norm_sqr().sqrt() > tol * e.hs_norm().max(R::one()) {
                return Err(Error::Argument(format!("system coupling operator {k} is not traceless")));
            }
        }
        Ok(Self { system_dim, h_b, couplings })
    }

    /// A one-dimensional bath that never couples.
    pub fn none(system_dim: usize) -> Self {
        Self { system_dim, h_b: Operator::zeros(1), couplings: Vec::new() }
    }

    /// One bath qubit with `H_B = 0` and coupling `σ_z ⊗ g·σ_z`: pure static
    /// dephasing of a single system qubit.
    pub fn static_dephasing(strength: R) -> Self {
        let z = Operator::pauli(Axis::Z);
        Self { system_dim: 2, h_b: Operator::zeros(2), couplings: vec![(z.clone(), z.scale_re(strength))] }
    }

    /// Random spin bath of `bath_qubits` qubits with `‖H_B‖ = 1` coupled to
    /// every qubit of a `system_qubits` register.
    ///
    /// Each system qubit `i` couples through `σ_z^(i)` (and also `σ_x^(i)`,
    /// `σ_y^(i)` when `all_axes`) to its own random bath operator of spectral
    /// norm `strength`. Draws come from a ChaCha8 stream seeded with `seed`.
    pub fn random_spin_bath(
        system_qubits: usize,
        bath_qubits: usize,
        strength: R,
        all_axes: bool,
        seed: u64,
    ) -> Result<Self> {
        if system_qubits == 0 || bath_qubits == 0 || system_qubits + bath_qubits > 8 {
            return Err(Error::Argument(format!(
                "spin bath needs 1..=8 qubits in total, got {system_qubits} system + {bath_qubits} bath"
            )));
        }
        let mut rng = seeded_rng(seed);
        let db = 1 << bath_qubits;
        let h_b = random_hermitian::<R>(db, &mut rng);
        let axes: &[Axis] = if all_axes { &Axis::ALL } else { &[Axis::Z] };
        let mut couplings = Vec::new();
        for i in 1..=system_qubits {
            for &a in axes {
                let b = draw_coupling(db, strength, &mut rng);
                couplings.push((Operator::pauli_on(system_qubits, i, a)?, b));
            }
        }
        Self::new(1 << system_qubits, h_b, couplings)
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn bath_dim(&self) -> usize {
        self.h_b.dim()
    }

    pub fn joint_dim(&self) -> usize {
        self.system_dim * self.bath_dim()
    }

    pub fn bath_hamiltonian(&self) -> &Operator<R> {
        &self.h_b
    }

    pub fn couplings(&self) -> &[(Operator<R>, Operator<R>)] {
        &self.couplings
    }

    /// Bath correlation-time proxy `1/‖H_B‖`; infinite for a static bath.
    pub fn tau_c(&self) -> R {
        let n = self.h_b.spectral_norm();
        if n == R::zero() {
            R::from_f64(f64::INFINITY).unwrap()
        } else {
            R::one() / n
        }
    }

    /// Joint Hamiltonian for the system Hamiltonian `h_s`.
    pub fn joint_hamiltonian(&self, h_s: &Operator<R>) -> Result<Operator<R>> {
        h_s.ensure_dim(self.system_dim)?;
        let db = self.bath_dim();
        let mut h = &h_s.kron(&Operator::identity(db)) + &Operator::identity(self.system_dim).kron(&self.h_b);
        for (e, b) in &self.couplings {
            h = &h + &e.kron(b);
        }
        Ok(h)
    }
}

fn draw_coupling<R: Real>(d: usize, strength: R, rng: &mut impl Rng) -> Operator<R> {
    random_hermitian::<R>(d, rng).scale_re(strength)
}
