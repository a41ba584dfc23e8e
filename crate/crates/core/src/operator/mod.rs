//! Dense complex operators on finite Hilbert spaces.
//!
//! Everything else in the crate is built from [`Operator`]: Hamiltonians,
//! decoupling pulses, error generators and propagators all share this one
//! representation. Values are immutable once built; arithmetic returns new
//! operators.

mod funcs;
mod json;
pub mod random;
mod state;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{c, cr, Real, C};

pub use funcs::{
    expm, hermitian_eigen, logm_principal, logm_principal_guarded, unitary_eigen, UnitaryEigen, BRANCH_GUARD,
};
pub use json::OperatorJson;
pub use state::{
    basis_state, normalize, overlap, partial_trace_bath, plus_state, product_state, state_infidelity,
    system_infidelity, uhlmann_fidelity, StateVector,
};

/// Largest Hilbert-space dimension the crate is exercised against.
pub const MAX_DIM: usize = 256;

/// Default absolute tolerance for Hermiticity and unitarity checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Dense `d x d` complex matrix acting on a `d`-dimensional Hilbert space.
#[derive(Clone, PartialEq)]
pub struct Operator<R: Real> {
    m: DMatrix<C<R>>,
}

/// Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn from_name(name: &str) -> Option<Axis> {
        match name {
            "x" | "X" => Some(Axis::X),
            "y" | "Y" => Some(Axis::Y),
            "z" | "Z" => Some(Axis::Z),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Splitting of a Hilbert space into tensor factors, e.g. `[2, 2, 4]` for two
/// qubits next to a four-level bath.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertFactorization {
    subsystem_dims: Vec<usize>,
}

impl HilbertFactorization {
    pub fn new(subsystem_dims: Vec<usize>) -> Result<Self> {
        if subsystem_dims.is_empty() || subsystem_dims.contains(&0) {
            return Err(Error::Argument("subsystem dimensions must be positive".into()));
        }
        Ok(Self { subsystem_dims })
    }

    /// `k` qubits, optionally followed by a bath factor.
    pub fn qubits(k: usize, bath_dim: Option<usize>) -> Result<Self> {
        let mut dims = vec![2; k];
        dims.extend(bath_dim);
        Self::new(dims)
    }

    pub fn subsystem_dims(&self) -> &[usize] {
        &self.subsystem_dims
    }

    pub fn dim(&self) -> usize {
        self.subsystem_dims.iter().product()
    }

    pub fn check(&self, op_dim: usize) -> Result<()> {
        if self.dim() != op_dim {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: op_dim });
        }
        Ok(())
    }
}

impl<R: Real> Operator<R> {
    pub fn from_matrix(m: DMatrix<C<R>>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Argument(format!("operator must be square, got {}x{}", m.nrows(), m.ncols())));
        }
        if m.nrows() == 0 || m.nrows() > MAX_DIM {
            return Err(Error::Argument(format!("dimension {} outside 1..={MAX_DIM}", m.nrows())));
        }
        Ok(Self { m })
    }

    pub(crate) fn wrap(m: DMatrix<C<R>>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self { m }
    }

    /// Build from row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let d = re.len();
        if im.len() != d || re.iter().chain(im).any(|row| row.len() != d) {
            return Err(Error::Argument("re/im must both be square with matching sides".into()));
        }
        let mut m = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let (a, b) = (re[i][j], im[i][j]);
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::Argument(format!("non-finite entry at ({i},{j})")));
                }
                m[(i, j)] = c(a, b);
            }
        }
        Self::from_matrix(m)
    }

    pub fn zeros(d: usize) -> Self {
        Self::wrap(DMatrix::zeros(d, d))
    }

    pub fn identity(d: usize) -> Self {
        Self::wrap(DMatrix::identity(d, d))
    }

    pub fn from_diagonal(diag: &[C<R>]) -> Self {
        let d = diag.len();
        Self::wrap(DMatrix::from_fn(d, d, |i, j| if i == j { diag[i] } else { C::new(R::zero(), R::zero()) }))
    }

    /// Single-qubit Pauli matrix.
    pub fn pauli(axis: Axis) -> Self {
        let (o, z, i) = (c::<R>(1.0, 0.0), c::<R>(0.0, 0.0), c::<R>(0.0, 1.0));
        let entries = match axis {
            Axis::X => [z, o, o, z],
            Axis::Y => [z, -i, i, z],
            Axis::Z => [o, z, z, -o],
        };
        Self::wrap(DMatrix::from_row_slice(2, 2, &entries))
    }

    /// `σ_axis` on qubit `site` (1-based) of a `k`-qubit register.
    pub fn pauli_on(k: usize, site: usize, axis: Axis) -> Result<Self> {
        if k == 0 || 1usize << k > MAX_DIM {
            return Err(Error::Argument(format!("qubit count {k} outside 1..=8")));
        }
        if site == 0 || site > k {
            return Err(Error::Argument(format!("site {site} outside 1..={k}")));
        }
        let mut out = Self::identity(1);
        for s in 1..=k {
            let f = if s == site { Self::pauli(axis) } else { Self::identity(2) };
            out = out.kron(&f);
        }
        Ok(out)
    }

    /// Tensor product of single-qubit Paulis; `None` marks an identity factor.
    pub fn pauli_string(factors: &[Option<Axis>]) -> Self {
        factors
            .iter()
            .fold(Self::identity(1), |acc, f| acc.kron(&f.map(Self::pauli).unwrap_or_else(|| Self::identity(2))))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C<R>> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C<R>> {
        self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> C<R> {
        self.m[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self::wrap(self.m.adjoint())
    }

    pub fn scale(&self, s: C<R>) -> Self {
        Self::wrap(self.m.map(|z| z * s))
    }

    pub fn scale_re(&self, s: R) -> Self {
        self.scale(cr(s))
    }

    pub fn trace(&self) -> C<R> {
        self.m.trace()
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self::wrap(self.m.kronecker(&other.m))
    }

    /// `self ⊗ 𝟙_n`.
    pub fn embed_left(&self, n: usize) -> Self {
        if n == 1 {
            return self.clone();
        }
        self.kron(&Self::identity(n))
    }

    /// Lift a factor operator onto a space of dimension `dim` by tensoring
    /// with identity on the right.
    pub fn lift_to(&self, dim: usize) -> Result<Self> {
        let d = self.dim();
        if dim == d {
            Ok(self.clone())
        } else if dim.is_multiple_of(d) {
            Ok(self.embed_left(dim / d))
        } else {
            Err(Error::DimensionMismatch { expected: dim, found: d })
        }
    }

    /// `g† · self · g`.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        Self::wrap(g.m.adjoint() * &self.m * &g.m)
    }

    /// `⟨self, other⟩ = tr(self† other)`.
    pub fn hs_inner(&self, other: &Self) -> C<R> {
        self.m.dotc(&other.m)
    }

    /// Hilbert–Schmidt (Frobenius) norm `√tr(X†X)`.
    pub fn hs_norm(&self) -> R {
        self.m.iter().fold(R::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> R {
        self.m.iter().fold(R::zero(), |acc, z| acc.max(z.modulus()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> R {
        self.m.iter().zip(other.m.iter()).fold(R::zero(), |acc, (a, b)| acc.max((*a - *b).modulus()))
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> R {
        self.m.singular_values().iter().fold(R::zero(), |acc, &s| acc.max(s))
    }

    pub fn one_norm(&self) -> R {
        (0..self.dim())
            .map(|j| self.m.column(j).iter().fold(R::zero(), |acc, z| acc + z.modulus()))
            .fold(R::zero(), |a, b| a.max(b))
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn hermiticity_defect(&self) -> R {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn unitarity_defect(&self) -> R {
        let p = Self::wrap(&self.m * self.m.adjoint());
        p.max_abs_diff(&Self::identity(self.dim()))
    }

    pub fn is_hermitian(&self, tol: R) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: R) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn ensure_hermitian(&self, tol: R, what: &str) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > tol {
            return Err(Error::Argument(format!("{what} is not Hermitian (defect {defect:e})")));
        }
        Ok(())
    }

    pub fn ensure_unitary(&self, tol: R, what: &str) -> Result<()> {
        let defect = self.unitarity_defect();
        if defect > tol {
            return Err(Error::Argument(format!("{what} is not unitary (defect {defect:e})")));
        }
        Ok(())
    }

    pub fn ensure_dim(&self, d: usize) -> Result<()> {
        if self.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: self.dim() });
        }
        Ok(())
    }

    pub fn hermitian_part(&self) -> Self {
        Self::wrap((&self.m + self.m.adjoint()).map(|z| z * R::lit(0.5)))
    }

    pub fn traceless_part(&self) -> Self {
        let d = self.dim();
        let shift = self.trace() / cr(R::from_usize(d).unwrap());
        self - &Self::identity(d).scale(shift)
    }

    /// Returns the unit phase `φ` with `self ≈ φ · other` when it exists.
    ///
    /// The phase is read off the ratio at the largest-magnitude entry of
    /// `other`, then the whole matrix is compared entry-wise within `tol`.
    pub fn phase_relative_to(&self, other: &Self, tol: R) -> Option<C<R>> {
        if self.dim() != other.dim() {
            return None;
        }
        let (mut best, mut idx) = (R::zero(), 0);
        for (k, z) in other.m.iter().enumerate() {
            if z.modulus() > best {
                best = z.modulus();
                idx = k;
            }
        }
        if best <= tol {
            return None;
        }
        let ratio = self.m[idx] / other.m[idx];
        let r = ratio.modulus();
        if r <= tol {
            return None;
        }
        let phase = ratio / cr(r);
        let defect =
            self.m.iter().zip(other.m.iter()).fold(R::zero(), |acc, (a, b)| acc.max((*a - *b * phase).modulus()));
        (defect <= tol).then_some(phase)
    }

    pub fn eq_up_to_phase(&self, other: &Self, tol: R) -> bool {
        self.phase_relative_to(other, tol).is_some()
    }

    pub fn apply(&self, v: &StateVector<R>) -> StateVector<R> {
        &self.m * v
    }

    /// Converts to another scalar precision.
    pub fn cast<S: Real>(&self) -> Operator<S> {
        Operator::wrap(self.m.map(|z| Complex::new(S::lit(z.re.as_f64()), S::lit(z.im.as_f64()))))
    }
}

/// `[x, y] = xy − yx`.
pub fn commutator<R: Real>(x: &Operator<R>, y: &Operator<R>) -> Result<Operator<R>> {
    y.ensure_dim(x.dim())?;
    Ok(Operator::wrap(&x.m * &y.m - &y.m * &x.m))
}

pub fn hs_norm<R: Real>(x: &Operator<R>) -> R {
    x.hs_norm()
}

pub fn pauli_on<R: Real>(k: usize, site: usize, axis: Axis) -> Result<Operator<R>> {
    Operator::pauli_on(k, site, axis)
}

impl<R: Real> fmt::Debug for Operator<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator(dim={})", self.dim())?;
        for i in 0..self.dim() {
            write!(f, "\n  [")?;
            for j in 0..self.dim() {
                let z = self.m[(i, j)];
                write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
            }
            write!(f, " ]")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a, R: Real> $tr<&'a Operator<R>> for &'a Operator<R> {
            type Output = Operator<R>;
            fn $method(self, rhs: &'a Operator<R>) -> Operator<R> {
                assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
                Operator::wrap(&self.m $op &rhs.m)
            }
        }
        impl<R: Real> $tr<Operator<R>> for Operator<R> {
            type Output = Operator<R>;
            fn $method(self, rhs: Operator<R>) -> Operator<R> {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl<R: Real> Neg for &Operator<R> {
    type Output = Operator<R>;
    fn neg(self) -> Operator<R> {
        Operator::wrap(-&self.m)
    }
}

impl<R: Real> std::iter::Sum for Operator<R> {
    /// Panics on an empty iterator, since the dimension is unknown.
    fn sum<I: Iterator<Item = Self>>(mut iter: I) -> Self {
        let first = iter.next().expect("sum of an empty operator list");
        iter.fold(first, |acc, x| &acc + &x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Op = Operator<f64>;

    #[test]
    fn pauli_on_single_qubit_z() {
        let z = Op::pauli_on(1, 1, Axis::Z).unwrap();
        assert_eq!(z, Op::from_diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]));
    }

    #[test]
    fn pauli_on_second_site_x() {
        let x2 = Op::pauli_on(2, 2, Axis::X).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = matches!((i, j), (0, 1) | (1, 0) | (2, 3) | (3, 2));
                assert_eq!(x2.entry(i, j), c(if expected { 1.0 } else { 0.0 }, 0.0));
            }
        }
    }

    #[test]
    fn pauli_is_traceless() {
        let y = Op::pauli_on(3, 2, Axis::Y).unwrap();
        assert_eq!(y.trace(), c(0.0, 0.0));
        assert!(y.is_hermitian(1e-15) && y.is_unitary(1e-15));
    }

    #[test]
    fn pauli_on_rejects_bad_site() {
        assert!(matches!(Op::pauli_on(2, 0, Axis::X), Err(Error::Argument(_))));
        assert!(matches!(Op::pauli_on(2, 3, Axis::X), Err(Error::Argument(_))));
    }

    #[test]
    fn commutator_examples() {
        let (x, y, z) = (Op::pauli(Axis::X), Op::pauli(Axis::Y), Op::pauli(Axis::Z));
        assert_eq!(commutator(&x, &x).unwrap().hs_norm(), 0.0);
        let xy = commutator(&x, &y).unwrap();
        assert!(xy.max_abs_diff(&z.scale(c(0.0, 2.0))) < 1e-15);
        assert!(matches!(commutator(&x, &Op::identity(4)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn hs_norm_examples() {
        assert_eq!(Op::zeros(4).hs_norm(), 0.0);
        assert_eq!(Op::identity(4).hs_norm(), 2.0);
        assert!((Op::pauli(Axis::Z).hs_norm() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn phase_match_finds_global_phase() {
        let x = Op::pauli(Axis::X);
        let y = x.scale(c(0.0, -1.0));
        let phase = y.phase_relative_to(&x, 1e-12).unwrap();
        assert!((phase - c(0.0, -1.0)).norm() < 1e-15);
        assert!(Op::pauli(Axis::Y).phase_relative_to(&x, 1e-9).is_none());
    }

    #[test]
    fn factorization_product() {
        let f = HilbertFactorization::qubits(2, Some(4)).unwrap();
        assert_eq!(f.dim(), 16);
        assert!(f.check(16).is_ok());
        assert!(f.check(8).is_err());
        assert!(HilbertFactorization::new(vec![2, 0]).is_err());
    }

    #[test]
    fn f32_paulis_match() {
        let z = Operator::<f32>::pauli_on(2, 1, Axis::Z).unwrap();
        assert!(z.is_unitary(f32::tol(1e-10)));
    }
}
