use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex;

use super::Operator;
use crate::error::{Error, Result};
use crate::scalar::{cr, Real, C};

/// Angular guard band (radians) around the `−1` branch cut of the principal
/// logarithm.
pub const BRANCH_GUARD: f64 = 1e-6;

const THETA_13: f64 = 5.371920351148152;
const LOW_ORDER: [(usize, f64); 4] =
    [(3, 1.495585217958292e-2), (5, 2.539398330063230e-1), (7, 9.504178996162932e-1), (9, 2.097847961257068)];

fn pade_coefficients(m: usize) -> &'static [f64] {
    match m {
        3 => &[120.0, 60.0, 12.0, 1.0],
        5 => &[30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0],
        7 => &[17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0],
        9 => &[
            17643225600.0,
            8821612800.0,
            2075673600.0,
            302702400.0,
            30270240.0,
            2162160.0,
            110880.0,
            3960.0,
            90.0,
            1.0,
        ],
        13 => &[
            64764752532480000.0,
            32382376266240000.0,
            7771770303897600.0,
            1187353796428800.0,
            129060195264000.0,
            10559470521600.0,
            670442572800.0,
            33522128640.0,
            1323241920.0,
            40840800.0,
            960960.0,
            16380.0,
            182.0,
            1.0,
        ],
        _ => unreachable!("unsupported Padé order {m}"),
    }
}

/// Matrix exponential by scaling and squaring with a diagonal Padé
/// approximant of order 3..13 selected from the 1-norm.
pub fn expm<R: Real>(x: &Operator<R>) -> Result<Operator<R>> {
    if !x.is_finite() {
        return Err(Error::Argument("expm of an operator with non-finite entries".into()));
    }
    let norm = x.one_norm().as_f64();
    let a = x.matrix();
    for (m, theta) in LOW_ORDER {
        if norm <= theta {
            return pade(a, m).map(Operator::wrap);
        }
    }
    let s = (norm / THETA_13).log2().ceil().max(0.0) as i32;
    let scaled = a.map(|z| z * cr(R::lit(2f64.powi(-s))));
    let mut r = pade(&scaled, 13)?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(Operator::wrap(r))
}

fn pade<R: Real>(a: &DMatrix<C<R>>, m: usize) -> Result<DMatrix<C<R>>> {
    let n = a.nrows();
    let b: Vec<C<R>> = pade_coefficients(m).iter().map(|&v| cr(R::lit(v))).collect();
    let id = DMatrix::<C<R>>::identity(n, n);
    let a2 = a * a;
    let (u, v) = if m == 13 {
        let a4 = &a2 * &a2;
        let a6 = &a4 * &a2;
        let inner_u = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]);
        let u = a * (inner_u + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &id * b[1]);
        let inner_v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]);
        let v = inner_v + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &id * b[0];
        (u, v)
    } else {
        // powers[k] = A^(2k)
        let mut powers = vec![id.clone(), a2.clone()];
        while powers.len() <= m / 2 {
            let next = powers.last().unwrap() * &a2;
            powers.push(next);
        }
        let mut u_even = DMatrix::zeros(n, n);
        let mut v = DMatrix::zeros(n, n);
        for k in 0..=m / 2 {
            u_even += &powers[k] * b[2 * k + 1];
            v += &powers[k] * b[2 * k];
        }
        (a * u_even, v)
    };
    (&v - &u)
        .lu()
        .solve(&(&v + &u))
        .ok_or_else(|| Error::NumericalIntegrity("singular Padé denominator in expm".into()))
}

/// Eigendecomposition of a unitary operator, `U = Q · diag(e^{iθ}) · Q†`.
#[derive(Debug, Clone)]
pub struct UnitaryEigen<R: Real> {
    pub vectors: DMatrix<C<R>>,
    pub phases: Vec<R>,
}

impl<R: Real> UnitaryEigen<R> {
    pub fn reconstruct(&self, f: impl Fn(R) -> C<R>) -> Operator<R> {
        let n = self.phases.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let s = f(self.phases[j]);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= s);
        }
        Operator::wrap(scaled * self.vectors.adjoint())
    }
}

/// Unitary eigendecomposition via the complex Schur form (diagonal for a
/// normal matrix up to rounding).
pub fn unitary_eigen<R: Real>(u: &Operator<R>) -> Result<UnitaryEigen<R>> {
    u.ensure_unitary(R::tol(1e-8), "operator passed to unitary_eigen")?;
    let (q, t) = Schur::new(u.matrix().clone()).unpack();
    let phases = (0..u.dim()).map(|k| t[(k, k)].im.atan2(t[(k, k)].re)).collect();
    Ok(UnitaryEigen { vectors: q, phases })
}

/// Principal matrix logarithm of a unitary operator.
///
/// Returns the anti-Hermitian `L` with `expm(L) = U` and every eigenphase in
/// `(−π, π)`. Eigenvalues within [`BRANCH_GUARD`] of `−1` are rejected.
pub fn logm_principal<R: Real>(u: &Operator<R>) -> Result<Operator<R>> {
    logm_principal_guarded(u, BRANCH_GUARD)
}

pub fn logm_principal_guarded<R: Real>(u: &Operator<R>, guard: f64) -> Result<Operator<R>> {
    let eig = unitary_eigen(u)?;
    let limit = std::f64::consts::PI - guard;
    if let Some(&phase) = eig.phases.iter().find(|p| p.as_f64().abs() > limit) {
        return Err(Error::BranchCut { phase: phase.as_f64(), guard });
    }
    let l = eig.reconstruct(|theta| Complex::new(R::zero(), theta));
    Ok(Operator::wrap((l.matrix() - l.matrix().adjoint()).map(|z| z * R::lit(0.5))))
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian operator.
pub fn hermitian_eigen<R: Real>(h: &Operator<R>) -> (Vec<R>, DMatrix<C<R>>) {
    let eig = SymmetricEigen::new(h.hermitian_part().into_matrix());
    let mut order: Vec<usize> = (0..h.dim()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(h.dim(), h.dim(), |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// Square root of a positive-semidefinite Hermitian operator; small negative
/// eigenvalues from rounding are clipped to zero.
pub(crate) fn sqrtm_psd<R: Real>(h: &Operator<R>) -> Operator<R> {
    let (values, vectors) = hermitian_eigen(h);
    let mut scaled = vectors.clone();
    for (j, v) in values.iter().enumerate() {
        let s = cr(v.max(R::zero()).sqrt());
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= s);
    }
    Operator::wrap(scaled * vectors.adjoint())
}
