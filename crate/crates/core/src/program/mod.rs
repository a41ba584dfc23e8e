//! Control programming on top of a decoupler.
//!
//! A [`ControlSchedule`] is a list of windows, each lasting a whole number of
//! decoupling cycles and carrying one of four control schemes. This module
//! gives the first-order (ideal-limit) effective Hamiltonian of every scheme,
//! the pulse sequence realising a decoupling cycle, and the Lie-algebraic
//! universality test over the reachable Hamiltonians.

mod lie;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::scalar::Real;
use crate::symmetrize::{zero_tol, DecouplingGroup};

pub use lie::{lie_closure, universality_audit, LieClosureReport, CLOSURE_CUTOFF};

/// A decoupling group together with its subinterval length `Δt`.
///
/// The cycle time is always derived, `T_c = |G|·Δt`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleSpec<R: Real> {
    group: DecouplingGroup<R>,
    delta_t: R,
}

impl<R: Real> CycleSpec<R> {
    pub fn new(group: DecouplingGroup<R>, delta_t: R) -> Result<Self> {
        if !(delta_t > R::zero()) || !delta_t.is_finite() {
            return Err(Error::Argument(format!("delta_t must be positive and finite, got {delta_t}")));
        }
        Ok(Self { group, delta_t })
    }

    /// Spec whose cycle lasts `cycle_time`.
    pub fn with_cycle_time(group: DecouplingGroup<R>, cycle_time: R) -> Result<Self> {
        let n = R::from_usize(group.order()).unwrap();
        Self::new(group, cycle_time / n)
    }

    pub fn group(&self) -> &DecouplingGroup<R> {
        &self.group
    }

    pub fn delta_t(&self) -> R {
        self.delta_t
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn cycle_time(&self) -> R {
        R::from_usize(self.order()).unwrap() * self.delta_t
    }

    /// Same cycle acting as `g ⊗ 𝟙` on a joint space of dimension `dim`.
    pub fn lift_to(&self, dim: usize) -> Result<Self> {
        Ok(Self { group: self.group.lift_to(dim)?, delta_t: self.delta_t })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    ParallelSlow,
    TwistedSlow,
    DriftIdentityFrame,
    DriftStrengthRestored,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::ParallelSlow => "parallel_slow",
            Scheme::TwistedSlow => "twisted_slow",
            Scheme::DriftIdentityFrame => "drift_identity_frame",
            Scheme::DriftStrengthRestored => "drift_strength_restored",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The control applied during one window, with its operands.
#[derive(Debug, Clone, PartialEq)]
pub enum Control<R: Real> {
    /// Slow Hamiltonian `A ∈ Z_H(G)` switched on alongside the decoupler.
    ParallelSlow { a: Operator<R> },
    /// Pulse `P` before the window and `P†` after it, with the slow
    /// Hamiltonian `A ∈ Z_H(G)` applied in between. The window then realises
    /// `Π_{P†GP}(P†HP) + P†AP`.
    TwistedSlow { p: Operator<R>, a: Operator<R> },
    /// `B` switched on during the 𝟙-frame subinterval of every cycle.
    DriftIdentityFrame { b: Operator<R> },
    /// `g_j B g_j†` switched on during subinterval `j` of every cycle.
    DriftStrengthRestored { b: Operator<R> },
}

impl<R: Real> Control<R> {
    pub fn scheme(&self) -> Scheme {
        match self {
            Control::ParallelSlow { .. } => Scheme::ParallelSlow,
            Control::TwistedSlow { .. } => Scheme::TwistedSlow,
            Control::DriftIdentityFrame { .. } => Scheme::DriftIdentityFrame,
            Control::DriftStrengthRestored { .. } => Scheme::DriftStrengthRestored,
        }
    }

    /// The window Hamiltonian (`A` or `B`) as applied in the lab frame.
    pub fn hamiltonian(&self) -> &Operator<R> {
        match self {
            Control::ParallelSlow { a } | Control::TwistedSlow { a, .. } => a,
            Control::DriftIdentityFrame { b } | Control::DriftStrengthRestored { b } => b,
        }
    }

    pub fn pulse(&self) -> Option<&Operator<R>> {
        match self {
            Control::TwistedSlow { p, .. } => Some(p),
            _ => None,
        }
    }

    /// Direction this control adds to the effective Hamiltonian, ignoring the
    /// `|G|⁻¹` strength factor of the identity-frame drift.
    pub fn reachable_direction(&self) -> Operator<R> {
        match self {
            Control::TwistedSlow { p, a } => a.conjugate_by(p),
            other => other.hamiltonian().clone(),
        }
    }

    /// Check the scheme's operand constraints against `group`.
    pub fn check(&self, group: &DecouplingGroup<R>, tol: Option<R>) -> Result<()> {
        let h = self.hamiltonian();
        h.ensure_dim(group.dim())?;
        if !h.is_hermitian(R::tol(1e-10)) {
            return Err(Error::Constraint(format!("{} hamiltonian is not Hermitian", self.scheme())));
        }
        match self {
            Control::ParallelSlow { a } => {
                let tol = tol.unwrap_or_else(|| zero_tol(a));
                let defect = group.centralizer_defect(a);
                if defect > tol {
                    return Err(Error::Constraint(format!(
                        "parallel_slow hamiltonian is not in the centralizer Z(G) (max ‖[A,g_j]‖ = {defect:e})"
                    )));
                }
            }
            Control::TwistedSlow { p, a } => {
                p.ensure_dim(group.dim())?;
                if !p.is_unitary(R::tol(1e-10)) {
                    return Err(Error::Constraint("twisted_slow pulse P is not unitary".into()));
                }
                let twisted = group.twist(p)?;
                let image = a.conjugate_by(p);
                let tol = tol.unwrap_or_else(|| zero_tol(a));
                let defect = twisted.centralizer_defect(&image);
                if defect > tol {
                    return Err(Error::Constraint(format!(
                        "twisted_slow hamiltonian P†AP is not in the twisted centralizer Z(P†GP) (defect {defect:e})"
                    )));
                }
            }
            Control::DriftIdentityFrame { .. } | Control::DriftStrengthRestored { .. } => {}
        }
        Ok(())
    }

    /// Operands lifted onto a joint space of dimension `dim`.
    pub fn lift_to(&self, dim: usize) -> Result<Self> {
        Ok(match self {
            Control::ParallelSlow { a } => Control::ParallelSlow { a: a.lift_to(dim)? },
            Control::TwistedSlow { p, a } => Control::TwistedSlow { p: p.lift_to(dim)?, a: a.lift_to(dim)? },
            Control::DriftIdentityFrame { b } => Control::DriftIdentityFrame { b: b.lift_to(dim)? },
            Control::DriftStrengthRestored { b } => Control::DriftStrengthRestored { b: b.lift_to(dim)? },
        })
    }
}

/// A control held for a whole number of cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct Window<R: Real> {
    pub control: Control<R>,
    pub cycles: usize,
}

impl<R: Real> Window<R> {
    pub fn new(control: Control<R>, cycles: usize) -> Result<Self> {
        if cycles == 0 {
            return Err(Error::Synchronization("a window must last at least one cycle".into()));
        }
        Ok(Self { control, cycles })
    }

    /// Window lasting `duration`, which must be a whole number of cycles.
    pub fn spanning(control: Control<R>, duration: R, cycle_time: R) -> Result<Self> {
        let ratio = (duration / cycle_time).as_f64();
        let n = ratio.round();
        if n < 1.0 || (ratio - n).abs() > 1e-9 * n.max(1.0) {
            return Err(Error::Synchronization(format!(
                "window duration {duration} is not a positive multiple of the cycle time {cycle_time}"
            )));
        }
        Self::new(control, n as usize)
    }
}

/// Ordered windows; each starts where the previous one ended.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ControlSchedule<R: Real> {
    windows: Vec<Window<R>>,
}

impl<R: Real> ControlSchedule<R> {
    pub fn new(windows: Vec<Window<R>>) -> Self {
        Self { windows }
    }

    pub fn empty() -> Self {
        Self { windows: Vec::new() }
    }

    pub fn windows(&self) -> &[Window<R>] {
        &self.windows
    }

    pub fn total_cycles(&self) -> usize {
        self.windows.iter().map(|w| w.cycles).sum()
    }

    pub fn check(&self, spec: &CycleSpec<R>, tol: Option<R>) -> Result<()> {
        for (k, w) in self.windows.iter().enumerate() {
            if w.cycles == 0 {
                return Err(Error::Synchronization(format!("window {k} lasts zero cycles")));
            }
            w.control.check(spec.group(), tol).map_err(|e| match e {
                Error::Constraint(msg) => Error::Constraint(format!("window {k}: {msg}")),
                other => other,
            })?;
        }
        Ok(())
    }
}

/// Decoupling pulses `D_j = g_j g_{j−1}†`, `j = 1..|G|`, with `g_{|G|} ≡ 𝟙`.
pub fn pulses_from_group<R: Real>(spec: &CycleSpec<R>) -> Vec<Operator<R>> {
    let g = spec.group().elements();
    let n = g.len();
    (1..=n).map(|j| &g[j % n] * &g[j - 1].adjoint()).collect()
}

/// First-order effective Hamiltonian of one cycle under `control` (or of the
/// bare decoupler when `control` is `None`).
///
/// `h` may act on a system-bath space larger than the group; the group and
/// the control operands are then lifted as `X ⊗ 𝟙_B`.
pub fn effective_hamiltonian<R: Real>(
    spec: &CycleSpec<R>,
    h: &Operator<R>,
    control: Option<&Control<R>>,
) -> Result<Operator<R>> {
    if let Some(c) = control {
        c.check(spec.group(), None)?;
    }
    let dim = h.dim();
    let group = spec.group().lift_to(dim)?;
    let control = control.map(|c| c.lift_to(dim)).transpose()?;
    let n = R::from_usize(group.order()).unwrap();
    Ok(match control {
        None => group.project(h)?,
        Some(Control::ParallelSlow { a }) => &group.project(h)? + &a,
        Some(Control::TwistedSlow { p, a }) => {
            let twisted = group.twist(&p)?;
            &twisted.project(&h.conjugate_by(&p))? + &a.conjugate_by(&p)
        }
        Some(Control::DriftIdentityFrame { b }) => &group.project(h)? + &b.scale_re(R::one() / n),
        Some(Control::DriftStrengthRestored { b }) => &group.project(h)? + &b,
    })
}
