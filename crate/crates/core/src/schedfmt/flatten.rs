use super::compile::Compiled;
use crate::dynamics::{segment_hamiltonians, PulseShape, PulseTrain};
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::program::Control;
use crate::scalar::Real;

/// What a pulse event does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseRole {
    /// Decoupling pulse `D_j`, `j = 1..|G|`.
    Decoupling(usize),
    /// `P` opening a twisted window.
    Frame,
    /// `P†` closing a twisted window.
    FrameRestore,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EventKind<R: Real> {
    /// Evolution under a constant Hamiltonian.
    Segment { hamiltonian: Operator<R>, duration: R },
    /// A pulse of ideal unitary `unitary`. With `width > 0` it is realised by
    /// driving `drive` for `width`, which matches `unitary` up to phase only
    /// when the free Hamiltonian is off.
    Pulse { unitary: Operator<R>, width: R, drive: Option<Operator<R>>, role: PulseRole },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event<R: Real> {
    pub at: R,
    pub kind: EventKind<R>,
}

/// Timed, executable form of a program.
#[derive(Debug, Clone, PartialEq)]
pub struct EventList<R: Real> {
    pub events: Vec<Event<R>>,
    pub total_duration: R,
    pub cycle_time: R,
    pub group_order: usize,
}

impl<R: Real> EventList<R> {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Largest distance from 𝟙 (up to phase) of the ordered product of the
    /// decoupling pulses in any one cycle.
    pub fn cyclicity_defect(&self) -> R {
        let pulses: Vec<&Operator<R>> = self
            .events
            .iter()
            .filter_map(|e| match &e.kind {
                EventKind::Pulse { unitary, role: PulseRole::Decoupling(_), .. } => Some(unitary),
                _ => None,
            })
            .collect();
        let mut worst = R::zero();
        for cycle in pulses.chunks(self.group_order) {
            let product = cycle.iter().fold(Operator::identity(cycle[0].dim()), |acc, d| *d * &acc);
            let tr = product.trace();
            let r = tr.norm_sqr().sqrt();
            let defect = if r > R::zero() {
                (&product - &Operator::identity(product.dim()).scale(tr / crate::scalar::cr(r))).max_abs()
            } else {
                R::one()
            };
            worst = worst.max(defect);
        }
        worst
    }
}

/// Expand a compiled program into timed events for `n_cycles_total` cycles.
///
/// `h_total` may act on a system-bath space; operators are lifted onto it.
/// Within a cycle, subinterval `j` is a free segment starting at `j·Δt`
/// followed by the pulse `D_{j+1}` ending at `(j+1)·Δt`. Twisted windows are
/// bracketed by ideal `P` and `P†` events at their boundary times.
pub fn flatten<R: Real>(
    program: &Compiled<R>,
    h_total: &Operator<R>,
    n_cycles_total: usize,
    pulse: &PulseShape<R>,
) -> Result<EventList<R>> {
    let spec = &program.spec;
    let total_windows = program.schedule.total_cycles();
    if total_windows > n_cycles_total {
        return Err(Error::Bounds(format!(
            "windows span {total_windows} cycles but only {n_cycles_total} were requested"
        )));
    }
    if pulse.width >= spec.delta_t() || pulse.width < R::zero() {
        return Err(Error::Argument(format!("pulse width {} must lie in [0, Δt)", pulse.width)));
    }
    let dim = h_total.dim();
    let group = spec.group().lift_to(dim)?;
    let train = PulseTrain::new(spec, dim, pulse)?;
    let dt = spec.delta_t();
    let tc = spec.cycle_time();
    let free = dt - pulse.width;

    let mut plan: Vec<(Option<Control<R>>, usize)> = program
        .schedule
        .windows()
        .iter()
        .map(|w| Ok((Some(w.control.lift_to(dim)?), w.cycles)))
        .collect::<Result<_>>()?;
    plan.push((None, n_cycles_total - total_windows));

    let mut events = Vec::new();
    let mut cycle = 0usize;
    for (control, cycles) in plan {
        if cycles == 0 {
            continue;
        }
        let segments = segment_hamiltonians(&group, h_total, control.as_ref());
        let frame = control.as_ref().and_then(|c| c.pulse()).cloned();
        if let Some(p) = &frame {
            events.push(Event { at: at(cycle, 0, tc, dt), kind: ideal(p.clone(), PulseRole::Frame) });
        }
        for _ in 0..cycles {
            for (j, seg) in segments.iter().enumerate() {
                let start = at(cycle, j, tc, dt);
                events.push(Event { at: start, kind: EventKind::Segment { hamiltonian: seg.clone(), duration: free } });
                let drive = train.generators.as_ref().map(|gens| {
                    let g = gens[j].scale_re(R::one() / pulse.width);
                    match pulse.mode {
                        crate::dynamics::PulseMode::HamiltonianOn => &g + seg,
                        crate::dynamics::PulseMode::HamiltonianOff => g,
                    }
                });
                events.push(Event {
                    at: start + free,
                    kind: EventKind::Pulse {
                        unitary: train.unitaries[j].clone(),
                        width: pulse.width,
                        drive,
                        role: PulseRole::Decoupling(j + 1),
                    },
                });
            }
            cycle += 1;
        }
        if let Some(p) = &frame {
            events.push(Event { at: at(cycle, 0, tc, dt), kind: ideal(p.adjoint(), PulseRole::FrameRestore) });
        }
    }
    Ok(EventList {
        events,
        total_duration: R::from_usize(n_cycles_total).unwrap() * tc,
        cycle_time: tc,
        group_order: spec.order(),
    })
}

fn at<R: Real>(cycle: usize, j: usize, tc: R, dt: R) -> R {
    R::from_usize(cycle).unwrap() * tc + R::from_usize(j).unwrap() * dt
}

fn ideal<R: Real>(unitary: Operator<R>, role: PulseRole) -> EventKind<R> {
    EventKind::Pulse { unitary, width: R::zero(), drive: None, role }
}
