//! Dynamical decoupling and its control programming.
//!
//! The crate is generic over the real scalar type ([`Real`], implemented for
//! `f32` and `f64`); the `*64` aliases below fix it to `f64`, which is what
//! the command-line tool and the tolerances quoted in the docs assume.

pub mod builtins;
pub mod dynamics;
pub mod error;
pub mod interchange;
pub mod operator;
pub mod program;
pub mod scalar;
pub mod schedfmt;
pub mod symmetrize;

pub use error::{Error, Result};
pub use operator::{Axis, Operator};
pub use scalar::Real;

pub type Operator64 = operator::Operator<f64>;
pub type Operator32 = operator::Operator<f32>;
pub type DecouplingGroup64 = symmetrize::DecouplingGroup<f64>;
pub type ErrorSpace64 = symmetrize::ErrorSpace<f64>;
pub type CycleSpec64 = program::CycleSpec<f64>;
pub type Control64 = program::Control<f64>;
pub type ControlSchedule64 = program::ControlSchedule<f64>;
pub type BathModel64 = dynamics::BathModel<f64>;
pub type SimConfig64 = dynamics::SimConfig<f64>;
pub type StateVector64 = operator::StateVector<f64>;
pub type Registry64 = builtins::Registry<f64>;
