//! Fictitious play on two-player zero-sum matrix games.
//!
//! The crate has four layers:
//!
//! * [`engine`] runs fictitious play as the cumulative-payoff vector system
//!   `(U, V)` over any payoff matrix, with pluggable tie-breaking.
//! * [`constructions`] builds, exactly and deterministically, the adversarial
//!   tie-breaking schedules on identity games `I_n` whose duality gap decays
//!   only like `t^(-1/n)`.
//! * [`validator`] certifies that a trace is a valid fictitious-play execution.
//! * [`analysis`] turns traces into gap series and fits decay exponents.
//!
//! Everything is `no_std` with `alloc`. File formats and the command-line
//! driver live in the companion `fpdyn` crate.
#![no_std]

extern crate alloc;

pub mod analysis;
pub mod constructions;
pub mod engine;
pub mod identity;
pub mod matrix;
pub mod policy;
pub mod scalar;
pub mod schedule;
pub mod seed;
pub mod trace;
pub mod validator;

pub use engine::{DynamicState, EngineError, Side};
pub use matrix::PayoffMatrix;
pub use policy::TieBreakPolicy;
pub use schedule::Schedule;
pub use trace::{Choice, Trace};
