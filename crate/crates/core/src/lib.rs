//! Seeded simulator of a two-sided rideshare market.
//!
//! A fixed population of drivers meets a fresh batch of passengers every
//! round. Each round both sides rank each other, one of four mechanisms
//! produces a matching, and matched drivers collect the fare and move to the
//! dropoff. Runs report revenue and the distribution of driver income.
//!
//! The numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the CLI uses.

// `!(x > 0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod agents;
pub mod economics;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod ids;
pub mod mechanisms;
pub mod reporting;
pub mod scalar;
pub mod stats;

pub use agents::{spawn_drivers, spawn_passengers, AgentConfig, DriverState, PassengerRequest};
pub use economics::{build_preferences, EconWeights, NormalizationContext, PassengerScoring};
pub use engine::{
    run_round, run_simulation, run_sweep, RoundRecord, RunSummary, SimConfig, Simulation, SweepAxis, SweepCell,
};
pub use error::{Error, Result};
pub use geometry::{GridConfig, GridPoint};
pub use ids::{DriverId, PassengerId};
pub use mechanisms::{MatchingOutcome, Mechanism, PreferenceProfile};
pub use scalar::Scalar;

pub type Point = GridPoint<f64>;
pub type Driver = DriverState<f64>;
pub type Passenger = PassengerRequest<f64>;
pub type Weights = EconWeights<f64>;
pub type Profile = PreferenceProfile<f64>;
pub type Config = SimConfig<f64>;
pub type Summary = RunSummary<f64>;

pub type ConfigF32 = SimConfig<f32>;
pub type SummaryF32 = RunSummary<f32>;
