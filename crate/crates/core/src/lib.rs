//! Quantum Otto engine whose working substance is a cavity mode and whose
//! hot (or cold) reservoir is a beam of thermally correlated atom pairs.
//!
//! The numerics are generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`.

pub mod correlations;
pub mod cycle;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod ode;
pub mod reservoir;
pub mod scalar;
pub mod stochastic;

pub use error::{Error, Result};
pub use scalar::{Complex, Real};

pub type TwoQubitThermalState = correlations::TwoQubitThermalState<f64>;
pub type DiscordResult = correlations::DiscordResult<f64>;
pub type ReservoirSpec = reservoir::ReservoirSpec<f64>;
pub type EffectiveReservoir = reservoir::EffectiveReservoir<f64>;
pub type FockOperator = fock::FockOperator<f64>;
pub type SteadyState = fock::SteadyState<f64>;
pub type DrivingProtocol = fock::DrivingProtocol<f64>;
pub type TransitionMatrix = fock::TransitionMatrix<f64>;
pub type CycleConfig = cycle::CycleConfig<f64>;
pub type CycleInputs = cycle::CycleInputs<f64>;
pub type CycleMoments = cycle::CycleMoments<f64>;
pub type CharacteristicFunction = cycle::CharacteristicFunction<f64>;
pub type JointWorkHeatDistribution = stochastic::JointWorkHeatDistribution<f64>;
pub type CycleStrokes = stochastic::CycleStrokes<f64>;
pub type SampleSummary = stochastic::SampleSummary<f64>;

pub use cycle::{OperatingMode, Variant};
pub use fock::{Direction, FockCutoff};
pub use reservoir::ReservoirKind;
pub use stochastic::CycleDirection;
