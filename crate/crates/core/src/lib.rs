//! Waterfilling power allocation, executable submodularity checks for the
//! waterfilling rate, and online greedy basestation allocation.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the common instantiations. Rates are in nats.

pub mod allocation;
pub mod error;
pub mod experiment;
pub mod profiles;
pub mod scalar;
pub mod solver;
pub mod submodular;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use solver::{
    log_utility, rate_of_subset, water_level, waterfill, ChannelId, NoiseProfile,
    WaterfillSolution,
};

pub type NoiseProfileF64 = solver::NoiseProfile<f64>;
pub type NoiseProfileF32 = solver::NoiseProfile<f32>;
pub type WaterfillSolutionF64 = solver::WaterfillSolution<f64>;
pub type WaterfillSolutionF32 = solver::WaterfillSolution<f32>;
pub type LemmaWitnessF64 = submodular::LemmaWitness<f64>;
pub type WeightMatrixF64 = allocation::WeightMatrix<f64>;
pub type WeightMatrixF32 = allocation::WeightMatrix<f32>;
pub type RatioReportF64 = allocation::RatioReport<f64>;
