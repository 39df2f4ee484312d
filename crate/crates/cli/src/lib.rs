//! Experiment orchestration for the field library: reproducible Monte
//! Carlo runs (Gumbel convergence, maximum LLN, Poisson-bound tables,
//! Markov-property checks), configuration, and CSV/JSON/SVG emission.

pub mod config;
pub mod emit;
pub mod experiments;

pub use config::{ExperimentConfig, Law};
pub use experiments::{CheckOutcome, ExperimentResult};
