//! Lattice Green's functions of simple random walk on ℤᵈ (d ≥ 3), exact
//! samplers for the discrete Gaussian free field under its three laws
//! (infinite-volume window, zero-boundary box, conditional), and the
//! extreme-value machinery needed to study the rescaled maximum: scaling
//! constants, Gumbel targets, Mills-ratio brackets, and Poisson
//! approximation bounds for the exceedance count.
//!
//! Everything is deterministic given a master seed; replicate streams are
//! split by a counter so parallel Monte Carlo runs do not depend on worker
//! scheduling.

pub mod bessel;
pub mod dirichlet;
pub mod error;
pub mod extremes;
pub mod green;
pub mod lattice;
pub mod quad;
pub mod rng;
pub mod sampler;
pub mod stats;
pub mod stein_chen;

pub use error::{Error, Result};
pub use green::GreenTable;
pub use lattice::{BoxDomain, LatticePoint, SiteSet};
pub use sampler::{FieldSample, LawTag};
