//! Hop-constrained route solver library.
//!
//! Routing is encoded on a node×hop grid of bipolar threshold units:
//! constraint-derived symmetric weights, asynchronous strict-threshold
//! updates, and a quadratic energy that never increases along the
//! dynamics. The crate also ships constellation topology generation with
//! a seam-aware connectivity model, a seedable traffic perturbation
//! pipeline, route decoding with validity diagnosis, and exhaustive
//! oracles for desk-scale verification.
//!
//! All numeric kernels are generic over the [`Scalar`] type (f32 or
//! f64); the `*64` aliases below pin the double-precision configuration
//! used by the CLI and the golden artifacts.

pub mod demo;
pub mod error;
pub mod hopfield;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod route;
pub mod scalar;
pub mod topology;
pub mod traffic;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type SquareMatrix64 = matrix::SquareMatrix<f64>;
pub type PlanarTopology64 = topology::PlanarTopology<f64>;
pub type ConstellationTopology64 = topology::ConstellationTopology<f64>;
pub type DistanceMatrix64 = topology::DistanceMatrix<f64>;
pub type ThroughputMatrix64 = traffic::ThroughputMatrix<f64>;
pub type EffectiveDistanceMatrix64 = traffic::EffectiveDistanceMatrix<f64>;
pub type SolverConfig64 = hopfield::SolverConfig<f64>;
pub type WeightMatrix64 = hopfield::WeightMatrix<f64>;
pub type SolverResult64 = hopfield::SolverResult<f64>;
