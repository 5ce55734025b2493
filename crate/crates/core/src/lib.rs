//! Clustering of incomplete heavy-tailed data through bipartite
//! k-component graph learning.
//!
//! The observed variables are member nodes of a bipartite graph; cluster
//! centers are unobserved nodes whose signals are inferred as weighted
//! averages of the members. The solver maximizes a heavy-tailed (Student-t)
//! likelihood over the graph Laplacian under rank and stochasticity
//! constraints, using ADMM with majorization-minimization inner steps.
//!
//! Everything is generic over the scalar type through [`Real`]; `f64`
//! aliases for the main entry points live at the crate root.
//!
//! ```
//! use bigclust::data::{synth, SynthSpec};
//! use bigclust::solver::{run, InitMixing, SolverConfig};
//!
//! let spec = SynthSpec { r: 12, k: 2, n: 200, nu: 5.0, separation: 0.95, seed: 3 };
//! let sample = synth(&spec).unwrap();
//! let mut cfg = SolverConfig::new(2, 5.0);
//! cfg.max_outer = 200;
//! let result = run(&sample.data, &cfg, InitMixing::RandomNormal).unwrap();
//! assert_eq!(result.labels.len(), 12);
//! ```

pub mod data;
pub mod eigen;
pub mod error;
pub mod metrics;
pub mod model;
pub mod scalar;
pub mod simplex;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` aliases for the main entry-point types.
pub type MemberData64 = model::MemberData<f64>;
pub type BipartiteWeights64 = model::BipartiteWeights<f64>;
pub type CenterMixing64 = model::CenterMixing<f64>;
pub type BlockLaplacian64 = model::BlockLaplacian<f64>;
pub type SolverConfig64 = solver::SolverConfig<f64>;
pub type ClusterResult64 = solver::ClusterResult<f64>;
pub type SynthSpec64 = data::SynthSpec<f64>;

/// `f32` aliases, for callers trading precision for footprint.
pub type MemberData32 = model::MemberData<f32>;
pub type BipartiteWeights32 = model::BipartiteWeights<f32>;
pub type CenterMixing32 = model::CenterMixing<f32>;
pub type BlockLaplacian32 = model::BlockLaplacian<f32>;
pub type SolverConfig32 = solver::SolverConfig<f32>;
pub type ClusterResult32 = solver::ClusterResult<f32>;
pub type SynthSpec32 = data::SynthSpec<f32>;
