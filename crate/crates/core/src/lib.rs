//! Max-sum diversification.
//!
//! Selects a set `S` maximizing `f(S) + λ·Σ_{u,v∈S} d(u,v)` where `f` is a
//! normalized monotone submodular quality function and `d` a metric. The crate
//! provides the vertex greedy (Greedy B), the edge greedy reduction for modular
//! quality (Greedy A), single-swap local search under matroid constraints, an
//! exact enumeration oracle, dynamic perturbations with the oblivious update
//! rule, instance generators, LETOR ingestion and an experiment harness.

pub mod datagen;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod letor;
pub mod matroid;
pub mod model;
pub mod solvers;

pub use error::{Error, Result};
pub use matroid::{ExchangeMap, Matroid};
pub use model::{DistanceMatrix, Instance, MetricReport, Quality, Solution};
pub use solvers::SolverConfig;
