//! Greedy, local-search and exact solvers.

mod appendix;
mod brute;
mod edge_greedy;
mod greedy;
mod local_search;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use appendix::{appendix_fixture, AppendixFixture, ITEM_A, ITEM_B};
pub use brute::{binomial, brute_force_opt, Constraint, BRUTE_FORCE_LIMIT};
pub use edge_greedy::{greedy_edge_modular, reduced_edge_weight};
pub use greedy::{best_pair, greedy_vertex, greedy_vertex_matroid};
pub use local_search::{best_swap, local_search_from, local_search_matroid, LocalSearchResult, Swap, Termination};

/// How Greedy B picks its first items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreedyInit {
    /// Start from the empty set; the first pick is the argmax of the potential.
    ArbitraryFirst,
    /// Seed with the best pair `argmax f({x,y}) + λ·d(x,y)`.
    BestPair,
}

/// How Greedy A completes an odd-sized solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreedyTail {
    /// A uniformly random remaining item drawn from `seed`.
    ArbitraryLast,
    /// The remaining item with the largest objective gain.
    BestLast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub greedy_b_init: GreedyInit,
    pub greedy_a_tail: GreedyTail,
    /// A swap is accepted iff `φ(S+u−v) > φ(S)·(1 + ls_epsilon)`.
    pub ls_epsilon: f64,
    pub ls_max_iters: usize,
    /// Wall-clock budget for local search, in milliseconds.
    #[serde(default)]
    pub ls_time_budget_ms: Option<f64>,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            greedy_b_init: GreedyInit::BestPair,
            greedy_a_tail: GreedyTail::BestLast,
            ls_epsilon: 0.0,
            ls_max_iters: 100_000,
            ls_time_budget_ms: None,
            seed: 0,
        }
    }
}

impl SolverConfig {
    /// The unimproved variants: empty-set start for Greedy B and an
    /// arbitrary final item for Greedy A.
    pub fn plain() -> Self {
        Self {
            greedy_b_init: GreedyInit::ArbitraryFirst,
            greedy_a_tail: GreedyTail::ArbitraryLast,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ls_epsilon >= 0.0 && self.ls_epsilon.is_finite()) {
            return Err(Error::invalid(format!("ls_epsilon must be >= 0, got {}", self.ls_epsilon)));
        }
        if self.ls_max_iters == 0 {
            return Err(Error::invalid("ls_max_iters must be positive"));
        }
        if let Some(ms) = self.ls_time_budget_ms {
            if !(ms >= 0.0) {
                return Err(Error::invalid(format!("ls_time_budget_ms must be >= 0, got {ms}")));
            }
        }
        Ok(())
    }
}
