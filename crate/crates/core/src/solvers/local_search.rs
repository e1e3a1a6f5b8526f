use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::greedy::{best_pair, check_universe};
use super::SolverConfig;
use crate::error::Result;
use crate::matroid::Matroid;
use crate::model::{Instance, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    LocalOptimum,
    IterationCap,
    TimeBudget,
}

/// A single exchange `S − out + inn` and its objective change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Swap {
    pub out: usize,
    pub inn: usize,
    pub gain: f64,
}

#[derive(Debug, Clone)]
pub struct LocalSearchResult {
    pub solution: Solution,
    pub iterations: usize,
    pub termination: Termination,
    /// Objective at the start and after every accepted swap.
    pub trajectory: Vec<f64>,
}

impl LocalSearchResult {
    pub fn locally_optimal(&self) -> bool {
        self.termination == Termination::LocalOptimum
    }
}

/// Single-swap local search over bases of `m`, started from a basis that
/// contains the best independent pair.
pub fn local_search_matroid(inst: &Instance, m: &Matroid, cfg: &SolverConfig) -> Result<LocalSearchResult> {
    cfg.validate()?;
    check_universe(inst, m)?;
    let rank = m.rank();
    let start = match rank {
        0 => Solution::empty(inst),
        1 => {
            let q = inst.quality();
            let best = (0..inst.n())
                .filter(|&u| m.independent(&[u]))
                .map(|u| (u, q.value(&[u])))
                .fold(None::<(usize, f64)>, |b, c| match b {
                    Some(b) if b.1 >= c.1 => Some(b),
                    _ => Some(c),
                });
            Solution::from_items(inst, &best.map(|b| vec![b.0]).unwrap_or_default())?
        }
        _ => {
            let (x, y) = best_pair(inst, |x, y| m.independent(&[x, y]))
                .expect("rank >= 2 implies an independent pair");
            let seed = [x, y];
            let mut order: Vec<(usize, f64)> = (0..inst.n())
                .filter(|u| !seed.contains(u))
                .map(|u| (u, inst.marginal_phi_prime(&seed, u).expect("valid item")))
                .collect();
            order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            let order: Vec<usize> = order.into_iter().map(|(u, _)| u).collect();
            let basis = m.extend_to_basis(&seed, &order)?;
            Solution::from_items(inst, &basis)?
        }
    };
    local_search_from(inst, m, start, cfg)
}

/// Best-improvement single-swap local search from `start`, which must be
/// independent in `m`. Stops at a local optimum, after `ls_max_iters`
/// accepted swaps, or when the time budget runs out.
pub fn local_search_from(
    inst: &Instance,
    m: &Matroid,
    start: Solution,
    cfg: &SolverConfig,
) -> Result<LocalSearchResult> {
    cfg.validate()?;
    check_universe(inst, m)?;
    if !m.is_independent(start.selected())? {
        return Err(crate::Error::invalid("local search must start from an independent set"));
    }
    let clock = Instant::now();
    let mut sol = start;
    let mut trajectory = vec![sol.objective()];
    let mut iterations = 0;
    let termination = loop {
        if iterations >= cfg.ls_max_iters {
            break Termination::IterationCap;
        }
        if let Some(budget) = cfg.ls_time_budget_ms {
            if clock.elapsed().as_secs_f64() * 1e3 >= budget {
                break Termination::TimeBudget;
            }
        }
        match best_swap(inst, &sol, Some(m)) {
            Some(swap) if swap.gain > 0.0 && swap.gain > cfg.ls_epsilon * sol.objective() => {
                sol.swap(inst, swap.out, swap.inn)?;
                trajectory.push(sol.objective());
                iterations += 1;
            }
            _ => break Termination::LocalOptimum,
        }
    };
    Ok(LocalSearchResult {
        solution: sol,
        iterations,
        termination,
        trajectory,
    })
}

/// The exchange maximizing `φ(S − out + inn) − φ(S)` among those that keep
/// `S` independent in `m` (any exchange when `m` is `None`). Ties go to the
/// lowest `(out, inn)` pair. `None` when no exchange exists at all.
pub fn best_swap(inst: &Instance, sol: &Solution, m: Option<&Matroid>) -> Option<Swap> {
    let n = inst.n();
    let lambda = inst.lambda();
    let gains = sol.dist_gain();
    let items = sol.sorted_items();
    let weights = inst.quality().weights();
    let base_quality = sol.quality_value();
    let mut best: Option<Swap> = None;
    let mut scratch = sol.selected().to_vec();
    for &out in &items {
        let pos = sol.selected().iter().position(|&v| v == out).unwrap();
        let row_out = inst.dist().row(out);
        for inn in 0..n {
            if sol.contains(inn) || m.is_some_and(|m| !m.can_swap(sol.selected(), out, inn)) {
                continue;
            }
            let quality_delta = match weights {
                Some(w) => w[inn] - w[out],
                None => {
                    scratch[pos] = inn;
                    let v = inst.quality().value(&scratch) - base_quality;
                    scratch[pos] = out;
                    v
                }
            };
            let gain = quality_delta + lambda * (gains[inn] - row_out[inn] - gains[out]);
            if best.is_none_or(|b| gain > b.gain) {
                best = Some(Swap { out, inn, gain });
            }
        }
    }
    best
}
