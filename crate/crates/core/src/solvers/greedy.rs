use super::{GreedyInit, SolverConfig};
use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::model::{Instance, Solution};

/// Greedy B: repeatedly add the item maximizing `φ′_u(S) = ½f_u(S) + λ·d_u(S)`
/// until `|S| = p`. O(np) after the optional best-pair seed.
pub fn greedy_vertex(inst: &Instance, p: usize, cfg: &SolverConfig) -> Result<Solution> {
    cfg.validate()?;
    if p < 1 || p > inst.n() {
        return Err(Error::invalid(format!("p must lie in 1..={}, got {p}", inst.n())));
    }
    Ok(run(inst, cfg.greedy_b_init, p, |_, _| true, |_, _| true))
}

/// Greedy B restricted to additions that keep `S` independent in `m`; stops
/// at a basis. Carries no approximation guarantee beyond uniform matroids.
pub fn greedy_vertex_matroid(inst: &Instance, m: &Matroid, cfg: &SolverConfig) -> Result<Solution> {
    cfg.validate()?;
    check_universe(inst, m)?;
    let rank = m.rank();
    Ok(run(
        inst,
        cfg.greedy_b_init,
        rank,
        |s, u| m.can_add(s, u),
        |x, y| m.independent(&[x, y]),
    ))
}

/// `argmax_{x<y} f({x,y}) + λ·d(x,y)` over allowed pairs, lowest ids on ties.
pub fn best_pair(inst: &Instance, allowed: impl Fn(usize, usize) -> bool) -> Option<(usize, usize)> {
    let n = inst.n();
    let q = inst.quality();
    let mut best: Option<((usize, usize), f64)> = None;
    for x in 0..n {
        let row = inst.dist().row(x);
        for y in x + 1..n {
            if !allowed(x, y) {
                continue;
            }
            let f = match q.weights() {
                Some(w) => w[x] + w[y],
                None => q.value(&[x, y]),
            };
            let value = f + inst.lambda() * row[y];
            if best.is_none_or(|(_, b)| value > b) {
                best = Some(((x, y), value));
            }
        }
    }
    best.map(|(pair, _)| pair)
}

pub(crate) fn check_universe(inst: &Instance, m: &Matroid) -> Result<()> {
    if m.n() != inst.n() {
        return Err(Error::invalid(format!(
            "matroid has {} items but the instance has {}",
            m.n(),
            inst.n()
        )));
    }
    Ok(())
}

fn run(
    inst: &Instance,
    init: GreedyInit,
    target: usize,
    can_add: impl Fn(&[usize], usize) -> bool,
    pair_ok: impl Fn(usize, usize) -> bool,
) -> Solution {
    let mut sol = Solution::empty(inst);
    let mut tracker = inst.quality().tracker();
    if init == GreedyInit::BestPair && target >= 2 {
        if let Some((x, y)) = best_pair(inst, pair_ok) {
            for u in [x, y] {
                sol.insert(inst, u).expect("fresh item");
                tracker.insert(u);
            }
        }
    }
    let lambda = inst.lambda();
    while sol.len() < target {
        let gains = sol.dist_gain();
        let mut best: Option<(usize, f64)> = None;
        for u in 0..inst.n() {
            if sol.contains(u) || !can_add(sol.selected(), u) {
                continue;
            }
            let potential = 0.5 * tracker.gain(u) + lambda * gains[u];
            if best.is_none_or(|(_, b)| potential > b) {
                best = Some((u, potential));
            }
        }
        let Some((u, _)) = best else { break };
        sol.insert(inst, u).expect("fresh item");
        tracker.insert(u);
    }
    sol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::gen_synthetic;
    use crate::model::{DistanceMatrix, Quality};

    #[test]
    fn full_selection_when_p_is_n() {
        let inst = gen_synthetic(7, 0.2, 3).unwrap();
        let sol = greedy_vertex(&inst, 7, &SolverConfig::default()).unwrap();
        assert_eq!(sol.sorted_items(), (0..7).collect::<Vec<_>>());
        let all: Vec<usize> = (0..7).collect();
        assert!((sol.objective() - inst.objective(&all).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn single_pick_is_heaviest_item() {
        let inst = gen_synthetic(20, 0.2, 11).unwrap();
        let w = inst.quality().weights().unwrap();
        let heaviest = (0..20).fold(0, |b, u| if w[u] > w[b] { u } else { b });
        for cfg in [SolverConfig::default(), SolverConfig::plain()] {
            assert_eq!(greedy_vertex(&inst, 1, &cfg).unwrap().selected(), &[heaviest]);
        }
    }

    #[test]
    fn bad_p_rejected() {
        let inst = gen_synthetic(5, 0.2, 1).unwrap();
        assert!(greedy_vertex(&inst, 0, &SolverConfig::default()).is_err());
        assert!(greedy_vertex(&inst, 6, &SolverConfig::default()).is_err());
    }

    #[test]
    fn ties_go_to_lowest_id() {
        let inst = Instance::new(DistanceMatrix::from_fn(5, |_, _| 1.0), Quality::zero(5), 1.0).unwrap();
        let sol = greedy_vertex(&inst, 3, &SolverConfig::plain()).unwrap();
        assert_eq!(sol.selected(), &[0, 1, 2]);
        let sol = greedy_vertex(&inst, 3, &SolverConfig::default()).unwrap();
        assert_eq!(sol.selected(), &[0, 1, 2]);
    }

    #[test]
    fn picks_by_potential_not_objective() {
        // From {0}: item 1 has objective gain 1.1 but potential 0.6, item 2
        // has objective gain and potential 0.8.
        let mut d = DistanceMatrix::zeros(3);
        d.set(0, 1, 0.1);
        d.set(0, 2, 0.8);
        d.set(1, 2, 0.8);
        let inst = Instance::new(d, Quality::modular(vec![2.0, 1.0, 0.0]).unwrap(), 1.0).unwrap();
        let g = greedy_vertex(&inst, 2, &SolverConfig::plain()).unwrap();
        assert_eq!(g.selected(), &[0, 2]);
    }

    /// Farthest pair, then farthest-by-sum vertices.
    fn dispersion_greedy(inst: &Instance, p: usize) -> Vec<usize> {
        let n = inst.n();
        let (mut bx, mut by, mut bd) = (0, 1, f64::MIN);
        for x in 0..n {
            for y in x + 1..n {
                if inst.d(x, y) > bd {
                    (bx, by, bd) = (x, y, inst.d(x, y));
                }
            }
        }
        let mut s = vec![bx, by];
        while s.len() < p {
            let next = (0..n)
                .filter(|u| !s.contains(u))
                .map(|u| (u, s.iter().map(|&v| inst.d(u, v)).sum::<f64>()))
                .fold(None::<(usize, f64)>, |b, c| match b {
                    Some(b) if b.1 >= c.1 => Some(b),
                    _ => Some(c),
                })
                .unwrap()
                .0;
            s.push(next);
        }
        s
    }

    #[test]
    fn zero_quality_reduces_to_dispersion_greedy() {
        for seed in 0..20 {
            let base = gen_synthetic(15, 1.0, seed).unwrap();
            let inst = Instance::new(base.dist().clone(), Quality::zero(15), 1.0).unwrap();
            let sol = greedy_vertex(&inst, 6, &SolverConfig::default()).unwrap();
            assert_eq!(sol.selected(), dispersion_greedy(&inst, 6).as_slice());
        }
    }

    #[test]
    fn prefix_objective_non_decreasing() {
        for seed in 0..10 {
            let inst = gen_synthetic(25, 0.2, seed).unwrap();
            let sol = greedy_vertex(&inst, 10, &SolverConfig::plain()).unwrap();
            let items = sol.selected();
            let values: Vec<f64> = (0..=items.len()).map(|k| inst.objective(&items[..k]).unwrap()).collect();
            assert!(values.windows(2).all(|w| w[1] >= w[0]));
        }
    }

    #[test]
    fn matroid_greedy_respects_independence() {
        let inst = gen_synthetic(8, 0.5, 4).unwrap();
        let m = Matroid::partition(vec![0, 0, 0, 1, 1, 1, 2, 2], vec![Some(1), Some(2), None]).unwrap();
        let sol = greedy_vertex_matroid(&inst, &m, &SolverConfig::default()).unwrap();
        assert_eq!(sol.len(), m.rank());
        assert!(m.is_independent(sol.selected()).unwrap());
        assert!(greedy_vertex_matroid(&inst, &Matroid::uniform(3, 2), &SolverConfig::default()).is_err());
    }
}
