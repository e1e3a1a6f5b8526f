use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GreedyTail, SolverConfig};
use crate::error::{Error, Result};
use crate::model::{Instance, Solution};

/// Edge weight of the dispersion reduction for modular quality:
/// `λ·d(u,v) + (w(u) + w(v)) / (p − 1)`. Summed over the pairs of any
/// `p`-set it equals `f(S) + λ·d(S)`, since each item lies in `p − 1` pairs.
pub fn reduced_edge_weight(inst: &Instance, weights: &[f64], p: usize, u: usize, v: usize) -> f64 {
    inst.lambda() * inst.d(u, v) + (weights[u] + weights[v]) / (p as f64 - 1.0)
}

/// Greedy A: reduce to max-sum dispersion on the reduced edge weights, then
/// take the heaviest edge between unselected items `⌊p/2⌋` times. For odd
/// `p` one more item is added according to `cfg.greedy_a_tail`.
pub fn greedy_edge_modular(inst: &Instance, p: usize, cfg: &SolverConfig) -> Result<Solution> {
    cfg.validate()?;
    let weights = inst.quality().weights().ok_or(Error::UnsupportedQuality)?;
    let n = inst.n();
    if p < 2 || p > n {
        return Err(Error::invalid(format!("p must lie in 2..={n}, got {p}")));
    }

    let mut edges: Vec<(f64, u32, u32)> = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((reduced_edge_weight(inst, weights, p, u, v), u as u32, v as u32));
        }
    }
    edges.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut sol = Solution::empty(inst);
    let mut pairs_left = p / 2;
    for &(_, u, v) in &edges {
        if pairs_left == 0 {
            break;
        }
        let (u, v) = (u as usize, v as usize);
        if sol.contains(u) || sol.contains(v) {
            continue;
        }
        sol.insert(inst, u)?;
        sol.insert(inst, v)?;
        pairs_left -= 1;
    }

    if p % 2 == 1 {
        let remaining: Vec<usize> = (0..n).filter(|&u| !sol.contains(u)).collect();
        let last = match cfg.greedy_a_tail {
            GreedyTail::BestLast => {
                let gains = sol.dist_gain();
                remaining
                    .iter()
                    .copied()
                    .fold(None::<(usize, f64)>, |best, u| {
                        let gain = weights[u] + inst.lambda() * gains[u];
                        match best {
                            Some((_, b)) if b >= gain => best,
                            _ => Some((u, gain)),
                        }
                    })
                    .map(|(u, _)| u)
            }
            GreedyTail::ArbitraryLast => {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                remaining.choose(&mut rng).copied()
            }
        };
        if let Some(u) = last {
            sol.insert(inst, u)?;
        }
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::gen_synthetic;
    use crate::model::{DistanceMatrix, Quality};

    #[test]
    fn reduced_weights_sum_to_objective_on_p_sets() {
        let inst = gen_synthetic(9, 0.3, 5).unwrap();
        let w = inst.quality().weights().unwrap();
        for (p, set) in [(2, vec![0, 4]), (3, vec![1, 2, 8]), (5, vec![0, 3, 4, 6, 7])] {
            let mut total = 0.0;
            for (i, &u) in set.iter().enumerate() {
                for &v in &set[i + 1..] {
                    total += reduced_edge_weight(&inst, w, p, u, v);
                }
            }
            assert!((total - inst.objective(&set).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn p_two_returns_best_pair() {
        for seed in 0..10 {
            let inst = gen_synthetic(12, 0.2, seed).unwrap();
            let sol = greedy_edge_modular(&inst, 2, &SolverConfig::default()).unwrap();
            let (x, y) = super::super::best_pair(&inst, |_, _| true).unwrap();
            assert_eq!(sol.sorted_items(), vec![x, y]);
        }
    }

    #[test]
    fn zero_weights_pick_heaviest_edges() {
        // d(0,1) = 5 is the heaviest edge, then d(2,3) = 4 among the rest
        let mut d = DistanceMatrix::from_fn(5, |_, _| 3.0);
        d.set(0, 1, 5.0);
        d.set(2, 3, 4.0);
        let inst = Instance::new(d, Quality::zero(5), 1.0).unwrap();
        let sol = greedy_edge_modular(&inst, 4, &SolverConfig::default()).unwrap();
        assert_eq!(sol.selected(), &[0, 1, 2, 3]);
    }

    #[test]
    fn rejects_non_modular_and_small_p() {
        let q = Quality::coverage(vec![1.0], &[vec![0], vec![], vec![0]]).unwrap();
        let inst = Instance::new(DistanceMatrix::from_fn(3, |_, _| 1.0), q, 1.0).unwrap();
        assert!(matches!(
            greedy_edge_modular(&inst, 2, &SolverConfig::default()),
            Err(Error::UnsupportedQuality)
        ));
        let inst = gen_synthetic(4, 0.2, 0).unwrap();
        assert!(greedy_edge_modular(&inst, 1, &SolverConfig::default()).is_err());
        assert!(greedy_edge_modular(&inst, 5, &SolverConfig::default()).is_err());
    }

    #[test]
    fn odd_tail_variants() {
        let inst = gen_synthetic(30, 0.2, 9).unwrap();
        let best = greedy_edge_modular(&inst, 5, &SolverConfig::default()).unwrap();
        let plain = SolverConfig { seed: 17, ..SolverConfig::plain() };
        let arb = greedy_edge_modular(&inst, 5, &plain).unwrap();
        assert_eq!(best.selected()[..4], arb.selected()[..4]);
        assert!(best.objective() >= arb.objective());
        assert_eq!(arb, greedy_edge_modular(&inst, 5, &plain).unwrap());
    }
}
