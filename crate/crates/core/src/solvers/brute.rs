use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::model::{Instance, QualityTracker, Solution};

/// Largest number of candidate sets the exact search will enumerate.
pub const BRUTE_FORCE_LIMIT: f64 = 2e8;

#[derive(Debug, Clone, Copy)]
pub enum Constraint<'a> {
    Cardinality(usize),
    Matroid(&'a Matroid),
}

/// `C(n, k)` as a float (exact below 2^53).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// Exact maximizer of `φ` over all `p`-subsets or over all bases. Among
/// equal values the lexicographically smallest sorted id list wins.
pub fn brute_force_opt(inst: &Instance, constraint: Constraint<'_>) -> Result<Solution> {
    match constraint {
        Constraint::Cardinality(p) => {
            let n = inst.n();
            if p > n {
                return Err(Error::invalid(format!("p = {p} exceeds n = {n}")));
            }
            guard(binomial(n, p))?;
            let items = match inst.quality().weights() {
                Some(w) => best_subset(inst, p, ModularPath { weights: w, value: 0.0 }),
                None => best_subset(inst, p, inst.quality().tracker()),
            };
            Solution::from_items(inst, &items)
        }
        Constraint::Matroid(m) => {
            super::greedy::check_universe(inst, m)?;
            let rank = m.rank();
            guard(binomial(inst.n(), rank))?;
            let mut search = BasisSearch {
                inst,
                m,
                rank,
                current: Vec::with_capacity(rank),
                best: None,
            };
            search.descend(0, 0.0);
            let items = search.best.map(|b| b.1).unwrap_or_default();
            Solution::from_items(inst, &items)
        }
    }
}

fn guard(size: f64) -> Result<()> {
    if size > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            size,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    Ok(())
}

/// Quality bookkeeping along one root-to-leaf path of the enumeration.
trait QualityPath: Clone + Send + Sync {
    fn gain(&self, u: usize) -> f64;
    fn value(&self) -> f64;
    fn with(&self, u: usize) -> Self;
}

#[derive(Clone)]
struct ModularPath<'a> {
    weights: &'a [f64],
    value: f64,
}

impl QualityPath for ModularPath<'_> {
    #[inline]
    fn gain(&self, u: usize) -> f64 {
        self.weights[u]
    }
    #[inline]
    fn value(&self) -> f64 {
        self.value
    }
    #[inline]
    fn with(&self, u: usize) -> Self {
        Self {
            weights: self.weights,
            value: self.value + self.weights[u],
        }
    }
}

impl QualityPath for QualityTracker<'_> {
    fn gain(&self, u: usize) -> f64 {
        QualityTracker::gain(self, u)
    }
    fn value(&self) -> f64 {
        QualityTracker::value(self)
    }
    fn with(&self, u: usize) -> Self {
        let mut next = self.clone();
        next.insert(u);
        next
    }
}

/// Enumerates combinations in lexicographic order, split by smallest item.
fn best_subset<Q: QualityPath>(inst: &Instance, p: usize, root: Q) -> Vec<usize> {
    let n = inst.n();
    if p == 0 {
        return Vec::new();
    }
    let per_first: Vec<Option<(f64, Vec<usize>)>> = (0..=n - p)
        .into_par_iter()
        .map(|first| {
            let mut walk = Walk {
                inst,
                p,
                combo: vec![first],
                levels: vec![vec![0.0; n]; p],
                best: None,
            };
            walk.levels[0].copy_from_slice(inst.dist().row(first));
            let q = root.with(first);
            if p == 1 {
                return Some((q.value(), vec![first]));
            }
            walk.descend(1, first + 1, q, 0.0);
            walk.best
        })
        .collect();
    // earlier `first` wins ties, preserving lexicographic order
    per_first
        .into_iter()
        .flatten()
        .fold(None::<(f64, Vec<usize>)>, |best, cand| match best {
            Some(b) if b.0 >= cand.0 => Some(b),
            _ => Some(cand),
        })
        .map(|b| b.1)
        .unwrap_or_default()
}

struct Walk<'a> {
    inst: &'a Instance,
    p: usize,
    combo: Vec<usize>,
    /// `levels[k][j]` = distance from item `j` to the first `k+1` chosen items.
    levels: Vec<Vec<f64>>,
    best: Option<(f64, Vec<usize>)>,
}

impl Walk<'_> {
    fn descend<Q: QualityPath>(&mut self, depth: usize, start: usize, q: Q, dispersion: f64) {
        let n = self.inst.n();
        let lambda = self.inst.lambda();
        let last = n - (self.p - depth);
        if depth + 1 == self.p {
            let gains = &self.levels[depth - 1];
            let base = q.value();
            for j in start..=last {
                let value = base + q.gain(j) + lambda * (dispersion + gains[j]);
                if self.best.as_ref().is_none_or(|b| value > b.0) {
                    let mut items = self.combo.clone();
                    items.push(j);
                    self.best = Some((value, items));
                }
            }
            return;
        }
        for j in start..=last {
            let (done, rest) = self.levels.split_at_mut(depth);
            let prev = &done[depth - 1];
            let next = &mut rest[0];
            let row = self.inst.dist().row(j);
            for k in j + 1..n {
                next[k] = prev[k] + row[k];
            }
            let d = dispersion + prev[j];
            self.combo.push(j);
            self.descend(depth + 1, j + 1, q.with(j), d);
            self.combo.pop();
        }
    }
}

struct BasisSearch<'a> {
    inst: &'a Instance,
    m: &'a Matroid,
    rank: usize,
    current: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
}

impl BasisSearch<'_> {
    /// Include-first DFS over ids, so bases appear in lexicographic order.
    fn descend(&mut self, next: usize, dispersion: f64) {
        if self.current.len() == self.rank {
            let value = self.inst.quality().value(&self.current) + self.inst.lambda() * dispersion;
            if self.best.as_ref().is_none_or(|b| value > b.0) {
                self.best = Some((value, self.current.clone()));
            }
            return;
        }
        let n = self.inst.n();
        if next >= n || self.current.len() + (n - next) < self.rank {
            return;
        }
        if self.m.can_add(&self.current, next) {
            let added = self.inst.distance_to_set(next, &self.current);
            self.current.push(next);
            self.descend(next + 1, dispersion + added);
            self.current.pop();
        }
        self.descend(next + 1, dispersion);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::gen_synthetic;
    use crate::model::{DistanceMatrix, Quality};
    use crate::solvers::{greedy_vertex, SolverConfig};

    /// Independent oracle: recursive subset enumeration with scratch objective.
    fn naive(inst: &Instance, p: usize) -> (f64, Vec<usize>) {
        fn rec(inst: &Instance, p: usize, next: usize, cur: &mut Vec<usize>, best: &mut (f64, Vec<usize>)) {
            if cur.len() == p {
                let v = inst.objective(cur).unwrap();
                if v > best.0 {
                    *best = (v, cur.clone());
                }
                return;
            }
            for j in next..inst.n() {
                cur.push(j);
                rec(inst, p, j + 1, cur, best);
                cur.pop();
            }
        }
        let mut best = (f64::MIN, vec![]);
        rec(inst, p, 0, &mut vec![], &mut best);
        best
    }

    #[test]
    fn matches_naive_enumeration() {
        for seed in 0..8 {
            let inst = gen_synthetic(11, 0.3, seed).unwrap();
            for p in 1..=5 {
                let got = brute_force_opt(&inst, Constraint::Cardinality(p)).unwrap();
                let (v, items) = naive(&inst, p);
                assert!((got.objective() - v).abs() < 1e-9);
                assert_eq!(got.sorted_items(), items);
            }
        }
    }

    #[test]
    fn coverage_path_matches_naive() {
        let q = Quality::coverage(
            vec![1.0, 0.5, 2.0, 0.25],
            &[vec![0, 1], vec![1, 2], vec![3], vec![0, 3], vec![2], vec![], vec![0, 1, 2]],
        )
        .unwrap();
        let dist = gen_synthetic(7, 1.0, 3).unwrap().dist().clone();
        let inst = Instance::new(dist, q, 0.4).unwrap();
        for p in 1..=4 {
            let got = brute_force_opt(&inst, Constraint::Cardinality(p)).unwrap();
            assert!((got.objective() - naive(&inst, p).0).abs() < 1e-9);
        }
    }

    #[test]
    fn full_and_empty() {
        let inst = gen_synthetic(6, 0.2, 1).unwrap();
        assert_eq!(brute_force_opt(&inst, Constraint::Cardinality(6)).unwrap().len(), 6);
        assert!(brute_force_opt(&inst, Constraint::Cardinality(0)).unwrap().is_empty());
        assert!(brute_force_opt(&inst, Constraint::Cardinality(7)).is_err());
    }

    #[test]
    fn ties_resolve_lexicographically() {
        let inst = Instance::new(DistanceMatrix::from_fn(6, |_, _| 1.0), Quality::zero(6), 1.0).unwrap();
        assert_eq!(brute_force_opt(&inst, Constraint::Cardinality(3)).unwrap().selected(), &[0, 1, 2]);
        let m = Matroid::uniform(6, 3);
        assert_eq!(brute_force_opt(&inst, Constraint::Matroid(&m)).unwrap().selected(), &[0, 1, 2]);
    }

    #[test]
    fn guard_trips() {
        let inst = gen_synthetic(60, 0.2, 0).unwrap();
        assert!(matches!(
            brute_force_opt(&inst, Constraint::Cardinality(10)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn matroid_search_agrees_with_uniform_cardinality() {
        let inst = gen_synthetic(10, 0.2, 4).unwrap();
        let a = brute_force_opt(&inst, Constraint::Cardinality(4)).unwrap();
        let b = brute_force_opt(&inst, Constraint::Matroid(&Matroid::uniform(10, 4))).unwrap();
        assert_eq!(a.sorted_items(), b.sorted_items());
    }

    #[test]
    fn dominates_greedy() {
        for seed in 0..10 {
            let inst = gen_synthetic(12, 0.2, seed).unwrap();
            let opt = brute_force_opt(&inst, Constraint::Cardinality(4)).unwrap();
            let g = greedy_vertex(&inst, 4, &SolverConfig::default()).unwrap();
            assert!(opt.objective() >= g.objective() - 1e-12);
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(50, 7), 99_884_400.0);
        assert_eq!(binomial(5, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
    }
}
