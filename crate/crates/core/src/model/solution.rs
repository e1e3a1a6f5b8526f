use super::Instance;
use crate::error::{Error, Result};

/// A selected item set with its objective parts and the distance cache
/// `dist_gain[u] = d_u(S)` kept current for every item of the universe.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    selected: Vec<usize>,
    member: Vec<bool>,
    /// Items whose distances have been folded into `dist_gain`.
    cached: Vec<bool>,
    dist_gain: Vec<f64>,
    quality: f64,
    dispersion: f64,
    lambda: f64,
}

impl Solution {
    pub fn empty(inst: &Instance) -> Self {
        let n = inst.n();
        Self {
            selected: Vec::new(),
            member: vec![false; n],
            cached: vec![false; n],
            dist_gain: vec![0.0; n],
            quality: 0.0,
            dispersion: 0.0,
            lambda: inst.lambda(),
        }
    }

    /// Builds a solution by inserting `items` in order.
    pub fn from_items(inst: &Instance, items: &[usize]) -> Result<Self> {
        inst.check_set(items)?;
        let mut sol = Self::empty(inst);
        for &u in items {
            sol.insert(inst, u)?;
        }
        Ok(sol)
    }

    /// Adds `u`, updating the objective and the distance cache in O(n).
    pub fn insert(&mut self, inst: &Instance, u: usize) -> Result<()> {
        if u >= self.member.len() {
            return Err(Error::invalid(format!("item {u} out of range")));
        }
        if self.member[u] {
            return Err(Error::invalid(format!("item {u} already selected")));
        }
        self.dispersion += self.dist_gain[u];
        self.selected.push(u);
        self.member[u] = true;
        self.quality = match inst.quality().weights() {
            Some(w) => self.quality + w[u],
            None => inst.quality().value(&self.selected),
        };
        self.update_gain_cache(inst, u);
        Ok(())
    }

    /// Folds the distances of a just-appended item into `dist_gain`.
    pub fn update_gain_cache(&mut self, inst: &Instance, added: usize) {
        debug_assert!(self.member[added], "item {added} is not selected");
        debug_assert!(!self.cached[added], "item {added} already folded into the gain cache");
        self.cached[added] = true;
        for (g, d) in self.dist_gain.iter_mut().zip(inst.dist().row(added)) {
            *g += d;
        }
    }

    /// Replaces `out` (selected) by `inn` (not selected), keeping positions.
    pub fn swap(&mut self, inst: &Instance, out: usize, inn: usize) -> Result<()> {
        if out >= self.member.len() || inn >= self.member.len() {
            return Err(Error::invalid("swap item out of range"));
        }
        if !self.member[out] || self.member[inn] {
            return Err(Error::invalid(format!("cannot swap {out} out for {inn}")));
        }
        let pos = self.selected.iter().position(|&v| v == out).unwrap();
        self.dispersion += self.dist_gain[inn] - inst.d(inn, out) - self.dist_gain[out];
        self.selected[pos] = inn;
        self.member[out] = false;
        self.member[inn] = true;
        self.cached[out] = false;
        self.cached[inn] = true;
        let (row_out, row_in) = (inst.dist().row(out), inst.dist().row(inn));
        for ((g, a), b) in self.dist_gain.iter_mut().zip(row_in).zip(row_out) {
            *g += a - b;
        }
        self.quality = match inst.quality().weights() {
            Some(w) => self.quality + w[inn] - w[out],
            None => inst.quality().value(&self.selected),
        };
        Ok(())
    }

    /// Selected items in insertion order.
    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn sorted_items(&self) -> Vec<usize> {
        let mut v = self.selected.clone();
        v.sort_unstable();
        v
    }

    pub fn into_items(self) -> Vec<usize> {
        self.selected
    }

    pub fn contains(&self, u: usize) -> bool {
        self.member.get(u).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn dist_gain(&self) -> &[f64] {
        &self.dist_gain
    }

    /// `f(S)`.
    pub fn quality_value(&self) -> f64 {
        self.quality
    }

    /// `d(S)`.
    pub fn dispersion(&self) -> f64 {
        self.dispersion
    }

    /// `φ(S)`.
    pub fn objective(&self) -> f64 {
        self.quality + self.lambda * self.dispersion
    }

    /// Recomputes the objective from scratch and compares it with the cached
    /// value and the distance cache.
    pub fn is_consistent(&self, inst: &Instance) -> bool {
        let Ok(fresh) = inst.objective(&self.selected) else {
            return false;
        };
        super::approx_eq(fresh, self.objective())
            && (0..inst.n()).all(|u| {
                super::approx_eq(self.dist_gain[u], inst.distance_to_set(u, &self.selected))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DistanceMatrix, Quality};
    use proptest::prelude::*;

    fn grid_instance(n: usize) -> Instance {
        let dist = DistanceMatrix::from_fn(n, |i, j| 1.0 + ((i * 31 + j * 17) % 11) as f64 / 10.0);
        let w = (0..n).map(|i| (i % 5) as f64 / 5.0).collect();
        Instance::new(dist, Quality::modular(w).unwrap(), 0.2).unwrap()
    }

    #[test]
    fn first_insert_sets_gain_row() {
        let inst = grid_instance(6);
        let mut sol = Solution::empty(&inst);
        sol.insert(&inst, 2).unwrap();
        for u in 0..6 {
            assert_eq!(sol.dist_gain()[u], inst.d(u, 2));
        }
    }

    #[test]
    fn duplicate_insert_rejected() {
        let inst = grid_instance(4);
        let mut sol = Solution::from_items(&inst, &[1]).unwrap();
        assert!(sol.insert(&inst, 1).is_err());
        assert!(Solution::from_items(&inst, &[0, 0]).is_err());
    }

    #[test]
    #[cfg(debug_assertions)]
    #[should_panic(expected = "already folded")]
    fn double_cache_update_caught() {
        let inst = grid_instance(4);
        let mut sol = Solution::from_items(&inst, &[1]).unwrap();
        sol.update_gain_cache(&inst, 1);
    }

    #[test]
    fn swap_keeps_caches_fresh() {
        let inst = grid_instance(8);
        let mut sol = Solution::from_items(&inst, &[0, 3, 5]).unwrap();
        sol.swap(&inst, 3, 7).unwrap();
        assert_eq!(sol.selected(), &[0, 7, 5]);
        assert!(sol.is_consistent(&inst));
        assert!(sol.swap(&inst, 3, 1).is_err());
        assert!(sol.swap(&inst, 0, 5).is_err());
    }

    proptest! {
        #[test]
        fn incremental_matches_scratch(
            seed in 0u64..1000,
            order in Just((0..10usize).collect::<Vec<_>>()).prop_shuffle(),
            k in 1usize..=10,
        ) {
            let n = 10;
            let dist = DistanceMatrix::from_fn(n, |i, j| 1.0 + ((seed as usize + i * 13 + j * 7) % 17) as f64 / 16.0);
            let w = (0..n).map(|i| ((seed as usize + i) % 7) as f64 / 7.0).collect();
            let inst = Instance::new(dist, Quality::modular(w).unwrap(), 0.7).unwrap();
            let mut sol = Solution::empty(&inst);
            for &u in &order[..k] {
                sol.insert(&inst, u).unwrap();
                prop_assert!(sol.is_consistent(&inst));
            }
        }
    }
}
