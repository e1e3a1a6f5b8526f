use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// User-supplied quality oracle. Implementations must be normalized,
/// monotone and submodular; none of this is checked.
pub trait SetOracle: Send + Sync + fmt::Debug {
    /// Number of items in the universe.
    fn len(&self) -> usize;

    fn value(&self, items: &[usize]) -> f64;
}

/// Weighted coverage: each item covers a set of ground elements and
/// `f(S)` is the total weight of the elements covered by `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coverage {
    element_weights: Vec<f64>,
    items: Vec<FixedBitSet>,
}

impl Coverage {
    pub fn new(element_weights: Vec<f64>, items: &[Vec<usize>]) -> Result<Self> {
        check_weights(&element_weights, "element weight")?;
        let m = element_weights.len();
        let items = items
            .iter()
            .enumerate()
            .map(|(u, elems)| {
                let mut set = FixedBitSet::with_capacity(m);
                for &e in elems {
                    if e >= m {
                        return Err(Error::invalid(format!(
                            "item {u} covers element {e}, but only {m} elements exist"
                        )));
                    }
                    set.insert(e);
                }
                Ok(set)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            element_weights,
            items,
        })
    }

    pub fn element_weights(&self) -> &[f64] {
        &self.element_weights
    }

    pub fn num_elements(&self) -> usize {
        self.element_weights.len()
    }

    /// Elements covered by each item, in ascending order.
    pub fn item_sets(&self) -> Vec<Vec<usize>> {
        self.items.iter().map(|s| s.ones().collect()).collect()
    }

    fn covered_weight(&self, covered: &FixedBitSet) -> f64 {
        covered.ones().map(|e| self.element_weights[e]).sum()
    }

    fn union_of(&self, items: &[usize]) -> FixedBitSet {
        let mut covered = FixedBitSet::with_capacity(self.num_elements());
        for &u in items {
            covered.union_with(&self.items[u]);
        }
        covered
    }

    fn gain(&self, covered: &FixedBitSet, u: usize) -> f64 {
        self.items[u]
            .difference(covered)
            .map(|e| self.element_weights[e])
            .sum()
    }
}

/// Normalized monotone quality function `f`.
#[derive(Debug, Clone)]
pub enum Quality {
    /// `f(S) = Σ_{u∈S} w(u)`.
    Modular(Vec<f64>),
    Coverage(Coverage),
    Oracle(Arc<dyn SetOracle>),
}

impl Quality {
    pub fn modular(weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights, "item weight")?;
        Ok(Quality::Modular(weights))
    }

    pub fn coverage(element_weights: Vec<f64>, items: &[Vec<usize>]) -> Result<Self> {
        Ok(Quality::Coverage(Coverage::new(element_weights, items)?))
    }

    /// Identically zero quality (pure dispersion).
    pub fn zero(n: usize) -> Self {
        Quality::Modular(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        match self {
            Quality::Modular(w) => w.len(),
            Quality::Coverage(c) => c.items.len(),
            Quality::Oracle(o) => o.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_modular(&self) -> bool {
        matches!(self, Quality::Modular(_))
    }

    pub fn weights(&self) -> Option<&[f64]> {
        match self {
            Quality::Modular(w) => Some(w),
            _ => None,
        }
    }

    pub(crate) fn weights_mut(&mut self) -> Option<&mut Vec<f64>> {
        match self {
            Quality::Modular(w) => Some(w),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Quality::Modular(_) => "modular",
            Quality::Coverage(_) => "coverage",
            Quality::Oracle(_) => "oracle",
        }
    }

    /// `f(S)`. Items are assumed distinct and in range.
    pub fn value(&self, items: &[usize]) -> f64 {
        match self {
            Quality::Modular(w) => items.iter().map(|&u| w[u]).sum(),
            Quality::Coverage(c) => c.covered_weight(&c.union_of(items)),
            Quality::Oracle(o) => {
                if items.is_empty() {
                    0.0
                } else {
                    o.value(items)
                }
            }
        }
    }

    /// Incremental evaluator starting from the empty set.
    pub fn tracker(&self) -> QualityTracker<'_> {
        let state = match self {
            Quality::Modular(_) => TrackerState::Modular,
            Quality::Coverage(c) => TrackerState::Coverage(FixedBitSet::with_capacity(c.num_elements())),
            Quality::Oracle(_) => TrackerState::Oracle(Vec::new()),
        };
        QualityTracker {
            quality: self,
            state,
            value: 0.0,
        }
    }
}

/// Maintains `f(S)` while items are added, answering `f(S+u) − f(S)` queries.
#[derive(Debug, Clone)]
pub struct QualityTracker<'a> {
    quality: &'a Quality,
    state: TrackerState,
    value: f64,
}

#[derive(Debug, Clone)]
enum TrackerState {
    Modular,
    Coverage(FixedBitSet),
    Oracle(Vec<usize>),
}

impl QualityTracker<'_> {
    pub fn value(&self) -> f64 {
        self.value
    }

    /// `f(S+u) − f(S)` for `u ∉ S`.
    pub fn gain(&self, u: usize) -> f64 {
        match (&self.state, self.quality) {
            (TrackerState::Modular, Quality::Modular(w)) => w[u],
            (TrackerState::Coverage(covered), Quality::Coverage(c)) => c.gain(covered, u),
            (TrackerState::Oracle(items), Quality::Oracle(o)) => {
                let mut with = items.clone();
                with.push(u);
                o.value(&with) - self.value
            }
            _ => unreachable!("tracker state matches its quality"),
        }
    }

    pub fn insert(&mut self, u: usize) {
        match (&mut self.state, self.quality) {
            (TrackerState::Modular, Quality::Modular(w)) => self.value += w[u],
            (TrackerState::Coverage(covered), Quality::Coverage(c)) => {
                covered.union_with(&c.items[u]);
                self.value = c.covered_weight(covered);
            }
            (TrackerState::Oracle(items), Quality::Oracle(o)) => {
                items.push(u);
                self.value = o.value(items);
            }
            _ => unreachable!("tracker state matches its quality"),
        }
    }
}

fn check_weights(weights: &[f64], what: &str) -> Result<()> {
    match weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
        Some(i) => Err(Error::invalid(format!(
            "{what} {i} must be finite and non-negative, got {}",
            weights[i]
        ))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_coverage() -> Quality {
        // items: 0 -> {0,1}, 1 -> {1,2}, 2 -> {2}, 3 -> {}
        Quality::coverage(vec![1.0, 2.0, 0.5], &[vec![0, 1], vec![1, 2], vec![2], vec![]]).unwrap()
    }

    #[test]
    fn coverage_value_counts_each_element_once() {
        let q = small_coverage();
        assert_eq!(q.value(&[]), 0.0);
        assert_eq!(q.value(&[0]), 3.0);
        assert_eq!(q.value(&[0, 1]), 3.5);
        assert_eq!(q.value(&[1, 0]), 3.5);
        assert_eq!(q.value(&[2, 3]), 0.5);
    }

    #[test]
    fn tracker_gain_matches_difference() {
        let q = small_coverage();
        let mut t = q.tracker();
        t.insert(1);
        assert_eq!(t.gain(0), q.value(&[1, 0]) - q.value(&[1]));
        assert_eq!(t.gain(2), 0.0);
        t.insert(0);
        assert_eq!(t.value(), 3.5);
    }

    #[test]
    fn rejects_negative_and_out_of_range() {
        assert!(Quality::modular(vec![0.1, -0.2]).is_err());
        assert!(Quality::modular(vec![f64::NAN]).is_err());
        assert!(Quality::coverage(vec![1.0], &[vec![1]]).is_err());
    }

    #[derive(Debug)]
    struct SqrtCount;

    impl SetOracle for SqrtCount {
        fn len(&self) -> usize {
            4
        }
        fn value(&self, items: &[usize]) -> f64 {
            (items.len() as f64).sqrt()
        }
    }

    #[test]
    fn oracle_quality_tracks_through_callback() {
        let q = Quality::Oracle(Arc::new(SqrtCount));
        let mut t = q.tracker();
        assert_eq!(t.gain(2), 1.0);
        t.insert(2);
        assert!((t.gain(0) - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert_eq!(q.value(&[]), 0.0);
    }
}
