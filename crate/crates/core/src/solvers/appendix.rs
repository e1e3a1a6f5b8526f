use super::brute::binomial;
use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::model::{DistanceMatrix, Instance, Quality};

/// Partition-matroid instance on which Greedy B is arbitrarily bad.
///
/// Items are `a = 0`, `b = 1` and `c_1..c_r = 2..r+2`. The block `{a, b}` has
/// capacity one and the block of `c`s is uncapped.
#[derive(Debug, Clone)]
pub struct AppendixFixture {
    pub instance: Instance,
    pub matroid: Matroid,
    pub epsilon: f64,
    pub r: usize,
    pub ell: f64,
}

pub const ITEM_A: usize = 0;
pub const ITEM_B: usize = 1;

impl AppendixFixture {
    /// `{a} ∪ C`, the basis greedy settles on.
    pub fn greedy_items(&self) -> Vec<usize> {
        std::iter::once(ITEM_A).chain(2..self.r + 2).collect()
    }

    /// `{b} ∪ C`, the optimal basis.
    pub fn opt_items(&self) -> Vec<usize> {
        std::iter::once(ITEM_B).chain(2..self.r + 2).collect()
    }

    /// `ℓ + ε + ε·C(r,2) + r·ε`
    pub fn greedy_value(&self) -> f64 {
        let r = self.r as f64;
        self.ell + self.epsilon + self.epsilon * binomial(self.r, 2) + r * self.epsilon
    }

    /// `r·ℓ + ε·C(r,2)`
    pub fn opt_value(&self) -> f64 {
        self.r as f64 * self.ell + self.epsilon * binomial(self.r, 2)
    }
}

pub fn appendix_fixture(r: usize, ell: f64) -> Result<AppendixFixture> {
    if r < 3 {
        return Err(Error::invalid(format!("appendix fixture needs r >= 3, got {r}")));
    }
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(Error::invalid(format!("ell must be positive, got {ell}")));
    }
    let epsilon = 1.0 / binomial(r, 2);
    let n = r + 2;
    let dist = DistanceMatrix::from_fn(n, |i, j| if i == ITEM_B || j == ITEM_B { ell } else { epsilon });
    let mut weights = vec![0.0; n];
    weights[ITEM_A] = ell + epsilon;
    let instance = Instance::new(dist, Quality::modular(weights)?, 1.0)?;
    let mut block_of = vec![1; n];
    block_of[ITEM_A] = 0;
    block_of[ITEM_B] = 0;
    let matroid = Matroid::partition(block_of, vec![Some(1), None])?;
    Ok(AppendixFixture {
        instance,
        matroid,
        epsilon,
        r,
        ell,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{brute_force_opt, greedy_vertex_matroid, Constraint, SolverConfig};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn r3_closed_form() {
        let fx = appendix_fixture(3, 1.0).unwrap();
        assert!(close(fx.greedy_value(), 10.0 / 3.0));
        assert!(close(fx.opt_value(), 4.0));
        assert!(close(fx.opt_value() / fx.greedy_value(), 1.2));
    }

    #[test]
    fn r10_ratio_exceeds_two() {
        let fx = appendix_fixture(10, 1.0).unwrap();
        let ratio = fx.opt_value() / fx.greedy_value();
        assert!(close(ratio, 495.0 / 101.0));
        assert!(ratio > 2.0);
    }

    #[test]
    fn solvers_reproduce_closed_form() {
        for init in [SolverConfig::default(), SolverConfig::plain()] {
            for r in [3, 6, 10] {
                let fx = appendix_fixture(r, 1.0).unwrap();
                let g = greedy_vertex_matroid(&fx.instance, &fx.matroid, &init).unwrap();
                assert_eq!(g.sorted_items(), fx.greedy_items());
                assert!(close(g.objective(), fx.greedy_value()));
                let opt = brute_force_opt(&fx.instance, Constraint::Matroid(&fx.matroid)).unwrap();
                assert_eq!(opt.sorted_items(), fx.opt_items());
                assert!(close(opt.objective(), fx.opt_value()));
            }
        }
    }

    #[test]
    fn metric_is_valid() {
        for r in [3, 5, 10] {
            let fx = appendix_fixture(r, 1.0).unwrap();
            assert!(fx.instance.dist().validate().is_metric());
        }
    }

    #[test]
    fn rejects_small_r() {
        assert!(appendix_fixture(2, 1.0).is_err());
        assert!(appendix_fixture(3, 0.0).is_err());
    }
}
