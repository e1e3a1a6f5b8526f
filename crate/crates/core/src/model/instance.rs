use super::{DistanceMatrix, Quality};
use crate::error::{Error, Result};

/// Universe of `n` items with pairwise distances, a quality function and the
/// trade-off weight `λ`.
///
/// Construction checks symmetry, the zero diagonal, non-negativity and the
/// sizes; the triangle inequality is left to [`DistanceMatrix::validate`]
/// since ingested data may not satisfy it.
#[derive(Debug, Clone)]
pub struct Instance {
    dist: DistanceMatrix,
    quality: Quality,
    lambda: f64,
}

impl Instance {
    pub fn new(dist: DistanceMatrix, quality: Quality, lambda: f64) -> Result<Self> {
        let n = dist.len();
        if quality.len() != n {
            return Err(Error::invalid(format!(
                "quality covers {} items but the distance matrix has {n}",
                quality.len()
            )));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::invalid(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        for u in 0..n {
            if dist.get(u, u) != 0.0 {
                return Err(Error::invalid(format!("d({u},{u}) must be 0")));
            }
            for v in 0..u {
                let d = dist.get(u, v);
                if !(d.is_finite() && d >= 0.0) {
                    return Err(Error::invalid(format!(
                        "d({u},{v}) must be finite and non-negative, got {d}"
                    )));
                }
                if d != dist.get(v, u) {
                    return Err(Error::invalid(format!("distance matrix not symmetric at ({u},{v})")));
                }
            }
        }
        Ok(Self {
            dist,
            quality,
            lambda,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.dist.len()
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    #[inline]
    pub fn d(&self, u: usize, v: usize) -> f64 {
        self.dist.get(u, v)
    }

    pub fn dist(&self) -> &DistanceMatrix {
        &self.dist
    }

    pub fn quality(&self) -> &Quality {
        &self.quality
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.dist.clone(), self.quality.clone(), lambda)
    }

    pub(crate) fn dist_mut(&mut self) -> &mut DistanceMatrix {
        &mut self.dist
    }

    pub(crate) fn quality_mut(&mut self) -> &mut Quality {
        &mut self.quality
    }

    /// Rejects out-of-range or repeated item ids.
    pub fn check_set(&self, items: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.n()];
        for &u in items {
            if u >= self.n() {
                return Err(Error::invalid(format!("item {u} out of range (n = {})", self.n())));
            }
            if std::mem::replace(&mut seen[u], true) {
                return Err(Error::invalid(format!("item {u} listed twice")));
            }
        }
        Ok(())
    }

    /// `φ(S) = f(S) + λ·d(S)`.
    pub fn objective(&self, items: &[usize]) -> Result<f64> {
        self.check_set(items)?;
        Ok(self.quality.value(items) + self.lambda * self.pair_sum(items))
    }

    /// `d(S)`: sum over unordered pairs inside `S`.
    pub fn set_distance(&self, items: &[usize]) -> Result<f64> {
        self.check_set(items)?;
        Ok(self.pair_sum(items))
    }

    /// `d(S, T)`: sum over all `|S|·|T|` cross pairs of disjoint sets.
    pub fn cross_distance(&self, s: &[usize], t: &[usize]) -> Result<f64> {
        self.check_disjoint(s, t)?;
        Ok(s.iter().map(|&u| t.iter().map(|&v| self.d(u, v)).sum::<f64>()).sum())
    }

    /// `d_u(S) = Σ_{v∈S} d(u, v)`.
    pub fn distance_to_set(&self, u: usize, items: &[usize]) -> f64 {
        let row = self.dist.row(u);
        items.iter().map(|&v| row[v]).sum()
    }

    /// `φ_u(S) = f(S+u) − f(S) + λ·d_u(S)`.
    pub fn marginal_phi(&self, items: &[usize], u: usize) -> Result<f64> {
        Ok(self.quality_marginal(items, u)? + self.lambda * self.distance_to_set(u, items))
    }

    /// `φ′_u(S) = ½(f(S+u) − f(S)) + λ·d_u(S)`, the greedy potential.
    pub fn marginal_phi_prime(&self, items: &[usize], u: usize) -> Result<f64> {
        Ok(0.5 * self.quality_marginal(items, u)? + self.lambda * self.distance_to_set(u, items))
    }

    /// `(|X|−1)·d(X,Y) − |Y|·d(X)`, non-negative on any metric.
    pub fn lemma_rrt_gap(&self, x: &[usize], y: &[usize]) -> Result<f64> {
        if x.is_empty() || y.is_empty() {
            return Err(Error::invalid("both sets must be nonempty"));
        }
        let cross = self.cross_distance(x, y)?;
        Ok((x.len() as f64 - 1.0) * cross - y.len() as f64 * self.pair_sum(x))
    }

    fn quality_marginal(&self, items: &[usize], u: usize) -> Result<f64> {
        self.check_set(items)?;
        if u >= self.n() {
            return Err(Error::invalid(format!("item {u} out of range (n = {})", self.n())));
        }
        if items.contains(&u) {
            return Err(Error::invalid(format!("item {u} is already in the set")));
        }
        let mut with = items.to_vec();
        with.push(u);
        Ok(self.quality.value(&with) - self.quality.value(items))
    }

    fn check_disjoint(&self, s: &[usize], t: &[usize]) -> Result<()> {
        self.check_set(s)?;
        self.check_set(t)?;
        if let Some(u) = s.iter().find(|u| t.contains(u)) {
            return Err(Error::invalid(format!("sets overlap at item {u}")));
        }
        Ok(())
    }

    pub(crate) fn pair_sum(&self, items: &[usize]) -> f64 {
        let mut total = 0.0;
        for (i, &u) in items.iter().enumerate() {
            let row = self.dist.row(u);
            for &v in &items[i + 1..] {
                total += row[v];
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize, w: f64, lambda: f64) -> Instance {
        Instance::new(
            DistanceMatrix::from_fn(n, |_, _| 1.0),
            Quality::modular(vec![w; n]).unwrap(),
            lambda,
        )
        .unwrap()
    }

    #[test]
    fn empty_set_objective_is_zero() {
        assert_eq!(uniform(4, 0.7, 1.0).objective(&[]).unwrap(), 0.0);
    }

    #[test]
    fn two_item_objective() {
        let inst = Instance::new(
            DistanceMatrix::from_fn(2, |_, _| 1.5),
            Quality::modular(vec![0.5, 0.3]).unwrap(),
            0.2,
        )
        .unwrap();
        assert!((inst.objective(&[0, 1]).unwrap() - 1.1).abs() < 1e-12);
    }

    #[test]
    fn unit_distances_count_pairs() {
        let inst = uniform(4, 0.0, 1.0);
        for s in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
            assert_eq!(inst.objective(&s).unwrap(), 3.0);
        }
        assert_eq!(inst.cross_distance(&[0, 1], &[2]).unwrap(), 2.0);
        assert_eq!(inst.set_distance(&[3]).unwrap(), 0.0);
        assert_eq!(inst.set_distance(&[]).unwrap(), 0.0);
    }

    #[test]
    fn invalid_ids_rejected() {
        let inst = uniform(3, 0.0, 1.0);
        assert!(inst.objective(&[3]).is_err());
        assert!(inst.objective(&[1, 1]).is_err());
        assert!(inst.cross_distance(&[0, 1], &[1, 2]).is_err());
        assert!(inst.marginal_phi(&[0], 0).is_err());
        assert!(inst.lemma_rrt_gap(&[0], &[0]).is_err());
    }

    #[test]
    fn marginals_from_empty_set() {
        let inst = Instance::new(
            DistanceMatrix::from_fn(2, |_, _| 1.0),
            Quality::modular(vec![0.8, 0.1]).unwrap(),
            0.5,
        )
        .unwrap();
        assert_eq!(inst.marginal_phi(&[], 0).unwrap(), 0.8);
        assert_eq!(inst.marginal_phi_prime(&[], 0).unwrap(), 0.4);
    }

    #[test]
    fn zero_coverage_gain_leaves_distance_term() {
        let q = Quality::coverage(vec![1.0, 1.0], &[vec![0, 1], vec![1], vec![0]]).unwrap();
        let inst = Instance::new(DistanceMatrix::from_fn(3, |i, j| (i + j) as f64), q, 0.3).unwrap();
        let expected = 0.3 * inst.distance_to_set(1, &[0, 2]);
        assert_eq!(inst.marginal_phi_prime(&[0, 2], 1).unwrap(), expected);
    }

    #[test]
    fn rrt_gap_examples() {
        let inst = uniform(5, 0.0, 1.0);
        assert_eq!(inst.lemma_rrt_gap(&[0], &[1, 2]).unwrap(), 0.0);
        assert_eq!(inst.lemma_rrt_gap(&[0, 1, 2], &[3, 4]).unwrap(), 6.0);
    }

    #[test]
    fn constructor_checks() {
        let q = Quality::zero(2);
        let mut m = DistanceMatrix::zeros(2);
        m.set(0, 1, -1.0);
        assert!(Instance::new(m, q.clone(), 1.0).is_err());
        assert!(Instance::new(DistanceMatrix::zeros(2), q.clone(), -0.1).is_err());
        assert!(Instance::new(DistanceMatrix::zeros(3), q, 0.1).is_err());
        let asym = DistanceMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert!(Instance::new(asym, Quality::zero(2), 1.0).is_err());
    }
}
