//! Seeded instance generators.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`. A uniform
//! draw on `[lo, hi]` is `lo + (hi − lo)·u` with `u = rng.gen::<f64>()`.
//! Synthetic instances draw the `n` weights first, then the strict lower
//! triangle of the distance matrix row by row.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::model::{DistanceMatrix, Instance, Quality};

pub const DEFAULT_LAMBDA: f64 = 0.2;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[inline]
pub fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

/// Weights iid on `[0,1]`, distances iid on `[1,2]`. Always a metric.
pub fn gen_synthetic(n: usize, lambda: f64, seed: u64) -> Result<Instance> {
    if n < 2 {
        return Err(Error::invalid(format!("synthetic instances need n >= 2, got {n}")));
    }
    let mut rng = rng(seed);
    let weights: Vec<f64> = (0..n).map(|_| uniform(&mut rng, 0.0, 1.0)).collect();
    let dist = DistanceMatrix::from_fn(n, |_, _| uniform(&mut rng, 1.0, 2.0));
    Instance::new(dist, Quality::modular(weights)?, lambda)
}

/// Euclidean distances between `n` points drawn in the unit cube of `dim`
/// dimensions. Metric, but unlike [`gen_synthetic`] distances can be
/// arbitrarily close to 0.
pub fn gen_euclidean(n: usize, dim: usize, rng: &mut impl Rng) -> DistanceMatrix {
    let points: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect();
    DistanceMatrix::from_fn(n, |i, j| {
        points[i].iter().zip(&points[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    })
}

/// Shortest-path distances of a complete graph with edge lengths drawn
/// from `[0, 1]`, a few of them stretched by 10. Many triangles are tight.
pub fn gen_graph_metric(n: usize, rng: &mut impl Rng) -> DistanceMatrix {
    let mut d = DistanceMatrix::from_fn(n, |_, _| {
        let len = rng.gen::<f64>();
        if rng.gen_bool(0.2) {
            10.0 * len
        } else {
            len
        }
    });
    for k in 0..n {
        for i in 0..n {
            for j in i + 1..n {
                let via = d.get(i, k) + d.get(k, j);
                if via < d.get(i, j) {
                    d.set(i, j, via);
                }
            }
        }
    }
    d
}

/// Weighted coverage over `elements` ground elements. Each item covers
/// between 0 and `max_cover` distinct elements.
pub fn gen_coverage(n: usize, elements: usize, max_cover: usize, rng: &mut impl Rng) -> Result<Quality> {
    let weights: Vec<f64> = (0..elements).map(|_| rng.gen::<f64>()).collect();
    let cap = max_cover.min(elements);
    let items: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let k = rng.gen_range(0..=cap);
            sample(rng, elements, k).into_vec()
        })
        .collect();
    Quality::coverage(weights, &items)
}

/// A small random instance for property tests, with modular or coverage
/// quality.
pub fn gen_fuzz_instance(n: usize, rng: &mut impl Rng) -> Result<Instance> {
    let dist = gen_fuzz_metric(n, rng);
    let quality = if rng.gen_bool(0.5) {
        Quality::modular((0..n).map(|_| rng.gen::<f64>()).collect())?
    } else {
        gen_coverage(n, rng.gen_range(1..=2 * n), 4, rng)?
    };
    let lambda = uniform(rng, 0.0, 1.5);
    Instance::new(dist, quality, lambda)
}

/// One of the three metric families above, chosen at random.
pub fn gen_fuzz_metric(n: usize, rng: &mut impl Rng) -> DistanceMatrix {
    match rng.gen_range(0..3) {
        0 => DistanceMatrix::from_fn(n, |_, _| uniform(rng, 1.0, 2.0)),
        1 => gen_euclidean(n, rng.gen_range(1..=3), rng),
        _ => gen_graph_metric(n, rng),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatroidFamily {
    Uniform,
    Partition,
    Transversal,
}

impl MatroidFamily {
    pub const ALL: [MatroidFamily; 3] = [MatroidFamily::Uniform, MatroidFamily::Partition, MatroidFamily::Transversal];
}

/// Uniform, partition or transversal matroid on `n` items, chosen at random.
pub fn gen_matroid(n: usize, rng: &mut impl Rng) -> Result<Matroid> {
    let family = MatroidFamily::ALL[rng.gen_range(0..3)];
    gen_matroid_in(family, n, rng)
}

/// A random matroid of the given family, with rank at most 6.
pub fn gen_matroid_in(family: MatroidFamily, n: usize, rng: &mut impl Rng) -> Result<Matroid> {
    match family {
        MatroidFamily::Uniform => Ok(Matroid::uniform(n, rng.gen_range(1..=n.min(6)))),
        MatroidFamily::Partition => {
            let blocks = rng.gen_range(1..=4.min(n));
            let block_of: Vec<usize> = (0..n).map(|_| rng.gen_range(0..blocks)).collect();
            let caps = (0..blocks)
                .map(|_| if rng.gen_bool(0.15) { None } else { Some(rng.gen_range(0..=3)) })
                .collect();
            Matroid::partition(block_of, caps)
        }
        MatroidFamily::Transversal => {
            let sets = rng.gen_range(1..=5);
            let family: Vec<Vec<usize>> = (0..sets)
                .map(|_| {
                    let k = rng.gen_range(1..=n.min(5));
                    let mut s = sample(rng, n, k).into_vec();
                    s.sort_unstable();
                    s
                })
                .collect();
            Matroid::transversal(n, family)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::io::write_instance;

    #[test]
    fn synthetic_is_metric_and_in_range() {
        for seed in 0..20 {
            let inst = gen_synthetic(25, DEFAULT_LAMBDA, seed).unwrap();
            let report = inst.dist().validate();
            assert!(report.is_metric());
            assert!(report.triangle_violations.is_empty());
            for u in 0..25 {
                let w = inst.quality().weights().unwrap()[u];
                assert!((0.0..=1.0).contains(&w));
                for v in 0..25 {
                    if u != v {
                        assert!((1.0..=2.0).contains(&inst.d(u, v)));
                    }
                }
            }
        }
    }

    #[test]
    fn same_seed_same_bytes() {
        let a = write_instance(&gen_synthetic(30, 0.2, 9).unwrap(), None).unwrap();
        let b = write_instance(&gen_synthetic(30, 0.2, 9).unwrap(), None).unwrap();
        let c = write_instance(&gen_synthetic(30, 0.2, 10).unwrap(), None).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_tiny_n() {
        assert!(gen_synthetic(1, 0.2, 0).is_err());
    }

    #[test]
    fn fuzz_generators_are_valid() {
        let mut r = rng(5);
        for _ in 0..50 {
            let n = r.gen_range(2..10);
            let inst = gen_fuzz_instance(n, &mut r).unwrap();
            assert!(inst.dist().validate().is_metric());
            assert!(gen_graph_metric(n, &mut r).validate().is_metric());
            let m = gen_matroid(n, &mut r).unwrap();
            assert_eq!(m.n(), n);
        }
    }
}
