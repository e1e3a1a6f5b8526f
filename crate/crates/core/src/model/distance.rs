use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack above which a triangle is reported as violated.
pub const METRIC_TOLERANCE: f64 = 1e-9;

/// Dense row-major `n × n` distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Builds a symmetric matrix with zero diagonal. `f(i, j)` is called once
    /// per unordered pair with `i > j`, in row-major lower-triangle order.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 1..n {
            for j in 0..i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Copies a square matrix as given, without symmetrizing.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::invalid(format!(
                "distance matrix is not square: row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        Ok(Self {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Inverse of [`DistanceMatrix::lower_triangle`].
    pub fn from_lower_triangle(n: usize, values: &[f64]) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if values.len() != expected {
            return Err(Error::invalid(format!(
                "lower triangle for n={n} needs {expected} entries, got {}",
                values.len()
            )));
        }
        let mut it = values.iter().copied();
        Ok(Self::from_fn(n, |_, _| it.next().unwrap_or_default()))
    }

    /// Entries `d(i, j)` for `i > j`, row by row.
    pub fn lower_triangle(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2);
        for i in 1..self.n {
            out.extend_from_slice(&self.row(i)[..i]);
        }
        out
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.data[u * self.n + v]
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[f64] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    /// Sets both `d(u, v)` and `d(v, u)`.
    pub fn set(&mut self, u: usize, v: usize, value: f64) {
        self.data[u * self.n + v] = value;
        self.data[v * self.n + u] = value;
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// Exhaustive O(n³) check of the metric axioms.
    pub fn validate(&self) -> MetricReport {
        let n = self.n;
        let mut report = MetricReport {
            symmetric: true,
            nonneg: true,
            zero_diagonal: true,
            triangle_violations: Vec::new(),
        };
        for u in 0..n {
            if self.get(u, u) != 0.0 {
                report.zero_diagonal = false;
            }
            for v in 0..n {
                let d = self.get(u, v);
                if !(d >= 0.0) {
                    report.nonneg = false;
                }
                if d != self.get(v, u) {
                    report.symmetric = false;
                }
            }
        }
        for x in 0..n {
            for z in x + 1..n {
                let dxz = self.get(x, z);
                for y in 0..n {
                    if y == x || y == z {
                        continue;
                    }
                    let slack = dxz - self.get(x, y) - self.get(y, z);
                    if slack > METRIC_TOLERANCE {
                        report.triangle_violations.push(TriangleViolation { x, y, z, slack });
                    }
                }
            }
        }
        report
    }

    /// Checks only the triangles that contain the pair `{u, v}`.
    pub(crate) fn check_pair_triangles(&self, u: usize, v: usize) -> Result<()> {
        let duv = self.get(u, v);
        for z in (0..self.n).filter(|&z| z != u && z != v) {
            let (duz, dzv) = (self.get(u, z), self.get(z, v));
            let checks = [
                (u, z, v, duv - duz - dzv),
                (u, v, z, duz - duv - dzv),
                (v, u, z, dzv - duv - duz),
            ];
            if let Some(&(x, y, z, slack)) = checks.iter().find(|c| c.3 > METRIC_TOLERANCE) {
                return Err(Error::MetricViolation { x, y, z, slack });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleViolation {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    /// `d(x,z) − d(x,y) − d(y,z)`; positive for a violation.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub symmetric: bool,
    pub nonneg: bool,
    pub zero_diagonal: bool,
    pub triangle_violations: Vec<TriangleViolation>,
}

impl MetricReport {
    pub fn is_metric(&self) -> bool {
        self.symmetric && self.nonneg && self.zero_diagonal && self.triangle_violations.is_empty()
    }

    pub fn worst_slack(&self) -> f64 {
        self.triangle_violations.iter().map(|v| v.slack).fold(0.0, f64::max)
    }
}

/// Validates a matrix given as rows. Fails only when the input is not square.
pub fn validate_metric(rows: &[Vec<f64>]) -> Result<MetricReport> {
    Ok(DistanceMatrix::from_rows(rows)?.validate())
}
