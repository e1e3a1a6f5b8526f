//! Instances, the objective, marginal gains and incremental solution state.

mod distance;
mod instance;
pub mod io;
mod quality;
mod solution;

pub use distance::{validate_metric, DistanceMatrix, MetricReport, TriangleViolation, METRIC_TOLERANCE};
pub use instance::Instance;
pub use quality::{Coverage, Quality, QualityTracker, SetOracle};
pub use solution::Solution;

/// Relative tolerance used when comparing objective values.
pub const REL_TOLERANCE: f64 = 1e-9;

/// `true` when `a` and `b` agree within [`REL_TOLERANCE`] (relative, with an
/// absolute floor of the same size near zero).
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}
