//! Hausdorff distances between finite point clouds.

use nalgebra::DVector;
use rayon::prelude::*;

/// `max_{a in from} min_{b in to} |a - b|`; `+inf` when `to` is empty and
/// `from` is not.
pub fn directed_hausdorff(from: &[DVector<f64>], to: &[DVector<f64>]) -> f64 {
    if from.is_empty() {
        return 0.0;
    }
    if to.is_empty() {
        return f64::INFINITY;
    }
    from.par_iter()
        .map(|a| nearest_distance(a, to))
        .reduce(|| 0.0, f64::max)
}

/// Symmetric Hausdorff distance.
pub fn hausdorff(a: &[DVector<f64>], b: &[DVector<f64>]) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// Distance from `a` to the nearest point of `set`.
pub fn nearest_distance(a: &DVector<f64>, set: &[DVector<f64>]) -> f64 {
    set.iter()
        .map(|b| (a - b).norm())
        .fold(f64::INFINITY, f64::min)
}
