//! Numerical tolerances used throughout the crate.
//!
//! Chart-unit tolerances are absolute; they assume bodies of diameter of
//! order one in their chart, which every constructor in the crate produces.

/// Width of the final bracket when locating a boundary point by bisection.
pub const BOUNDARY: f64 = 1e-12;

/// Hard cap on bisection steps for boundary location.
pub const BISECTION_MAX_ITER: usize = 200;

/// Margin an interior point must clear (ten boundary tolerances).
pub const INTERIOR_MARGIN: f64 = 10.0 * BOUNDARY;

/// Entrywise equality tolerance for canonical projective representatives.
pub const EQUALITY: f64 = 1e-9;

/// Relative residual of 2x2 minors allowed for collinear quadruples.
pub const COLLINEARITY: f64 = 1e-8;

/// Relative slack under which a facet inequality counts as active.
pub const ACTIVE: f64 = 1e-9;

/// Relative spectral gap a dominant eigenvalue must clear to count as proximal.
pub const PROXIMAL_GAP: f64 = 1e-6;

/// Minimum |det| of a normalized user-supplied matrix.
pub const MIN_DET: f64 = 1e-12;

/// Rounding quantum for bucketing normalized matrices during word dedup;
/// matrices sharing a bucket are then compared at `EQUALITY`.
pub const WORD_HASH: f64 = 1e-6;
