//! Proximal elements, word enumeration, shadows and limit sets.

pub mod groups;
pub mod limit_set;
pub mod probes;
pub mod proximal;
pub mod shadow;
pub mod words;

pub use groups::{
    build_simplex_diagonal_group, build_triangle_reflection_group, orbit_chart_radius, GroupExample, GroupSpec,
};
pub use limit_set::{coverage_gap, invariance_defect, limit_set_approx, LimitPoint, LimitSetApprox, LimitSetOptions};
pub use probes::{shadow_lemma_probe, stereographic_consistency, ShadowLemmaReport, StereographicReport};
pub use proximal::{proximality, ProximalityReport};
pub use shadow::{segment_min_distance, shadow_contains, shadow_sample, ShadowQuery, ShadowResult};
pub use words::{enumerate_words, WordEntry};
