//! Sampled checks of the shadow statements.

use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::limit_set::LimitSetApprox;
use super::shadow::segment_min_distance;
use crate::body::{ConvexBody, RayMethod};
use crate::error::{Error, Result};
use crate::facts::closure_ball_sample;
use crate::faces::ClosurePoint;
use crate::metric::chart_distance;
use crate::sampling;

pub const SHADOW_LEMMA: &str = "every shadow of a large enough ball contains a limit point";
pub const STEREOGRAPHIC: &str = "radial projection maps a ball onto its closed shadow";

/// Default radius grid `0.5, 1.0, ..., 8.0`.
pub fn default_radius_grid() -> Vec<f64> {
    (1..=16).map(|k| 0.5 * k as f64).collect()
}

/// Random interior point: a random direction from the base point, at a
/// uniformly random fraction (below `max_fraction`) of the exit distance.
pub fn random_interior<R: Rng>(body: &ConvexBody, rng: &mut R, max_fraction: f64) -> DVector<f64> {
    let dir = sampling::random_direction(rng, body.dim());
    let t = body.ray_exit(body.base_chart(), &dir, RayMethod::Exact);
    body.base_chart() + dir * (t * rng.random_range(0.0..max_fraction))
}

#[derive(Clone, Debug, Serialize)]
pub struct ShadowLemmaRow {
    pub radius: f64,
    pub hits: usize,
    pub trials: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShadowLemmaReport {
    pub statement: String,
    pub limit_points: usize,
    pub rows: Vec<ShadowLemmaRow>,
    /// Smallest grid radius at which every pair has a limit point in its shadow.
    pub threshold: Option<f64>,
    /// Largest of the per-pair radii: the least radius that covers every
    /// sampled pair.
    pub sufficient_radius: f64,
    /// Per pair, the smallest radius that would have sufficed.
    pub pair_radii: Vec<f64>,
}

impl ShadowLemmaReport {
    pub fn pass(&self) -> bool {
        self.threshold.is_some()
    }
}

/// For `trials` random interior pairs `(x, y)`, finds the least `R` for
/// which the shadow `O_R(x, y)` contains a point of `limit`, and tabulates
/// hit rates over `radii`.
pub fn shadow_lemma_probe(
    body: &ConvexBody,
    limit: &LimitSetApprox,
    radii: &[f64],
    trials: usize,
    seed: u64,
) -> Result<ShadowLemmaReport> {
    if limit.is_empty() {
        return Err(Error::EmptyLimitSet);
    }
    let mut rng = sampling::rng(seed);
    let pairs: Vec<(DVector<f64>, DVector<f64>)> = (0..trials)
        .map(|_| (random_interior(body, &mut rng, 0.95), random_interior(body, &mut rng, 0.95)))
        .collect();
    let pts = limit.chart_points();
    let pair_radii: Vec<f64> = pairs
        .par_iter()
        .map(|(x, y)| {
            pts.iter()
                .map(|xi| segment_min_distance(body, x, xi, y).1)
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let rows: Vec<ShadowLemmaRow> = radii
        .iter()
        .map(|&r| ShadowLemmaRow {
            radius: r,
            hits: pair_radii.iter().filter(|&&m| m < r).count(),
            trials,
        })
        .collect();
    let threshold = rows.iter().find(|row| row.hits == row.trials).map(|row| row.radius);
    Ok(ShadowLemmaReport {
        statement: SHADOW_LEMMA.into(),
        limit_points: pts.len(),
        rows,
        threshold,
        sufficient_radius: pair_radii.iter().copied().fold(0.0, f64::max),
        pair_radii,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StereographicReport {
    pub statement: String,
    pub pass: bool,
    pub distance_oy: f64,
    pub radius: f64,
    pub ball_samples: usize,
    /// Ball samples whose projection lies in the closed shadow.
    pub projected_in_shadow: usize,
    pub boundary_samples: usize,
    /// Boundary samples in the closed shadow.
    pub shadow_points: usize,
    /// Shadow points whose ray from `o` carries a verified ball point.
    pub witnessed: usize,
    /// Largest excess `min d(y, .) - R` over projected ball samples.
    pub worst_excess: f64,
}

/// Projects samples of the closed ball `B(y, R)` radially from `o` to the
/// boundary and checks they land in the closed shadow; conversely finds a
/// ball point on the ray to each sampled shadow point.
pub fn stereographic_consistency(
    body: &ConvexBody,
    o: &DVector<f64>,
    y: &DVector<f64>,
    radius: f64,
    ball_samples: usize,
    boundary_samples: usize,
    tol: f64,
) -> Result<StereographicReport> {
    if body.slack(o) <= 0.0 || body.slack(y) <= 0.0 {
        return Err(Error::NotInterior {
            margin: body.slack(o).min(body.slack(y)),
        });
    }
    let d_oy = chart_distance(body, o, y, RayMethod::Exact);
    if d_oy <= radius {
        return Err(Error::HypothesisViolated(format!(
            "the light source must lie outside the closed ball (d = {d_oy}, R = {radius})"
        )));
    }
    let project = |p: &DVector<f64>| -> DVector<f64> {
        let v = p - o;
        let t = body.ray_exit(o, &v, RayMethod::Exact);
        o + v * t
    };

    let centre = ClosurePoint::interior(body, y.clone());
    let ball = closure_ball_sample(body, &centre, radius, ball_samples)?;
    let excess: Vec<f64> = ball
        .par_iter()
        .map(|p| {
            let xi = project(p.chart());
            segment_min_distance(body, o, &xi, y).1 - radius
        })
        .collect();
    let projected_in_shadow = excess.iter().filter(|&&e| e <= tol).count();
    let worst_excess = excess.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    // boundary points seen from o along evenly spread directions
    let dirs = sampling::sphere_directions(body.dim(), boundary_samples);
    let checks: Vec<(bool, bool)> = dirs
        .par_iter()
        .map(|v| {
            let t = body.ray_exit(o, v, RayMethod::Exact);
            let xi = o + v * t;
            let (s, m) = segment_min_distance(body, o, &xi, y);
            if m > radius + tol {
                return (false, false);
            }
            let q = o + (&xi - o) * s;
            let on_ray = (project(&q) - &xi).norm() <= tol;
            let in_ball = chart_distance(body, y, &q, RayMethod::Exact) <= radius + tol;
            (true, on_ray && in_ball)
        })
        .collect();
    let shadow_points = checks.iter().filter(|c| c.0).count();
    let witnessed = checks.iter().filter(|c| c.1).count();
    Ok(StereographicReport {
        statement: STEREOGRAPHIC.into(),
        pass: projected_in_shadow == ball.len() && witnessed == shadow_points,
        distance_oy: d_oy,
        radius,
        ball_samples: ball.len(),
        projected_in_shadow,
        boundary_samples: dirs.len(),
        shadow_points,
        witnessed,
        worst_excess,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(a)
    }

    #[test]
    fn light_inside_ball_rejected() {
        let disk = ConvexBody::unit_ball(2);
        let o = v(&[0.0, 0.0]);
        let r = stereographic_consistency(&disk, &o, &o, 0.5, 10, 10, 1e-6);
        assert!(matches!(r, Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn disk_and_square() {
        let disk = ConvexBody::unit_ball(2);
        let r = stereographic_consistency(&disk, &v(&[0.0, 0.0]), &v(&[0.6, 0.0]), 0.2, 200, 720, 1e-6).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.shadow_points > 0);
        let sq = ConvexBody::square(1.0).unwrap();
        let r = stereographic_consistency(&sq, &v(&[-0.3, 0.1]), &v(&[0.5, 0.4]), 0.5, 200, 720, 1e-6).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
