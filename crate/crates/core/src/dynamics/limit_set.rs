//! Approximation of the proximal limit set by attracting points of words.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use super::proximal::proximality;
use super::words::{enumerate_words, DEFAULT_NODE_CAP};
use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::faces::CLOSURE_TOL;
use crate::hausdorff::nearest_distance;
use crate::projective::{ProjPoint, ProjTransform};
use crate::tol;

/// Boundary samples used by the invariance check.
const INVARIANCE_SAMPLES: usize = 256;

#[derive(Clone, Debug, Serialize)]
pub struct LimitPoint {
    pub point: ProjPoint,
    pub chart: Vec<f64>,
    pub word_length: usize,
    pub word: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitSetApprox {
    pub group_id: String,
    pub max_length: usize,
    pub points: Vec<LimitPoint>,
}

impl LimitSetApprox {
    pub fn chart_points(&self) -> Vec<DVector<f64>> {
        self.points
            .iter()
            .map(|p| DVector::from_column_slice(&p.chart))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct LimitSetOptions {
    pub group_id: String,
    pub involutions: Vec<bool>,
    /// Largest boundary defect of the generators that is accepted.
    pub invariance_tol: f64,
    /// Largest |slack| of an attracting point counted as on the boundary,
    /// relative to the body's bounding radius.
    pub boundary_tol: f64,
    pub node_cap: usize,
}

impl Default for LimitSetOptions {
    fn default() -> Self {
        LimitSetOptions {
            group_id: "group".into(),
            involutions: Vec::new(),
            invariance_tol: 1e-6,
            boundary_tol: CLOSURE_TOL,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

/// Largest displacement of sampled boundary points off the boundary under
/// the generators: `max |slack(g xi)|` over samples, with `+inf` when an
/// image leaves the chart.
pub fn invariance_defect(body: &ConvexBody, generators: &[ProjTransform], samples: usize) -> f64 {
    let bnd = body.boundary_samples(samples);
    generators
        .iter()
        .flat_map(|g| bnd.iter().map(move |u| (g, u)))
        .map(|(g, u)| {
            let p = body.chart().lift_point(u);
            match g.apply(&p) {
                Ok(q) => body.point_slack(&q).abs(),
                Err(_) => f64::INFINITY,
            }
        })
        .fold(0.0, f64::max)
}

/// Attracting points of the proximal words of length at most `max_len`
/// that lie on the boundary, deduplicated.
pub fn limit_set_approx(
    body: &ConvexBody,
    generators: &[ProjTransform],
    max_len: usize,
    opts: &LimitSetOptions,
) -> Result<LimitSetApprox> {
    let defect = invariance_defect(body, generators, INVARIANCE_SAMPLES);
    if !(defect <= opts.invariance_tol) {
        return Err(Error::NotPreserving {
            defect,
            tol: opts.invariance_tol,
        });
    }
    let words = enumerate_words(generators, max_len, &opts.involutions, opts.node_cap)?;
    let scale = body.bounding_radius().max(1.0);
    let candidates: Vec<Option<LimitPoint>> = words
        .par_iter()
        .map(|w| {
            let report = proximality(&w.transform);
            let p = report.attracting?;
            let u = body.chart().to_chart(&p).ok()?;
            if body.slack(&u).abs() > opts.boundary_tol * scale {
                return None;
            }
            Some(LimitPoint {
                point: p,
                chart: u.iter().copied().collect(),
                word_length: w.length,
                word: w.word.clone(),
            })
        })
        .collect();
    let mut points: Vec<LimitPoint> = Vec::new();
    for c in candidates.into_iter().flatten() {
        if !points.iter().any(|q| q.point.approx_eq(&c.point, tol::EQUALITY)) {
            points.push(c);
        }
    }
    Ok(LimitSetApprox {
        group_id: opts.group_id.clone(),
        max_length: max_len,
        points,
    })
}

/// One-sided Hausdorff distance from the boundary samples to the limit set,
/// in chart units.
pub fn coverage_gap(limit: &LimitSetApprox, boundary_samples: &[DVector<f64>]) -> Result<f64> {
    if limit.is_empty() {
        return Err(Error::EmptyLimitSet);
    }
    let pts = limit.chart_points();
    Ok(boundary_samples
        .par_iter()
        .map(|b| nearest_distance(b, &pts))
        .reduce(|| 0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_group_on_simplex() {
        let body = ConvexBody::simplex(2);
        let gens = vec![
            ProjTransform::diagonal(&[4.0, 2.0, 1.0]).unwrap(),
            ProjTransform::diagonal(&[1.0, 4.0, 2.0]).unwrap(),
        ];
        let opts = LimitSetOptions::default();
        for l in 1..=4 {
            let lim = limit_set_approx(&body, &gens, l, &opts).unwrap();
            assert_eq!(lim.len(), 3);
        }
        let lim = limit_set_approx(&body, &gens, 3, &opts).unwrap();
        let gap = coverage_gap(&lim, &body.boundary_samples(360)).unwrap();
        assert!(gap >= 0.2);
    }

    #[test]
    fn trivial_group_is_empty() {
        let body = ConvexBody::simplex(2);
        let lim = limit_set_approx(&body, &[ProjTransform::identity(3)], 3, &LimitSetOptions::default()).unwrap();
        assert!(lim.is_empty());
        assert!(matches!(coverage_gap(&lim, &body.boundary_samples(8)), Err(Error::EmptyLimitSet)));
    }

    #[test]
    fn non_preserving_generators_rejected() {
        let body = ConvexBody::unit_ball(2);
        let g = ProjTransform::diagonal(&[2.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            limit_set_approx(&body, &[g], 2, &LimitSetOptions::default()),
            Err(Error::NotPreserving { .. })
        ));
    }

    #[test]
    fn coverage_of_the_samples_themselves() {
        let body = ConvexBody::unit_ball(2);
        let samples = body.boundary_samples(32);
        let lim = LimitSetApprox {
            group_id: "samples".into(),
            max_length: 0,
            points: samples
                .iter()
                .map(|u| LimitPoint {
                    point: body.chart().lift_point(u),
                    chart: u.iter().copied().collect(),
                    word_length: 0,
                    word: String::new(),
                })
                .collect(),
        };
        assert_eq!(coverage_gap(&lim, &samples).unwrap(), 0.0);
    }
}
