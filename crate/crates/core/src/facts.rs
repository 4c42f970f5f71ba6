//! Closure balls, homotheties, and sampled checks of the comparison
//! between Hilbert balls and Euclidean homotheties of a face, and of lower
//! semi-continuity of the extended metric.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::body::{ConvexBody, RayMethod};
use crate::error::{Error, Result};
use crate::faces::{extended_distance, ClosurePoint, FaceDescriptor, Location};
use crate::metric::chart_distance;
use crate::omega_f::{build_omega_f, StepFunction, StepFunctionSpec};
use crate::sampling;
use crate::serde_float;

/// Tolerance used by the containment checks.
pub const CONTAINMENT_TOL: f64 = 1e-8;

/// `a + t (p - a)`.
pub fn homothety(a: &DVector<f64>, t: f64, p: &DVector<f64>) -> DVector<f64> {
    a + (p - a) * t
}

/// Distance from `w0` to the boundary of the closed ball of radius `r`
/// around it, along the unit direction `dir`, inside `body`.
pub fn ball_reach(body: &ConvexBody, w0: &DVector<f64>, dir: &DVector<f64>, r: f64) -> f64 {
    let fwd = body.ray_exit(w0, dir, RayMethod::Exact);
    let back = body.ray_exit(w0, &(-dir), RayMethod::Exact);
    let grow = -(-2.0 * r).exp_m1();
    let shrink = (-2.0 * r).exp();
    back * fwd * grow / (fwd * shrink + back)
}

/// The body a closure point lives in (the whole body or its open face),
/// with the point's local coordinates.
fn local_frame<'a>(body: &'a ConvexBody, x: &'a ClosurePoint) -> Option<(&'a ConvexBody, DVector<f64>)> {
    match x.location() {
        Location::Interior => Some((body, x.chart().clone())),
        Location::Boundary(face) => face
            .sub_body()
            .map(|sub| (sub.as_ref(), face.to_local(x.chart()))),
    }
}

fn to_closure_point(body: &ConvexBody, x: &ClosurePoint, w: DVector<f64>) -> ClosurePoint {
    match x.location() {
        Location::Interior => ClosurePoint::interior(body, w),
        Location::Boundary(face) => ClosurePoint::on_face(body, face.to_global(&w), Arc::clone(face)),
    }
}

/// Halton direction and radius fraction for sample `i` in dimension `k`;
/// every fourth sample sits on the sphere.
fn halton_ray(i: usize, k: usize) -> (DVector<f64>, f64) {
    let dims = k.max(2);
    let h = sampling::halton(i, dims);
    let dir = sampling::direction_from_params(k, &h[..dims - 1]);
    let rho = if i % 4 == 0 {
        1.0
    } else {
        h[dims - 1].powf(1.0 / k as f64)
    };
    (dir, rho)
}

/// Deterministic low-discrepancy samples of the closed ball `B(x, R)` of
/// the extended metric; `{x}` when `x` is extremal.
pub fn closure_ball_sample(body: &ConvexBody, x: &ClosurePoint, r: f64, n: usize) -> Result<Vec<ClosurePoint>> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument("ball radius must be positive".into()));
    }
    let Some((sub, w0)) = local_frame(body, x) else {
        return Ok(vec![x.clone()]);
    };
    let k = sub.dim();
    Ok((0..n)
        .map(|i| {
            let (dir, rho) = halton_ray(i, k);
            let t = ball_reach(sub, &w0, &dir, r) * rho;
            to_closure_point(body, x, &w0 + dir * t)
        })
        .collect())
}

/// Outcome of a sampled containment check.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FactReport {
    /// Name of the statement being checked.
    pub statement: String,
    pub pass: bool,
    /// Homothety ratio used.
    pub ratio: f64,
    pub samples: usize,
    pub violations: usize,
    /// Smallest containment margin (radius minus distance); negative on
    /// violations, `-inf` when a mapped point leaves the face.
    #[serde(with = "serde_float")]
    pub worst_margin: f64,
    /// Chart coordinates of the worst offenders.
    pub witnesses: Vec<Vec<f64>>,
}

struct MarginTally {
    worst: f64,
    violations: usize,
    witnesses: Vec<(f64, Vec<f64>)>,
}

impl MarginTally {
    fn new() -> Self {
        MarginTally {
            worst: f64::INFINITY,
            violations: 0,
            witnesses: Vec::new(),
        }
    }

    fn add(&mut self, margin: f64, at: &DVector<f64>) {
        self.worst = self.worst.min(margin);
        if margin < -CONTAINMENT_TOL {
            self.violations += 1;
            self.witnesses.push((margin, at.iter().copied().collect()));
            self.witnesses.sort_by(|a, b| a.0.total_cmp(&b.0));
            self.witnesses.truncate(5);
        }
    }

    fn report(self, statement: &str, ratio: f64, samples: usize) -> FactReport {
        FactReport {
            statement: statement.into(),
            pass: self.violations == 0,
            ratio,
            samples,
            violations: self.violations,
            worst_margin: self.worst,
            witnesses: self.witnesses.into_iter().map(|w| w.1).collect(),
        }
    }
}

fn boundary_face(x: &ClosurePoint) -> Result<&Arc<FaceDescriptor>> {
    x.face()
        .ok_or_else(|| Error::InvalidArgument("anchor must be a boundary point".into()))
}

pub const FACE_IN_SCALED_BALL: &str = "closed face inside the scaled small ball";
pub const SCALED_BALL_IN_BALL: &str = "scaled small ball inside the large ball";

/// `λ = diam(F) (e^{2r} + 1) / (dist(x, ∂F) (e^{2r} - 1))`.
pub fn face_ratio(diameter: f64, boundary_distance: f64, r: f64) -> f64 {
    diameter / (boundary_distance * r.tanh())
}

/// Checks that the closed face of `x` lies in the image of the closed ball
/// `B(x, r)` under the homothety of centre `x` and ratio `λ`, by testing
/// that the inverse homothety maps face samples into `B(x, r + 1e-8)`.
pub fn check_face_in_scaled_ball(_body: &ConvexBody, x: &ClosurePoint, r: f64, samples: usize) -> Result<FactReport> {
    let face = boundary_face(x)?;
    if face.dim() == 0 {
        return Err(Error::ExtremalAnchor);
    }
    if !(r > 0.0) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let sub = face.sub_body().expect("positive-dimensional face");
    let w0 = face.to_local(x.chart());
    let dist = sub.slack(&w0);
    if !(dist > 1e-9) {
        return Err(Error::InvalidArgument(format!(
            "anchor is too close to the relative boundary of its face ({dist:.3e})"
        )));
    }
    let lambda = face_ratio(face.diameter(), dist, r);
    let k = sub.dim();
    let mut tally = MarginTally::new();
    for i in 0..samples {
        let (dir, rho) = halton_ray(i, k);
        let reach = sub.ray_exit(&w0, &dir, RayMethod::Exact);
        let p = &w0 + &dir * (reach * rho);
        let q = homothety(&w0, 1.0 / lambda, &p);
        let d = chart_distance(sub, &w0, &q, RayMethod::Exact);
        tally.add(r - d, &face.to_global(&p));
    }
    Ok(tally.report(FACE_IN_SCALED_BALL, lambda, samples))
}

/// Homothety ratio for the ball-in-ball statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BallRatio {
    /// `μ = (e^{2R} - 1) / (e^{2r} - 1)`, the ratio as usually stated.
    #[default]
    Stated,
    /// `μ = (1 - e^{-2R}) / (1 - e^{-2r})`, the largest ratio that works
    /// for every body and direction.
    Tight,
}

impl BallRatio {
    pub fn value(self, r: f64, big_r: f64) -> f64 {
        match self {
            BallRatio::Stated => (2.0 * big_r).exp_m1() / (2.0 * r).exp_m1(),
            BallRatio::Tight => (-2.0 * big_r).exp_m1() / (-2.0 * r).exp_m1(),
        }
    }
}

/// Checks `h_x^μ(B(x, r)) ⊂ B(x, R)` on ball samples, with the stated ratio.
pub fn check_scaled_ball_in_ball(
    body: &ConvexBody,
    x: &ClosurePoint,
    r: f64,
    big_r: f64,
    samples: usize,
) -> Result<FactReport> {
    check_scaled_ball_in_ball_with_ratio(body, x, r, big_r, samples, BallRatio::Stated)
}

pub fn check_scaled_ball_in_ball_with_ratio(
    body: &ConvexBody,
    x: &ClosurePoint,
    r: f64,
    big_r: f64,
    samples: usize,
    rule: BallRatio,
) -> Result<FactReport> {
    if !(r > 0.0 && r < big_r) {
        return Err(Error::BadRadii { r, big_r });
    }
    let mu = rule.value(r, big_r);
    let Some((sub, w0)) = local_frame(body, x) else {
        let mut tally = MarginTally::new();
        tally.add(big_r, x.chart());
        return Ok(tally.report(SCALED_BALL_IN_BALL, mu, 1));
    };
    let k = sub.dim();
    let mut tally = MarginTally::new();
    for i in 0..samples {
        let (dir, rho) = halton_ray(i, k);
        let p = &w0 + &dir * (ball_reach(sub, &w0, &dir, r) * rho);
        let q = homothety(&w0, mu, &p);
        let len = (&q - &w0).norm();
        let exit = sub.ray_exit(&w0, &dir, RayMethod::Exact);
        let margin = if len >= exit * (1.0 - 1e-12) {
            f64::NEG_INFINITY
        } else {
            big_r - chart_distance(sub, &w0, &q, RayMethod::Exact)
        };
        let global = match x.location() {
            Location::Interior => q,
            Location::Boundary(face) => face.to_global(&q),
        };
        tally.add(margin, &global);
    }
    Ok(tally.report(SCALED_BALL_IN_BALL, mu, samples))
}

/// Named polytopes used by the random fact suite.
pub fn standard_polytopes() -> Result<Vec<(String, ConvexBody)>> {
    let mut rng = sampling::rng(17);
    let mut hexagon = nalgebra::DMatrix::zeros(6, 2);
    for k in 0..6 {
        let t = std::f64::consts::TAU * k as f64 / 6.0 + 0.1;
        hexagon[(k, 0)] = t.cos();
        hexagon[(k, 1)] = t.sin();
    }
    let hexagon = ConvexBody::hpolytope(hexagon, DVector::from_vec(vec![1.0, 1.2, 0.8, 1.0, 1.5, 0.9]))?;
    let cloud = |rng: &mut rand_chacha::ChaCha8Rng, d: usize, n: usize| -> Vec<DVector<f64>> {
        (0..n)
            .map(|_| sampling::random_direction(rng, d) * rng.random_range(0.5..1.0))
            .collect()
    };
    let hull2 = ConvexBody::hull(cloud(&mut rng, 2, 12))?;
    let hull3 = ConvexBody::hull(cloud(&mut rng, 3, 30))?;
    let cube = ConvexBody::hull(
        (0..8)
            .map(|i: usize| DVector::from_fn(3, |k, _| ((i >> k) & 1) as f64 * 2.0 - 1.0))
            .collect(),
    )?;
    Ok(vec![
        ("square".into(), ConvexBody::square(1.0)?),
        ("hexagon".into(), hexagon),
        ("triangle".into(), ConvexBody::simplex(2)),
        ("random polygon".into(), hull2),
        ("cube".into(), cube),
        ("tetrahedron".into(), ConvexBody::simplex(3)),
        ("random polyhedron".into(), hull3),
    ])
}

/// One random configuration of the fact suite.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FactConfig {
    pub body: String,
    pub anchor: Vec<f64>,
    pub r: f64,
    pub big_r: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FactFailure {
    pub config: FactConfig,
    pub report: FactReport,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FactSuiteReport {
    pub ratio_rule: BallRatio,
    pub configurations: usize,
    pub face_violations: usize,
    pub ball_violations: usize,
    /// First failing configurations of each statement.
    pub failures: Vec<FactFailure>,
}

impl FactSuiteReport {
    pub fn pass(&self) -> bool {
        self.face_violations == 0 && self.ball_violations == 0
    }
}

/// Runs both containment checks on `n` random configurations: a polytope
/// from [`standard_polytopes`], a boundary anchor in the relative interior
/// of a face, and radii `0 < r < R`.
pub fn fact_suite(n: usize, seed: u64, rule: BallRatio, samples: usize) -> Result<FactSuiteReport> {
    let polys = standard_polytopes()?;
    let mut rng = sampling::rng(seed);
    let mut configs = Vec::with_capacity(n);
    while configs.len() < n {
        let (name, body) = &polys[configs.len() % polys.len()];
        let dir = sampling::random_direction(&mut rng, body.dim());
        let t = body.ray_exit(body.base_chart(), &dir, RayMethod::Exact);
        let anchor = body.base_chart() + dir * t;
        let x = ClosurePoint::locate_chart(body, &anchor)?;
        let face = boundary_face(&x)?;
        if face.dim() == 0 || face.relative_boundary_distance(&anchor) < 1e-3 {
            continue;
        }
        let r = rng.random_range(0.05..2.0);
        let big_r = r + rng.random_range(0.05..3.0);
        configs.push((body, x, FactConfig {
            body: name.clone(),
            anchor: anchor.iter().copied().collect(),
            r,
            big_r,
        }));
    }
    let results: Vec<(FactReport, FactReport)> = configs
        .par_iter()
        .map(|(body, x, c)| {
            Ok((
                check_face_in_scaled_ball(body, x, c.r, samples)?,
                check_scaled_ball_in_ball_with_ratio(body, x, c.r, c.big_r, samples, rule)?,
            ))
        })
        .collect::<Result<_>>()?;
    let mut failures = Vec::new();
    let (mut face_violations, mut ball_violations) = (0, 0);
    for ((_, _, config), (face, ball)) in configs.into_iter().zip(results) {
        for (report, count) in [(face, &mut face_violations), (ball, &mut ball_violations)] {
            if !report.pass {
                *count += 1;
                if failures.len() < 10 {
                    failures.push(FactFailure {
                        config: config.clone(),
                        report,
                    });
                }
            }
        }
    }
    Ok(FactSuiteReport {
        ratio_rule: rule,
        configurations: n,
        face_violations,
        ball_violations,
        failures,
    })
}

/// A finite sequence of pairs `(x_n, y_n)` converging to `(x, y)`, in chart
/// coordinates.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConvergingPairs {
    pub label: String,
    pub xs: Vec<Vec<f64>>,
    pub ys: Vec<Vec<f64>>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SemicontinuityRow {
    pub label: String,
    #[serde(with = "serde_float")]
    pub limit: f64,
    /// Smallest distance over the last terms of the sequence.
    #[serde(with = "serde_float")]
    pub tail_min: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SemicontinuityReport {
    pub pass: bool,
    pub violations: usize,
    pub rows: Vec<SemicontinuityRow>,
}

/// Terms of a sequence used to estimate its liminf.
pub const TAIL_TERMS: usize = 4;

/// Checks `liminf d(x_n, y_n) >= d(x, y) - tol` on each sequence, the
/// liminf being estimated by the minimum over the last [`TAIL_TERMS`] terms.
pub fn semicontinuity_probe(body: &ConvexBody, sequences: &[ConvergingPairs], tol: f64) -> Result<SemicontinuityReport> {
    let mut rows = Vec::with_capacity(sequences.len());
    for seq in sequences {
        if seq.xs.len() != seq.ys.len() || seq.xs.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "sequence {:?} needs equally many nonzero x and y terms",
                seq.label
            )));
        }
        let locate = |u: &[f64]| ClosurePoint::locate_chart(body, &DVector::from_column_slice(u));
        let limit = extended_distance(body, &locate(&seq.x)?, &locate(&seq.y)?)?.value();
        let start = seq.xs.len().saturating_sub(TAIL_TERMS);
        let mut tail_min = f64::INFINITY;
        for (xn, yn) in seq.xs[start..].iter().zip(&seq.ys[start..]) {
            let d = extended_distance(body, &locate(xn)?, &locate(yn)?)?.value();
            tail_min = tail_min.min(d);
        }
        let pass = tail_min >= limit - tol;
        rows.push(SemicontinuityRow {
            label: seq.label.clone(),
            limit,
            tail_min,
            pass,
        });
    }
    let violations = rows.iter().filter(|r| !r.pass).count();
    Ok(SemicontinuityReport {
        pass: violations == 0,
        violations,
        rows,
    })
}

/// Pairs `f(2^-k)` for `k = 1..=n`.
fn seq(label: &str, n: usize, f: impl Fn(f64) -> (Vec<f64>, Vec<f64>), limit: (Vec<f64>, Vec<f64>)) -> ConvergingPairs {
    let (xs, ys) = (1..=n).map(|k| f(0.5f64.powi(k as i32))).unzip();
    ConvergingPairs {
        label: label.into(),
        xs,
        ys,
        x: limit.0,
        y: limit.1,
    }
}

/// The standard semi-continuity suite: bodies with sequences approaching
/// faces of several dimensions, including Ω_f sequences across a jump.
pub fn standard_semicontinuity_suite() -> Result<Vec<(String, ConvexBody, Vec<ConvergingPairs>)>> {
    // smallest parameter 2^-26, well above the boundary classification tolerance
    let n = 26;
    let mut out = Vec::new();

    let square = ConvexBody::square(1.0)?;
    out.push((
        "square".to_string(),
        square,
        vec![
            seq("constant pair", n, |_| (vec![0.1, 0.2], vec![-0.3, 0.4]), (vec![0.1, 0.2], vec![-0.3, 0.4])),
            seq(
                "interior to edge",
                n,
                |e| (vec![1.0 - e, 0.0], vec![1.0 - e, 0.4]),
                (vec![1.0, 0.0], vec![1.0, 0.4]),
            ),
            seq(
                "interior to edge, oblique",
                n,
                |e| (vec![1.0 - e, -0.5 + 0.3 * e], vec![1.0 - 2.0 * e, 0.6]),
                (vec![1.0, -0.5], vec![1.0, 0.6]),
            ),
            seq(
                "edge to vertex",
                n,
                |e| (vec![1.0, 1.0 - e], vec![1.0, 1.0 - 2.0 * e]),
                (vec![1.0, 1.0], vec![1.0, 1.0]),
            ),
            seq(
                "along an edge",
                n,
                |e| (vec![1.0, 0.2 + e * 0.1], vec![1.0, -0.7]),
                (vec![1.0, 0.2], vec![1.0, -0.7]),
            ),
        ],
    ));

    let disk = ConvexBody::unit_ball(2);
    out.push((
        "unit disk".to_string(),
        disk,
        vec![
            seq("interior pair", n, |e| (vec![0.2 * e, 0.1], vec![0.5, -0.3 * e]), (vec![0.0, 0.1], vec![0.5, 0.0])),
            seq(
                "pair converging to one boundary point",
                n,
                |e| (vec![1.0 - e, 0.0], vec![(1.0 - e) * (e * 0.1).cos(), (1.0 - e) * (e * 0.1).sin()]),
                (vec![1.0, 0.0], vec![1.0, 0.0]),
            ),
        ],
    ));

    let mut cube_pts = Vec::new();
    for i in 0..8 {
        cube_pts.push(DVector::from_vec(vec![
            (i & 1) as f64 * 2.0 - 1.0,
            ((i >> 1) & 1) as f64 * 2.0 - 1.0,
            ((i >> 2) & 1) as f64 * 2.0 - 1.0,
        ]));
    }
    let cube = ConvexBody::hull(cube_pts)?;
    out.push((
        "cube".to_string(),
        cube,
        vec![
            seq(
                "interior to facet",
                n,
                |e| (vec![1.0 - e, 0.1, 0.2], vec![1.0 - e, -0.4, 0.5]),
                (vec![1.0, 0.1, 0.2], vec![1.0, -0.4, 0.5]),
            ),
            seq(
                "facet to edge",
                n,
                |e| (vec![1.0, 1.0 - e, 0.3], vec![1.0, 1.0 - e, -0.6]),
                (vec![1.0, 1.0, 0.3], vec![1.0, 1.0, -0.6]),
            ),
        ],
    ));

    let mut pv = BTreeMap::new();
    pv.insert("0".to_string(), 2.0);
    let jump = StepFunction::from_spec(&StepFunctionSpec {
        breakpoints: vec![],
        values: vec![1.0],
        point_values: pv,
    })?;
    let omega = build_omega_f(&jump, 256)?;
    let vert = |t: f64, z: f64| vec![t.cos(), t.sin(), z];
    out.push((
        "cylinder body with a jump at angle 0".to_string(),
        omega,
        vec![
            seq(
                "vertical faces converging to the tall face",
                n,
                |e| (vert(0.3 * e, 0.0), vert(0.3 * e, 0.5)),
                (vert(0.0, 0.0), vert(0.0, 0.5)),
            ),
            seq(
                "vertical faces from the other side",
                n,
                |e| (vert(-0.3 * e, -0.2), vert(-0.3 * e, 0.9)),
                (vert(0.0, -0.2), vert(0.0, 0.9)),
            ),
            seq(
                "tall face itself",
                n,
                |e| (vert(0.0, 1.5 - e), vert(0.0, -1.0)),
                (vert(0.0, 1.5), vert(0.0, -1.0)),
            ),
        ],
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_point(z: f64) -> (ConvexBody, ClosurePoint) {
        let sq = ConvexBody::square(1.0).unwrap();
        let x = ClosurePoint::locate_chart(&sq, &DVector::from_vec(vec![1.0, z])).unwrap();
        (sq, x)
    }

    #[test]
    fn square_edge_face_ratio_is_four() {
        let (sq, x) = edge_point(0.0);
        let r = 0.5 * 3f64.ln();
        let rep = check_face_in_scaled_ball(&sq, &x, r, 500).unwrap();
        assert!((rep.ratio - 4.0).abs() < 1e-12);
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn ball_on_square_edge() {
        let (sq, x) = edge_point(0.0);
        let r = 0.5 * 3f64.ln();
        for p in closure_ball_sample(&sq, &x, r, 200).unwrap() {
            assert!((p.chart()[0] - 1.0).abs() < 1e-15);
            assert!(p.chart()[1].abs() <= 0.5 + 1e-12);
        }
    }

    #[test]
    fn stated_ratio_values() {
        let r = 0.5 * 2f64.ln();
        let big_r = 0.5 * 4f64.ln();
        assert!((BallRatio::Stated.value(r, big_r) - 3.0).abs() < 1e-12);
        let r = 0.5 * 3f64.ln();
        let big_r = 0.5 * 9f64.ln();
        assert!((BallRatio::Stated.value(r, big_r) - 4.0).abs() < 1e-12);
        assert!((BallRatio::Tight.value(r, big_r) - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn tight_ratio_contains_stated_ratio_overshoots() {
        let (sq, x) = edge_point(0.0);
        let r = 0.5 * 3f64.ln();
        let big_r = 0.5 * 9f64.ln();
        let tight = check_scaled_ball_in_ball_with_ratio(&sq, &x, r, big_r, 400, BallRatio::Tight).unwrap();
        assert!(tight.pass, "{tight:?}");
        let stated = check_scaled_ball_in_ball(&sq, &x, r, big_r, 400).unwrap();
        assert!(!stated.pass);
        assert!(matches!(
            check_scaled_ball_in_ball(&sq, &x, 1.0, 1.0, 10),
            Err(Error::BadRadii { .. })
        ));
    }

    #[test]
    fn extremal_anchor_rejected() {
        let sq = ConvexBody::square(1.0).unwrap();
        let x = ClosurePoint::locate_chart(&sq, &DVector::from_vec(vec![1.0, 1.0])).unwrap();
        assert!(matches!(
            check_face_in_scaled_ball(&sq, &x, 0.3, 10),
            Err(Error::ExtremalAnchor)
        ));
        assert_eq!(closure_ball_sample(&sq, &x, 2.0, 10).unwrap().len(), 1);
    }

    #[test]
    fn homothety_examples() {
        let a = DVector::from_vec(vec![0.0, 0.0]);
        let p = DVector::from_vec(vec![1.0, 0.0]);
        assert_eq!(homothety(&a, 3.0, &p), DVector::from_vec(vec![3.0, 0.0]));
        assert_eq!(homothety(&a, 1.0, &p), p);
        assert_eq!(homothety(&p, 7.0, &p), p);
    }

    #[test]
    fn tight_rule_passes_the_random_suite() {
        let rep = fact_suite(140, 3, BallRatio::Tight, 32).unwrap();
        assert!(rep.pass(), "{:?}", rep.failures.first());
        let stated = fact_suite(140, 3, BallRatio::Stated, 32).unwrap();
        assert_eq!(stated.face_violations, 0);
    }
}
