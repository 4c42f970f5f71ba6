//! The cylinder bodies Ω_f: interiors of the convex hull of the two curves
//! `(cos θ, sin θ, ±f(θ))` for a periodic upper semi-continuous step
//! function `f >= 1`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::body::{BodyKind, ConvexBody, HPolytope};
use crate::error::{Error, Result};
use crate::faces::ExtendedDistance;
use crate::projective::AffineChart;
use crate::serde_float;

/// Angles closer than this are the same breakpoint.
const ANGLE_TOL: f64 = 1e-12;

/// Distance from the unit cylinder below which a point counts as on it.
pub const CYLINDER_TOL: f64 = 1e-9;

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// JSON form of a step function.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StepFunctionSpec {
    #[serde(default)]
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
    #[serde(default)]
    pub point_values: BTreeMap<String, f64>,
}

/// A 2π-periodic upper semi-continuous step function with values >= 1.
///
/// `values[j]` holds on the open interval from `breakpoints[j]` to the next
/// breakpoint (cyclically); `point_values[j]` is the value at
/// `breakpoints[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    point_values: Vec<f64>,
}

impl StepFunction {
    pub fn constant(c: f64) -> Result<Self> {
        Self::from_spec(&StepFunctionSpec {
            breakpoints: vec![],
            values: vec![c],
            point_values: BTreeMap::new(),
        })
    }

    pub fn from_spec(spec: &StepFunctionSpec) -> Result<Self> {
        let bad = |m: String| Err(Error::BadSpec(m));
        if spec.values.iter().any(|v| !v.is_finite() || *v < 1.0) {
            return bad("values must be finite and >= 1".into());
        }
        if spec.breakpoints.is_empty() {
            if spec.values.len() != 1 {
                return bad("a function without breakpoints takes exactly one value".into());
            }
        } else if spec.values.len() != spec.breakpoints.len() {
            return bad(format!(
                "{} breakpoints need {} interval values, got {}",
                spec.breakpoints.len(),
                spec.breakpoints.len(),
                spec.values.len()
            ));
        }
        for w in spec.breakpoints.windows(2) {
            if !(w[0] < w[1]) {
                return bad("breakpoints must be strictly increasing".into());
            }
        }
        if spec
            .breakpoints
            .iter()
            .any(|t| !t.is_finite() || *t < 0.0 || *t >= TAU)
        {
            return bad("breakpoints must lie in [0, 2π)".into());
        }
        let mut breakpoints = spec.breakpoints.clone();
        let mut values = spec.values.clone();
        let mut overrides = Vec::new();
        for (key, &v) in &spec.point_values {
            let theta: f64 = key
                .trim()
                .parse()
                .map_err(|_| Error::BadSpec(format!("point value key {key:?} is not an angle")))?;
            if !theta.is_finite() || !v.is_finite() {
                return bad("point values must be finite".into());
            }
            overrides.push((wrap_angle(theta), v));
        }
        // overrides away from breakpoints become breakpoints with equal sides
        for &(theta, _) in &overrides {
            if breakpoints.iter().any(|&b| angle_gap(b, theta) <= ANGLE_TOL) {
                continue;
            }
            let inner = Self::lookup(&breakpoints, &values, theta);
            let pos = breakpoints.partition_point(|&b| b < theta);
            breakpoints.insert(pos, theta);
            if breakpoints.len() == 1 {
                values = vec![inner];
            } else {
                values.insert(pos, inner);
            }
        }
        let m = breakpoints.len();
        let mut point_values: Vec<f64> = (0..m)
            .map(|j| values[j].max(values[(j + m - 1) % m]))
            .collect();
        for &(theta, v) in &overrides {
            let j = breakpoints
                .iter()
                .position(|&b| angle_gap(b, theta) <= ANGLE_TOL)
                .expect("inserted above");
            if v < point_values[j] {
                return bad(format!(
                    "value {v} at angle {theta} is below a one-sided limit {} (not upper semi-continuous)",
                    point_values[j]
                ));
            }
            point_values[j] = v;
        }
        Ok(StepFunction {
            breakpoints,
            values,
            point_values,
        })
    }

    fn lookup(breakpoints: &[f64], values: &[f64], theta: f64) -> f64 {
        if breakpoints.is_empty() {
            return values[0];
        }
        let pos = breakpoints.partition_point(|&b| b <= theta);
        let j = if pos == 0 { breakpoints.len() - 1 } else { pos - 1 };
        values[j]
    }

    pub fn to_spec(&self) -> StepFunctionSpec {
        let m = self.breakpoints.len();
        let mut point_values = BTreeMap::new();
        for j in 0..m {
            let default = self.values[j].max(self.values[(j + m - 1) % m]);
            if self.point_values[j] != default {
                point_values.insert(format!("{}", self.breakpoints[j]), self.point_values[j]);
            }
        }
        StepFunctionSpec {
            breakpoints: self.breakpoints.clone(),
            values: self.values.clone(),
            point_values,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn point_values(&self) -> &[f64] {
        &self.point_values
    }

    fn breakpoint_index(&self, theta: f64) -> Option<usize> {
        self.breakpoints
            .iter()
            .position(|&b| angle_gap(b, theta) <= ANGLE_TOL)
    }

    /// `f(θ)`.
    pub fn eval(&self, theta: f64) -> f64 {
        let t = wrap_angle(theta);
        match self.breakpoint_index(t) {
            Some(j) => self.point_values[j],
            None => Self::lookup(&self.breakpoints, &self.values, t),
        }
    }

    /// Limits of `f` from the left and from the right at `θ`.
    pub fn one_sided(&self, theta: f64) -> (f64, f64) {
        let t = wrap_angle(theta);
        match self.breakpoint_index(t) {
            Some(j) => {
                let m = self.breakpoints.len();
                (self.values[(j + m - 1) % m], self.values[j])
            }
            None => {
                let v = Self::lookup(&self.breakpoints, &self.values, t);
                (v, v)
            }
        }
    }

    pub fn is_continuous_at(&self, theta: f64) -> bool {
        let (l, r) = self.one_sided(theta);
        let p = self.eval(theta);
        l == p && r == p
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .chain(self.point_values.iter())
            .copied()
            .fold(1.0, f64::max)
    }

    /// Angles that must be grid angles: breakpoints and the midpoints of
    /// the constancy intervals.
    pub fn special_angles(&self) -> Vec<f64> {
        let m = self.breakpoints.len();
        let mut out = Vec::with_capacity(2 * m);
        for j in 0..m {
            let a = self.breakpoints[j];
            let b = if j + 1 < m {
                self.breakpoints[j + 1]
            } else {
                self.breakpoints[0] + TAU
            };
            out.push(a);
            out.push(wrap_angle(0.5 * (a + b)));
        }
        out
    }
}

/// Angles at which `f` is ε-almost continuous: one representative per
/// constancy interval (its midpoint) plus every qualifying breakpoint.
pub fn almost_continuity_points(f: &StepFunction, eps: f64) -> Vec<f64> {
    if f.breakpoints().is_empty() {
        return vec![0.0];
    }
    let mut out = Vec::new();
    let specials = f.special_angles();
    for (j, &b) in f.breakpoints().iter().enumerate() {
        let (l, r) = f.one_sided(b);
        let p = f.point_values()[j];
        if p - eps <= l.min(r) && l.max(r) <= p {
            out.push(b);
        }
        out.push(specials[2 * j + 1]);
    }
    out.sort_by(f64::total_cmp);
    out
}

/// The polytope approximation of Ω_f built from a finite angle grid, with
/// the analytic face data of the continuum body attached.
#[derive(Clone, Debug)]
pub struct OmegaFShape {
    function: StepFunction,
    grid_n: usize,
    angles: Vec<f64>,
    hull: HPolytope,
}

/// Where a chart point sits on the cylinder part of the boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CylinderLocation {
    /// Inside the open vertical face at angle `theta`.
    Vertical { theta: f64, z: f64, half_height: f64 },
    /// An endpoint `(cos θ, sin θ, ±f(θ))`, an extremal point.
    Extremal { theta: f64, z: f64 },
}

impl OmegaFShape {
    pub fn build(function: StepFunction, grid_n: usize) -> Result<Self> {
        if grid_n < 64 {
            return Err(Error::BadSpec(format!("grid_n must be at least 64, got {grid_n}")));
        }
        let step = TAU / grid_n as f64;
        let specials = function.special_angles();
        let mut angles: Vec<f64> = (0..grid_n)
            .map(|k| step * k as f64)
            .filter(|&t| specials.iter().all(|&s| angle_gap(s, t) > 0.25 * step))
            .collect();
        angles.extend(specials.iter().copied());
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| angle_gap(*a, *b) <= ANGLE_TOL);
        let mut generators = Vec::with_capacity(2 * angles.len());
        for &t in &angles {
            let h = function.eval(t);
            generators.push(DVector::from_vec(vec![t.cos(), t.sin(), h]));
            generators.push(DVector::from_vec(vec![t.cos(), t.sin(), -h]));
        }
        let hull = HPolytope::from_points(&generators)?;
        if hull.vertices().len() != generators.len() {
            return Err(Error::BadSpec(format!(
                "hull has {} vertices for {} generators",
                hull.vertices().len(),
                generators.len()
            )));
        }
        Ok(OmegaFShape {
            function,
            grid_n,
            angles,
            hull,
        })
    }

    pub fn function(&self) -> &StepFunction {
        &self.function
    }

    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    /// Grid angles, sorted in `[0, 2π)`.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn hull(&self) -> &HPolytope {
        &self.hull
    }

    pub fn is_grid_angle(&self, theta: f64) -> bool {
        let t = wrap_angle(theta);
        let pos = self.angles.partition_point(|&a| a < t);
        [pos.wrapping_sub(1), pos, 0, self.angles.len() - 1]
            .iter()
            .filter_map(|&i| self.angles.get(i))
            .any(|&a| angle_gap(a, t) <= ANGLE_TOL)
    }

    /// Exact location of a chart point on the cylinder `x² + y² = 1`, if
    /// it lies on the closed vertical segment of its angle.
    pub fn cylinder_location(&self, u: &DVector<f64>) -> Option<CylinderLocation> {
        if u.len() != 3 {
            return None;
        }
        let rho = u[0].hypot(u[1]);
        if (rho - 1.0).abs() > CYLINDER_TOL {
            return None;
        }
        let theta = wrap_angle(u[1].atan2(u[0]));
        let h = self.function.eval(theta);
        let z = u[2];
        if (z.abs() - h).abs() <= CYLINDER_TOL {
            Some(CylinderLocation::Extremal { theta, z })
        } else if z.abs() < h {
            Some(CylinderLocation::Vertical {
                theta,
                z,
                half_height: h,
            })
        } else {
            None
        }
    }

    /// Wraps the shape as a body in the standard chart of P(R^4).
    pub fn into_body(self) -> Result<ConvexBody> {
        ConvexBody::new(
            BodyKind::OmegaF(Arc::new(self)),
            AffineChart::standard(3),
            None,
        )
    }
}

/// Builds Ω_f from a step function on a grid of `grid_n` angles.
pub fn build_omega_f(function: &StepFunction, grid_n: usize) -> Result<ConvexBody> {
    OmegaFShape::build(function.clone(), grid_n)?.into_body()
}

/// 1-D Hilbert distance inside the segment `(-h, h)`.
pub fn segment_distance(h: f64, z1: f64, z2: f64) -> f64 {
    let (lo, hi) = if z1 <= z2 { (z1, z2) } else { (z2, z1) };
    0.5 * (((h + hi) / (h + lo)).ln() + ((h - lo) / (h - hi)).ln())
}

/// Upward and downward extent of the closed ball of radius `r` around `z`
/// in the segment `(-h, h)`.
pub fn segment_ball(h: f64, z: f64, r: f64) -> (f64, f64) {
    let grow = -(-2.0 * r).exp_m1();
    let shrink = (-2.0 * r).exp();
    let reach = |back: f64, fwd: f64| back * fwd * grow / (fwd * shrink + back);
    (reach(h + z, h - z), reach(h - z, h + z))
}

/// Distance between `(cos θ, sin θ, z1)` and `(cos θ, sin θ, z2)` inside
/// their common vertical face.
pub fn vertical_face_distance(
    function: &StepFunction,
    theta: f64,
    z1: f64,
    z2: f64,
) -> Result<ExtendedDistance> {
    let h = function.eval(theta);
    if !(z1.abs() < h && z2.abs() < h) {
        return Err(Error::OutsideFace);
    }
    Ok(ExtendedDistance::Finite(segment_distance(h, z1, z2)))
}

/// Parameters of a Grain-of-sand probe at `(cos θ, sin θ, z)`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GrainConfig {
    pub theta: f64,
    pub z: f64,
    pub r: f64,
    pub big_r: f64,
    /// Half-width of the neighbourhood `U` in angle and in height.
    pub halfwidth: f64,
    /// Chart size of the boundary perturbations.
    pub delta: f64,
    /// Number of sample points in the small ball.
    pub samples: usize,
    /// Number of grid heights used to search `U` for a covering centre.
    pub u_grid: usize,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum GrainStatus {
    Pass,
    Fail,
    /// The anchor is extremal: the small ball is the anchor itself.
    TrivialExtremal,
    /// The small ball is not contained in every limit of nearby large
    /// balls, so the lemma does not apply; coverage is informational.
    HypothesisNotMet,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GrainWitness {
    pub theta: f64,
    pub z: f64,
    #[serde(with = "serde_float")]
    pub best_distance: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GrainReport {
    pub status: GrainStatus,
    pub hypothesis_met: bool,
    pub checked: usize,
    pub covered: usize,
    /// Smallest `R - d(y, z')` over checked points, at the best centre `y`.
    #[serde(with = "serde_float")]
    pub worst_margin: f64,
    pub witnesses: Vec<GrainWitness>,
}

impl GrainReport {
    /// True unless the lemma's conclusion failed where it applies.
    pub fn consistent(&self) -> bool {
        self.status != GrainStatus::Fail
    }
}

/// Samples the small ball around the anchor, perturbs each sample along the
/// cylinder by `δ`, and searches a height grid of `U` for a centre whose
/// `R`-ball reaches the perturbed point.
pub fn grain_of_sand_probe(function: &StepFunction, cfg: &GrainConfig) -> Result<GrainReport> {
    if !(cfg.r > 0.0 && cfg.r < cfg.big_r) {
        return Err(Error::BadRadii {
            r: cfg.r,
            big_r: cfg.big_r,
        });
    }
    if !(cfg.halfwidth > 0.0 && cfg.delta > 0.0 && cfg.samples >= 2 && cfg.u_grid >= 2) {
        return Err(Error::InvalidArgument(
            "halfwidth and delta must be positive, samples and u_grid at least 2".into(),
        ));
    }
    let theta = wrap_angle(cfg.theta);
    let h = function.eval(theta);
    if (cfg.z.abs() - h).abs() <= CYLINDER_TOL {
        return Ok(GrainReport {
            status: GrainStatus::TrivialExtremal,
            hypothesis_met: true,
            checked: 1,
            covered: 1,
            worst_margin: cfg.big_r,
            witnesses: vec![],
        });
    }
    if cfg.z.abs() > h {
        return Err(Error::OutsideFace);
    }

    let (up, down) = segment_ball(h, cfg.z, cfg.r);
    let (left, right) = function.one_sided(theta);
    let hypothesis_met = [left, right].iter().all(|&g| {
        if cfg.z.abs() >= g {
            return false;
        }
        let (gu, gd) = segment_ball(g, cfg.z, cfg.big_r);
        up <= gu && down <= gd
    });

    let dtheta = 2.0 * (0.5 * cfg.delta).asin();
    let mut checked = 0;
    let mut covered = 0;
    let mut worst = f64::INFINITY;
    let mut witnesses = Vec::new();
    for i in 0..cfg.samples {
        let s = i as f64 / (cfg.samples - 1) as f64;
        let z = cfg.z - down + s * (up + down);
        for st in [-1.0, 0.0, 1.0] {
            for sz in [-1.0, 0.0, 1.0] {
                let t2 = theta + st * dtheta;
                let z2 = z + sz * cfg.delta;
                checked += 1;
                let best = best_cover(function, cfg, theta, t2, z2);
                let margin = cfg.big_r - best;
                worst = worst.min(margin);
                if margin >= -1e-12 {
                    covered += 1;
                } else if witnesses.len() < 8 {
                    witnesses.push(GrainWitness {
                        theta: t2,
                        z: z2,
                        best_distance: best,
                    });
                }
            }
        }
    }
    let status = if !hypothesis_met {
        GrainStatus::HypothesisNotMet
    } else if covered == checked {
        GrainStatus::Pass
    } else {
        GrainStatus::Fail
    };
    Ok(GrainReport {
        status,
        hypothesis_met,
        checked,
        covered,
        worst_margin: worst,
        witnesses,
    })
}

/// Smallest distance from `(t2, z2)` to a centre of `U` on the same face.
fn best_cover(function: &StepFunction, cfg: &GrainConfig, theta: f64, t2: f64, z2: f64) -> f64 {
    if angle_gap(t2, theta) > cfg.halfwidth {
        return f64::INFINITY;
    }
    let h2 = function.eval(t2);
    if z2.abs() >= h2 {
        return f64::INFINITY;
    }
    let lo = (cfg.z - cfg.halfwidth).max(-h2);
    let hi = (cfg.z + cfg.halfwidth).min(h2);
    let mut best = f64::INFINITY;
    for k in 0..cfg.u_grid {
        let y = lo + (hi - lo) * k as f64 / (cfg.u_grid - 1) as f64;
        if y.abs() >= h2 {
            continue;
        }
        best = best.min(segment_distance(h2, y, z2));
    }
    best
}
