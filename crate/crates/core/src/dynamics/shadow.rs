//! Shadows of Hilbert balls cast on the boundary from a light source.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use crate::body::{ConvexBody, RayMethod};
use crate::error::{Error, Result};
use crate::faces::ClosurePoint;
use crate::metric::chart_distance;
use crate::projective::ProjPoint;
use crate::tol;

const GOLDEN_ITERS: usize = 200;
const GOLDEN_WIDTH: f64 = 1e-12;

/// Light source `x` in the closure, ball centre `y` in the interior, radius.
#[derive(Clone, Debug)]
pub struct ShadowQuery {
    light: ClosurePoint,
    center: DVector<f64>,
    radius: f64,
}

impl ShadowQuery {
    pub fn new(body: &ConvexBody, light: ClosurePoint, center: &ProjPoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("shadow radius must be finite and positive, got {radius}")));
        }
        let center = body.interior_chart(center)?;
        Ok(ShadowQuery { light, center, radius })
    }

    /// Query in chart coordinates; `light` is located in the closure.
    pub fn from_chart(body: &ConvexBody, light: &DVector<f64>, center: &DVector<f64>, radius: f64) -> Result<Self> {
        let light = ClosurePoint::locate_chart(body, light)?;
        Self::new(body, light, &body.chart().lift_point(center), radius)
    }

    pub fn light(&self) -> &ClosurePoint {
        &self.light
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShadowResult {
    /// `min_distance < radius`.
    pub contained: bool,
    #[serde(with = "crate::serde_float")]
    pub min_distance: f64,
    /// Minimizer on the segment, in chart coordinates.
    pub argmin: Option<Vec<f64>>,
    /// The segment lies in the boundary, so it misses every ball.
    pub empty_segment: bool,
}

/// Distance from `y` to the point at parameter `s` of the segment from `x`
/// to `xi`; `+inf` off the interior.
fn along(body: &ConvexBody, x: &DVector<f64>, xi: &DVector<f64>, y: &DVector<f64>, s: f64) -> f64 {
    let p = x + (xi - x) * s;
    if body.slack(&p) < tol::INTERIOR_MARGIN {
        return f64::INFINITY;
    }
    chart_distance(body, y, &p, RayMethod::Exact)
}

/// Minimum of `d(y, .)` over the open segment from `x` to `xi` by
/// golden-section search, valid since the function is quasi-convex there.
/// Returns the minimizing parameter and the minimum.
pub fn segment_min_distance(body: &ConvexBody, x: &DVector<f64>, xi: &DVector<f64>, y: &DVector<f64>) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = along(body, x, xi, y, c);
    let mut fd = along(body, x, xi, y, d);
    for _ in 0..GOLDEN_ITERS {
        if b - a <= GOLDEN_WIDTH {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = along(body, x, xi, y, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = along(body, x, xi, y, d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Whether `xi` lies in the shadow of the ball `B(y, R)` lit from `x`, with
/// the minimum of `d(y, .)` along the segment.
pub fn shadow_contains(body: &ConvexBody, q: &ShadowQuery, xi: &DVector<f64>) -> ShadowResult {
    let x = q.light.chart();
    let mid = (x + xi) * 0.5;
    if (xi - x).norm() == 0.0 || body.slack(&mid) < tol::INTERIOR_MARGIN {
        return ShadowResult {
            contained: false,
            min_distance: f64::INFINITY,
            argmin: None,
            empty_segment: true,
        };
    }
    let (s, m) = segment_min_distance(body, x, xi, &q.center);
    ShadowResult {
        contained: m < q.radius,
        min_distance: m,
        argmin: Some((x + (xi - x) * s).iter().copied().collect()),
        empty_segment: false,
    }
}

/// The boundary samples lying in the open shadow.
pub fn shadow_sample(body: &ConvexBody, q: &ShadowQuery, samples: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let flags: Vec<bool> = samples
        .par_iter()
        .map(|xi| shadow_contains(body, q, xi).contained)
        .collect();
    samples
        .iter()
        .zip(flags)
        .filter(|(_, f)| *f)
        .map(|(xi, _)| xi.clone())
        .collect()
}
