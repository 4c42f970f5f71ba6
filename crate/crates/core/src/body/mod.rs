//! Properly convex bodies described in an affine chart.

mod ellipsoid;
pub mod hull;
pub mod json;
mod polytope;

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

pub use ellipsoid::Ellipsoid;
pub use polytope::HPolytope;

use crate::error::{Error, Result};
use crate::omega_f::OmegaFShape;
use crate::projective::{AffineChart, ProjPoint, ProjTransform};
use crate::sampling;
use crate::tol;

/// How boundary points along a ray are located.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RayMethod {
    /// Closed-form intersection with the facets or the quadric.
    #[default]
    Exact,
    /// Bisection on the membership oracle.
    Bisection,
}

/// A polytope given as the hull of a point list.
#[derive(Clone, Debug)]
pub struct HullBody {
    points: Vec<DVector<f64>>,
    polytope: HPolytope,
}

impl HullBody {
    pub fn new(points: Vec<DVector<f64>>) -> Result<Self> {
        let polytope = HPolytope::from_points(&points)?;
        Ok(HullBody { points, polytope })
    }

    pub fn points(&self) -> &[DVector<f64>] {
        &self.points
    }

    pub fn polytope(&self) -> &HPolytope {
        &self.polytope
    }
}

#[derive(Clone, Debug)]
pub enum BodyKind {
    HPolytope(HPolytope),
    Ellipsoid(Ellipsoid),
    Hull(HullBody),
    OmegaF(Arc<OmegaFShape>),
}

impl BodyKind {
    pub fn name(&self) -> &'static str {
        match self {
            BodyKind::HPolytope(_) => "hpolytope",
            BodyKind::Ellipsoid(_) => "ellipsoid",
            BodyKind::Hull(_) => "hull",
            BodyKind::OmegaF(_) => "omegaf",
        }
    }

    fn dim(&self) -> usize {
        match self {
            BodyKind::HPolytope(p) => p.dim(),
            BodyKind::Ellipsoid(e) => e.dim(),
            BodyKind::Hull(h) => h.polytope.dim(),
            BodyKind::OmegaF(s) => s.hull().dim(),
        }
    }

    fn center(&self) -> DVector<f64> {
        match self {
            BodyKind::Ellipsoid(e) => e.center().clone(),
            _ => self.polytope().expect("polyhedral kind").centroid(),
        }
    }

    fn polytope(&self) -> Option<&HPolytope> {
        match self {
            BodyKind::HPolytope(p) => Some(p),
            BodyKind::Ellipsoid(_) => None,
            BodyKind::Hull(h) => Some(&h.polytope),
            BodyKind::OmegaF(s) => Some(s.hull()),
        }
    }
}

/// A properly convex open set: a chart image plus a distinguished interior
/// base point. Immutable after construction.
#[derive(Clone, Debug)]
pub struct ConvexBody {
    kind: BodyKind,
    chart: AffineChart,
    base: ProjPoint,
    base_chart: DVector<f64>,
}

impl ConvexBody {
    /// Attaches a chart and a base point (default: the centre of the kind).
    pub fn new(kind: BodyKind, chart: AffineChart, base: Option<ProjPoint>) -> Result<Self> {
        if kind.dim() != chart.dim() {
            return Err(Error::DimensionMismatch {
                expected: chart.dim(),
                got: kind.dim(),
            });
        }
        let base_chart = match &base {
            Some(p) => chart.to_chart(p)?,
            None => kind.center(),
        };
        let base = chart.lift_point(&base_chart);
        let body = ConvexBody {
            kind,
            chart,
            base,
            base_chart,
        };
        let margin = body.slack(&body.base_chart);
        if !(margin >= tol::INTERIOR_MARGIN) {
            return Err(Error::NotInterior { margin });
        }
        Ok(body)
    }

    pub fn hpolytope(a: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        let d = a.ncols();
        Self::new(
            BodyKind::HPolytope(HPolytope::from_halfspaces(a, b)?),
            AffineChart::standard(d),
            None,
        )
    }

    pub fn ellipsoid(center: DVector<f64>, shape: DMatrix<f64>) -> Result<Self> {
        let d = center.len();
        Self::new(
            BodyKind::Ellipsoid(Ellipsoid::new(center, shape)?),
            AffineChart::standard(d),
            None,
        )
    }

    pub fn hull(points: Vec<DVector<f64>>) -> Result<Self> {
        let d = points.first().map(|p| p.len()).unwrap_or(0);
        Self::new(
            BodyKind::Hull(HullBody::new(points)?),
            AffineChart::standard(d),
            None,
        )
    }

    /// Unit ball of `R^d` in the standard chart (the Klein model).
    pub fn unit_ball(d: usize) -> Self {
        Self::ellipsoid(DVector::zeros(d), DMatrix::identity(d, d)).expect("unit ball is valid")
    }

    /// The square `|x|, |y| <= half` in the standard chart.
    pub fn square(half: f64) -> Result<Self> {
        Self::hpolytope(
            DMatrix::from_row_slice(4, 2, &[1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, -1.0]),
            DVector::from_element(4, half),
        )
    }

    /// Open interval `(lo, hi)` of the projective line.
    pub fn segment(lo: f64, hi: f64) -> Result<Self> {
        Self::hpolytope(
            DMatrix::from_row_slice(2, 1, &[1.0, -1.0]),
            DVector::from_vec(vec![hi, -lo]),
        )
    }

    /// The cone `{x : h_i · x > 0}` of homogeneous covectors `h_i`, seen in `chart`.
    pub fn from_homogeneous_halfspaces(
        covectors: &[DVector<f64>],
        chart: AffineChart,
        base: Option<ProjPoint>,
    ) -> Result<Self> {
        let d = chart.dim();
        let m = covectors.len();
        let mut a = DMatrix::zeros(m, d);
        let mut b = DVector::zeros(m);
        for (i, h) in covectors.iter().enumerate() {
            if h.len() != d + 1 {
                return Err(Error::DimensionMismatch {
                    expected: d + 1,
                    got: h.len(),
                });
            }
            // h · x = eta · [u; 1] with eta = h^T F^{-1}
            let eta = chart.frame_inv().tr_mul(h);
            for j in 0..d {
                a[(i, j)] = -eta[j];
            }
            b[i] = eta[d];
        }
        Self::new(BodyKind::HPolytope(HPolytope::from_halfspaces(a, b)?), chart, base)
    }

    /// The open standard simplex `{x_i > 0}` of `P(R^{d+1})` in the chart
    /// `sum x_i = 1`, with base point the barycentre.
    pub fn simplex(d: usize) -> Self {
        let covectors: Vec<DVector<f64>> = (0..=d)
            .map(|i| {
                let mut h = DVector::zeros(d + 1);
                h[i] = 1.0;
                h
            })
            .collect();
        let chart = AffineChart::new(DVector::from_element(d + 1, 1.0)).expect("valid chart");
        let base = ProjPoint::new(DVector::from_element(d + 1, 1.0)).expect("nonzero");
        Self::from_homogeneous_halfspaces(&covectors, chart, Some(base)).expect("simplex is valid")
    }

    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    pub fn chart(&self) -> &AffineChart {
        &self.chart
    }

    pub fn base(&self) -> &ProjPoint {
        &self.base
    }

    pub fn base_chart(&self) -> &DVector<f64> {
        &self.base_chart
    }

    /// Chart dimension d.
    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// The polytope behind polyhedral kinds.
    pub fn polytope(&self) -> Option<&HPolytope> {
        self.kind.polytope()
    }

    pub fn omega_f(&self) -> Option<&Arc<OmegaFShape>> {
        match &self.kind {
            BodyKind::OmegaF(s) => Some(s),
            _ => None,
        }
    }

    /// Signed distance-like margin: positive exactly on the interior.
    pub fn slack(&self, u: &DVector<f64>) -> f64 {
        match &self.kind {
            BodyKind::Ellipsoid(e) => e.slack(u),
            k => k.polytope().expect("polyhedral kind").slack(u),
        }
    }

    /// Margin of a projective point; `-inf` when it leaves the chart.
    pub fn point_slack(&self, p: &ProjPoint) -> f64 {
        match self.chart.to_chart(p) {
            Ok(u) => self.slack(&u),
            Err(_) => f64::NEG_INFINITY,
        }
    }

    pub fn is_interior(&self, p: &ProjPoint) -> bool {
        self.point_slack(p) >= tol::INTERIOR_MARGIN
    }

    /// Chart coordinates of an interior point, or `NotInterior`.
    pub fn interior_chart(&self, p: &ProjPoint) -> Result<DVector<f64>> {
        let u = self
            .chart
            .to_chart(p)
            .map_err(|_| Error::NotInterior {
                margin: f64::NEG_INFINITY,
            })?;
        let margin = self.slack(&u);
        if margin >= tol::INTERIOR_MARGIN {
            Ok(u)
        } else {
            Err(Error::NotInterior { margin })
        }
    }

    /// Largest `t >= 0` with `u + t v` in the closure, for interior `u`.
    pub fn ray_exit(&self, u: &DVector<f64>, v: &DVector<f64>, method: RayMethod) -> f64 {
        match (method, &self.kind) {
            (RayMethod::Exact, BodyKind::Ellipsoid(e)) => e.ray_exit(u, v),
            (RayMethod::Exact, k) => k.polytope().expect("polyhedral kind").ray_exit(u, v),
            (RayMethod::Bisection, _) => self.bisect_exit(u, v),
        }
    }

    fn bisect_exit(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        let speed = v.norm();
        let mut lo = 0.0;
        let mut hi = 2.0 * (self.bounding_radius() + u.norm()) / speed;
        while self.slack(&(u + v * hi)) > 0.0 {
            hi *= 2.0;
        }
        for _ in 0..tol::BISECTION_MAX_ITER {
            if (hi - lo) * speed <= tol::BOUNDARY {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.slack(&(u + v * mid)) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Largest distance from the chart origin to a point of the closure.
    pub fn bounding_radius(&self) -> f64 {
        match &self.kind {
            BodyKind::Ellipsoid(e) => e.bounding_radius(),
            k => k.polytope().expect("polyhedral kind").bounding_radius(),
        }
    }

    /// Euclidean chart diameter.
    pub fn diameter(&self) -> f64 {
        match &self.kind {
            BodyKind::Ellipsoid(e) => e.diameter(),
            k => k.polytope().expect("polyhedral kind").diameter(),
        }
    }

    /// `n` boundary points seen from the base point along well-spread rays.
    pub fn boundary_samples(&self, n: usize) -> Vec<DVector<f64>> {
        sampling::sphere_directions(self.dim(), n)
            .into_iter()
            .map(|v| {
                let t = self.ray_exit(&self.base_chart, &v, RayMethod::Exact);
                &self.base_chart + v * t
            })
            .collect()
    }

    /// Affine range of `u -> l(lift(u))` for a homogeneous covector `l`.
    fn covector_range(&self, l: &DVector<f64>) -> (f64, f64) {
        let d = self.dim();
        let eta = self.chart.frame_inv().tr_mul(l);
        let w = eta.rows(0, d).into_owned();
        let w0 = eta[d];
        match &self.kind {
            BodyKind::Ellipsoid(e) => e.affine_range(&w, w0),
            k => {
                let verts = k.polytope().expect("polyhedral kind").vertices();
                verts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    let val = w.dot(v) + w0;
                    (lo.min(val), hi.max(val))
                })
            }
        }
    }

    /// Checks that `l` has constant sign on the closure; returns that sign.
    pub fn covector_sign(&self, l: &DVector<f64>) -> Result<f64> {
        let (lo, hi) = self.covector_range(l);
        let scale = l.norm() * (1.0 + self.bounding_radius());
        if lo > 1e-12 * scale {
            Ok(1.0)
        } else if hi < -1e-12 * scale {
            Ok(-1.0)
        } else {
            Err(Error::ChartViolation(if lo.abs() < hi.abs() { lo } else { hi }))
        }
    }

    /// Chart `l G^{-1}`, in which `g` maps this body onto an affine image.
    pub fn transported_chart(&self, g: &ProjTransform) -> Result<AffineChart> {
        let inv = g
            .matrix()
            .clone()
            .try_inverse()
            .ok_or(Error::SingularTransform(0.0))?;
        AffineChart::new(inv.tr_mul(self.chart.covector()))
    }

    /// The image `g(self)`, described in `chart` (default: the stored chart).
    pub fn transform(&self, g: &ProjTransform, chart: Option<AffineChart>) -> Result<ConvexBody> {
        let n = self.dim() + 1;
        if g.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g.dim(),
            });
        }
        let new_chart = chart.unwrap_or_else(|| self.chart.clone());
        if new_chart.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: new_chart.dim(),
            });
        }
        let pulled = g.matrix().tr_mul(new_chart.covector());
        let sign = self.covector_sign(&pulled)?;
        // chart-to-chart map in frame coordinates
        let h = new_chart.frame() * g.matrix() * self.chart.frame_inv() * sign;
        let h_inv = h
            .clone()
            .try_inverse()
            .ok_or(Error::SingularTransform(0.0))?;
        let d = self.dim();
        let map = |u: &DVector<f64>| -> DVector<f64> {
            let mut y = DVector::zeros(d + 1);
            y.rows_mut(0, d).copy_from(u);
            y[d] = 1.0;
            let z = &h * y;
            z.rows(0, d) / z[d]
        };
        let map_poly = |p: &HPolytope| -> Result<HPolytope> {
            let m = p.num_facets();
            let mut a = DMatrix::zeros(m, d);
            let mut b = DVector::zeros(m);
            for i in 0..m {
                let mut eta = DVector::zeros(d + 1);
                for j in 0..d {
                    eta[j] = -p.normals()[(i, j)];
                }
                eta[d] = p.offsets()[i];
                let eta2 = h_inv.tr_mul(&eta);
                for j in 0..d {
                    a[(i, j)] = -eta2[j];
                }
                b[i] = eta2[d];
            }
            let verts = p.vertices().iter().map(&map).collect();
            HPolytope::from_parts(a, b, verts)
        };
        let kind = match &self.kind {
            BodyKind::HPolytope(p) => BodyKind::HPolytope(map_poly(p)?),
            BodyKind::Hull(hb) => BodyKind::Hull(HullBody {
                points: hb.points.iter().map(&map).collect(),
                polytope: map_poly(&hb.polytope)?,
            }),
            BodyKind::OmegaF(s) => BodyKind::HPolytope(map_poly(s.hull())?),
            BodyKind::Ellipsoid(e) => {
                let q = h_inv.transpose() * e.quadric() * &h_inv;
                BodyKind::Ellipsoid(Ellipsoid::from_quadric(&q)?)
            }
        };
        let base = g.apply(&self.base)?;
        ConvexBody::new(kind, new_chart, Some(base))
    }

    /// Copy of an Ω_f body with the exact face data dropped, leaving the
    /// plain hull polytope.
    pub fn as_plain_polytope(&self) -> Result<ConvexBody> {
        match &self.kind {
            BodyKind::OmegaF(s) => ConvexBody::new(
                BodyKind::HPolytope(s.hull().clone()),
                self.chart.clone(),
                Some(self.base.clone()),
            ),
            _ => Ok(self.clone()),
        }
    }
}
