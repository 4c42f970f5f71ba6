//! Open faces of the closure and the extended metric on it.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::body::{BodyKind, ConvexBody, HPolytope, RayMethod};
use crate::error::{Error, Result};
use crate::metric::chart_distance;
use crate::omega_f::CylinderLocation;
use crate::projective::{AffineChart, ProjPoint};
use crate::tol;

/// Relative slack within which a point counts as lying on the boundary.
pub const CLOSURE_TOL: f64 = 1e-9;

/// A value of the extended metric: finite inside a common face, infinite
/// across faces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedDistance {
    Finite(f64),
    Infinite,
}

impl ExtendedDistance {
    pub fn value(&self) -> f64 {
        match self {
            ExtendedDistance::Finite(v) => *v,
            ExtendedDistance::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedDistance::Finite(_))
    }
}

impl fmt::Display for ExtendedDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedDistance::Finite(v) => write!(f, "{v}"),
            ExtendedDistance::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtendedDistance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedDistance::Finite(v) => s.serialize_f64(*v),
            ExtendedDistance::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedDistance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = crate::serde_float::deserialize(d)?;
        Ok(if v == f64::INFINITY {
            ExtendedDistance::Infinite
        } else {
            ExtendedDistance::Finite(v)
        })
    }
}

/// Identifies which face a point lies in.
#[derive(Clone, Debug)]
pub enum FaceKey {
    Interior,
    /// Relative interior of the intersection of the listed facets.
    Facets(Vec<usize>),
    /// A single extremal point (chart coordinates).
    Point(DVector<f64>),
    /// The open vertical segment of an Ω_f body at this angle.
    Vertical(f64),
}

impl PartialEq for FaceKey {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FaceKey::Interior, FaceKey::Interior) => true,
            (FaceKey::Facets(a), FaceKey::Facets(b)) => a == b,
            (FaceKey::Point(a), FaceKey::Point(b)) => (a - b).norm() <= CLOSURE_TOL,
            (FaceKey::Vertical(a), FaceKey::Vertical(b)) => {
                let d = (a - b).rem_euclid(std::f64::consts::TAU);
                d.min(std::f64::consts::TAU - d) <= 1e-12
            }
            _ => false,
        }
    }
}

/// The open face of a closure point: its affine span in the chart and the
/// face itself as a properly convex open set of that span.
#[derive(Clone, Debug)]
pub struct FaceDescriptor {
    anchor: ProjPoint,
    anchor_chart: DVector<f64>,
    key: FaceKey,
    origin: DVector<f64>,
    directions: DMatrix<f64>,
    span: Vec<ProjPoint>,
    sub_body: Option<Arc<ConvexBody>>,
    vertices: Vec<DVector<f64>>,
}

impl FaceDescriptor {
    fn point(chart: &AffineChart, u: &DVector<f64>) -> Self {
        FaceDescriptor {
            anchor: chart.lift_point(u),
            anchor_chart: u.clone(),
            key: FaceKey::Point(u.clone()),
            origin: u.clone(),
            directions: DMatrix::zeros(u.len(), 0),
            span: vec![chart.lift_point(u)],
            sub_body: None,
            vertices: vec![u.clone()],
        }
    }

    fn with_span(
        chart: &AffineChart,
        u: &DVector<f64>,
        key: FaceKey,
        origin: DVector<f64>,
        directions: DMatrix<f64>,
        sub_body: ConvexBody,
        vertices: Vec<DVector<f64>>,
    ) -> Self {
        let mut span = vec![chart.lift_point(&origin)];
        for j in 0..directions.ncols() {
            span.push(chart.lift_point(&(&origin + directions.column(j))));
        }
        FaceDescriptor {
            anchor: chart.lift_point(u),
            anchor_chart: u.clone(),
            key,
            origin,
            directions,
            span,
            sub_body: Some(Arc::new(sub_body)),
            vertices,
        }
    }

    pub fn anchor(&self) -> &ProjPoint {
        &self.anchor
    }

    pub fn anchor_chart(&self) -> &DVector<f64> {
        &self.anchor_chart
    }

    /// Dimension of the face; 0 exactly for extremal points.
    pub fn dim(&self) -> usize {
        self.directions.ncols()
    }

    pub fn key(&self) -> &FaceKey {
        &self.key
    }

    pub fn is_interior(&self) -> bool {
        matches!(self.key, FaceKey::Interior)
    }

    /// Homogeneous points spanning the projective subspace of the face.
    pub fn span(&self) -> &[ProjPoint] {
        &self.span
    }

    /// Chart point used as the origin of local face coordinates.
    pub fn origin(&self) -> &DVector<f64> {
        &self.origin
    }

    /// Orthonormal chart directions of the face, one per column.
    pub fn directions(&self) -> &DMatrix<f64> {
        &self.directions
    }

    /// The open face as a body in local coordinates (`None` for points).
    pub fn sub_body(&self) -> Option<&Arc<ConvexBody>> {
        self.sub_body.as_ref()
    }

    /// Chart vertices of the closed face, when it is a polytope.
    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    pub fn same_face(&self, other: &FaceDescriptor) -> bool {
        self.key == other.key
    }

    pub fn to_local(&self, u: &DVector<f64>) -> DVector<f64> {
        self.directions.tr_mul(&(u - &self.origin))
    }

    pub fn to_global(&self, w: &DVector<f64>) -> DVector<f64> {
        &self.origin + &self.directions * w
    }

    /// Chart diameter of the closed face.
    pub fn diameter(&self) -> f64 {
        match (&self.key, &self.sub_body) {
            (FaceKey::Interior, Some(b)) => b.diameter(),
            _ => {
                let mut best: f64 = 0.0;
                for (i, p) in self.vertices.iter().enumerate() {
                    for q in &self.vertices[i + 1..] {
                        best = best.max((p - q).norm());
                    }
                }
                best
            }
        }
    }

    /// Chart distance from `u` (in the face) to the relative boundary.
    pub fn relative_boundary_distance(&self, u: &DVector<f64>) -> f64 {
        match &self.sub_body {
            Some(b) => b.slack(&self.to_local(u)),
            None => 0.0,
        }
    }

    /// Whether `u` lies in the closed face within `tol` chart units.
    pub fn closure_contains(&self, u: &DVector<f64>, tol: f64) -> bool {
        let w = self.to_local(u);
        let off = (u - self.to_global(&w)).norm();
        if off > tol {
            return false;
        }
        match &self.sub_body {
            Some(b) => b.slack(&w) >= -tol,
            None => (u - &self.origin).norm() <= tol,
        }
    }

    /// Exit parameter of the ray `u + t v` from the closed face, for `u`
    /// in the open face and `v` a chart direction parallel to it.
    pub fn ray_exit(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        match &self.sub_body {
            Some(b) => b.ray_exit(&self.to_local(u), &self.directions.tr_mul(v), RayMethod::Exact),
            None => 0.0,
        }
    }
}

/// A point of the closure with its location.
#[derive(Clone, Debug)]
pub struct ClosurePoint {
    point: ProjPoint,
    chart: DVector<f64>,
    location: Location,
}

#[derive(Clone, Debug)]
pub enum Location {
    Interior,
    Boundary(Arc<FaceDescriptor>),
}

impl ClosurePoint {
    pub fn locate(body: &ConvexBody, p: &ProjPoint) -> Result<Self> {
        let u = body
            .chart()
            .to_chart(p)
            .map_err(|_| Error::OutsideClosure(f64::NEG_INFINITY))?;
        Self::locate_chart(body, &u)
    }

    pub fn locate_chart(body: &ConvexBody, u: &DVector<f64>) -> Result<Self> {
        let face = face_of_chart(body, u)?;
        let location = if face.is_interior() {
            Location::Interior
        } else {
            Location::Boundary(Arc::new(face))
        };
        Ok(ClosurePoint {
            point: body.chart().lift_point(u),
            chart: u.clone(),
            location,
        })
    }

    /// A point already known to lie in `face`.
    pub fn on_face(body: &ConvexBody, u: DVector<f64>, face: Arc<FaceDescriptor>) -> Self {
        ClosurePoint {
            point: body.chart().lift_point(&u),
            chart: u,
            location: Location::Boundary(face),
        }
    }

    pub fn interior(body: &ConvexBody, u: DVector<f64>) -> Self {
        ClosurePoint {
            point: body.chart().lift_point(&u),
            chart: u,
            location: Location::Interior,
        }
    }

    pub fn point(&self) -> &ProjPoint {
        &self.point
    }

    pub fn chart(&self) -> &DVector<f64> {
        &self.chart
    }

    pub fn location(&self) -> &Location {
        &self.location
    }

    pub fn is_interior(&self) -> bool {
        matches!(self.location, Location::Interior)
    }

    pub fn face(&self) -> Option<&Arc<FaceDescriptor>> {
        match &self.location {
            Location::Boundary(f) => Some(f),
            Location::Interior => None,
        }
    }
}

/// The open face of a point of the closure.
pub fn face_of(body: &ConvexBody, p: &ProjPoint) -> Result<FaceDescriptor> {
    let u = body
        .chart()
        .to_chart(p)
        .map_err(|_| Error::OutsideClosure(f64::NEG_INFINITY))?;
    face_of_chart(body, &u)
}

pub fn face_of_chart(body: &ConvexBody, u: &DVector<f64>) -> Result<FaceDescriptor> {
    if u.len() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: u.len(),
        });
    }
    let chart = body.chart();
    if let Some(shape) = body.omega_f() {
        match shape.cylinder_location(u) {
            Some(CylinderLocation::Extremal { .. }) => return Ok(FaceDescriptor::point(chart, u)),
            Some(CylinderLocation::Vertical {
                theta,
                half_height,
                ..
            }) => {
                let origin = DVector::from_vec(vec![theta.cos(), theta.sin(), 0.0]);
                let directions = DMatrix::from_column_slice(3, 1, &[0.0, 0.0, 1.0]);
                let seg = ConvexBody::segment(-half_height, half_height)?;
                let ends = vec![
                    DVector::from_vec(vec![theta.cos(), theta.sin(), -half_height]),
                    DVector::from_vec(vec![theta.cos(), theta.sin(), half_height]),
                ];
                return Ok(FaceDescriptor::with_span(
                    chart,
                    u,
                    FaceKey::Vertical(theta),
                    origin,
                    directions,
                    seg,
                    ends,
                ));
            }
            None => {}
        }
    }
    let scale = body.bounding_radius().max(1.0);
    let slack = body.slack(u);
    if slack < -CLOSURE_TOL * scale {
        return Err(Error::OutsideClosure(slack));
    }
    if slack > CLOSURE_TOL * scale {
        let d = body.dim();
        return Ok(FaceDescriptor {
            anchor: chart.lift_point(u),
            anchor_chart: u.clone(),
            key: FaceKey::Interior,
            origin: DVector::zeros(d),
            directions: DMatrix::identity(d, d),
            span: (0..=d)
                .map(|i| {
                    let mut e = DVector::zeros(d + 1);
                    e[i] = 1.0;
                    ProjPoint::new(e).expect("basis vector")
                })
                .collect(),
            sub_body: Some(Arc::new(body.clone())),
            vertices: vec![],
        });
    }
    match body.kind() {
        BodyKind::Ellipsoid(_) => Ok(FaceDescriptor::point(chart, u)),
        kind => {
            let poly = match kind {
                BodyKind::HPolytope(p) => p,
                BodyKind::Hull(h) => h.polytope(),
                BodyKind::OmegaF(s) => s.hull(),
                BodyKind::Ellipsoid(_) => unreachable!(),
            };
            polytope_face(chart, poly, u)
        }
    }
}

fn polytope_face(chart: &AffineChart, poly: &HPolytope, u: &DVector<f64>) -> Result<FaceDescriptor> {
    let active = poly.active_set(u, tol::ACTIVE);
    let scale = poly.bounding_radius().max(1.0);
    let verts: Vec<DVector<f64>> = poly
        .vertices()
        .iter()
        .filter(|v| {
            let av = poly.normals() * *v;
            active
                .iter()
                .all(|&i| (poly.offsets()[i] - av[i]).abs() <= tol::ACTIVE * scale)
        })
        .cloned()
        .collect();
    if verts.len() <= 1 {
        return Ok(FaceDescriptor::point(chart, u));
    }
    let d = poly.dim();
    let n = verts.len();
    let origin = verts.iter().fold(DVector::zeros(d), |acc, v| acc + v) / n as f64;
    let mut diffs = DMatrix::zeros(d, n);
    for (j, v) in verts.iter().enumerate() {
        diffs.set_column(j, &(v - &origin));
    }
    let svd = diffs.svd(true, false);
    let u_mat = svd.u.expect("requested");
    let top = svd.singular_values.max();
    let cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&j| svd.singular_values[j] > 1e-9 * top.max(1.0))
        .collect();
    let k = cols.len();
    if k == 0 {
        return Ok(FaceDescriptor::point(chart, u));
    }
    let mut directions = DMatrix::zeros(d, k);
    for (c, &j) in cols.iter().enumerate() {
        directions.set_column(c, &u_mat.column(j));
    }
    let local: Vec<DVector<f64>> = verts.iter().map(|v| directions.tr_mul(&(v - &origin))).collect();
    let sub_body = if k == 1 {
        let lo = local.iter().map(|w| w[0]).fold(f64::INFINITY, f64::min);
        let hi = local.iter().map(|w| w[0]).fold(f64::NEG_INFINITY, f64::max);
        ConvexBody::segment(lo, hi)?
    } else {
        ConvexBody::new(
            BodyKind::HPolytope(HPolytope::from_points(&local)?),
            AffineChart::standard(k),
            None,
        )?
    };
    Ok(FaceDescriptor::with_span(
        chart,
        u,
        FaceKey::Facets(active),
        origin,
        directions,
        sub_body,
        verts,
    ))
}

/// The extended metric: the Hilbert distance of the common open face, or
/// `Infinite` when the two points lie in different faces.
pub fn extended_distance(body: &ConvexBody, x: &ClosurePoint, y: &ClosurePoint) -> Result<ExtendedDistance> {
    if (x.chart() - y.chart()).norm() <= tol::EQUALITY * x.chart().norm().max(1.0) {
        return Ok(ExtendedDistance::Finite(0.0));
    }
    match (x.location(), y.location()) {
        (Location::Interior, Location::Interior) => Ok(ExtendedDistance::Finite(chart_distance(
            body,
            x.chart(),
            y.chart(),
            RayMethod::Exact,
        ))),
        (Location::Boundary(fx), Location::Boundary(fy)) => {
            if !fx.same_face(fy) {
                return Ok(ExtendedDistance::Infinite);
            }
            match fx.sub_body() {
                None => Ok(ExtendedDistance::Finite(0.0)),
                Some(sub) => Ok(ExtendedDistance::Finite(chart_distance(
                    sub,
                    &fx.to_local(x.chart()),
                    &fx.to_local(y.chart()),
                    RayMethod::Exact,
                ))),
            }
        }
        _ => Ok(ExtendedDistance::Infinite),
    }
}
