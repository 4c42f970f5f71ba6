//! Chords, cross-ratios and the Hilbert metric.

use nalgebra::DVector;

use crate::body::{ConvexBody, RayMethod};
use crate::error::{Error, Result};
use crate::projective::ProjPoint;
use crate::tol;

/// Boundary point of the ray from an interior `origin` in a chart direction.
pub fn boundary_ray(body: &ConvexBody, origin: &ProjPoint, direction: &DVector<f64>) -> Result<ProjPoint> {
    boundary_ray_with(body, origin, direction, RayMethod::Exact)
}

pub fn boundary_ray_with(
    body: &ConvexBody,
    origin: &ProjPoint,
    direction: &DVector<f64>,
    method: RayMethod,
) -> Result<ProjPoint> {
    let u = body.interior_chart(origin)?;
    if direction.len() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: direction.len(),
        });
    }
    if !(direction.norm() > 0.0) {
        return Err(Error::InvalidArgument("direction must be nonzero".into()));
    }
    let t = body.ray_exit(&u, direction, method);
    Ok(body.chart().lift_point(&(u + direction * t)))
}

/// Endpoints of the maximal segment through two interior points, ordered so
/// that `a, x, y, b` are aligned in this order.
#[derive(Clone, Debug)]
pub struct Chord {
    pub a: ProjPoint,
    pub b: ProjPoint,
    pub a_chart: DVector<f64>,
    pub b_chart: DVector<f64>,
}

pub fn chord(body: &ConvexBody, x: &ProjPoint, y: &ProjPoint) -> Result<Chord> {
    chord_with(body, x, y, RayMethod::Exact)
}

pub fn chord_with(body: &ConvexBody, x: &ProjPoint, y: &ProjPoint, method: RayMethod) -> Result<Chord> {
    let ux = body.interior_chart(x)?;
    let uy = body.interior_chart(y)?;
    if x.approx_eq(y, tol::EQUALITY) {
        return Err(Error::DegenerateChord);
    }
    let v = &uy - &ux;
    let back = body.ray_exit(&ux, &(-&v), method);
    let fwd = body.ray_exit(&uy, &v, method);
    let a_chart = &ux - &v * back;
    let b_chart = &uy + &v * fwd;
    Ok(Chord {
        a: body.chart().lift_point(&a_chart),
        b: body.chart().lift_point(&b_chart),
        a_chart,
        b_chart,
    })
}

/// `[a, x, y, b] = |b - x| |a - y| / (|a - x| |b - y|)` for collinear chart
/// points; `+inf` when `a = x` or `b = y`.
pub fn cross_ratio(
    a: &DVector<f64>,
    x: &DVector<f64>,
    y: &DVector<f64>,
    b: &DVector<f64>,
) -> Result<f64> {
    let pts = [a, x, y, b];
    let n = a.len();
    if pts.iter().any(|p| p.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: pts.iter().map(|p| p.len()).find(|&l| l != n).unwrap_or(n),
        });
    }
    // direction of the longest pairwise difference
    let mut dir = DVector::zeros(n);
    let mut best = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            let d = pts[j] - pts[i];
            let len = d.norm();
            if len > best {
                best = len;
                dir = d / len;
            }
        }
    }
    let scale = pts.iter().map(|p| p.norm()).fold(best, f64::max).max(1e-300);
    if best > 0.0 {
        for p in &pts[1..] {
            let w = *p - a;
            let off = (&w - &dir * dir.dot(&w)).norm();
            if off > tol::COLLINEARITY * scale {
                return Err(Error::NotCollinear(off / scale));
            }
        }
    }
    let ax = (a - x).norm();
    let by = (b - y).norm();
    if ax == 0.0 || by == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((b - x).norm() * (a - y).norm() / (ax * by))
}

/// Hilbert distance `½ log [a, x, y, b]` between interior points.
pub fn hilbert_distance(body: &ConvexBody, x: &ProjPoint, y: &ProjPoint) -> Result<f64> {
    hilbert_distance_with(body, x, y, RayMethod::Exact)
}

pub fn hilbert_distance_with(
    body: &ConvexBody,
    x: &ProjPoint,
    y: &ProjPoint,
    method: RayMethod,
) -> Result<f64> {
    let ux = body.interior_chart(x)?;
    let uy = body.interior_chart(y)?;
    if x.approx_eq(y, tol::EQUALITY) {
        return Ok(0.0);
    }
    Ok(chart_distance(body, &ux, &uy, method))
}

/// Hilbert distance between chart points assumed interior.
///
/// Evaluated as `½ [ln(1 + s/α) + ln(1 + s/β)]`, where `s = |y - x|` and
/// `α`, `β` are the distances from `x` and `y` to the chord endpoints; this
/// keeps full relative precision for nearby points.
pub fn chart_distance(body: &ConvexBody, ux: &DVector<f64>, uy: &DVector<f64>, method: RayMethod) -> f64 {
    let v = uy - ux;
    let s = v.norm();
    if s == 0.0 {
        return 0.0;
    }
    let dir = v / s;
    let alpha = body.ray_exit(ux, &(-&dir), method);
    let beta = body.ray_exit(uy, &dir, method);
    0.5 * ((s / alpha).ln_1p() + (s / beta).ln_1p())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn pt(body: &ConvexBody, u: &[f64]) -> ProjPoint {
        body.chart().lift_point(&DVector::from_column_slice(u))
    }

    #[test]
    fn ray_examples() {
        let disk = ConvexBody::unit_ball(2);
        let o = pt(&disk, &[0.0, 0.0]);
        let p = boundary_ray(&disk, &o, &DVector::from_vec(vec![1.0, 0.0])).unwrap();
        let u = disk.chart().to_chart(&p).unwrap();
        assert!((u - DVector::from_vec(vec![1.0, 0.0])).norm() < 1e-15);

        let sq = ConvexBody::square(1.0).unwrap();
        let p = boundary_ray(&sq, &pt(&sq, &[0.0, 0.0]), &DVector::from_vec(vec![1.0, 1.0])).unwrap();
        let u = sq.chart().to_chart(&p).unwrap();
        assert!((u - DVector::from_vec(vec![1.0, 1.0])).norm() < 1e-15);

        let ell = ConvexBody::ellipsoid(
            DVector::zeros(2),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 4.0]),
        )
        .unwrap();
        for method in [RayMethod::Exact, RayMethod::Bisection] {
            let p = boundary_ray_with(&ell, &pt(&ell, &[0.0, 0.0]), &DVector::from_vec(vec![0.0, 1.0]), method)
                .unwrap();
            let u = ell.chart().to_chart(&p).unwrap();
            assert!((u[1] - 0.5).abs() < 1e-12 && u[0].abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_origin_rejected() {
        let disk = ConvexBody::unit_ball(2);
        let r = boundary_ray(&disk, &pt(&disk, &[1.0, 0.0]), &DVector::from_vec(vec![1.0, 0.0]));
        assert!(matches!(r, Err(Error::NotInterior { .. })));
    }

    #[test]
    fn chord_examples() {
        let disk = ConvexBody::unit_ball(2);
        let c = chord(&disk, &pt(&disk, &[-0.2, 0.0]), &pt(&disk, &[0.3, 0.0])).unwrap();
        assert!((c.a_chart[0] + 1.0).abs() < 1e-15 && (c.b_chart[0] - 1.0).abs() < 1e-15);
        let sq = ConvexBody::square(1.0).unwrap();
        let c = chord(&sq, &pt(&sq, &[0.0, 0.0]), &pt(&sq, &[0.5, 0.5])).unwrap();
        assert!((c.a_chart.clone() + DVector::from_vec(vec![1.0, 1.0])).norm() < 1e-15);
        assert!((c.b_chart.clone() - DVector::from_vec(vec![1.0, 1.0])).norm() < 1e-15);
        let x = pt(&disk, &[0.1, 0.1]);
        assert!(matches!(chord(&disk, &x, &x), Err(Error::DegenerateChord)));
    }

    #[test]
    fn cross_ratio_examples() {
        let v = |t: f64| DVector::from_vec(vec![t, 2.0 * t]);
        assert!((cross_ratio(&v(0.0), &v(1.0), &v(2.0), &v(3.0)).unwrap() - 4.0).abs() < 1e-14);
        assert_eq!(cross_ratio(&v(0.0), &v(1.5), &v(1.5), &v(3.0)).unwrap(), 1.0);
        assert_eq!(cross_ratio(&v(0.0), &v(0.0), &v(1.0), &v(3.0)).unwrap(), f64::INFINITY);
        let off = DVector::from_vec(vec![1.0, 0.0]);
        assert!(matches!(
            cross_ratio(&v(0.0), &off, &v(2.0), &v(3.0)),
            Err(Error::NotCollinear(_))
        ));
    }

    #[test]
    fn distance_examples() {
        let half_log3 = 0.5 * 3f64.ln();
        let disk = ConvexBody::unit_ball(2);
        let d = hilbert_distance(&disk, &pt(&disk, &[0.0, 0.0]), &pt(&disk, &[0.5, 0.0])).unwrap();
        assert!((d - 0.5f64.atanh()).abs() < 1e-15);
        assert!((d - half_log3).abs() < 1e-15);
        let seg = ConvexBody::segment(-1.0, 1.0).unwrap();
        let d = hilbert_distance(&seg, &pt(&seg, &[0.0]), &pt(&seg, &[0.5])).unwrap();
        assert!((d - half_log3).abs() < 1e-15);
        let x = pt(&disk, &[0.3, -0.2]);
        assert_eq!(hilbert_distance(&disk, &x, &x).unwrap(), 0.0);
    }
}
