//! Convex hulls of finite point sets in dimensions 2 and 3.
//!
//! The 3-D routine is gift wrapping over facets with coplanarity merging:
//! every facet is the full set of input points within `tol` of a supporting
//! plane, so degenerate inputs (many coplanar points, as on the lids of the
//! cylinder bodies) produce one facet per plane rather than a triangulation.

use std::collections::{HashSet, VecDeque};

use nalgebra::{Vector2, Vector3};

use crate::error::{Error, Result};

/// Indices of the hull vertices in counter-clockwise order, collinear
/// points removed. `tol` is relative to the extent of the point set.
pub fn hull_2d(points: &[Vector2<f64>], tol: f64) -> Vec<usize> {
    let n = points.len();
    if n < 3 {
        return (0..n).collect();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        points[i]
            .x
            .total_cmp(&points[j].x)
            .then(points[i].y.total_cmp(&points[j].y))
    });
    let extent = points
        .iter()
        .map(|p| (p - points[order[0]]).norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let eps = tol * extent * extent;
    let cross = |o: usize, a: usize, b: usize| {
        let (o, a, b) = (points[o], points[a], points[b]);
        (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
    };
    let mut hull: Vec<usize> = Vec::with_capacity(2 * n);
    for &i in order.iter() {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], i) <= eps {
            hull.pop();
        }
        hull.push(i);
    }
    let lower_len = hull.len() + 1;
    for &i in order.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], i) <= eps
        {
            hull.pop();
        }
        hull.push(i);
    }
    hull.pop();
    hull
}

/// One facet of a 3-D hull: outward unit normal, offset and the polygon of
/// input indices on the facet, counter-clockwise around the normal.
#[derive(Clone, Debug)]
pub struct Facet3 {
    pub normal: Vector3<f64>,
    pub offset: f64,
    pub polygon: Vec<usize>,
}

/// Facets of the convex hull of a full-dimensional 3-D point set.
pub fn hull_3d(points: &[Vector3<f64>], tol: f64) -> Result<Vec<Facet3>> {
    if points.len() < 4 {
        return Err(Error::InvalidBody("3-D hull needs at least 4 points".into()));
    }
    let centroid = points.iter().sum::<Vector3<f64>>() / points.len() as f64;
    let scale = points
        .iter()
        .map(|p| (p - centroid).norm())
        .fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::InvalidBody("degenerate point set".into()));
    }
    let eps = tol * scale;

    let first = initial_facet(points, eps)?;
    let mut facets = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = VecDeque::new();
    if let Some(f) = make_facet(points, first.0, first.1, eps) {
        let key = sorted_key(&f.polygon);
        seen.insert(key);
        queue.push_back(f);
    } else {
        return Err(Error::InvalidBody("point set is not full-dimensional".into()));
    }

    while let Some(facet) = queue.pop_front() {
        let m = facet.polygon.len();
        for k in 0..m {
            let p = points[facet.polygon[k]];
            let q = points[facet.polygon[(k + 1) % m]];
            let edge = (q - p).normalize();
            let outward = edge.cross(&facet.normal);
            let normal = pivot(points, &p, &facet.normal, &outward, eps)
                .ok_or_else(|| Error::InvalidBody("hull pivot failed".into()))?;
            let offset = normal.dot(&p);
            if let Some(next) = make_facet(points, normal, offset, eps) {
                let key = sorted_key(&next.polygon);
                if seen.insert(key) {
                    queue.push_back(next);
                }
            }
        }
        facets.push(facet);
        if facets.len() > 8 * points.len() + 16 {
            return Err(Error::InvalidBody("hull facet count exploded".into()));
        }
    }

    for f in &facets {
        let worst = points
            .iter()
            .map(|s| f.normal.dot(s) - f.offset)
            .fold(f64::NEG_INFINITY, f64::max);
        if worst > 100.0 * eps {
            return Err(Error::InvalidBody(format!(
                "hull facet is not supporting (excess {worst:.3e})"
            )));
        }
    }
    Ok(facets)
}

fn sorted_key(polygon: &[usize]) -> Vec<usize> {
    let mut key = polygon.to_vec();
    key.sort_unstable();
    key
}

/// Rotates the plane with normal `normal` about a line through `p` (normal to
/// both `normal` and `outward`) until it touches another point; `outward` is the in-plane
/// direction pointing away from the side already swept.
fn pivot(
    points: &[Vector3<f64>],
    p: &Vector3<f64>,
    normal: &Vector3<f64>,
    outward: &Vector3<f64>,
    eps: f64,
) -> Option<Vector3<f64>> {
    let mut best: Option<(f64, f64, f64)> = None;
    for s in points {
        let v = s - p;
        let alpha = v.dot(outward);
        let beta = v.dot(normal);
        if alpha * alpha + beta * beta <= eps * eps {
            continue;
        }
        // coplanar points may carry beta = +0.0 or a tiny positive residue
        let angle = (-beta).max(0.0).atan2(alpha);
        match best {
            Some((a, _, _)) if a <= angle => {}
            _ => best = Some((angle, alpha, beta)),
        }
    }
    let (_, alpha, beta) = best?;
    let n = outward * (-beta) + normal * alpha;
    let len = n.norm();
    (len > 0.0).then(|| n / len)
}

fn initial_facet(points: &[Vector3<f64>], eps: f64) -> Result<(Vector3<f64>, f64)> {
    let start = (0..points.len())
        .min_by(|&i, &j| {
            points[i]
                .x
                .total_cmp(&points[j].x)
                .then(points[i].y.total_cmp(&points[j].y))
                .then(points[i].z.total_cmp(&points[j].z))
        })
        .expect("nonempty");
    let p0 = points[start];
    let n0 = Vector3::new(-1.0, 0.0, 0.0);
    let e0 = Vector3::new(0.0, 0.0, 1.0);
    let out0 = e0.cross(&n0);
    let n1 = pivot(points, &p0, &n0, &out0, eps)
        .ok_or_else(|| Error::InvalidBody("degenerate point set".into()))?;
    // second point on the supporting plane n1, farthest from p0 off the axis
    let s1 = points
        .iter()
        .filter(|s| (n1.dot(s) - n1.dot(&p0)).abs() <= eps)
        .max_by(|a, b| (*a - p0).norm().total_cmp(&(*b - p0).norm()))
        .copied()
        .ok_or_else(|| Error::InvalidBody("degenerate point set".into()))?;
    if (s1 - p0).norm() <= eps {
        return Err(Error::InvalidBody("degenerate point set".into()));
    }
    let e1 = (s1 - p0).normalize();
    let out1 = e1.cross(&n1);
    let n2 = pivot(points, &p0, &n1, &out1, eps)
        .ok_or_else(|| Error::InvalidBody("degenerate point set".into()))?;
    Ok((n2, n2.dot(&p0)))
}

fn make_facet(points: &[Vector3<f64>], normal: Vector3<f64>, offset: f64, eps: f64) -> Option<Facet3> {
    let on: Vec<usize> = (0..points.len())
        .filter(|&i| (normal.dot(&points[i]) - offset).abs() <= eps)
        .collect();
    if on.len() < 3 {
        return None;
    }
    let helper = if normal.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let b1 = (helper - normal * normal.dot(&helper)).normalize();
    let b2 = normal.cross(&b1);
    let planar: Vec<Vector2<f64>> = on
        .iter()
        .map(|&i| Vector2::new(points[i].dot(&b1), points[i].dot(&b2)))
        .collect();
    let ring = hull_2d(&planar, 1e-12);
    if ring.len() < 3 {
        return None;
    }
    Some(Facet3 {
        normal,
        offset,
        polygon: ring.into_iter().map(|k| on[k]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_interior_and_collinear_points() {
        let pts: Vec<Vector2<f64>> = [
            (0.0, 0.0),
            (1.0, 0.0),
            (0.5, 0.0),
            (1.0, 1.0),
            (0.0, 1.0),
            (0.5, 0.5),
        ]
        .iter()
        .map(|&(x, y)| Vector2::new(x, y))
        .collect();
        let h = hull_2d(&pts, 1e-12);
        assert_eq!(h, vec![0, 1, 3, 4]);
    }

    #[test]
    fn cube_has_six_facets() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(Vector3::new(
                (i & 1) as f64,
                ((i >> 1) & 1) as f64,
                ((i >> 2) & 1) as f64,
            ));
        }
        // face centres and an interior point must not create extra facets
        pts.push(Vector3::new(0.5, 0.5, 1.0));
        pts.push(Vector3::new(0.5, 0.5, 0.5));
        let facets = hull_3d(&pts, 1e-9).unwrap();
        assert_eq!(facets.len(), 6);
        for f in &facets {
            assert_eq!(f.polygon.len(), 4);
        }
    }

    #[test]
    fn prism_over_polygon() {
        let n = 40;
        let mut pts = Vec::new();
        for k in 0..n {
            let t = std::f64::consts::TAU * k as f64 / n as f64;
            pts.push(Vector3::new(t.cos(), t.sin(), 1.0));
            pts.push(Vector3::new(t.cos(), t.sin(), -1.0));
        }
        let facets = hull_3d(&pts, 1e-9).unwrap();
        assert_eq!(facets.len(), n + 2);
    }
}
