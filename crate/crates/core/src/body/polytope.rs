//! Bounded H-polytopes `{u : a_i · u <= b_i}` in chart coordinates.

use nalgebra::{DMatrix, DVector, Vector2, Vector3};

use super::hull::{hull_2d, hull_3d};
use crate::error::{Error, Result};

/// Vertex dedup tolerance in chart units.
const VERTEX_MERGE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct HPolytope {
    normals: DMatrix<f64>,
    offsets: DVector<f64>,
    vertices: Vec<DVector<f64>>,
}

impl HPolytope {
    /// Builds a polytope from inequalities, enumerating its vertices.
    ///
    /// Rows are rescaled to unit normals. Supported chart dimensions are
    /// 1 to 3; the polytope must be bounded with nonempty interior.
    pub fn from_halfspaces(a: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        let (a, b) = normalize_rows(a, b)?;
        let d = a.ncols();
        if !(1..=3).contains(&d) {
            return Err(Error::InvalidBody(format!(
                "H-polytopes are supported in chart dimension 1 to 3, got {d}"
            )));
        }
        check_bounded(&a)?;
        let vertices = enumerate_vertices(&a, &b);
        let poly = HPolytope {
            normals: a,
            offsets: b,
            vertices,
        };
        poly.check_interior()?;
        Ok(poly)
    }

    /// Convex hull of a finite point set (chart dimension 1 to 3).
    pub fn from_points(points: &[DVector<f64>]) -> Result<Self> {
        let d = points
            .first()
            .map(|p| p.len())
            .ok_or_else(|| Error::InvalidBody("empty point set".into()))?;
        if points.iter().any(|p| p.len() != d || p.iter().any(|v| !v.is_finite())) {
            return Err(Error::InvalidBody("points must be finite and of equal dimension".into()));
        }
        let poly = match d {
            1 => {
                let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
                let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
                HPolytope {
                    normals: DMatrix::from_row_slice(2, 1, &[1.0, -1.0]),
                    offsets: DVector::from_vec(vec![hi, -lo]),
                    vertices: vec![DVector::from_vec(vec![lo]), DVector::from_vec(vec![hi])],
                }
            }
            2 => {
                let planar: Vec<Vector2<f64>> =
                    points.iter().map(|p| Vector2::new(p[0], p[1])).collect();
                let ring = hull_2d(&planar, 1e-12);
                if ring.len() < 3 {
                    return Err(Error::InvalidBody("points are collinear".into()));
                }
                let m = ring.len();
                let mut normals = DMatrix::zeros(m, 2);
                let mut offsets = DVector::zeros(m);
                for k in 0..m {
                    let p = planar[ring[k]];
                    let q = planar[ring[(k + 1) % m]];
                    let e = q - p;
                    let n = Vector2::new(e.y, -e.x).normalize();
                    normals[(k, 0)] = n.x;
                    normals[(k, 1)] = n.y;
                    offsets[k] = n.dot(&p);
                }
                HPolytope {
                    normals,
                    offsets,
                    vertices: ring.iter().map(|&i| points[i].clone()).collect(),
                }
            }
            3 => {
                let spatial: Vec<Vector3<f64>> =
                    points.iter().map(|p| Vector3::new(p[0], p[1], p[2])).collect();
                let facets = hull_3d(&spatial, 1e-9)?;
                let m = facets.len();
                let mut normals = DMatrix::zeros(m, 3);
                let mut offsets = DVector::zeros(m);
                let mut used = vec![false; points.len()];
                for (k, f) in facets.iter().enumerate() {
                    for j in 0..3 {
                        normals[(k, j)] = f.normal[j];
                    }
                    offsets[k] = f.offset;
                    for &i in &f.polygon {
                        used[i] = true;
                    }
                }
                let vertices = (0..points.len())
                    .filter(|&i| used[i])
                    .map(|i| points[i].clone())
                    .collect();
                HPolytope {
                    normals,
                    offsets,
                    vertices,
                }
            }
            _ => {
                return Err(Error::InvalidBody(format!(
                    "hulls are supported in chart dimension 1 to 3, got {d}"
                )))
            }
        };
        poly.check_interior()?;
        Ok(poly)
    }

    /// Rebuilds a polytope from already-consistent parts (used by transforms).
    pub(crate) fn from_parts(
        normals: DMatrix<f64>,
        offsets: DVector<f64>,
        vertices: Vec<DVector<f64>>,
    ) -> Result<Self> {
        let (normals, offsets) = normalize_rows(normals, offsets)?;
        let poly = HPolytope {
            normals,
            offsets,
            vertices,
        };
        poly.check_interior()?;
        Ok(poly)
    }

    fn check_interior(&self) -> Result<()> {
        if self.vertices.len() <= self.dim() {
            return Err(Error::InvalidBody("polytope has empty interior".into()));
        }
        let c = self.centroid();
        let slack = self.slack(&c);
        if !(slack > 1e-9 * self.bounding_radius().max(1.0)) {
            return Err(Error::InvalidBody(format!(
                "polytope has empty interior (centroid slack {slack:.3e})"
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.normals.ncols()
    }

    pub fn num_facets(&self) -> usize {
        self.normals.nrows()
    }

    /// Unit outward facet normals, one per row.
    pub fn normals(&self) -> &DMatrix<f64> {
        &self.normals
    }

    pub fn offsets(&self) -> &DVector<f64> {
        &self.offsets
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    /// Euclidean distance to the nearest facet hyperplane, positive inside.
    pub fn slack(&self, u: &DVector<f64>) -> f64 {
        let au = &self.normals * u;
        (0..self.num_facets())
            .map(|i| self.offsets[i] - au[i])
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest `t >= 0` with `u + t v` in the closed polytope, for `u` inside.
    pub fn ray_exit(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        let au = &self.normals * u;
        let av = &self.normals * v;
        let mut best = f64::INFINITY;
        for i in 0..self.num_facets() {
            if av[i] > 0.0 {
                let t = ((self.offsets[i] - au[i]) / av[i]).max(0.0);
                best = best.min(t);
            }
        }
        best
    }

    /// Facets whose inequality is tight at `u` within `tol` (relative to
    /// the polytope size).
    pub fn active_set(&self, u: &DVector<f64>, tol: f64) -> Vec<usize> {
        let scale = self.bounding_radius().max(1.0);
        let au = &self.normals * u;
        (0..self.num_facets())
            .filter(|&i| (self.offsets[i] - au[i]).abs() <= tol * scale)
            .collect()
    }

    /// Vertex average; an interior point.
    pub fn centroid(&self) -> DVector<f64> {
        let n = self.vertices.len() as f64;
        self.vertices
            .iter()
            .fold(DVector::zeros(self.dim()), |acc, v| acc + v)
            / n
    }

    pub fn bounding_radius(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let mut best: f64 = 0.0;
        for (i, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[i + 1..] {
                best = best.max((p - q).norm());
            }
        }
        best
    }
}

fn normalize_rows(a: DMatrix<f64>, b: DVector<f64>) -> Result<(DMatrix<f64>, DVector<f64>)> {
    if a.nrows() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: b.len(),
        });
    }
    if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
        return Err(Error::InvalidBody("inequalities must be finite".into()));
    }
    let mut a = a;
    let mut b = b;
    for i in 0..a.nrows() {
        let norm = a.row(i).norm();
        if norm == 0.0 {
            return Err(Error::InvalidBody(format!("row {i} has a zero normal")));
        }
        a.row_mut(i).scale_mut(1.0 / norm);
        b[i] /= norm;
    }
    Ok((a, b))
}

/// Rejects normal sets that leave a recession direction `w != 0` with
/// `a_i · w <= 0` for all rows.
fn check_bounded(a: &DMatrix<f64>) -> Result<()> {
    let d = a.ncols();
    let unbounded = || Err(Error::InvalidBody("polytope is unbounded".into()));
    if a.clone().rank(1e-10) < d {
        return unbounded();
    }
    let rows: Vec<DVector<f64>> = (0..a.nrows()).map(|i| a.row(i).transpose()).collect();
    let recedes = |w: &DVector<f64>| rows.iter().all(|r| r.dot(w) <= 1e-12);
    let mut candidates: Vec<DVector<f64>> = Vec::new();
    match d {
        1 => candidates.push(DVector::from_vec(vec![1.0])),
        2 => {
            for r in &rows {
                candidates.push(DVector::from_vec(vec![-r[1], r[0]]));
            }
        }
        _ => {
            for (i, p) in rows.iter().enumerate() {
                for q in &rows[i + 1..] {
                    let c = Vector3::new(p[0], p[1], p[2]).cross(&Vector3::new(q[0], q[1], q[2]));
                    if c.norm() > 1e-12 {
                        candidates.push(DVector::from_column_slice(c.normalize().as_slice()));
                    }
                }
            }
        }
    }
    for w in &candidates {
        if recedes(w) || recedes(&-w) {
            return unbounded();
        }
    }
    Ok(())
}

/// Vertices as feasible intersections of `d` facet hyperplanes.
fn enumerate_vertices(a: &DMatrix<f64>, b: &DVector<f64>) -> Vec<DVector<f64>> {
    let d = a.ncols();
    let m = a.nrows();
    let scale = b.amax().max(1.0);
    let mut out: Vec<DVector<f64>> = Vec::new();
    let mut idx: Vec<usize> = (0..d).collect();
    if m < d {
        return out;
    }
    loop {
        let mut sub = DMatrix::zeros(d, d);
        let mut rhs = DVector::zeros(d);
        for (k, &i) in idx.iter().enumerate() {
            sub.set_row(k, &a.row(i));
            rhs[k] = b[i];
        }
        if sub.determinant().abs() > 1e-12 {
            if let Some(x) = sub.lu().solve(&rhs) {
                let ax = a * &x;
                let feasible = (0..m).all(|i| ax[i] <= b[i] + 1e-9 * scale);
                if feasible && !out.iter().any(|v| (v - &x).norm() <= VERTEX_MERGE * scale) {
                    out.push(x);
                }
            }
        }
        // next combination
        let mut k = d;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if idx[k] < m - d + k {
                idx[k] += 1;
                for j in k + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> HPolytope {
        HPolytope::from_halfspaces(
            DMatrix::from_row_slice(4, 2, &[1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, -1.0]),
            DVector::from_element(4, 1.0),
        )
        .unwrap()
    }

    #[test]
    fn square_vertices_and_slack() {
        let sq = square();
        assert_eq!(sq.vertices().len(), 4);
        assert!((sq.slack(&DVector::zeros(2)) - 1.0).abs() < 1e-15);
        let t = sq.ray_exit(&DVector::zeros(2), &DVector::from_vec(vec![1.0, 1.0]));
        assert!((t - 1.0).abs() < 1e-15);
        assert_eq!(sq.active_set(&DVector::from_vec(vec![1.0, 1.0]), 1e-9).len(), 2);
    }

    #[test]
    fn unbounded_rejected() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, -1.0, 0.0, 0.0, 1.0]);
        let r = HPolytope::from_halfspaces(a, DVector::from_element(3, 1.0));
        assert!(matches!(r, Err(Error::InvalidBody(_))));
    }

    #[test]
    fn hull_of_cube_points() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(DVector::from_vec(vec![
                (i & 1) as f64 * 2.0 - 1.0,
                ((i >> 1) & 1) as f64 * 2.0 - 1.0,
                ((i >> 2) & 1) as f64 * 2.0 - 1.0,
            ]));
        }
        pts.push(DVector::zeros(3));
        let cube = HPolytope::from_points(&pts).unwrap();
        assert_eq!(cube.num_facets(), 6);
        assert_eq!(cube.vertices().len(), 8);
        assert!((cube.slack(&DVector::zeros(3)) - 1.0).abs() < 1e-12);
    }
}
