//! Ellipsoids `{u : (u - c)^T P (u - c) < 1}` in chart coordinates.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Ellipsoid {
    center: DVector<f64>,
    shape: DMatrix<f64>,
    shape_inv: DMatrix<f64>,
    lambda_min: f64,
    lambda_max: f64,
}

impl Ellipsoid {
    /// `shape` must be symmetric positive definite.
    pub fn new(center: DVector<f64>, shape: DMatrix<f64>) -> Result<Self> {
        let d = center.len();
        if d == 0 || shape.nrows() != d || shape.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: shape.nrows(),
            });
        }
        if center.iter().chain(shape.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidBody("ellipsoid data must be finite".into()));
        }
        let asym = (&shape - shape.transpose()).amax();
        if asym > 1e-9 * shape.amax() {
            return Err(Error::InvalidBody("shape matrix is not symmetric".into()));
        }
        let shape = (&shape + shape.transpose()) * 0.5;
        let eig = shape.clone().symmetric_eigenvalues();
        let lambda_min = eig.min();
        let lambda_max = eig.max();
        if !(lambda_min > 1e-12 * lambda_max) || !(lambda_min > 0.0) {
            return Err(Error::InvalidBody(
                "shape matrix is not positive definite".into(),
            ));
        }
        let shape_inv = shape
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidBody("shape matrix is singular".into()))?;
        Ok(Ellipsoid {
            center,
            shape,
            shape_inv,
            lambda_min,
            lambda_max,
        })
    }

    /// Ellipsoid with the given centre and semi-axes along the coordinate axes.
    pub fn axis_aligned(center: DVector<f64>, semi_axes: &[f64]) -> Result<Self> {
        let diag: Vec<f64> = semi_axes.iter().map(|a| 1.0 / (a * a)).collect();
        Self::new(center, DMatrix::from_diagonal(&DVector::from_vec(diag)))
    }

    /// Ellipsoid from a homogeneous quadric `Q` with interior `[u;1]^T Q [u;1] < 0`.
    pub fn from_quadric(q: &DMatrix<f64>) -> Result<Self> {
        let n = q.nrows();
        let d = n - 1;
        let sym = (q + q.transpose()) * 0.5;
        let s_mat = sym.view((0, 0), (d, d)).into_owned();
        let s_vec = sym.view((0, d), (d, 1)).column(0).into_owned();
        let sigma = sym[(d, d)];
        let chol = s_mat
            .clone()
            .cholesky()
            .ok_or_else(|| Error::ChartViolation(s_mat.clone().symmetric_eigenvalues().min()))?;
        let shifted = chol.solve(&s_vec);
        let kappa = s_vec.dot(&shifted) - sigma;
        if !(kappa > 0.0) {
            return Err(Error::InvalidBody("quadric has empty interior".into()));
        }
        Self::new(-shifted, s_mat / kappa)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn shape(&self) -> &DMatrix<f64> {
        &self.shape
    }

    /// `sqrt((u - c)^T P (u - c))`; below 1 exactly on the interior.
    pub fn mahalanobis(&self, u: &DVector<f64>) -> f64 {
        let w = u - &self.center;
        w.dot(&(&self.shape * &w)).max(0.0).sqrt()
    }

    /// Lower bound on the Euclidean distance to the boundary, positive inside.
    pub fn slack(&self, u: &DVector<f64>) -> f64 {
        (1.0 - self.mahalanobis(u)) / self.lambda_max.sqrt()
    }

    /// Largest `t >= 0` with `u + t v` in the closed ellipsoid, for `u` inside.
    pub fn ray_exit(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        let w = u - &self.center;
        let pv = &self.shape * v;
        let a = v.dot(&pv);
        let b = w.dot(&pv);
        let c = (w.dot(&(&self.shape * &w)) - 1.0).min(0.0);
        let disc = (b * b - a * c).max(0.0).sqrt();
        if b >= 0.0 {
            if b + disc == 0.0 {
                0.0
            } else {
                -c / (b + disc)
            }
        } else {
            (disc - b) / a
        }
    }

    /// Homogeneous quadric with interior `[u;1]^T Q [u;1] < 0`.
    pub fn quadric(&self) -> DMatrix<f64> {
        let d = self.dim();
        let pc = &self.shape * &self.center;
        let mut q = DMatrix::zeros(d + 1, d + 1);
        q.view_mut((0, 0), (d, d)).copy_from(&self.shape);
        for i in 0..d {
            q[(i, d)] = -pc[i];
            q[(d, i)] = -pc[i];
        }
        q[(d, d)] = self.center.dot(&pc) - 1.0;
        q
    }

    /// Range of the affine function `w · u + w0` over the closed ellipsoid.
    pub fn affine_range(&self, w: &DVector<f64>, w0: f64) -> (f64, f64) {
        let mid = w.dot(&self.center) + w0;
        let half = w.dot(&(&self.shape_inv * w)).max(0.0).sqrt();
        (mid - half, mid + half)
    }

    /// Largest distance from the origin to a point of the closure.
    pub fn bounding_radius(&self) -> f64 {
        self.center.norm() + 1.0 / self.lambda_min.sqrt()
    }

    /// Length of the longest axis chord.
    pub fn diameter(&self) -> f64 {
        2.0 / self.lambda_min.sqrt()
    }

    /// Point of the boundary in direction `dir` from the centre.
    pub fn boundary_point(&self, dir: &DVector<f64>) -> DVector<f64> {
        let t = self.ray_exit(&self.center, dir);
        &self.center + dir * t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadric_roundtrip() {
        let e = Ellipsoid::new(
            DVector::from_vec(vec![0.3, -0.1]),
            DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 3.0]),
        )
        .unwrap();
        let back = Ellipsoid::from_quadric(&(e.quadric() * 2.5)).unwrap();
        assert!((back.center() - e.center()).norm() < 1e-12);
        assert!((back.shape() - e.shape()).norm() < 1e-12);
    }

    #[test]
    fn ray_exit_of_stretched_disk() {
        let e = Ellipsoid::axis_aligned(DVector::zeros(2), &[1.0, 0.5]).unwrap();
        let t = e.ray_exit(&DVector::zeros(2), &DVector::from_vec(vec![0.0, 1.0]));
        assert!((t - 0.5).abs() < 1e-15);
        let t = e.ray_exit(&DVector::from_vec(vec![0.5, 0.0]), &DVector::from_vec(vec![-1.0, 0.0]));
        assert!((t - 1.5).abs() < 1e-15);
    }

    #[test]
    fn indefinite_shape_rejected() {
        let r = Ellipsoid::new(
            DVector::zeros(2),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]),
        );
        assert!(r.is_err());
    }
}
