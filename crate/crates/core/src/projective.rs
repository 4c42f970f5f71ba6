//! Points of P(V), affine charts and projective transformations.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Threshold used to pick the sign-fixing entry of a representative.
const SIGN_EPS: f64 = 1e-9;

/// A point of the projective space P(R^{d+1}).
///
/// The stored representative has unit Euclidean norm and its first entry of
/// magnitude above `1e-9` is positive, so equal points have entrywise close
/// coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProjPoint {
    coords: DVector<f64>,
}

impl ProjPoint {
    pub fn new(coords: DVector<f64>) -> Result<Self> {
        let norm = coords.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidArgument(
                "homogeneous coordinates must be finite and nonzero".into(),
            ));
        }
        let mut coords = coords / norm;
        if let Some(first) = coords.iter().copied().find(|c| c.abs() > SIGN_EPS) {
            if first < 0.0 {
                coords.neg_mut();
            }
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(coords))
    }

    /// Canonical unit representative.
    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    /// Dimension of the underlying vector space (d + 1).
    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    /// Distance between representatives, insensitive to the sign ambiguity.
    pub fn distance(&self, other: &ProjPoint) -> f64 {
        if self.ambient_dim() != other.ambient_dim() {
            return f64::INFINITY;
        }
        let minus = (&self.coords - &other.coords).amax();
        let plus = (&self.coords + &other.coords).amax();
        minus.min(plus)
    }

    pub fn approx_eq(&self, other: &ProjPoint, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, tol::EQUALITY)
    }
}

impl TryFrom<Vec<f64>> for ProjPoint {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        ProjPoint::from_slice(&v)
    }
}

impl From<ProjPoint> for Vec<f64> {
    fn from(p: ProjPoint) -> Self {
        p.coords.iter().copied().collect()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c:.6}")?;
        }
        write!(f, "]")
    }
}

/// An affine chart {l = 1} of P(R^{d+1}) with Euclidean coordinates.
///
/// Chart coordinates of `x` are `B x / l(x)`, where the rows of `B` are an
/// orthonormal basis of the kernel of `l`. For `l` the last coordinate this
/// is the usual dehomogenization `(x_0, ..., x_{d-1}) / x_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineChart {
    covector: DVector<f64>,
    frame: DMatrix<f64>,
    frame_inv: DMatrix<f64>,
}

impl AffineChart {
    pub fn new(covector: DVector<f64>) -> Result<Self> {
        let n = covector.len();
        let norm = covector.norm();
        if n < 2 || !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidArgument(
                "chart covector must be finite, nonzero and of length >= 2".into(),
            ));
        }
        let unit = &covector / norm;
        let mut basis: Vec<DVector<f64>> = Vec::with_capacity(n - 1);
        for i in 0..n {
            if basis.len() == n - 1 {
                break;
            }
            let mut v = DVector::zeros(n);
            v[i] = 1.0;
            v -= &unit * unit.dot(&v);
            for b in &basis {
                v -= b * b.dot(&v);
            }
            let len = v.norm();
            if len > 1e-8 {
                basis.push(v / len);
            }
        }
        let mut frame = DMatrix::zeros(n, n);
        for (i, b) in basis.iter().enumerate() {
            frame.set_row(i, &b.transpose());
        }
        frame.set_row(n - 1, &covector.transpose());
        let frame_inv = frame
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("degenerate chart frame".into()))?;
        Ok(AffineChart {
            covector,
            frame,
            frame_inv,
        })
    }

    /// The chart `x_d = 1` of P(R^{d+1}).
    pub fn standard(d: usize) -> Self {
        let mut covector = DVector::zeros(d + 1);
        covector[d] = 1.0;
        Self::new(covector).expect("standard covector is valid")
    }

    pub fn covector(&self) -> &DVector<f64> {
        &self.covector
    }

    /// Maps homogeneous coordinates to frame coordinates (last entry is l).
    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    pub fn frame_inv(&self) -> &DMatrix<f64> {
        &self.frame_inv
    }

    /// Chart dimension d.
    pub fn dim(&self) -> usize {
        self.covector.len() - 1
    }

    pub fn eval(&self, x: &DVector<f64>) -> f64 {
        self.covector.dot(x)
    }

    /// Chart coordinates of homogeneous coordinates `x`.
    pub fn to_chart_vec(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.covector.len() {
            return Err(Error::DimensionMismatch {
                expected: self.covector.len(),
                got: x.len(),
            });
        }
        let y = &self.frame * x;
        let d = self.dim();
        let w = y[d];
        if w.abs() <= 1e-14 * x.norm() {
            return Err(Error::ChartViolation(w));
        }
        Ok(y.rows(0, d) / w)
    }

    pub fn to_chart(&self, p: &ProjPoint) -> Result<DVector<f64>> {
        self.to_chart_vec(p.coords())
    }

    /// Homogeneous lift of a chart point, normalized so that l = 1.
    pub fn lift(&self, u: &DVector<f64>) -> DVector<f64> {
        let d = self.dim();
        let mut y = DVector::zeros(d + 1);
        y.rows_mut(0, d).copy_from(u);
        y[d] = 1.0;
        &self.frame_inv * y
    }

    pub fn lift_point(&self, u: &DVector<f64>) -> ProjPoint {
        ProjPoint::new(self.lift(u)).expect("lift of a chart point is nonzero")
    }
}

/// Normalizes a matrix modulo scale: max-abs entry 1, first sizeable entry
/// (row-major) positive.
pub fn normalize_matrix(m: &DMatrix<f64>) -> DMatrix<f64> {
    let scale = m.amax();
    if scale == 0.0 || !scale.is_finite() {
        return m.clone();
    }
    let mut out = m / scale;
    let mut sign = 1.0;
    'outer: for i in 0..out.nrows() {
        for j in 0..out.ncols() {
            let v = out[(i, j)];
            if v.abs() > SIGN_EPS {
                sign = v.signum();
                break 'outer;
            }
        }
    }
    if sign < 0.0 {
        out.neg_mut();
    }
    out
}

/// An element of PGL(R^{d+1}), stored as a normalized matrix.
#[derive(Clone, Debug)]
pub struct ProjTransform {
    matrix: DMatrix<f64>,
    label: Option<String>,
}

impl ProjTransform {
    /// Validates invertibility of the normalized matrix.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() < 2 {
            return Err(Error::InvalidArgument(
                "transform matrix must be square of size >= 2".into(),
            ));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("transform matrix must be finite".into()));
        }
        let matrix = normalize_matrix(&matrix);
        let det = matrix.determinant();
        if !(det.abs() > tol::MIN_DET) {
            return Err(Error::SingularTransform(det));
        }
        Ok(ProjTransform {
            matrix,
            label: None,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("transform matrix must be square".into()));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::new(DMatrix::from_row_slice(n, n, &flat))
    }

    pub fn identity(n: usize) -> Self {
        ProjTransform {
            matrix: DMatrix::identity(n, n),
            label: Some("e".into()),
        }
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `self * other` as projective maps (apply `other` first).
    ///
    /// Products of invertible maps are invertible, so the determinant check
    /// is skipped: long words legitimately have tiny normalized determinants.
    pub fn compose(&self, other: &ProjTransform) -> ProjTransform {
        let label = match (self.label(), other.label()) {
            (Some("e"), l) | (l, Some("e")) => l.map(str::to_owned),
            (Some(a), Some(b)) => Some(format!("{a}{b}")),
            _ => None,
        };
        ProjTransform {
            matrix: normalize_matrix(&(&self.matrix * &other.matrix)),
            label,
        }
    }

    pub fn inverse(&self) -> Result<ProjTransform> {
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or(Error::SingularTransform(0.0))?;
        Ok(ProjTransform {
            matrix: normalize_matrix(&inv),
            label: None,
        })
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        if p.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.ambient_dim(),
            });
        }
        ProjPoint::new(&self.matrix * p.coords())
    }

    /// Largest entrywise difference between normalized matrices.
    pub fn distance(&self, other: &ProjTransform) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.matrix - &other.matrix).amax()
    }
}

impl PartialEq for ProjTransform {
    fn eq(&self, other: &Self) -> bool {
        self.distance(other) <= tol::EQUALITY
    }
}

/// Applies `g` to a projective point.
pub fn apply_transform(g: &ProjTransform, p: &ProjPoint) -> Result<ProjPoint> {
    g.apply(p)
}
