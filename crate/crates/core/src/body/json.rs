//! JSON descriptions of bodies.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{BodyKind, ConvexBody, Ellipsoid, HPolytope, HullBody};
use crate::error::{Error, Result};
use crate::omega_f::{OmegaFShape, StepFunction, StepFunctionSpec};
use crate::projective::{AffineChart, ProjPoint};

fn default_grid() -> usize {
    720
}

/// A body as read from a configuration file. `chart` is a covector on
/// `R^{d+1}` (default `x_{d+1}`), `base` a homogeneous interior point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Hpolytope {
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        chart: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<Vec<f64>>,
    },
    Ellipsoid {
        center: Vec<f64>,
        shape: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        chart: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<Vec<f64>>,
    },
    Hull {
        points: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        chart: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<Vec<f64>>,
    },
    Omegaf {
        spec: StepFunctionSpec,
        #[serde(default = "default_grid")]
        grid_n: usize,
    },
}

fn matrix(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    if rows.is_empty() || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidBody(format!("{what} must be a nonempty rectangular matrix")));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

fn chart_and_base(d: usize, chart: &Option<Vec<f64>>, base: &Option<Vec<f64>>) -> Result<(AffineChart, Option<ProjPoint>)> {
    let chart = match chart {
        Some(c) => {
            if c.len() != d + 1 {
                return Err(Error::DimensionMismatch {
                    expected: d + 1,
                    got: c.len(),
                });
            }
            AffineChart::new(DVector::from_column_slice(c))?
        }
        None => AffineChart::standard(d),
    };
    let base = match base {
        Some(p) => {
            if p.len() != d + 1 {
                return Err(Error::DimensionMismatch {
                    expected: d + 1,
                    got: p.len(),
                });
            }
            Some(ProjPoint::from_slice(p)?)
        }
        None => None,
    };
    Ok((chart, base))
}

impl BodySpec {
    pub fn build(&self) -> Result<ConvexBody> {
        match self {
            BodySpec::Hpolytope { a, b, chart, base } => {
                let a = matrix(a, "a")?;
                if b.len() != a.nrows() {
                    return Err(Error::DimensionMismatch {
                        expected: a.nrows(),
                        got: b.len(),
                    });
                }
                let (chart, base) = chart_and_base(a.ncols(), chart, base)?;
                let poly = HPolytope::from_halfspaces(a, DVector::from_column_slice(b))?;
                ConvexBody::new(BodyKind::HPolytope(poly), chart, base)
            }
            BodySpec::Ellipsoid {
                center,
                shape,
                chart,
                base,
            } => {
                let shape = matrix(shape, "shape")?;
                let (chart, base) = chart_and_base(center.len(), chart, base)?;
                let e = Ellipsoid::new(DVector::from_column_slice(center), shape)?;
                ConvexBody::new(BodyKind::Ellipsoid(e), chart, base)
            }
            BodySpec::Hull { points, chart, base } => {
                let pts: Vec<DVector<f64>> = points.iter().map(|p| DVector::from_column_slice(p)).collect();
                let d = pts.first().map(|p| p.len()).unwrap_or(0);
                if d == 0 || pts.iter().any(|p| p.len() != d) {
                    return Err(Error::InvalidBody("hull points must share a positive dimension".into()));
                }
                let (chart, base) = chart_and_base(d, chart, base)?;
                ConvexBody::new(BodyKind::Hull(HullBody::new(pts)?), chart, base)
            }
            BodySpec::Omegaf { spec, grid_n } => {
                let f = StepFunction::from_spec(spec)?;
                OmegaFShape::build(f, *grid_n)?.into_body()
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidBody(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let sq = BodySpec::from_json(r#"{"kind":"hpolytope","a":[[1,0],[-1,0],[0,1],[0,-1]],"b":[1,1,1,1]}"#)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(sq.polytope().unwrap().vertices().len(), 4);
        let disk = BodySpec::from_json(r#"{"kind":"ellipsoid","center":[0,0],"shape":[[1,0],[0,1]]}"#)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(disk.kind().name(), "ellipsoid");
        let tri = BodySpec::from_json(r#"{"kind":"hull","points":[[0,0],[1,0],[0,1],[0.2,0.2]]}"#)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(tri.polytope().unwrap().num_facets(), 3);
        let om = BodySpec::from_json(r#"{"kind":"omegaf","spec":{"values":[1.0]},"grid_n":64}"#)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(om.dim(), 3);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(BodySpec::from_json(r#"{"kind":"hull","points":[[0,0]],"extra":1}"#).is_err());
        assert!(BodySpec::from_json(r#"{"kind":"sphere"}"#).is_err());
    }
}
