//! Example groups: triangle reflection groups and the diagonal lattice on
//! the simplex, plus the JSON group description.

use std::collections::HashSet;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::limit_set::invariance_defect;
use super::proximal::proximality;
use super::words::{enumerate_words, DEFAULT_NODE_CAP};
use crate::body::{BodyKind, ConvexBody, HullBody};
use crate::error::{Error, Result};
use crate::projective::{AffineChart, ProjPoint, ProjTransform};

/// Word length whose attracting points span the reflection-group body.
pub const TRIANGLE_BUILD_LENGTH: usize = 10;

/// Boundary samples used when measuring how well generators preserve a body.
pub const DEFECT_SAMPLES: usize = 256;

/// A finitely generated group together with a body it preserves.
#[derive(Clone, Debug)]
pub struct GroupExample {
    pub id: String,
    pub generators: Vec<ProjTransform>,
    pub involutions: Vec<bool>,
    pub body: ConvexBody,
    /// Largest boundary defect of the generators on `body`.
    pub invariance_defect: f64,
}

impl GroupExample {
    /// Tolerance for the invariance check: the measured defect with a
    /// factor two of headroom, and never below `1e-6`.
    pub fn invariance_tol(&self) -> f64 {
        (2.0 * self.invariance_defect).max(1e-6)
    }
}

/// Order of a product of two generators; `None` stands for infinity.
pub type Order = Option<u32>;

fn cos_pi_over(m: Order) -> f64 {
    match m {
        Some(m) => (PI / m as f64).cos(),
        None => 1.0,
    }
}

/// Cartan matrix with `A_ii = 2`, `A_ij A_ji = 4 cos^2(pi/m_ij)` and the
/// (1,2) entry split asymmetrically by `t`.
pub fn triangle_cartan(m12: Order, m13: Order, m23: Order, t: f64) -> DMatrix<f64> {
    let (c12, c13, c23) = (cos_pi_over(m12), cos_pi_over(m13), cos_pi_over(m23));
    DMatrix::from_row_slice(
        3,
        3,
        &[
            2.0,
            -2.0 * t * c12,
            -2.0 * c13,
            -2.0 / t * c12,
            2.0,
            -2.0 * c23,
            -2.0 * c13,
            -2.0 * c23,
            2.0,
        ],
    )
}

/// Reflections `s_i = I - e_i a_i^T`, with `a_i` the i-th row of `cartan`.
pub fn reflections(cartan: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
    let n = cartan.nrows();
    (0..n)
        .map(|i| {
            let mut s = DMatrix::identity(n, n);
            for j in 0..n {
                s[(i, j)] -= cartan[(i, j)];
            }
            s
        })
        .collect()
}

/// Unit vectors of the orbit of `p` under words of length at most `max_len`
/// in the linear maps `gens`, signs kept.
fn linear_orbit(gens: &[DMatrix<f64>], p: &DVector<f64>, max_len: usize) -> Vec<DVector<f64>> {
    let key = |v: &DVector<f64>| -> Vec<i64> { v.iter().map(|x| (x * 1e8).round() as i64).collect() };
    let start = p.normalize();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(key(&start));
    let mut orbit = vec![start.clone()];
    let mut frontier = vec![start];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for v in &frontier {
            for g in gens {
                let w = (g * v).normalize();
                if seen.insert(key(&w)) {
                    orbit.push(w.clone());
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    orbit
}

fn parse_order(m: Order) -> Result<f64> {
    match m {
        Some(m) if m < 2 => Err(Error::InvalidArgument(format!("edge orders must be >= 2, got {m}"))),
        Some(m) => Ok(1.0 / m as f64),
        None => Ok(0.0),
    }
}

/// A rank-three reflection group of hyperbolic type with its divisible
/// body, approximated by the hull of the attracting points of all proximal
/// words of length at most [`TRIANGLE_BUILD_LENGTH`].
pub fn build_triangle_reflection_group(m12: Order, m13: Order, m23: Order, t: f64) -> Result<GroupExample> {
    let angle_sum = parse_order(m12)? + parse_order(m13)? + parse_order(m23)?;
    if angle_sum >= 1.0 {
        return Err(Error::NotHyperbolicType(angle_sum));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("deformation parameter must be positive, got {t}")));
    }
    let cartan = triangle_cartan(m12, m13, m23, t);
    let raw = reflections(&cartan);
    let lu = cartan.clone().lu();
    // interior point of the chamber {a_i <= 0}
    let base = -lu
        .solve(&DVector::from_element(3, 1.0))
        .ok_or(Error::SingularTransform(0.0))?;
    // the covector -(a_1 + a_2 + a_3) is positive on the chamber; it must
    // stay positive on the whole orbit
    let covector = -cartan.tr_mul(&DVector::from_element(3, 1.0));
    let orbit = linear_orbit(&raw, &base, TRIANGLE_BUILD_LENGTH);
    let worst = orbit.iter().map(|v| covector.dot(v)).fold(f64::INFINITY, f64::min);
    if !(worst > 0.0) {
        return Err(Error::ChartViolation(worst));
    }
    let chart = AffineChart::new(covector)?;

    let names = ["a", "b", "c"];
    let generators: Vec<ProjTransform> = raw
        .iter()
        .zip(names)
        .map(|(s, n)| ProjTransform::new(s.clone()).map(|g| g.with_label(n)))
        .collect::<Result<_>>()?;
    let involutions = vec![true; 3];
    let words = enumerate_words(&generators, TRIANGLE_BUILD_LENGTH, &involutions, DEFAULT_NODE_CAP)?;
    let mut points: Vec<DVector<f64>> = Vec::new();
    for w in &words {
        if let Some(p) = proximality(&w.transform).attracting {
            let u = chart.to_chart(&p)?;
            if !points.iter().any(|q| (q - &u).norm() <= 1e-10) {
                points.push(u);
            }
        }
    }
    if points.len() < 3 {
        return Err(Error::InvalidBody("too few attracting points to span a body".into()));
    }
    let base_point = ProjPoint::new(base)?;
    let body = ConvexBody::new(BodyKind::Hull(HullBody::new(points)?), chart, Some(base_point))?;
    let defect = invariance_defect(&body, &generators, DEFECT_SAMPLES);
    let label = |m: Order| m.map(|m| m.to_string()).unwrap_or_else(|| "inf".into());
    Ok(GroupExample {
        id: format!("triangle({},{},{};t={})", label(m12), label(m13), label(m23), t),
        generators,
        involutions,
        body,
        invariance_defect: defect,
    })
}

/// Chart norm of the farthest orbit point of the base point under words of
/// length at most `max_len`.
pub fn orbit_chart_radius(group: &GroupExample, max_len: usize) -> Result<f64> {
    let words = enumerate_words(&group.generators, max_len, &group.involutions, DEFAULT_NODE_CAP)?;
    let mut radius: f64 = 0.0;
    for w in &words {
        let p = w.transform.apply(group.body.base())?;
        let u = group.body.chart().to_chart(&p)?;
        radius = radius.max(u.norm());
    }
    Ok(radius)
}

/// The rank-two lattice generated by `diag(4,2,1)` and `diag(1,4,2)`
/// acting on the open 2-simplex.
pub fn build_simplex_diagonal_group() -> GroupExample {
    let generators = vec![
        ProjTransform::diagonal(&[4.0, 2.0, 1.0]).expect("invertible").with_label("a"),
        ProjTransform::diagonal(&[1.0, 4.0, 2.0]).expect("invertible").with_label("b"),
    ];
    let body = ConvexBody::simplex(2);
    let defect = invariance_defect(&body, &generators, DEFECT_SAMPLES);
    GroupExample {
        id: "simplex-diagonal".into(),
        generators,
        involutions: vec![false, false],
        body,
        invariance_defect: defect,
    }
}

/// Group description as read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    /// Row-major square matrices.
    pub generators: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    pub involutions: Vec<bool>,
    #[serde(default)]
    pub relations_hint: String,
}

impl GroupSpec {
    pub fn transforms(&self) -> Result<Vec<ProjTransform>> {
        if !self.involutions.is_empty() && self.involutions.len() != self.generators.len() {
            return Err(Error::DimensionMismatch {
                expected: self.generators.len(),
                got: self.involutions.len(),
            });
        }
        self.generators
            .iter()
            .enumerate()
            .map(|(i, rows)| {
                let g = ProjTransform::from_rows(rows)?;
                Ok(g.with_label(char::from(b'a' + (i % 26) as u8).to_string()))
            })
            .collect()
    }

    pub fn involution_flags(&self) -> Vec<bool> {
        if self.involutions.is_empty() {
            vec![false; self.generators.len()]
        } else {
            self.involutions.clone()
        }
    }
}
