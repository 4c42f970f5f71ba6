//! Minimal SVG renderings of planar bodies and of Ω_f.

use std::f64::consts::TAU;
use std::fmt::Write;

use nalgebra::DVector;

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::omega_f::OmegaFShape;

const SIZE: f64 = 480.0;
const PAD: f64 = 20.0;

struct Frame {
    lo: [f64; 2],
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit(points: &[[f64; 2]], width: f64, height: f64) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let span_x = (hi[0] - lo[0]).max(1e-12);
        let span_y = (hi[1] - lo[1]).max(1e-12);
        let scale = ((width - 2.0 * PAD) / span_x).min((height - 2.0 * PAD) / span_y);
        Frame { lo, scale, height }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (
            PAD + (p[0] - self.lo[0]) * self.scale,
            self.height - PAD - (p[1] - self.lo[1]) * self.scale,
        )
    }

    fn polyline(&self, out: &mut String, pts: &[[f64; 2]], closed: bool, style: &str) {
        let tag = if closed { "polygon" } else { "polyline" };
        let coords: Vec<String> = pts
            .iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(out, r#"<{tag} points="{}" {style}/>"#, coords.join(" "));
    }

    fn dot(&self, out: &mut String, p: [f64; 2], r: f64, fill: &str) {
        let (x, y) = self.map(p);
        let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{r}" fill="{fill}"/>"#);
    }
}

fn xy(u: &DVector<f64>) -> [f64; 2] {
    [u[0], u[1]]
}

fn open(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// A planar body: boundary, optional limit points and shadow arcs.
pub fn body_svg(body: &ConvexBody, points: &[DVector<f64>], arcs: &[Vec<DVector<f64>>]) -> Result<String> {
    if body.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: body.dim(),
        });
    }
    let boundary: Vec<[f64; 2]> = match body.polytope() {
        Some(p) => {
            let verts: Vec<DVector<f64>> = p.vertices().to_vec();
            let c = p.centroid();
            let mut v: Vec<[f64; 2]> = verts.iter().map(xy).collect();
            v.sort_by(|a, b| {
                let ta = (a[1] - c[1]).atan2(a[0] - c[0]);
                let tb = (b[1] - c[1]).atan2(b[0] - c[0]);
                ta.total_cmp(&tb)
            });
            v
        }
        None => body.boundary_samples(720).iter().map(xy).collect(),
    };
    let frame = Frame::fit(&boundary, SIZE, SIZE);
    let mut out = open(SIZE, SIZE);
    frame.polyline(&mut out, &boundary, true, r#"fill="none" stroke="black" stroke-width="1""#);
    for arc in arcs {
        let pts: Vec<[f64; 2]> = arc.iter().map(xy).collect();
        for p in &pts {
            frame.dot(&mut out, *p, 2.5, "orange");
        }
    }
    for p in points {
        frame.dot(&mut out, xy(p), 1.5, "steelblue");
    }
    frame.dot(&mut out, xy(body.base_chart()), 2.0, "black");
    out.push_str("</svg>\n");
    Ok(out)
}

/// A vertical segment `{(cos t, sin t, z) : lo <= z <= hi}` to highlight.
#[derive(Clone, Copy, Debug)]
pub struct VerticalMark {
    pub theta: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Top view (the circle of angles, tall faces marked) beside a side view
/// (heights `±f` unrolled over one period, with highlighted segments).
pub fn omega_f_svg(shape: &OmegaFShape, marks: &[VerticalMark]) -> String {
    let f = shape.function();
    let width = 2.0 * SIZE;
    let mut out = open(width, SIZE);

    let base = f.values().iter().copied().fold(f64::INFINITY, f64::min);
    let circle: Vec<[f64; 2]> = shape.angles().iter().map(|t| [t.cos(), t.sin()]).collect();
    let top = Frame::fit(&[[-1.2, -1.2], [1.2, 1.2]], SIZE, SIZE);
    top.polyline(&mut out, &circle, true, r#"fill="none" stroke="black" stroke-width="1""#);
    for &t in shape.angles() {
        if f.eval(t) > base {
            top.dot(&mut out, [t.cos(), t.sin()], 3.0, "crimson");
        }
    }
    for m in marks {
        top.dot(&mut out, [m.theta.cos(), m.theta.sin()], 3.0, "orange");
    }

    let h = f.max_value();
    let side = Frame::fit(&[[0.0, -1.1 * h], [TAU, 1.1 * h]], SIZE, SIZE);
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for &t in shape.angles() {
        let (left, right) = f.one_sided(t);
        let v = f.eval(t);
        for z in [left, v, right] {
            upper.push([t, z]);
            lower.push([t, -z]);
        }
    }
    let shift = |s: &str| format!(r#"<g transform="translate({SIZE},0)">{s}</g>"#);
    let mut panel = String::new();
    side.polyline(&mut panel, &upper, false, r#"fill="none" stroke="black" stroke-width="1""#);
    side.polyline(&mut panel, &lower, false, r#"fill="none" stroke="black" stroke-width="1""#);
    for &t in shape.angles() {
        let v = f.eval(t);
        if v > base {
            side.polyline(&mut panel, &[[t, -v], [t, v]], false, r#"stroke="crimson" stroke-width="1""#);
        }
    }
    for m in marks {
        side.polyline(&mut panel, &[[m.theta, m.lo], [m.theta, m.hi]], false, r#"stroke="orange" stroke-width="3""#);
    }
    out.push_str(&shift(&panel));
    out.push_str("\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega_f::StepFunction;

    #[test]
    fn renders_are_deterministic() {
        let sq = ConvexBody::square(1.0).unwrap();
        let a = body_svg(&sq, &[DVector::from_vec(vec![1.0, 0.0])], &[]).unwrap();
        let b = body_svg(&sq, &[DVector::from_vec(vec![1.0, 0.0])], &[]).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg") && a.contains("<polygon"));
        assert!(body_svg(&ConvexBody::unit_ball(3), &[], &[]).is_err());
        let shape = OmegaFShape::build(StepFunction::constant(1.0).unwrap(), 64).unwrap();
        let s = omega_f_svg(&shape, &[VerticalMark { theta: 0.0, lo: -0.5, hi: 0.5 }]);
        assert!(s.contains("orange"));
    }
}
