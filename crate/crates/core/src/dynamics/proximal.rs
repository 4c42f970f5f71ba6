//! Proximal transformations and their attracting fixed points.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::projective::{ProjPoint, ProjTransform};
use crate::tol;

/// Largest acceptable condition number of the dominant eigenvalue; beyond
/// it the top eigenvalue is treated as part of a Jordan block.
const MAX_EIGEN_CONDITION: f64 = 1e8;

#[derive(Clone, Debug, Serialize)]
pub struct ProximalityReport {
    pub is_proximal: bool,
    pub top_modulus: f64,
    pub second_modulus: f64,
    /// `second_modulus / top_modulus`.
    pub gap: f64,
    pub attracting: Option<ProjPoint>,
    /// Fixed-point residual of `attracting` in the projective metric.
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl ProximalityReport {
    fn rejected(top: f64, second: f64, reason: &str) -> Self {
        ProximalityReport {
            is_proximal: false,
            top_modulus: top,
            second_modulus: second,
            gap: if top > 0.0 { second / top } else { 1.0 },
            attracting: None,
            residual: f64::NAN,
            reason: Some(reason.into()),
        }
    }
}

/// Unit vector spanning the (numerical) kernel of `m`.
fn null_vector(m: &DMatrix<f64>) -> DVector<f64> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let k = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("nonempty");
    v_t.row(k).transpose()
}

/// Refines an eigenvector of the simple eigenvalue `lambda` by inverse
/// iteration with a slightly shifted pole.
fn refine(g: &DMatrix<f64>, lambda: f64, mut v: DVector<f64>) -> DVector<f64> {
    let n = g.nrows();
    let shift = lambda * (1.0 + 1e-10);
    let lu = (g - DMatrix::identity(n, n) * shift).lu();
    for _ in 0..6 {
        let res = (g * &v - &v * lambda).norm() / lambda.abs();
        if res <= 1e-14 {
            break;
        }
        match lu.solve(&v) {
            Some(w) if w.norm().is_finite() && w.norm() > 0.0 => v = w.normalize(),
            _ => break,
        }
    }
    v
}

/// Decides whether `g` has a real, simple, strictly dominant eigenvalue and
/// returns its eigenline.
pub fn proximality(g: &ProjTransform) -> ProximalityReport {
    let m = g.matrix();
    let n = m.nrows();
    let mut eig: Vec<_> = m.clone().complex_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let top = eig[0].norm();
    let second = eig.get(1).map(|z| z.norm()).unwrap_or(0.0);
    if !(top > 0.0) {
        return ProximalityReport::rejected(top, second, "zero spectral radius");
    }
    if eig[0].im.abs() > 1e-12 * top {
        return ProximalityReport::rejected(top, second, "dominant eigenvalue is not real");
    }
    if second / top > 1.0 - tol::PROXIMAL_GAP {
        return ProximalityReport::rejected(top, second, "dominant eigenvalue is not strictly dominant");
    }
    let lambda = eig[0].re;
    let shifted = m - DMatrix::identity(n, n) * lambda;
    let right = refine(m, lambda, null_vector(&shifted));
    let left = refine(&m.transpose(), lambda, null_vector(&shifted.transpose()));
    let overlap = left.dot(&right).abs();
    if !(overlap * MAX_EIGEN_CONDITION > 1.0) {
        return ProximalityReport::rejected(top, second, "dominant eigenvalue is defective");
    }
    let p = match ProjPoint::new(right) {
        Ok(p) => p,
        Err(_) => return ProximalityReport::rejected(top, second, "eigenvector computation failed"),
    };
    let residual = g.apply(&p).map(|q| q.distance(&p)).unwrap_or(f64::INFINITY);
    ProximalityReport {
        is_proximal: true,
        top_modulus: top,
        second_modulus: second,
        gap: second / top,
        attracting: Some(p),
        residual,
        reason: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_examples() {
        let r = proximality(&ProjTransform::diagonal(&[3.0, 1.0, 1.0]).unwrap());
        assert!(r.is_proximal);
        assert!((r.gap - 1.0 / 3.0).abs() < 1e-12);
        assert!(r.attracting.unwrap().approx_eq(&ProjPoint::from_slice(&[1.0, 0.0, 0.0]).unwrap(), 1e-12));
        assert!(!proximality(&ProjTransform::diagonal(&[2.0, 2.0, 1.0]).unwrap()).is_proximal);
    }

    #[test]
    fn rotation_block_is_not_proximal() {
        let c = std::f64::consts::FRAC_PI_4.cos();
        let g = ProjTransform::from_rows(&[vec![c, -c, 0.0], vec![c, c, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert!(!proximality(&g).is_proximal);
    }

    #[test]
    fn jordan_block_is_not_proximal() {
        let g = ProjTransform::from_rows(&[vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert!(!proximality(&g).is_proximal);
    }

    #[test]
    fn attracting_point_is_fixed() {
        let g = ProjTransform::from_rows(&[vec![2.0, 1.0, 0.5], vec![0.3, 1.0, 0.2], vec![0.1, 0.4, 0.7]]).unwrap();
        let r = proximality(&g);
        assert!(r.is_proximal);
        assert!(r.residual <= 1e-9);
    }
}
