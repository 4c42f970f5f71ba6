use hilbert_kit::facts::{
    check_face_in_scaled_ball, check_scaled_ball_in_ball_with_ratio, semicontinuity_probe,
    standard_semicontinuity_suite, BallRatio,
};
use hilbert_kit::faces::face_of_chart;
use hilbert_kit::{extended_distance, ClosurePoint, ConvexBody, Error, ExtendedDistance};
use nalgebra::DVector;
use proptest::prelude::*;

fn cube() -> ConvexBody {
    let pts = (0..8)
        .map(|i| {
            DVector::from_vec(vec![
                (i & 1) as f64 * 2.0 - 1.0,
                ((i >> 1) & 1) as f64 * 2.0 - 1.0,
                ((i >> 2) & 1) as f64 * 2.0 - 1.0,
            ])
        })
        .collect();
    ConvexBody::hull(pts).unwrap()
}

/// Boundary points of the cube on a coarse lattice: vertices, edges, facets.
fn cube_boundary_points() -> Vec<DVector<f64>> {
    let vals = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let mut out = Vec::new();
    for &a in &vals {
        for &b in &vals {
            for &c in &vals {
                let p = DVector::from_vec(vec![a, b, c]);
                if p.amax() == 1.0 {
                    out.push(p);
                }
            }
        }
    }
    out
}

#[test]
fn face_membership_is_symmetric() {
    let body = cube();
    let pts = cube_boundary_points();
    let faces: Vec<_> = pts.iter().map(|p| face_of_chart(&body, p).unwrap()).collect();
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            assert_eq!(faces[i].same_face(&faces[j]), faces[j].same_face(&faces[i]));
        }
    }
    // a face dimension per stratum: 0 at vertices, 1 on edges, 2 on facets
    for (p, f) in pts.iter().zip(&faces) {
        let ones = p.iter().filter(|v| v.abs() == 1.0).count();
        assert_eq!(f.dim(), 3 - ones, "{p:?}");
    }
}

#[test]
fn extended_distance_is_symmetric_and_infinite_across_faces() {
    let body = cube();
    let pts = cube_boundary_points();
    let located: Vec<_> = pts
        .iter()
        .map(|p| ClosurePoint::locate_chart(&body, p).unwrap())
        .collect();
    for x in &located {
        for y in &located {
            let a = extended_distance(&body, x, y).unwrap();
            let b = extended_distance(&body, y, x).unwrap();
            match (a, b) {
                (ExtendedDistance::Finite(a), ExtendedDistance::Finite(b)) => assert!((a - b).abs() < 1e-12),
                (ExtendedDistance::Infinite, ExtendedDistance::Infinite) => {}
                _ => panic!("asymmetric extended distance"),
            }
            let same = x.face().unwrap().same_face(y.face().unwrap());
            assert_eq!(a.is_finite(), same || (x.chart() - y.chart()).norm() == 0.0);
        }
    }
    let interior = ClosurePoint::locate_chart(&body, &DVector::zeros(3)).unwrap();
    assert!(!extended_distance(&body, &interior, &located[0]).unwrap().is_finite());
}

#[test]
fn square_edge_examples() {
    let sq = ConvexBody::square(1.0).unwrap();
    let x = ClosurePoint::locate_chart(&sq, &DVector::from_vec(vec![1.0, 0.0])).unwrap();
    let r = 0.5 * 3f64.ln();
    let face = check_face_in_scaled_ball(&sq, &x, r, 200).unwrap();
    assert!(face.pass);
    assert!((face.ratio - 4.0).abs() < 1e-12);
    let tight = check_scaled_ball_in_ball_with_ratio(&sq, &x, r, 3f64.ln(), 200, BallRatio::Tight).unwrap();
    assert!(tight.pass && (tight.ratio - 4.0 / 3.0).abs() < 1e-12);
    let vertex = ClosurePoint::locate_chart(&sq, &DVector::from_vec(vec![1.0, 1.0])).unwrap();
    assert!(matches!(check_face_in_scaled_ball(&sq, &vertex, r, 10), Err(Error::ExtremalAnchor)));
}

#[test]
fn lower_semicontinuity_on_the_standard_suite() {
    for (name, body, seqs) in standard_semicontinuity_suite().unwrap() {
        let report = semicontinuity_probe(&body, &seqs, 1e-6).unwrap();
        assert!(report.pass, "{name}: {:?}", report.rows);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tight_ball_ratio_always_contains(z in -0.9f64..0.9, r in 0.05f64..1.5, gap in 0.05f64..2.0) {
        let sq = ConvexBody::square(1.0).unwrap();
        let x = ClosurePoint::locate_chart(&sq, &DVector::from_vec(vec![1.0, z])).unwrap();
        let rep = check_scaled_ball_in_ball_with_ratio(&sq, &x, r, r + gap, 64, BallRatio::Tight).unwrap();
        prop_assert!(rep.pass, "{:?}", rep);
    }

    #[test]
    fn face_statement_holds_on_cube_facets(a in -0.8f64..0.8, b in -0.8f64..0.8, r in 0.05f64..2.0) {
        let body = cube();
        let x = ClosurePoint::locate_chart(&body, &DVector::from_vec(vec![a, 1.0, b])).unwrap();
        let rep = check_face_in_scaled_ball(&body, &x, r, 64).unwrap();
        prop_assert!(rep.pass, "{:?}", rep);
    }
}
