use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use hilbert_kit::body::RayMethod;
use hilbert_kit::facts::closure_ball_sample;
use hilbert_kit::hausdorff::hausdorff;
use hilbert_kit::omega_f::*;
use hilbert_kit::sampling;
use hilbert_kit::{extended_distance, ClosurePoint, ConvexBody};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::Rng;

fn cyl(theta: f64, z: f64) -> DVector<f64> {
    DVector::from_vec(vec![theta.cos(), theta.sin(), z])
}

fn two_level() -> StepFunction {
    StepFunction::from_spec(&StepFunctionSpec {
        breakpoints: vec![1.0, 4.0],
        values: vec![2.5, 1.0],
        point_values: BTreeMap::new(),
    })
    .unwrap()
}

fn random_step<R: Rng>(rng: &mut R) -> StepFunction {
    let m = rng.random_range(2..6);
    let mut breakpoints: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..TAU)).collect();
    breakpoints.sort_by(f64::total_cmp);
    breakpoints.dedup_by(|a, b| (*a - *b).abs() < 0.2);
    if breakpoints.len() < 2 || breakpoints[0] + TAU - breakpoints[breakpoints.len() - 1] < 0.2 {
        breakpoints = vec![0.5, 3.5];
    }
    let values = breakpoints.iter().map(|_| rng.random_range(1.0..3.0)).collect();
    StepFunction::from_spec(&StepFunctionSpec {
        breakpoints,
        values,
        point_values: BTreeMap::new(),
    })
    .unwrap()
}

/// Generic extended distance between two heights at angle `theta` on the
/// plain polytope, measured at the boundary point radially below the
/// cylinder point.
fn generic_vertical(plain: &ConvexBody, theta: f64, z1: f64, z2: f64) -> f64 {
    let at = |z: f64| {
        let o = DVector::from_vec(vec![0.0, 0.0, z]);
        let v = DVector::from_vec(vec![theta.cos(), theta.sin(), 0.0]);
        let t = plain.ray_exit(&o, &v, RayMethod::Exact);
        ClosurePoint::locate_chart(plain, &(o + v * t)).unwrap()
    };
    extended_distance(plain, &at(z1), &at(z2)).unwrap().value()
}

fn worst_vertical_error(f: &StepFunction, grid_n: usize) -> f64 {
    let shape = OmegaFShape::build(f.clone(), grid_n).unwrap();
    let plain = shape.clone().into_body().unwrap().as_plain_polytope().unwrap();
    let step = TAU / grid_n as f64;
    let far_from_jumps = |t: f64| {
        f.breakpoints()
            .iter()
            .all(|&b| ((t - b).rem_euclid(TAU)).min((b - t).rem_euclid(TAU)) > 1.5 * step)
    };
    let mut thetas: Vec<f64> = shape.angles().iter().step_by(grid_n / 24).copied().collect();
    // cell interiors between grid angles
    thetas.extend((0..24).map(|k| (k as f64 + 0.37) * TAU / 24.0).filter(|&t| far_from_jumps(t)));
    let mut worst: f64 = 0.0;
    for t in thetas {
        let h = f.eval(t);
        for (a, b) in [(0.0, 0.5), (-0.9, 0.9), (0.2, 0.95), (-0.99, -0.3)] {
            let exact = vertical_face_distance(f, t, a * h, b * h).unwrap().value();
            worst = worst.max((exact - generic_vertical(&plain, t, a * h, b * h)).abs());
        }
    }
    worst
}

#[test]
fn exact_vertical_distance_matches_the_polytope() {
    for f in [StepFunction::constant(1.5).unwrap(), two_level()] {
        assert!(worst_vertical_error(&f, 720) <= 1e-4);
        assert!(worst_vertical_error(&f, 2880) <= 1e-5);
    }
}

#[test]
fn vertical_distance_scales_with_height() {
    for h in [1.0, 1.7, 3.0] {
        let f = StepFunction::constant(h).unwrap();
        let g = StepFunction::constant(2.0 * h).unwrap();
        for (a, b) in [(0.0, 0.3), (-0.5, 0.8)] {
            let d = vertical_face_distance(&f, 0.3, a * h, b * h).unwrap().value();
            let e = vertical_face_distance(&g, 0.3, 2.0 * a * h, 2.0 * b * h).unwrap().value();
            assert!((d - e).abs() < 1e-14);
        }
    }
    assert!(vertical_face_distance(&two_level(), 2.0, 0.0, 2.6).is_err());
}

#[test]
fn ball_heights_follow_the_tanh_law() {
    let f = two_level();
    let body = build_omega_f(&f, 720).unwrap();
    for theta in [0.0, 2.5, 5.0] {
        let h = f.eval(theta);
        let anchor = ClosurePoint::locate_chart(&body, &cyl(theta, 0.0)).unwrap();
        for r in [0.1, 0.7, 2.0, 5.0] {
            let ball = closure_ball_sample(&body, &anchor, r, 64).unwrap();
            let top = ball.iter().map(|p| p.chart()[2].abs()).fold(0.0, f64::max);
            assert!(top <= h * r.tanh() + 1e-8);
            assert!((top - h * r.tanh()).abs() <= 1e-8);
        }
    }
}

#[test]
fn faces_on_the_cylinder() {
    let f = two_level();
    let body = build_omega_f(&f, 720).unwrap();
    for theta in [0.0, 1.0, 2.5, 4.0] {
        let h = f.eval(theta);
        let end = hilbert_kit::faces::face_of_chart(&body, &cyl(theta, h)).unwrap();
        assert_eq!(end.dim(), 0);
        let mid = hilbert_kit::faces::face_of_chart(&body, &cyl(theta, 0.3 * h)).unwrap();
        assert_eq!(mid.dim(), 1);
        assert!((mid.diameter() - 2.0 * h).abs() < 1e-12);
    }
}

#[test]
fn grid_refinement_converges() {
    let f = two_level();
    let verts = |n: usize| -> Vec<DVector<f64>> {
        OmegaFShape::build(f.clone(), n).unwrap().hull().vertices().to_vec()
    };
    let (a, b, c) = (verts(180), verts(360), verts(720));
    let coarse = hausdorff(&a, &c);
    let fine = hausdorff(&b, &c);
    assert!(fine < coarse && coarse < 0.05);
}

fn grain(theta: f64, z: f64, r: f64, big_r: f64) -> GrainConfig {
    GrainConfig {
        theta,
        z,
        r,
        big_r,
        halfwidth: 0.1,
        delta: 1e-3,
        samples: 16,
        u_grid: 41,
    }
}

#[test]
fn grain_probe_on_the_constant_cylinder() {
    let f = StepFunction::constant(1.0).unwrap();
    let rep = grain_of_sand_probe(&f, &grain(0.0, 0.0, 0.3, 1.0)).unwrap();
    assert_eq!(rep.status, GrainStatus::Pass);
    assert!(rep.hypothesis_met && rep.covered == rep.checked);
    let ext = grain_of_sand_probe(&f, &grain(0.0, 1.0, 0.3, 1.0)).unwrap();
    assert_eq!(ext.status, GrainStatus::TrivialExtremal);
}

#[test]
fn grain_probe_at_a_jump() {
    let f = two_level();
    // the tall side at the breakpoint: the small ball pokes out of every
    // nearby short face
    let rep = grain_of_sand_probe(&f, &grain(1.0, 0.0, 0.9, 1.0)).unwrap();
    assert_eq!(rep.status, GrainStatus::HypothesisNotMet);
    assert!(rep.consistent());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn grain_probe_passes_at_almost_continuity_points(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let f = random_step(&mut rng);
        for theta in almost_continuity_points(&f, 1e-9) {
            let h = f.eval(theta);
            let z = rng.random_range(-0.5..0.5) * h;
            let r = rng.random_range(0.05..0.5);
            let rep = grain_of_sand_probe(&f, &grain(theta, z, r, r + 1.0)).unwrap();
            prop_assert_eq!(rep.status, GrainStatus::Pass, "{:?} at {}", f.to_spec(), theta);
        }
    }

    #[test]
    fn jump_anchors_never_report_a_violation(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let f = random_step(&mut rng);
        for &b in f.breakpoints() {
            let (l, r) = f.one_sided(b);
            if l == r {
                continue;
            }
            let rep = grain_of_sand_probe(&f, &grain(b, 0.0, 0.95, 1.0)).unwrap();
            prop_assert!(rep.consistent());
            let ratio = l.max(r) / l.min(r);
            if ratio * 0.95f64.tanh() > 1.0f64.tanh() {
                prop_assert_eq!(rep.status, GrainStatus::HypothesisNotMet);
            }
        }
    }
}

#[test]
fn angles_wrap() {
    assert!((wrap_angle(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
    assert_eq!(wrap_angle(TAU), 0.0);
}
