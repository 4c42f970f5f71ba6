use hilbert_kit::dynamics::groups::{reflections, triangle_cartan};
use hilbert_kit::dynamics::probes::{default_radius_grid, random_interior};
use hilbert_kit::dynamics::*;
use hilbert_kit::hausdorff::hausdorff;
use hilbert_kit::sampling;
use hilbert_kit::{ConvexBody, ProjPoint, ProjTransform};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

fn options(group: &GroupExample) -> LimitSetOptions {
    LimitSetOptions {
        group_id: group.id.clone(),
        involutions: group.involutions.clone(),
        invariance_tol: group.invariance_tol(),
        ..LimitSetOptions::default()
    }
}

fn triangle(t: f64) -> GroupExample {
    build_triangle_reflection_group(Some(3), Some(3), Some(4), t).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn attracting_points_are_fixed_and_attract(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let m = DMatrix::from_fn(3, 3, |_, _| rng.random_range(-1.0..1.0));
        let Ok(g) = ProjTransform::new(m) else { return Ok(()); };
        let report = proximality(&g);
        if !report.is_proximal {
            return Ok(());
        }
        let p = report.attracting.clone().unwrap();
        prop_assert!(g.apply(&p).unwrap().distance(&p) <= 1e-9);
        if report.gap <= 0.9 {
            for _ in 0..32 {
                let mut x = ProjPoint::new(DVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0))).unwrap();
                for _ in 0..2000 {
                    x = g.apply(&x).unwrap();
                }
                prop_assert!(x.distance(&p) <= 1e-6, "{} from {:?}", x.distance(&p), report);
            }
        }
    }
}

#[test]
fn simplex_group_limit_set_saturates() {
    let g = build_simplex_diagonal_group();
    let samples = g.body.boundary_samples(720);
    let vertices: Vec<DVector<f64>> = g.body.polytope().unwrap().vertices().to_vec();
    for l in [1, 2, 3, 5] {
        let a = limit_set_approx(&g.body, &g.generators, l, &options(&g)).unwrap();
        let b = limit_set_approx(&g.body, &g.generators, 2 * l, &options(&g)).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(b.len(), 3);
        // the eigenvector oracle: the limit points are the vertices
        assert!(hausdorff(&a.chart_points(), &vertices) < 1e-12);
        assert_eq!(coverage_gap(&a, &samples).unwrap(), coverage_gap(&b, &samples).unwrap());
    }
}

#[test]
fn triangle_group_generators_are_involutions() {
    for t in [1.0, 2.0] {
        for s in reflections(&triangle_cartan(Some(3), Some(3), Some(4), t)) {
            assert!((&s * &s - DMatrix::<f64>::identity(3, 3)).amax() <= 1e-15);
        }
        let g = triangle(t);
        for s in &g.generators {
            assert!(s.compose(s).distance(&ProjTransform::identity(3)) < 1e-12);
        }
    }
}

#[test]
fn triangle_group_limit_sets() {
    let g = triangle(1.0);
    let samples = g.body.boundary_samples(720);
    let opts = options(&g);
    let mut previous: Option<LimitSetApprox> = None;
    let mut last_gap = f64::INFINITY;
    for l in 2..=10 {
        let lim = limit_set_approx(&g.body, &g.generators, l, &opts).unwrap();
        let gap = coverage_gap(&lim, &samples).unwrap_or(f64::INFINITY);
        assert!(gap <= last_gap, "gap increased at L = {l}");
        last_gap = gap;
        if let Some(prev) = &previous {
            assert!(lim.len() >= prev.len());
            // images of the shorter-word limit points are limit points of
            // conjugates, at most two letters longer
            for s in &g.generators {
                for p in &prev.points {
                    if p.word_length + 2 > l {
                        continue;
                    }
                    let q = s.apply(&p.point).unwrap();
                    assert!(lim.points.iter().any(|r| r.point.approx_eq(&q, 1e-7)), "L = {l}");
                }
            }
        }
        previous = Some(lim);
    }
}

#[test]
fn deformed_body_differs_and_orbits_stay_bounded() {
    let a = triangle(1.0);
    let b = triangle(2.0);
    let pa: Vec<DVector<f64>> = a.body.polytope().unwrap().vertices().to_vec();
    let pb: Vec<DVector<f64>> = b.body.polytope().unwrap().vertices().to_vec();
    assert!(hausdorff(&pa, &pb) > 1e-3);
    for g in [&a, &b] {
        let r = orbit_chart_radius(g, 8).unwrap();
        assert!(r.is_finite() && r <= g.body.bounding_radius() + 1e-9);
    }
}

#[test]
fn shadow_lemma_threshold_exists() {
    let g = triangle(1.0);
    let lim = limit_set_approx(&g.body, &g.generators, 8, &options(&g)).unwrap();
    let report = shadow_lemma_probe(&g.body, &lim, &default_radius_grid(), 40, 0).unwrap();
    assert!(report.pass());
    // tiny radii miss for generic pairs
    let tiny = shadow_lemma_probe(&g.body, &lim, &[1e-4], 40, 0).unwrap();
    assert!(tiny.rows[0].hits < 40);
}

#[test]
fn shadow_queries_agree_with_dense_sampling() {
    let body = ConvexBody::unit_ball(2);
    let mut rng = sampling::rng(2);
    let bnd = body.boundary_samples(97);
    for k in 0..200 {
        let x = random_interior(&body, &mut rng, 0.95);
        let y = random_interior(&body, &mut rng, 0.95);
        let xi = &bnd[k % bnd.len()];
        let r = rng.random_range(0.05..2.0);
        let q = ShadowQuery::from_chart(&body, &x, &y, r).unwrap();
        let res = shadow_contains(&body, &q, xi);
        let n = 10_000;
        let dense = (1..n)
            .map(|j| {
                let p = &x + (xi - &x) * (j as f64 / n as f64);
                hilbert_kit::metric::chart_distance(&body, &y, &p, Default::default())
            })
            .fold(f64::INFINITY, f64::min);
        assert!(res.min_distance <= dense + 1e-12);
        if (dense - r).abs() > 1e-3 {
            assert_eq!(res.contained, dense < r);
        }
    }
}

#[test]
fn stereographic_projection_on_a_polygon() {
    let g = triangle(1.0);
    let mut rng = sampling::rng(4);
    let mut done = 0;
    while done < 10 {
        let o = random_interior(&g.body, &mut rng, 0.9);
        let y = random_interior(&g.body, &mut rng, 0.9);
        let r = rng.random_range(0.1..1.0);
        match stereographic_consistency(&g.body, &o, &y, r, 64, 256, 1e-6) {
            Ok(rep) => {
                assert!(rep.pass, "{rep:?}");
                done += 1;
            }
            Err(hilbert_kit::Error::HypothesisViolated(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn word_counts() {
    let a = ProjTransform::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
    let b = ProjTransform::from_rows(&[vec![1.0, 0.0], vec![2.0, 1.0]]).unwrap();
    let n = enumerate_words(&[a, b], 4, &[false, false], 1 << 20).unwrap().len();
    assert_eq!(n, 1 + 4 + 12 + 36 + 108);
}
