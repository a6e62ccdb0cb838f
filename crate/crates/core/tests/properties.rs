use depthkit::combinatorial::{halfspace_depth_2d, random_tukey_depth, simplicial_depth};
use depthkit::depth::{depth_from_outlyingness, depth_from_regions, outlyingness};
use depthkit::functional::{graph_depth, grid_depth, phi_depth, Curve, CurveFunctional, Evaluation, FunctionalSample};
use depthkit::geometry::{orient, Pt};
use depthkit::metric::{affine_invariant_l2_depth, l2_depth, mahalanobis_depth, projection_depth};
use depthkit::wm::{wm_region, wm_support_function, WeightScheme};
use depthkit::{ConvexRegion, DataCloud, DepthKind, DepthOptions, DepthValue, DirectionBudget, MomentEstimator};
use proptest::prelude::*;

fn cloud_strategy(min: usize, max: usize) -> impl Strategy<Value = DataCloud> {
    prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), min..=max)
        .prop_map(|v| DataCloud::new(v.into_iter().map(|(a, b)| vec![a, b]).collect()).unwrap())
}

fn point() -> impl Strategy<Value = Vec<f64>> {
    (-12.0..12.0f64, -12.0..12.0f64).prop_map(|(a, b)| vec![a, b])
}

fn schemes() -> impl Strategy<Value = WeightScheme> {
    prop_oneof![
        Just(WeightScheme::Zonoid),
        Just(WeightScheme::EchStar),
        Just(WeightScheme::Geometric)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outlyingness_inverts(x in 0.0..1e6f64) {
        let back = outlyingness(depth_from_outlyingness(x));
        prop_assert!((back - x).abs() <= 1e-9 * (1.0 + x));
    }

    #[test]
    fn depths_stay_in_unit_interval(cloud in cloud_strategy(4, 12), z in point()) {
        let opts = DepthOptions { seed: 1, directions: 50 };
        for kind in DepthKind::ALL {
            match kind.evaluate(&z, &cloud, &opts) {
                Ok(v) => prop_assert!((0.0..=1.0).contains(&v.get()), "{kind}"),
                // degenerate draws may be rejected, never accepted with a bad value
                Err(e) => prop_assert!(matches!(e.code(), "SINGULAR_SCATTER" | "ZERO_MAD"), "{kind}: {e}"),
            }
        }
    }

    #[test]
    fn wm_regions_are_nested_and_convex(cloud in cloud_strategy(2, 10), scheme in schemes()) {
        let grid = [0.1, 0.2, 0.35, 0.5, 0.7, 0.9, 1.0];
        let regions: Vec<(f64, ConvexRegion)> = grid
            .iter()
            .map(|&a| (a, wm_region(&cloud, &scheme, a).unwrap()))
            .collect();
        let tol = 1e-9 * cloud.scale();
        for w in regions.windows(2) {
            prop_assert!(w[0].1.contains_region(&w[1].1, tol));
        }
        for (_, r) in &regions {
            prop_assert!(r.is_strictly_convex(tol));
        }
        // the nested family reproduces a depth without complaint
        prop_assert!(depth_from_regions(&cloud.mean(), &regions).is_ok());
    }

    #[test]
    fn support_function_is_sublinear_and_nested(
        cloud in cloud_strategy(2, 10),
        scheme in schemes(),
        a in 0.0..std::f64::consts::TAU,
        b in 0.0..std::f64::consts::TAU,
    ) {
        let h = |alpha: f64, v: [f64; 2]| {
            let r = (v[0] * v[0] + v[1] * v[1]).sqrt();
            if r == 0.0 {
                return 0.0;
            }
            r * wm_support_function(&cloud, &scheme, alpha, &[v[0] / r, v[1] / r]).unwrap()
        };
        let p = [a.cos(), a.sin()];
        let q = [2.0 * b.cos(), 2.0 * b.sin()];
        let s = [p[0] + q[0], p[1] + q[1]];
        let tol = 1e-9 * cloud.scale();
        prop_assert!(h(0.5, s) <= h(0.5, p) + h(0.5, q) + tol);
        prop_assert!(h(0.8, p) <= h(0.4, p) + tol);
    }

    #[test]
    fn moment_twins_share_mahalanobis_depth(cloud in cloud_strategy(3, 10), z in point()) {
        // reflecting through the mean keeps mean and covariance
        let m = cloud.mean();
        let twin = cloud.map_points(|p| vec![2.0 * m[0] - p[0], 2.0 * m[1] - p[1]]).unwrap();
        if let (Ok(a), Ok(b)) = (
            mahalanobis_depth(&z, &cloud, &MomentEstimator),
            mahalanobis_depth(&z, &twin, &MomentEstimator),
        ) {
            prop_assert!((a.get() - b.get()).abs() < 1e-9);
        }
    }

    #[test]
    fn projection_depth_decreases_with_budget(cloud in cloud_strategy(4, 10), z in point()) {
        let small = projection_depth(&z, &cloud, 10, 4);
        let large = projection_depth(&z, &cloud, 200, 4);
        if let (Ok(s), Ok(l)) = (small, large) {
            prop_assert!(l.get() <= s.get());
        }
    }

    #[test]
    fn random_tukey_is_an_upper_bound(cloud in cloud_strategy(2, 15), z in point(), m in 1usize..300) {
        let exact = halfspace_depth_2d(&z, &cloud).unwrap().get();
        let approx = random_tukey_depth(&z, &cloud, DirectionBudget::new(m, 17)).unwrap().get();
        prop_assert!(approx >= exact);
    }

    #[test]
    fn moving_a_point_without_crossing_keeps_halfspace_depth(
        cloud in cloud_strategy(4, 10),
        z in point(),
        k in 0usize..10,
        t in 0.01..3.0f64,
    ) {
        let n = cloud.len();
        let k = k % n;
        let pts: Vec<Pt> = cloud.points().map(Pt::from_slice).collect();
        let zp = Pt::from_slice(&z);
        let from = pts[k];
        let to = from + (from - zp) * t;
        // a line through z and another point (or z and the moved point's own ray) that
        // separates old and new positions changes the count; skip those draws
        let crosses = pts.iter().enumerate().any(|(j, &x)| {
            j != k && x != zp && orient(zp, x, from).signum() != orient(zp, x, to).signum()
        });
        prop_assume!(!crosses && from != zp);
        let mut moved: Vec<Vec<f64>> = cloud.points().map(|p| p.to_vec()).collect();
        moved[k] = vec![to.x, to.y];
        let moved = DataCloud::new(moved).unwrap();
        prop_assert_eq!(
            halfspace_depth_2d(&z, &cloud).unwrap(),
            halfspace_depth_2d(&z, &moved).unwrap()
        );
    }

    #[test]
    fn functional_depth_invariances(
        values in prop::collection::vec(prop::collection::vec(-5.0..5.0f64, 4), 5..9),
        query in prop::collection::vec(-5.0..5.0f64, 4),
        shift in prop::collection::vec(-5.0..5.0f64, 4),
        lambda in 0.1..10.0f64,
    ) {
        let grid = vec![0.0, 0.3, 0.6, 1.0];
        let curves: Vec<Curve> = values.iter().map(|v| Curve::scalar(v).unwrap()).collect();
        let sample = FunctionalSample::new(grid, curves).unwrap();
        let z = Curve::scalar(&query).unwrap();
        let b = Curve::scalar(&shift).unwrap();
        let opts = DepthOptions::default();
        let all = [0, 1, 2, 3];
        let base = graph_depth(&z, &sample, DepthKind::Halfspace, &all, &opts).unwrap();

        let shifted = sample.map_curves(|c| c.combine(1.0, &b, 1.0)).unwrap();
        let zs = z.combine(1.0, &b, 1.0);
        prop_assert_eq!(graph_depth(&zs, &shifted, DepthKind::Halfspace, &all, &opts).unwrap(), base);

        let scaled = sample.map_curves(|c| c.combine(lambda, c, 0.0)).unwrap();
        let zl = z.combine(lambda, &z, 0.0);
        prop_assert_eq!(graph_depth(&zl, &scaled, DepthKind::Halfspace, &all, &opts).unwrap(), base);

        // larger T never increases graph depth
        let part = graph_depth(&z, &sample, DepthKind::Halfspace, &[1, 2], &opts).unwrap();
        prop_assert!(base.get() <= part.get());

        let budget = DirectionBudget::new(30, 2);
        let g = grid_depth(&z, &sample, &all, DepthKind::Halfspace, budget, &opts).unwrap();
        let gs = grid_depth(&zs, &shifted, &all, DepthKind::Halfspace, budget, &opts).unwrap();
        prop_assert_eq!(g, gs);

        // adding functionals never increases the depth
        let evals: Vec<Evaluation> = (0..4).map(Evaluation).collect();
        let refs: Vec<&dyn CurveFunctional> = evals.iter().map(|e| e as _).collect();
        let few = phi_depth(&z, &sample, &refs[..2], DepthKind::Halfspace, &opts).unwrap();
        let many = phi_depth(&z, &sample, &refs, DepthKind::Halfspace, &opts).unwrap();
        prop_assert!(many.depth.get() <= few.depth.get());
    }
}

#[test]
fn symmetric_clouds_are_deepest_at_the_center() {
    let cloud = DataCloud::new(vec![
        vec![-2.0, -1.0],
        vec![2.0, 1.0],
        vec![1.0, -3.0],
        vec![-1.0, 3.0],
        vec![0.5, 0.5],
        vec![-0.5, -0.5],
    ])
    .unwrap();
    let opts = DepthOptions { seed: 3, directions: 500 };
    let grid: Vec<Vec<f64>> = (-8..=8)
        .flat_map(|i| (-8..=8).map(move |j| vec![i as f64 * 0.25, j as f64 * 0.25]))
        .collect();
    for kind in DepthKind::ALL {
        let f = kind.bind(&cloud, &opts).unwrap();
        let center = f.depth(&[0.0, 0.0]).unwrap().get();
        let best = grid
            .iter()
            .map(|z| f.depth(z).unwrap().get())
            .fold(0.0, f64::max);
        assert!(center >= best - 1e-6, "{kind}: center {center} < {best}");
    }
}

#[test]
fn affine_l2_reduces_to_l2_for_identity_covariance() {
    let r = std::f64::consts::SQRT_2;
    let cloud = DataCloud::new(vec![vec![r, 0.0], vec![-r, 0.0], vec![0.0, r], vec![0.0, -r]]).unwrap();
    for z in [[0.0, 0.0], [1.0, 2.0], [-3.0, 0.5]] {
        let a = affine_invariant_l2_depth(&z, &cloud, &MomentEstimator).unwrap().get();
        let b = l2_depth(&z, &cloud).unwrap().get();
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn square_corners_have_central_affine_l2_maximum() {
    let cloud = DataCloud::new(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0], vec![2.0, 2.0]]).unwrap();
    let center = affine_invariant_l2_depth(&[1.0, 1.0], &cloud, &MomentEstimator).unwrap().get();
    for i in 0..=20 {
        for j in 0..=20 {
            let z = [i as f64 * 0.1, j as f64 * 0.1];
            let v = affine_invariant_l2_depth(&z, &cloud, &MomentEstimator).unwrap().get();
            assert!(v <= center + 1e-15);
        }
    }
}

#[test]
fn simplicial_depth_separates_distinct_univariate_clouds() {
    let clouds: [&[f64]; 4] = [&[0.0, 1.0, 3.0], &[0.0, 1.5, 3.0], &[0.2, 1.0, 3.0, 4.1], &[0.0, 1.0, 3.0, 5.0]];
    // the depth functions may differ only at data points, so those are probed too
    let mut probes: Vec<f64> = (0..=40).map(|k| -1.0 + 0.175 * k as f64).collect();
    probes.extend(clouds.iter().flat_map(|c| c.iter().copied()));
    let profile = |pts: &[f64]| -> Vec<DepthValue> {
        let c = DataCloud::univariate(pts).unwrap();
        probes.iter().map(|&z| simplicial_depth(&[z], &c).unwrap()).collect()
    };
    for (i, a) in clouds.iter().enumerate() {
        for b in &clouds[i + 1..] {
            assert_ne!(profile(a), profile(b));
        }
    }
}

#[test]
fn constant_curves_collapse_to_multivariate_depths() {
    let values = [[0.0, 1.0], [2.0, 0.5], [1.0, 3.0], [-1.0, 2.0], [0.5, -1.0]];
    let k = 4;
    let grid: Vec<f64> = (0..k).map(|i| i as f64 / (k - 1) as f64).collect();
    let curves: Vec<Curve> = values.iter().map(|v| Curve::constant(k, v).unwrap()).collect();
    let sample = FunctionalSample::new(grid, curves).unwrap();
    let cloud = DataCloud::new(values.iter().map(|v| v.to_vec()).collect()).unwrap();
    let opts = DepthOptions::default();
    let z = [0.7, 1.1];
    let zc = Curve::constant(k, &z).unwrap();
    for base in [DepthKind::Halfspace, DepthKind::Mahalanobis, DepthKind::Zonoid, DepthKind::L2] {
        let multi = base.evaluate(&z, &cloud, &opts).unwrap().get();
        let g = graph_depth(&zc, &sample, base, &[0, 1, 2, 3], &opts).unwrap().get();
        let r = grid_depth(&zc, &sample, &[0, 2], base, DirectionBudget::new(1, 0), &opts).unwrap().get();
        assert!((g - multi).abs() <= 1e-12, "{base}");
        if base != DepthKind::L2 {
            // scaling by the sum of direction weights leaves affine invariant depths alone
            assert!((r - multi).abs() <= 1e-12, "{base}: {r} vs {multi}");
        }
    }
}
