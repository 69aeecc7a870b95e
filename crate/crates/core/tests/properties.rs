mod common;

use common::*;
use hulllab::chain::{chain_vertex_count, exact_chain_mean, exact_chain_var, ANCHOR_RIGHT, ANCHOR_TOP};
use hulllab::corners::decomposed_vertex_count;
use hulllab::experiments::{ks_to_normal, predicted_moments, vervaat_check, Model};
use hulllab::floating_body::{v_value, v_value_exact};
use hulllab::geometry::{convex_hull, orient, Point, Polygon};
use hulllab::sampling::{binomial_sample, poisson_sample, RandomStream};
use hulllab::stats::summarize;
use hulllab::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point() -> impl Strategy<Value = Point> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(x, y)| Point::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hull_matches_extreme_point_oracle(points in prop::collection::vec(point(), 3..40)) {
        let mut ours = convex_hull(&points).vertices().to_vec();
        sort_points(&mut ours);
        prop_assert_eq!(ours, hull_oracle(&points));
    }

    #[test]
    fn hull_is_permutation_invariant(points in prop::collection::vec(point(), 3..30), seed: u64) {
        use rand::seq::SliceRandom;
        let mut shuffled = points.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(convex_hull(&points).f0(), convex_hull(&shuffled).f0());
    }

    #[test]
    fn orientation_symmetries(a in point(), b in point(), c in point()) {
        let s = orient(a, b, c).sign();
        prop_assert_eq!(s, orient(b, c, a).sign());
        prop_assert_eq!(s, orient(c, a, b).sign());
        prop_assert_eq!(s, -orient(b, a, c).sign());
        let naive = cross(a, b, c);
        if naive.abs() > 1e-9 {
            prop_assert_eq!(s, naive.signum() as i32);
        }
    }

    #[test]
    fn v_bounds_and_equivariance(seed: u64, s in 0.2f64..5.0, shift in point()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_polygon(&mut rng);
        let z = uniform_oracle(&p, &mut rng);
        let v = v_value_exact(&p, z).unwrap();
        prop_assert!(v >= 0.0 && v <= 0.5 * p.area() + 1e-12);
        prop_assert!(v <= brute_v(&p, z, 360) + 1e-12);
        prop_assert!((v_value(&p, z).unwrap() - v).abs() < 1e-9);
        let c = p.centroid();
        let q = p.scaled_about(c, s).translated(shift);
        let zq = Point::new(c.x + s * (z.x - c.x) + shift.x, c.y + s * (z.y - c.y) + shift.y);
        let vq = v_value_exact(&q, zq).unwrap();
        prop_assert!((vq - s * s * v).abs() <= 1e-9 * (1.0 + s * s * v));
    }

    #[test]
    fn chain_count_bounds(k in 1usize..200, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<Point> = (0..k).map(|_| canonical_triangle_point(&mut rng)).collect();
        let f0 = chain_vertex_count(&pts).unwrap();
        prop_assert!(f0 >= 3 && f0 <= k + 2);
        let mut with_anchors = pts.clone();
        with_anchors.push(ANCHOR_TOP);
        with_anchors.push(ANCHOR_RIGHT);
        prop_assert_eq!(f0, hull_oracle(&with_anchors).len());
    }

    #[test]
    fn chain_formulas_match_harmonic_oracle(k in 1u64..5000) {
        let (m, v) = (exact_chain_mean(k).unwrap(), exact_chain_var(k).unwrap());
        prop_assert!((m - chain_mean_oracle(k)).abs() < 1e-12);
        prop_assert!((v - chain_var_oracle(k)).abs() < 1e-12);
        prop_assert!(v >= 0.0);
        prop_assert!(exact_chain_mean(k + 1).unwrap() > m);
    }

    #[test]
    fn decomposition_identity(seed: u64, n in 5usize..400) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_polygon(&mut rng);
        let pts: Vec<Point> = (0..n).map(|_| uniform_oracle(&p, &mut rng)).collect();
        match decomposed_vertex_count(&p, &pts) {
            Ok(count) => prop_assert_eq!(count, hull_oracle(&pts).len()),
            Err(Error::CoincidentCorners { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn ks_affine_invariance(xs in prop::collection::vec(-10.0f64..10.0, 1..200), a in 0.1f64..10.0, b in -5.0f64..5.0, m in -2.0f64..2.0, s in 0.1f64..3.0) {
        let ys: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
        let k1 = ks_to_normal(&xs, m, s).unwrap();
        let k2 = ks_to_normal(&ys, a * m + b, a * s).unwrap();
        prop_assert!((k1 - k2).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&k1));
    }

    #[test]
    fn samplers_are_deterministic_and_contained(seed: u64, idx: u64, n in 1u64..500) {
        let p = Polygon::regular(5).unwrap();
        let stream = RandomStream::new(seed, idx);
        let a = binomial_sample(&p, n, stream);
        prop_assert_eq!(&a.points, &binomial_sample(&p, n, stream).points);
        prop_assert_eq!(a.points.len() as u64, n);
        prop_assert!(a.points.iter().all(|&q| inside_oracle(p.vertices(), q)));
        let b = poisson_sample(&p, n as f64, stream);
        prop_assert_eq!(&b.points, &poisson_sample(&p, n as f64, stream).points);
        let other = binomial_sample(&p, n, RandomStream::new(seed, idx.wrapping_add(1)));
        prop_assert_ne!(&a.points, &other.points);
    }

    #[test]
    fn summary_matches_naive(xs in prop::collection::vec(-100.0f64..100.0, 2..300)) {
        let s = summarize(&xs);
        let (mean, var, se, _) = mean_var(&xs);
        prop_assert!((s.mean - mean).abs() <= 1e-9 * (1.0 + mean.abs()));
        prop_assert!((s.variance - var).abs() <= 1e-9 * (1.0 + var));
        prop_assert!((s.stderr_mean - se).abs() <= 1e-9 * (1.0 + se));
    }

    #[test]
    fn polygon_orientation_is_normalized(seed: u64) {
        let p = random_polygon(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut rev = p.vertices().to_vec();
        rev.reverse();
        let q = Polygon::from_vertices(rev).unwrap();
        prop_assert!((q.area() - p.area()).abs() < 1e-12);
        prop_assert!((q.area() - shoelace(p.vertices())).abs() < 1e-12);
        prop_assert!((p.normalized_to_unit_area().area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn predicted_moments_are_affine_invariant(seed: u64, sx in 0.2f64..5.0, shear in -2.0f64..2.0, n in 10.0f64..1e7) {
        let p = random_polygon(&mut ChaCha8Rng::seed_from_u64(seed));
        let q = Polygon::new(p.vertices().iter().map(|v| Point::new(sx * v.x + shear * v.y, v.y)).collect()).unwrap();
        let a = predicted_moments(&p, n, Model::Binomial).unwrap();
        let b = predicted_moments(&q, n, Model::Poisson).unwrap();
        prop_assert!((a.mean - b.mean).abs() < 1e-9 && (a.variance - b.variance).abs() < 1e-9);
        let log_ratios: f64 = (0..p.len() as isize)
            .map(|i| (shoelace(&[p.vertex(i - 1), p.vertex(i), p.vertex(i + 1)]) / p.area()).ln())
            .sum();
        let (mean, var) = moment_expansion(p.len() as f64, log_ratios, n);
        prop_assert!((a.mean - mean).abs() < 1e-9 && (a.variance - var).abs() < 1e-9);
    }

    #[test]
    fn coupling_sums_obey_their_bounds(n in 1u64..2000, lp in -4.0f64..-0.5) {
        let p = 10f64.powf(lp);
        let r0 = vervaat_check(n, p, 0).unwrap();
        prop_assert!(r0.holds && r0.sum >= 0.0);
        let r2 = vervaat_check(n, p, 2).unwrap();
        prop_assert!(r2.sum <= r2.derived_bound);
        prop_assert!(r2.sum >= vervaat_check(n, p, 1).unwrap().sum);
    }
}
