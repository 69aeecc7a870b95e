mod common;

use common::*;
use hulllab::chain::{chain_vertex_count, exact_chain_var, simulate_chain_batch, ChainModel};
use hulllab::corners::decomposed_vertex_count;
use hulllab::floating_body::{v_value, wet_part_area};
use hulllab::geometry::{convex_hull, Point, Polygon};
use hulllab::sampling::{poisson_sample, RandomStream};
use hulllab::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn decomposition_matches_hull_on_poisson_square() {
    let sq = Polygon::unit_square();
    let root = RandomStream::new(20, 0);
    let (mut distinct, mut equal) = (0, 0);
    for r in 0..10_000 {
        let s = poisson_sample(&sq, 500.0, root.substream(r));
        match decomposed_vertex_count(&sq, &s.points) {
            Ok(c) => {
                distinct += 1;
                if c == convex_hull(&s.points).f0() {
                    equal += 1;
                }
            }
            Err(Error::CoincidentCorners { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
    assert_eq!(equal, distinct);
    assert!(distinct > 9_000, "only {distinct} configurations with distinct corners");
}

#[test]
fn hull_matches_oracle_on_many_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let n = rng.random_range(3..60);
        let pts: Vec<Point> = (0..n).map(|_| Point::new(rng.random(), rng.random())).collect();
        let mut ours = convex_hull(&pts).vertices().to_vec();
        sort_points(&mut ours);
        assert_eq!(ours, hull_oracle(&pts));
    }
}

#[test]
fn v_matches_fine_direction_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let p = random_polygon(&mut rng);
        let z = uniform_oracle(&p, &mut rng);
        let brute = brute_v(&p, z, 100_000);
        let v = v_value(&p, z).unwrap();
        assert!(v <= brute + 1e-12 && brute - v < 1e-6, "{v} vs {brute}");
    }
    let q = v_value(&Polygon::unit_square(), Point::new(0.25, 0.25)).unwrap();
    assert!((q - 0.125).abs() < 1e-6);
}

#[test]
fn square_wet_part_matches_closed_form() {
    // Near a corner of the unit square v(x, y) = 2xy.
    let d: f64 = 1e-2;
    let exact = 2.0 * d * (1.0 / d).ln() + 2.0 * d * (1.0 - 2f64.ln());
    let est = wet_part_area(&Polygon::unit_square(), d, RandomStream::new(4, 0), 400_000).unwrap();
    assert!((est.value - exact).abs() < 4.0 * est.stderr, "{est:?} vs {exact}");
}

#[test]
fn chain_extremes() {
    let s = simulate_chain_batch(ChainModel::Fixed(1), 500, RandomStream::new(1, 0)).unwrap();
    assert!(s.counts.iter().all(|&c| c == 3.0));
    assert_eq!(exact_chain_var(1).unwrap(), 0.0);
    assert!(chain_vertex_count(&[Point::new(0.5, 0.6)]).is_err());
    assert_eq!(chain_vertex_count(&[]).unwrap(), 2);
}

#[test]
fn chain_moments_match_oracle() {
    let s = simulate_chain_batch(ChainModel::Fixed(10), 50_000, RandomStream::new(3, 0)).unwrap();
    let (mean, var, se, se_var) = mean_var(&s.counts);
    assert!((mean - chain_mean_oracle(10)).abs() < 4.0 * se);
    assert!((var - chain_var_oracle(10)).abs() < 4.0 * se_var);
}
