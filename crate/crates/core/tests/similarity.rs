mod common;

use common::*;
use proptest::prelude::*;
use qmorph_core::graph::Point;
use qmorph_core::similarity::{percent, sim_greedy};
use rand::seq::SliceRandom;

fn points(max: usize) -> impl Strategy<Value = (Vec<Point>, Vec<Point>)> {
    (1..=max).prop_flat_map(|n| {
        let pt = (0.0f64..1.0, 0.0f64..1.0).prop_map(Point::from);
        (prop::collection::vec(pt.clone(), n), prop::collection::vec(pt, n))
    })
}

#[test]
fn greedy_suboptimality_witness() {
    let x = [Point::new(0.0, 0.0), Point::new(2.0, 0.0)];
    let y = [Point::new(1.0, 0.0), Point::new(3.0, 0.0)];
    assert_eq!(sim_greedy(&x, &y).unwrap(), 2.0);
    // a different visiting order of the same points changes the loss
    let x_rev = [x[1], x[0]];
    assert_eq!(sim_greedy(&x_rev, &y).unwrap(), 4.0);
}

#[test]
fn hungarian_oracle_agrees_with_brute_force() {
    let mut r = rng(21);
    for n in 1..=6 {
        for _ in 0..20 {
            let x = random_drawing(n, &mut r).into_coords();
            let y = random_drawing(n, &mut r).into_coords();
            let h = optimal_assignment_cost(&x, &y);
            assert!((h - brute_force_assignment(&x, &y)).abs() < 1e-12);
        }
    }
}

proptest! {
    #[test]
    fn greedy_never_beats_optimal_assignment((x, y) in points(7)) {
        let greedy = sim_greedy(&x, &y).unwrap();
        prop_assert!(greedy >= optimal_assignment_cost(&x, &y) - 1e-12);
    }

    #[test]
    fn greedy_ignores_target_order((x, y) in points(40), seed in any::<u64>()) {
        let mut shuffled = y.clone();
        shuffled.shuffle(&mut rng(seed));
        prop_assert_eq!(sim_greedy(&x, &y).unwrap(), sim_greedy(&x, &shuffled).unwrap());
    }

    #[test]
    fn greedy_is_zero_on_permutations((_, y) in points(40), seed in any::<u64>()) {
        let mut x = y.clone();
        x.shuffle(&mut rng(seed));
        prop_assert_eq!(sim_greedy(&x, &y).unwrap(), 0.0);
    }

    #[test]
    fn percent_strictly_decreasing(base in 0.001f64..100.0, a in 0.0f64..200.0, b in 0.0f64..200.0) {
        prop_assume!(a < b);
        prop_assert!(percent(a, base).unwrap() > percent(b, base).unwrap());
    }
}
