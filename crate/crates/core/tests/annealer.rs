mod common;

use common::*;
use qmorph_core::anneal::{jitter, morph, AnnealConfig, Annealer, Tolerances};
use qmorph_core::graph::{force_layout, shortest_paths, Drawing, Graph};
use qmorph_core::metrics::{evaluate_one, MetricId, MetricSet};
use qmorph_core::shapes::{generate, ShapeLabel};
use rand::Rng;

fn band(id: MetricId, start: f64, tol: &Tolerances) -> f64 {
    match id {
        MetricId::Stress => tol.stress,
        MetricId::EdgeLengthDeviation => tol.edge_length_deviation,
        MetricId::AngularResolution => tol.angular_resolution,
        MetricId::CrossingNumber => (tol.crossing_fraction * start).floor(),
    }
}

#[test]
fn every_accepted_step_stays_within_tolerance() {
    let mut r = rng(31);
    let combos = MetricSet::all_combinations();
    for run in 0..8 {
        let n = r.random_range(12..40);
        let g = random_connected_graph(n, r.random_range(0..n), &mut r);
        let dist = shortest_paths(&g).unwrap();
        let start = force_layout(&g, 100, run).unwrap();
        let shape = ShapeLabel::BUILT_IN[run as usize % 6];
        let target = generate(shape, n).unwrap();
        let qm = combos[r.random_range(0..combos.len())];
        let cfg = AnnealConfig {
            n_max: 800,
            seed: run,
            ..Default::default()
        };
        let ids: Vec<MetricId> = qm.ids().collect();
        let base: Vec<f64> = ids.iter().map(|&id| evaluate_one(id, &g, &start, &dist).unwrap()).collect();
        let mut a = Annealer::new(&g, &dist, &start, &target, qm, &cfg).unwrap();
        let mut last = start.clone();
        loop {
            let more = a.step().unwrap();
            if a.current() != &last {
                for (&id, &b) in ids.iter().zip(&base) {
                    let v = evaluate_one(id, &g, a.current(), &dist).unwrap();
                    assert!((v - b).abs() <= band(id, b, &cfg.tolerances), "{id} drifted to {v} from {b}");
                }
                last = a.current().clone();
            }
            if !more {
                break;
            }
        }
    }
}

fn setup(n_side: usize) -> (Graph, qmorph_core::graph::DistanceMatrix, Drawing) {
    let g = Graph::grid(n_side, n_side).unwrap();
    let dist = shortest_paths(&g).unwrap();
    let start = force_layout(&g, 200, 5).unwrap();
    (g, dist, start)
}

#[test]
fn reruns_are_bit_identical() {
    let (g, dist, start) = setup(5);
    let target = generate(ShapeLabel::Dino, 25).unwrap();
    let cfg = AnnealConfig {
        n_max: 600,
        seed: 99,
        ..Default::default()
    };
    let qm: MetricSet = "ST-CN".parse().unwrap();
    let a = morph(&g, &dist, &start, &target, qm, &cfg).unwrap().to_json().unwrap();
    let b = morph(&g, &dist, &start, &target, qm, &cfg).unwrap().to_json().unwrap();
    assert_eq!(a, b);
}

#[test]
fn incremental_and_full_evaluation_make_the_same_decisions() {
    let (g, dist, start) = setup(6);
    let target = generate(ShapeLabel::X, 36).unwrap();
    for qm in ["ST-ELD-CN-AR", "AR", "CN-ELD"] {
        let qm: MetricSet = qm.parse().unwrap();
        let inc = AnnealConfig {
            n_max: 700,
            seed: 4,
            ..Default::default()
        };
        let full = AnnealConfig {
            incremental: false,
            ..inc.clone()
        };
        let a = morph(&g, &dist, &start, &target, qm, &inc).unwrap();
        let b = morph(&g, &dist, &start, &target, qm, &full).unwrap();
        assert_eq!(a.final_coords, b.final_coords);
        assert_eq!(a.trace.len(), b.trace.len());
        for (x, y) in a.trace.iter().zip(&b.trace) {
            assert_eq!((x.accepted, x.escape, x.loss), (y.accepted, y.escape, y.loss));
            if let (Some(u), Some(v)) = (&x.metrics, &y.metrics) {
                for (p, q) in u.iter().zip(v) {
                    assert!((p - q).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn loss_only_rises_through_escapes() {
    let (g, dist, start) = setup(5);
    let target = generate(ShapeLabel::O, 25).unwrap();
    let cfg = AnnealConfig {
        n_max: 1000,
        seed: 3,
        ..Default::default()
    };
    let res = morph(&g, &dist, &start, &target, "ELD".parse().unwrap(), &cfg).unwrap();
    let mut prev = res.summary.baseline_loss;
    let mut escapes = 0;
    for t in &res.trace {
        if t.accepted && !t.escape {
            assert!(t.loss < prev);
        }
        if !t.accepted {
            assert_eq!(t.loss, prev);
        }
        escapes += u64::from(t.escape);
        prev = t.loss;
    }
    assert_eq!(escapes, res.summary.escapes);
}

#[test]
fn unbounded_tolerances_do_at_least_as_well() {
    let (g, dist, start) = setup(6);
    let target = generate(ShapeLabel::Hor, 36).unwrap();
    let qm: MetricSet = "ST-ELD-CN-AR".parse().unwrap();
    let run = |tolerances: Tolerances| -> f64 {
        let finals: Vec<f64> = (0..5)
            .map(|seed| {
                let cfg = AnnealConfig {
                    n_max: 1500,
                    seed,
                    tolerances,
                    ..Default::default()
                };
                morph(&g, &dist, &start, &target, qm, &cfg).unwrap().summary.final_percent
            })
            .collect();
        median(&finals)
    };
    assert!(run(Tolerances::unbounded()) >= run(Tolerances::default()));
}

#[test]
fn zero_iterations_returns_start() {
    let (g, dist, start) = setup(4);
    let target = generate(ShapeLabel::Grid, 16).unwrap();
    let cfg = AnnealConfig {
        n_max: 0,
        ..Default::default()
    };
    let res = morph(&g, &dist, &start, &target, "ST".parse().unwrap(), &cfg).unwrap();
    assert_eq!(res.final_coords, start.coords());
    assert_eq!(res.summary.final_percent, 0.0);
    assert!(res.trace.is_empty());
}

#[test]
fn start_equal_to_target_is_already_done() {
    let g = Graph::grid(3, 3).unwrap();
    let dist = shortest_paths(&g).unwrap();
    let target = generate(ShapeLabel::Grid, 9).unwrap();
    let start = Drawing::new(target.points.clone()).unwrap();
    let res = morph(&g, &dist, &start, &target, "ELD".parse().unwrap(), &AnnealConfig::default()).unwrap();
    assert_eq!(res.summary.iterations, 0);
    assert_eq!(res.summary.final_percent, 100.0);
    assert_eq!(res.final_coords, start.coords());
}

#[test]
fn jitter_moves_a_bounded_subset() {
    let mut r = rng(5);
    let x = random_drawing(60, &mut r).into_coords();
    let y = random_drawing(60, &mut r).into_coords();
    let cfg = AnnealConfig::default();
    for _ in 0..200 {
        let p = jitter(&x, 0.5, f64::INFINITY, &y, &cfg, &mut r).unwrap();
        assert!((1..=4).contains(&p.moved.len()));
        for (k, (a, b)) in x.iter().zip(&p.coords).enumerate() {
            if p.moved.binary_search(&k).is_err() {
                assert_eq!(a, b);
            } else {
                assert!((a.x - b.x).abs() <= 0.5 / 25.0 + 1e-15 && (a.y - b.y).abs() <= 0.5 / 25.0 + 1e-15);
            }
        }
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let (g, dist, start) = setup(3);
    let target = generate(ShapeLabel::O, 9).unwrap();
    let bad = [
        AnnealConfig { t_final: 0.0, ..Default::default() },
        AnnealConfig { t_init: 0.0001, ..Default::default() },
        AnnealConfig { subset_divisor: 0, ..Default::default() },
        AnnealConfig { tolerances: Tolerances { stress: -1.0, ..Default::default() }, ..Default::default() },
    ];
    for cfg in bad {
        let err = morph(&g, &dist, &start, &target, "ST".parse().unwrap(), &cfg).unwrap_err();
        assert!(matches!(err, qmorph_core::Error::InvalidParameter(_)), "{err}");
    }
    let small = generate(ShapeLabel::O, 8).unwrap();
    assert!(morph(&g, &dist, &start, &small, "ST".parse().unwrap(), &AnnealConfig::default()).is_err());
}
