//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use qmorph_core::graph::{Drawing, Graph, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random connected graph: a random spanning tree plus `extra` random edges.
pub fn random_connected_graph(n: usize, extra: usize, rng: &mut impl Rng) -> Graph {
    let mut edges = std::collections::BTreeSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.insert((u, v));
    }
    let max_edges = n * (n - 1) / 2;
    let target = (edges.len() + extra).min(max_edges);
    while edges.len() < target {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    Graph::new(n, edges).unwrap()
}

pub fn random_drawing(n: usize, rng: &mut impl Rng) -> Drawing {
    Drawing::new((0..n).map(|_| Point::new(rng.random(), rng.random())).collect()).unwrap()
}

pub fn floyd_warshall(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(a, b) in g.edges() {
        d[a][b] = 1.0;
        d[b][a] = 1.0;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Stress written straight from its definition: scale every coordinate by
/// `sum_{i!=j} |Xi-Xj|/dij / sum_{i!=j} |Xi-Xj|^2/dij^2`, then average the
/// squared relative residuals over unordered pairs.
pub fn naive_stress(x: &[Point], g: &Graph) -> f64 {
    let n = x.len();
    let d = floyd_warshall(g);
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let r = ((x[i].x - x[j].x).powi(2) + (x[i].y - x[j].y).powi(2)).sqrt();
                num += r / d[i][j];
                den += r * r / (d[i][j] * d[i][j]);
            }
        }
    }
    let s = num / den;
    let z: Vec<(f64, f64)> = x.iter().map(|p| (s * p.x, s * p.y)).collect();
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let r = ((z[i].0 - z[j].0).powi(2) + (z[i].1 - z[j].1).powi(2)).sqrt();
            total += (r - d[i][j]).powi(2) / (d[i][j] * d[i][j]);
        }
    }
    total / (n * (n - 1) / 2) as f64
}

pub fn naive_eld(x: &[Point], g: &Graph) -> f64 {
    let lens: Vec<f64> = g.edges().iter().map(|&(a, b)| x[a].dist(x[b])).collect();
    let mean = lens.iter().sum::<f64>() / lens.len() as f64;
    (lens.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / lens.len() as f64).sqrt()
}

/// Angular resolution deviation from pairwise `acos` angles: the smallest
/// angle at a node is the minimum over neighbor pairs of the angle between
/// them, which equals the smallest gap between consecutive edges.
pub fn naive_ar(x: &[Point], g: &Graph) -> f64 {
    let mut total = 0.0;
    let mut count = 0;
    for v in 0..g.node_count() {
        let nb = g.neighbors(v);
        if nb.len() < 2 {
            continue;
        }
        let mut smallest = f64::INFINITY;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                let (ax, ay) = (x[a].x - x[v].x, x[a].y - x[v].y);
                let (bx, by) = (x[b].x - x[v].x, x[b].y - x[v].y);
                let cos = (ax * bx + ay * by) / ((ax * ax + ay * ay).sqrt() * (bx * bx + by * by).sqrt());
                smallest = smallest.min(cos.clamp(-1.0, 1.0).acos());
            }
        }
        let ideal = std::f64::consts::TAU / nb.len() as f64;
        total += ((ideal - smallest) / ideal).abs();
        count += 1;
    }
    total / count as f64
}

fn orient(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i32 {
    let v = (b.0 - a.0) as i128 * (c.1 - a.1) as i128 - (b.1 - a.1) as i128 * (c.0 - a.0) as i128;
    v.signum() as i32
}

fn on_segment(a: (i64, i64), b: (i64, i64), p: (i64, i64)) -> bool {
    p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

/// Crossing count with exact integer orientation tests. Coordinates are
/// integers (a drawing scaled by a power of two).
pub fn exact_crossings(x: &[(i64, i64)], g: &Graph) -> u64 {
    let edges = g.edges();
    let mut count = 0;
    for i in 0..edges.len() {
        for j in (i + 1)..edges.len() {
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            if a == c || a == d || b == c || b == d {
                continue;
            }
            let (p1, p2, q1, q2) = (x[a], x[b], x[c], x[d]);
            if p1 == p2 || q1 == q2 {
                continue;
            }
            let (o1, o2) = (orient(p1, p2, q1), orient(p1, p2, q2));
            let (o3, o4) = (orient(q1, q2, p1), orient(q1, q2, p2));
            let hit = (o1 * o2 < 0 && o3 * o4 < 0)
                || (o1 == 0 && on_segment(p1, p2, q1))
                || (o2 == 0 && on_segment(p1, p2, q2))
                || (o3 == 0 && on_segment(q1, q2, p1))
                || (o4 == 0 && on_segment(q1, q2, p2));
            if hit {
                count += 1;
            }
        }
    }
    count
}

/// Optimal one-to-one assignment cost (Hungarian method).
pub fn optimal_assignment_cost(x: &[Point], y: &[Point]) -> f64 {
    let n = x.len();
    if n == 0 {
        return 0.0;
    }
    let cost = |i: usize, j: usize| x[i].dist(y[j]);
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut matched = vec![0usize; n + 1];
    for i in 1..=n {
        matched[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched[j0] = matched[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| cost(matched[j] - 1, j - 1)).sum()
}

/// Minimum assignment cost by trying every permutation.
pub fn brute_force_assignment(x: &[Point], y: &[Point]) -> f64 {
    fn go(i: usize, x: &[Point], y: &[Point], used: &mut Vec<bool>, acc: f64, best: &mut f64) {
        if i == x.len() {
            *best = best.min(acc);
            return;
        }
        for j in 0..y.len() {
            if !used[j] {
                used[j] = true;
                go(i + 1, x, y, used, acc + x[i].dist(y[j]), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(0, x, y, &mut vec![false; y.len()], 0.0, &mut best);
    best
}

/// Midranks of `v`.
pub fn midranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&a| {
            let below = v.iter().filter(|&&b| b < a).count() as f64;
            let equal = v.iter().filter(|&&b| b == a).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

/// Exact one-sided signed-rank p-value `P(W+ >= observed)` (or `<=` when
/// `greater` is false) over all sign assignments of the nonzero differences.
pub fn exact_wilcoxon(a: &[f64], b: &[f64], greater: bool) -> f64 {
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = midranks(&abs);
    let observed: f64 = diffs.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
    let n = diffs.len();
    let mut hits = 0u64;
    for mask in 0..(1u64 << n) {
        let w: f64 = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| ranks[k]).sum();
        let extreme = if greater { w >= observed - 1e-9 } else { w <= observed + 1e-9 };
        if extreme {
            hits += 1;
        }
    }
    hits as f64 / (1u64 << n) as f64
}

/// Exact one-sided rank-sum p-value over all splits of the pooled sample.
pub fn exact_mann_whitney(a: &[f64], b: &[f64], greater: bool) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let n1 = a.len();
    let observed: f64 = ranks[..n1].iter().sum();
    let total = pooled.len();
    let (mut hits, mut all) = (0u64, 0u64);
    for mask in 0..(1u64 << total) {
        if mask.count_ones() as usize != n1 {
            continue;
        }
        all += 1;
        let r: f64 = (0..total).filter(|k| mask >> k & 1 == 1).map(|k| ranks[k]).sum();
        let extreme = if greater { r >= observed - 1e-9 } else { r <= observed + 1e-9 };
        if extreme {
            hits += 1;
        }
    }
    hits as f64 / all as f64
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len() % 2 == 1 {
        s[m]
    } else {
        (s[m - 1] + s[m]) / 2.0
    }
}
