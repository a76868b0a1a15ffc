//! Graphs, hop-count distances, drawings and start layouts.

use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected, unweighted simple graph with nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range
    /// endpoints. Edges are stored as `(min, max)` in input order.
    pub fn new(node_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidGraph("graph has no nodes".into()));
        }
        let mut seen = HashSet::new();
        let mut stored = Vec::new();
        let mut adjacency = vec![Vec::new(); node_count];
        let mut incident = vec![Vec::new(); node_count];
        for (a, b) in edges {
            if a >= node_count || b >= node_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) references a node outside 0..{node_count}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at node {a}")));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
            }
            incident[key.0].push(stored.len());
            incident[key.1].push(stored.len());
            adjacency[key.0].push(key.1);
            adjacency[key.1].push(key.0);
            stored.push(key);
        }
        Ok(Graph {
            node_count,
            edges: stored,
            adjacency,
            incident,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    /// Indices into [`Graph::edges`] of the edges touching `node`.
    pub fn incident_edges(&self, node: usize) -> &[usize] {
        &self.incident[node]
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.node_count as f64
    }

    pub fn is_connected(&self) -> bool {
        self.first_unreachable().is_none()
    }

    fn first_unreachable(&self) -> Option<usize> {
        let hops = bfs(&self.adjacency, 0);
        hops.iter().position(|h| *h == u32::MAX)
    }

    /// Path graph `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Result<Self> {
        Graph::new(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn complete(n: usize) -> Result<Self> {
        Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    /// Star with center `0` and `leaves` leaves.
    pub fn star(leaves: usize) -> Result<Self> {
        Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i)))
    }

    /// `rows x cols` lattice, node `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Graph::new(rows * cols, edges)
    }
}

fn bfs(adjacency: &[Vec<usize>], source: usize) -> Vec<u32> {
    let mut hops = vec![u32::MAX; adjacency.len()];
    let mut queue = VecDeque::new();
    hops[source] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        let next = hops[v] + 1;
        for &w in &adjacency[v] {
            if hops[w] == u32::MAX {
                hops[w] = next;
                queue.push_back(w);
            }
        }
    }
    hops
}

/// All-pairs hop counts of a connected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    hops: Vec<u32>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.hops[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.hops[i * self.n..(i + 1) * self.n]
    }
}

/// Breadth-first search from every node.
pub fn shortest_paths(g: &Graph) -> Result<DistanceMatrix> {
    let n = g.node_count();
    let rows = bfs_rows(g);
    let mut hops = Vec::with_capacity(n * n);
    for (i, row) in rows.into_iter().enumerate() {
        if let Some(j) = row.iter().position(|h| *h == u32::MAX) {
            return Err(Error::Disconnected(i, j));
        }
        hops.extend(row);
    }
    Ok(DistanceMatrix { n, hops })
}

#[cfg(feature = "parallel")]
fn bfs_rows(g: &Graph) -> Vec<Vec<u32>> {
    use rayon::prelude::*;
    (0..g.node_count())
        .into_par_iter()
        .map(|s| bfs(&g.adjacency, s))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn bfs_rows(g: &Graph) -> Vec<Vec<u32>> {
    (0..g.node_count()).map(|s| bfs(&g.adjacency, s)).collect()
}

/// Parameters of the dual Barabási–Albert generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualBaParams {
    pub n: usize,
    pub m1: usize,
    pub m2: usize,
    /// Probability that an arriving node attaches `m1` edges.
    pub p: f64,
}

impl Default for DualBaParams {
    /// Mean degree close to 2.46 at `n = 142`.
    fn default() -> Self {
        DualBaParams {
            n: 142,
            m1: 1,
            m2: 2,
            p: 0.76,
        }
    }
}

/// Dual Barabási–Albert preferential attachment graph.
///
/// Starts from a star on `max(m1, m2) + 1` nodes; each arriving node attaches
/// `m1` edges with probability `p` and `m2` edges otherwise, picking distinct
/// targets with probability proportional to degree.
pub fn dual_barabasi_albert(n: usize, m1: usize, m2: usize, p: f64, seed: u64) -> Result<Graph> {
    let m_max = m1.max(m2);
    if m1 == 0 || m2 == 0 || n <= m_max {
        return Err(Error::InvalidParameter(format!(
            "dual Barabasi-Albert needs n > max(m1, m2) >= min(m1, m2) >= 1, got n={n}, m1={m1}, m2={m2}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "attachment probability must lie in [0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = (1..=m_max).map(|leaf| (0, leaf)).collect();
    // one entry per unit of degree
    let mut repeated: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut targets = Vec::with_capacity(m_max);
    for source in (m_max + 1)..n {
        let m = if rng.random::<f64>() < p { m1 } else { m2 };
        targets.clear();
        while targets.len() < m {
            let candidate = repeated[rng.random_range(0..repeated.len())];
            if !targets.contains(&candidate) {
                targets.push(candidate);
            }
        }
        for &t in &targets {
            edges.push((t, source));
            repeated.push(t);
            repeated.push(source);
        }
    }
    let graph = Graph::new(n, edges)?;
    if let Some(j) = graph.first_unreachable() {
        return Err(Error::Disconnected(0, j));
    }
    Ok(graph)
}

/// A 2-D position.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    #[inline]
    pub fn dist_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

/// Node positions of a straight-line drawing; row `k` is node `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Drawing {
    coords: Vec<Point>,
}

impl Drawing {
    pub fn new(coords: Vec<Point>) -> Result<Self> {
        if let Some(k) = coords.iter().position(|p| !p.is_finite()) {
            return Err(Error::DegenerateDrawing(format!(
                "node {k} has a non-finite coordinate"
            )));
        }
        Ok(Drawing { coords })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Drawing::new(pairs.iter().copied().map(Point::from).collect())
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    #[cfg(test)]
    pub(crate) fn coords_mut(&mut self) -> &mut [Point] {
        &mut self.coords
    }

    pub fn into_coords(self) -> Vec<Point> {
        self.coords
    }

    /// Errors unless this drawing has one row per node of `g`.
    pub fn check_for(&self, g: &Graph) -> Result<()> {
        if self.len() != g.node_count() {
            return Err(Error::SizeMismatch {
                expected: g.node_count(),
                actual: self.len(),
            });
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(Point) -> Point) -> Result<Drawing> {
        Drawing::new(self.coords.iter().map(|p| f(*p)).collect())
    }

    pub fn segment(&self, edge: (usize, usize)) -> (Point, Point) {
        (self.coords[edge.0], self.coords[edge.1])
    }

    /// Uniformly rescales into `[0, 1]²`: the longer bounding-box side spans
    /// `[0, 1]` and the shorter one is centered.
    pub fn normalize(&self) -> Result<Drawing> {
        let Some(first) = self.coords.first() else {
            return Err(Error::DegenerateDrawing("empty drawing".into()));
        };
        let (mut min, mut max) = (*first, *first);
        for p in &self.coords {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        let (w, h) = (max.x - min.x, max.y - min.y);
        let extent = w.max(h);
        if extent <= 0.0 {
            return Err(Error::DegenerateDrawing("all nodes coincide".into()));
        }
        if is_normalized(min, max) {
            return Ok(self.clone());
        }
        let off_x = (1.0 - w / extent) / 2.0;
        let off_y = (1.0 - h / extent) / 2.0;
        self.map(|p| Point {
            x: ((p.x - min.x) / extent + off_x).clamp(0.0, 1.0),
            y: ((p.y - min.y) / extent + off_y).clamp(0.0, 1.0),
        })
    }
}

fn is_normalized(min: Point, max: Point) -> bool {
    const TOL: f64 = 1e-12;
    let centered = |lo: f64, hi: f64| lo >= 0.0 && hi <= 1.0 && (lo + hi - 1.0).abs() <= TOL;
    let spans = |lo: f64, hi: f64| lo == 0.0 && hi == 1.0;
    (spans(min.x, max.x) && centered(min.y, max.y)) || (spans(min.y, max.y) && centered(min.x, max.x))
}

/// Uniform random positions in the unit square.
pub fn random_layout(n: usize, seed: u64) -> Drawing {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Drawing {
        coords: (0..n)
            .map(|_| Point::new(rng.random(), rng.random()))
            .collect(),
    }
}

/// Fruchterman–Reingold spring embedder with linear cooling, normalized.
pub fn force_layout(g: &Graph, iterations: usize, seed: u64) -> Result<Drawing> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "force layout needs at least two nodes".into(),
        ));
    }
    let mut pos = random_layout(n, seed).coords;
    let k = (1.0 / n as f64).sqrt();
    let k2 = k * k;
    let t0 = 0.1;
    let mut disp = vec![Point::default(); n];
    for it in 0..iterations {
        let temp = t0 * (1.0 - it as f64 / iterations as f64);
        disp.iter_mut().for_each(|d| *d = Point::default());
        for i in 0..n {
            for j in (i + 1)..n {
                let mut dx = pos[i].x - pos[j].x;
                let mut dy = pos[i].y - pos[j].y;
                let mut d2 = dx * dx + dy * dy;
                if d2 < 1e-18 {
                    // nudge coincident pairs apart along a fixed direction
                    dx = 1e-6 * (1 + i % 7) as f64;
                    dy = 1e-6 * (1 + j % 5) as f64;
                    d2 = dx * dx + dy * dy;
                }
                let f = k2 / d2;
                disp[i].x += dx * f;
                disp[i].y += dy * f;
                disp[j].x -= dx * f;
                disp[j].y -= dy * f;
            }
        }
        for &(a, b) in g.edges() {
            let dx = pos[a].x - pos[b].x;
            let dy = pos[a].y - pos[b].y;
            let d = (dx * dx + dy * dy).sqrt();
            let f = d / k;
            disp[a].x -= dx * f;
            disp[a].y -= dy * f;
            disp[b].x += dx * f;
            disp[b].y += dy * f;
        }
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = (d.x * d.x + d.y * d.y).sqrt();
            if len > 0.0 {
                let step = len.min(temp) / len;
                p.x += d.x * step;
                p.y += d.y * step;
            }
        }
    }
    Drawing::new(pos)?.normalize()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn floyd_warshall(g: &Graph) -> Vec<Vec<u64>> {
        let n = g.node_count();
        let inf = u64::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0;
        }
        for &(a, b) in g.edges() {
            d[a][b] = 1;
            d[b][a] = 1;
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

    #[test]
    fn path_distances() {
        let d = shortest_paths(&Graph::path(3).unwrap()).unwrap();
        assert_eq!(d.get(0, 2), 2);
        assert_eq!(d.get(0, 1), 1);
        assert_eq!(d.get(2, 0), 2);
    }

    #[test]
    fn triangle_distances() {
        let d = shortest_paths(&Graph::complete(3).unwrap()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d.get(i, j), u32::from(i != j));
            }
        }
    }

    #[test]
    fn disconnected_is_an_error() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(shortest_paths(&g), Err(Error::Disconnected(0, 2))));
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(Graph::new(3, [(1, 1)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
    }

    #[test]
    fn bfs_matches_floyd_warshall_on_small_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 300 {
            let n = rng.random_range(2..=8);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.random_bool(0.4) {
                        edges.push((i, j));
                    }
                }
            }
            let g = Graph::new(n, edges).unwrap();
            let Ok(d) = shortest_paths(&g) else {
                assert!(!g.is_connected());
                continue;
            };
            let oracle = floyd_warshall(&g);
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(u64::from(d.get(i, j)), oracle[i][j]);
                }
            }
            checked += 1;
        }
    }

    #[test]
    fn dual_ba_tree_when_both_attachments_are_one() {
        let g = dual_barabasi_albert(5, 1, 1, 0.3, 7).unwrap();
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.edge_count(), 4);
        assert!(g.is_connected());
    }

    #[test]
    fn dual_ba_is_deterministic() {
        let a = dual_barabasi_albert(60, 1, 3, 0.5, 42).unwrap();
        let b = dual_barabasi_albert(60, 1, 3, 0.5, 42).unwrap();
        assert_eq!(a.edges(), b.edges());
    }

    #[test]
    fn dual_ba_mean_degree_matches_default_calibration() {
        let p = DualBaParams::default();
        let mean: f64 = (0..20)
            .map(|s| dual_barabasi_albert(p.n, p.m1, p.m2, p.p, s).unwrap().mean_degree())
            .sum::<f64>()
            / 20.0;
        assert!((mean - 2.46).abs() < 0.05, "mean degree {mean}");
    }

    #[test]
    fn dual_ba_rejects_bad_parameters() {
        assert!(dual_barabasi_albert(2, 2, 1, 0.5, 0).is_err());
        assert!(dual_barabasi_albert(10, 0, 1, 0.5, 0).is_err());
        assert!(dual_barabasi_albert(10, 1, 2, 1.5, 0).is_err());
    }

    #[test]
    fn normalize_centers_short_axis() {
        let d = Drawing::from_pairs(&[(2.0, 2.0), (4.0, 2.0)]).unwrap();
        let n = d.normalize().unwrap();
        assert_eq!(n.coords(), &[Point::new(0.0, 0.5), Point::new(1.0, 0.5)]);
    }

    #[test]
    fn normalize_identity_on_unit_box() {
        let d = Drawing::from_pairs(&[(0.0, 0.0), (1.0, 1.0), (0.3, 0.7)]).unwrap();
        assert_eq!(d.normalize().unwrap(), d);
    }

    #[test]
    fn normalize_rejects_coincident() {
        let d = Drawing::from_pairs(&[(0.0, 0.0), (0.0, 0.0)]).unwrap();
        assert!(matches!(d.normalize(), Err(Error::DegenerateDrawing(_))));
    }

    #[test]
    fn force_layout_separates_triangle() {
        let g = Graph::complete(3).unwrap();
        let d = force_layout(&g, 200, 3).unwrap();
        let c = d.coords();
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert!(c[i].dist(c[j]) > 1e-3);
            }
        }
        assert_eq!(d, force_layout(&g, 200, 3).unwrap());
    }
}
