//! Browser bindings for the qmorph demo page.

use qmorph_core::anneal::{AnnealConfig, Annealer};
use qmorph_core::graph::{dual_barabasi_albert, force_layout, shortest_paths, Drawing, Graph, Point};
use qmorph_core::metrics::{evaluate_one, MetricId, MetricSet};
use qmorph_core::shapes::{generate, ShapeLabel};
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn flatten(points: &[Point]) -> Vec<f64> {
    points.iter().flat_map(|p| [p.x, p.y]).collect()
}

fn build_graph(kind: &str, size: usize, seed: u64) -> Result<Graph, JsError> {
    match kind {
        "tree" => dual_barabasi_albert(size, 1, 1, 0.5, seed),
        "ba" => dual_barabasi_albert(size, 1, 2, 0.76, seed),
        "grid" => {
            let side = (size as f64).sqrt().round().max(2.0) as usize;
            Graph::grid(side, side)
        }
        other => return Err(JsError::new(&format!("unknown graph kind `{other}`"))),
    }
    .map_err(js_err)
}

/// An interactive morph: a generated graph, its force layout, and an
/// annealer that the page advances a batch of iterations per frame.
#[wasm_bindgen]
pub struct MorphSession {
    graph: Graph,
    start: Drawing,
    annealer: Annealer,
}

#[wasm_bindgen]
impl MorphSession {
    /// `kind` is `tree`, `ba` or `grid`; `shape` a built-in target label;
    /// `constraints` a combination such as `ELD` or `ST-CN`.
    #[wasm_bindgen(constructor)]
    pub fn new(
        kind: &str,
        size: usize,
        shape: &str,
        constraints: &str,
        n_max: u32,
        seed: u32,
    ) -> Result<MorphSession, JsError> {
        let seed = u64::from(seed);
        let graph = build_graph(kind, size, seed)?;
        let dist = shortest_paths(&graph).map_err(js_err)?;
        let start = force_layout(&graph, 300, seed).map_err(js_err)?;
        let label: ShapeLabel = shape.parse().map_err(js_err)?;
        let target = generate(label, graph.node_count()).map_err(js_err)?;
        let qm: MetricSet = constraints.parse().map_err(js_err)?;
        let cfg = AnnealConfig {
            n_max: u64::from(n_max),
            seed,
            trace_every: u64::from(n_max.max(1)),
            ..Default::default()
        };
        let annealer = Annealer::new(&graph, &dist, &start, &target, qm, &cfg).map_err(js_err)?;
        Ok(MorphSession { graph, start, annealer })
    }

    /// Runs up to `count` iterations; returns `true` while more remain.
    pub fn step(&mut self, count: u32) -> Result<bool, JsError> {
        self.annealer.run_for(u64::from(count)).map_err(js_err)?;
        Ok(!self.annealer.is_done())
    }

    pub fn iteration(&self) -> f64 {
        self.annealer.iteration() as f64
    }

    pub fn percent(&self) -> f64 {
        self.annealer.percent()
    }

    /// Current coordinates as `[x0, y0, x1, y1, ...]`.
    pub fn coords(&self) -> Vec<f64> {
        flatten(self.annealer.current().coords())
    }

    pub fn start_coords(&self) -> Vec<f64> {
        flatten(self.start.coords())
    }

    pub fn target(&self) -> Vec<f64> {
        flatten(self.annealer.target())
    }

    /// Edge endpoints as `[a0, b0, a1, b1, ...]`.
    pub fn edges(&self) -> Vec<u32> {
        self.graph.edges().iter().flat_map(|&(a, b)| [a as u32, b as u32]).collect()
    }

    /// Starting and current values of the constrained metrics, interleaved.
    pub fn constrained_metrics(&self) -> Vec<f64> {
        self.annealer
            .baseline_metrics()
            .iter()
            .zip(self.annealer.current_metrics())
            .flat_map(|(&b, &c)| [b, c])
            .collect()
    }
}

/// Points of a built-in target shape as `[x0, y0, ...]`.
#[wasm_bindgen]
pub fn shape_points(label: &str, n: usize) -> Result<Vec<f64>, JsError> {
    let label: ShapeLabel = label.parse().map_err(js_err)?;
    Ok(flatten(&generate(label, n).map_err(js_err)?.points))
}

/// ST, ELD, CN and AR of a drawing given as flat edge and coordinate arrays.
/// Undefined metrics come back as NaN.
#[wasm_bindgen]
pub fn drawing_metrics(edges: &[u32], coords: &[f64]) -> Result<Vec<f64>, JsError> {
    if edges.len() % 2 != 0 || coords.len() % 2 != 0 {
        return Err(JsError::new("edges and coords must have even length"));
    }
    let graph = Graph::new(
        coords.len() / 2,
        edges.chunks(2).map(|e| (e[0] as usize, e[1] as usize)),
    )
    .map_err(js_err)?;
    let drawing = Drawing::new(coords.chunks(2).map(|c| Point::new(c[0], c[1])).collect()).map_err(js_err)?;
    let dist = shortest_paths(&graph).map_err(js_err)?;
    Ok(MetricId::ALL
        .iter()
        .map(|&id| evaluate_one(id, &graph, &drawing, &dist).unwrap_or(f64::NAN))
        .collect())
}
