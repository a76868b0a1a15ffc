use crate::error::{Error, Result};
use crate::graph::{Drawing, Graph, Point};

use super::MetricId;

/// Population standard deviation of drawn edge lengths.
pub fn edge_length_deviation(d: &Drawing, g: &Graph) -> Result<f64> {
    let lengths: Vec<f64> = g
        .edges()
        .iter()
        .map(|&e| {
            let (a, b) = d.segment(e);
            a.dist(b)
        })
        .collect();
    std_dev(&lengths)
}

fn std_dev(lengths: &[f64]) -> Result<f64> {
    if lengths.is_empty() {
        return Err(Error::MetricUndefined {
            metric: MetricId::EdgeLengthDeviation,
            reason: "graph has no edges".into(),
        });
    }
    let m = lengths.len() as f64;
    let mean = lengths.iter().sum::<f64>() / m;
    let var = lengths.iter().map(|l| (l - mean) * (l - mean)).sum::<f64>() / m;
    Ok(var.sqrt())
}

/// Per-edge lengths; only edges incident to moved nodes are recomputed.
#[derive(Debug, Clone)]
pub(super) struct EldCache {
    lengths: Vec<f64>,
    value: f64,
}

impl EldCache {
    pub(super) fn new(d: &Drawing, g: &Graph) -> Result<Self> {
        let lengths: Vec<f64> = g
            .edges()
            .iter()
            .map(|&e| {
                let (a, b) = d.segment(e);
                a.dist(b)
            })
            .collect();
        let value = std_dev(&lengths)?;
        Ok(EldCache { lengths, value })
    }

    pub(super) fn value(&self) -> f64 {
        self.value
    }

    pub(super) fn update(&mut self, new: &[Point], moved: &[usize], g: &Graph) -> f64 {
        for &v in moved {
            for &e in g.incident_edges(v) {
                let (a, b) = g.edges()[e];
                self.lengths[e] = new[a].dist(new[b]);
            }
        }
        // lengths is nonempty, checked at construction
        self.value = std_dev(&self.lengths).unwrap_or(0.0);
        self.value
    }
}
