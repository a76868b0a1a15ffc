use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::graph::{Drawing, Graph, Point};

use super::MetricId;

fn undefined(reason: String) -> Error {
    Error::MetricUndefined {
        metric: MetricId::AngularResolution,
        reason,
    }
}

/// `|ideal - smallest| / ideal` at one node, or `None` below degree 2.
fn node_deviation(x: &[Point], g: &Graph, v: usize) -> Result<Option<f64>> {
    let deg = g.degree(v);
    if deg < 2 {
        return Ok(None);
    }
    let origin = x[v];
    let mut angles = Vec::with_capacity(deg);
    for &w in g.neighbors(v) {
        let (dx, dy) = (x[w].x - origin.x, x[w].y - origin.y);
        if dx == 0.0 && dy == 0.0 {
            return Err(undefined(format!(
                "edge ({v}, {w}) has zero length"
            )));
        }
        angles.push(dy.atan2(dx));
    }
    angles.sort_by(f64::total_cmp);
    let wrap = angles[0] + TAU - angles[deg - 1];
    let smallest = angles
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(wrap, f64::min);
    let ideal = TAU / deg as f64;
    Ok(Some(((ideal - smallest) / ideal).abs()))
}

fn mean_of(deviations: &[Option<f64>]) -> Result<f64> {
    let (sum, count) = deviations
        .iter()
        .flatten()
        .fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    if count == 0 {
        return Err(undefined("no node has degree two or more".into()));
    }
    Ok(sum / count as f64)
}

/// Mean relative shortfall of each node's smallest angle between
/// consecutive incident edges versus the even spacing `2*pi/deg`, over nodes
/// of degree at least two.
pub fn angular_resolution(d: &Drawing, g: &Graph) -> Result<f64> {
    let x = d.coords();
    let deviations = (0..g.node_count())
        .map(|v| node_deviation(x, g, v))
        .collect::<Result<Vec<_>>>()?;
    mean_of(&deviations)
}

#[derive(Debug, Clone)]
pub(super) struct AngularCache {
    deviations: Vec<Option<f64>>,
    value: f64,
}

impl AngularCache {
    pub(super) fn new(d: &Drawing, g: &Graph) -> Result<Self> {
        let x = d.coords();
        let deviations = (0..g.node_count())
            .map(|v| node_deviation(x, g, v))
            .collect::<Result<Vec<_>>>()?;
        let value = mean_of(&deviations)?;
        Ok(AngularCache { deviations, value })
    }

    pub(super) fn value(&self) -> f64 {
        self.value
    }

    pub(super) fn update(&mut self, new: &[Point], moved: &[usize], g: &Graph) -> Result<f64> {
        let mut touched: Vec<usize> = moved
            .iter()
            .flat_map(|&v| std::iter::once(v).chain(g.neighbors(v).iter().copied()))
            .collect();
        touched.sort_unstable();
        touched.dedup();
        let fresh = touched
            .iter()
            .map(|&v| node_deviation(new, g, v))
            .collect::<Result<Vec<_>>>()?;
        for (v, dev) in touched.into_iter().zip(fresh) {
            self.deviations[v] = dev;
        }
        self.value = mean_of(&self.deviations)?;
        Ok(self.value)
    }
}
