//! Drawing quality metrics: stress, edge length deviation, crossing number
//! and angular resolution. Lower is better for all four.
//!
//! Each metric has a pure full evaluator and an incremental form kept in a
//! [`MetricState`], which updates after a subset of nodes moves and stays
//! consistent with full recomputation.

mod angular;
mod crossings;
mod eld;
mod stress;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DistanceMatrix, Drawing, Graph, Point};

pub use angular::angular_resolution;
pub use crossings::{crossing_number, segments_cross, COLLINEAR_TOL};
pub use eld::edge_length_deviation;
pub use stress::stress;

/// The four quality metrics, in declared evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricId {
    #[serde(rename = "ST")]
    Stress,
    #[serde(rename = "ELD")]
    EdgeLengthDeviation,
    #[serde(rename = "CN")]
    CrossingNumber,
    #[serde(rename = "AR")]
    AngularResolution,
}

impl MetricId {
    pub const ALL: [MetricId; 4] = [
        MetricId::Stress,
        MetricId::EdgeLengthDeviation,
        MetricId::CrossingNumber,
        MetricId::AngularResolution,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            MetricId::Stress => "ST",
            MetricId::EdgeLengthDeviation => "ELD",
            MetricId::CrossingNumber => "CN",
            MetricId::AngularResolution => "AR",
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for MetricId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "ST" | "STRESS" => Ok(MetricId::Stress),
            "ELD" => Ok(MetricId::EdgeLengthDeviation),
            "CN" => Ok(MetricId::CrossingNumber),
            "AR" => Ok(MetricId::AngularResolution),
            other => Err(Error::InvalidParameter(format!("unknown metric `{other}`"))),
        }
    }
}

/// A nonempty subset of the four metrics, iterated in declared order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MetricSet(u8);

impl MetricSet {
    pub fn new(ids: impl IntoIterator<Item = MetricId>) -> Result<Self> {
        let bits = ids.into_iter().fold(0u8, |acc, id| acc | id.bit());
        if bits == 0 {
            return Err(Error::InvalidParameter("empty metric combination".into()));
        }
        Ok(MetricSet(bits))
    }

    pub fn single(id: MetricId) -> Self {
        MetricSet(id.bit())
    }

    /// All 15 nonempty combinations: singletons, then pairs, triples and the
    /// full set, each group in declared order.
    pub fn all_combinations() -> Vec<MetricSet> {
        let mut sets: Vec<MetricSet> = (1u8..16).map(MetricSet).collect();
        sets.sort_by_key(|s| (s.len(), s.ids().collect::<Vec<_>>()));
        sets
    }

    pub fn contains(self, id: MetricId) -> bool {
        self.0 & id.bit() != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn ids(self) -> impl Iterator<Item = MetricId> {
        MetricId::ALL.into_iter().filter(move |id| self.contains(*id))
    }

    /// `ST-ELD`-style label.
    pub fn label(self) -> String {
        self.ids().map(MetricId::short_name).collect::<Vec<_>>().join("-")
    }
}

impl fmt::Display for MetricSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for MetricSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ids = s
            .split(['-', ',', '+'])
            .filter(|t| !t.trim().is_empty())
            .map(MetricId::from_str)
            .collect::<Result<Vec<_>>>()?;
        MetricSet::new(ids)
    }
}

impl Serialize for MetricSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for MetricSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Full evaluation of one metric.
pub fn evaluate_one(id: MetricId, g: &Graph, d: &Drawing, dist: &DistanceMatrix) -> Result<f64> {
    d.check_for(g)?;
    match id {
        MetricId::Stress => stress(d, dist),
        MetricId::EdgeLengthDeviation => edge_length_deviation(d, g),
        MetricId::CrossingNumber => Ok(crossing_number(d, g) as f64),
        MetricId::AngularResolution => angular_resolution(d, g),
    }
}

/// Evaluates `ids` on `d`; values come back aligned with `ids`.
pub fn evaluate(ids: &[MetricId], g: &Graph, d: &Drawing, dist: &DistanceMatrix) -> Result<Vec<f64>> {
    ids.iter().map(|&id| evaluate_one(id, g, d, dist)).collect()
}

#[derive(Debug, Clone)]
enum Cache {
    Stress(stress::StressCache),
    Eld(eld::EldCache),
    Crossings(crossings::CrossingCache),
    Angular(angular::AngularCache),
}

/// Incrementally maintained value of one metric for an evolving drawing.
#[derive(Debug, Clone)]
pub struct MetricState {
    metric: MetricId,
    value: f64,
    coords: Vec<Point>,
    cache: Cache,
}

impl MetricState {
    pub fn new(id: MetricId, g: &Graph, d: &Drawing, dist: &DistanceMatrix) -> Result<Self> {
        d.check_for(g)?;
        let (value, cache) = match id {
            MetricId::Stress => {
                let c = stress::StressCache::new(d, dist)?;
                (c.value(), Cache::Stress(c))
            }
            MetricId::EdgeLengthDeviation => {
                let c = eld::EldCache::new(d, g)?;
                (c.value(), Cache::Eld(c))
            }
            MetricId::CrossingNumber => {
                let c = crossings::CrossingCache::new(d, g);
                (c.value(), Cache::Crossings(c))
            }
            MetricId::AngularResolution => {
                let c = angular::AngularCache::new(d, g)?;
                (c.value(), Cache::Angular(c))
            }
        };
        Ok(MetricState {
            metric: id,
            value,
            coords: d.coords().to_vec(),
            cache,
        })
    }

    pub fn metric(&self) -> MetricId {
        self.metric
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Brings the state up to date with `d`, where only the nodes in `moved`
    /// changed position since the last update. On error the state is left
    /// untouched.
    pub fn update(
        &mut self,
        g: &Graph,
        dist: &DistanceMatrix,
        d: &Drawing,
        moved: &[usize],
    ) -> Result<()> {
        if d.len() != self.coords.len() {
            return Err(Error::InconsistentState(format!(
                "state tracks {} nodes, drawing has {}",
                self.coords.len(),
                d.len()
            )));
        }
        if let Some(&bad) = moved.iter().find(|&&v| v >= d.len()) {
            return Err(Error::InconsistentState(format!(
                "moved node {bad} out of range"
            )));
        }
        let mut is_moved = vec![false; d.len()];
        for &v in moved {
            is_moved[v] = true;
        }
        let new = d.coords();
        if let Some(k) = (0..new.len()).find(|&k| !is_moved[k] && new[k] != self.coords[k]) {
            return Err(Error::InconsistentState(format!(
                "node {k} moved but was not reported"
            )));
        }
        let mut moved: Vec<usize> = moved.to_vec();
        moved.sort_unstable();
        moved.dedup();
        if moved.is_empty() {
            return Ok(());
        }
        self.value = match &mut self.cache {
            Cache::Stress(c) => c.update(&self.coords, new, &moved, &is_moved, dist)?,
            Cache::Eld(c) => c.update(new, &moved, g),
            Cache::Crossings(c) => c.update(new, &moved, g),
            Cache::Angular(c) => c.update(new, &moved, g)?,
        };
        for &v in &moved {
            self.coords[v] = new[v];
        }
        Ok(())
    }
}

/// Functional form of [`MetricState::update`].
pub fn incremental_update(
    state: &MetricState,
    g: &Graph,
    dist: &DistanceMatrix,
    d: &Drawing,
    moved: &[usize],
) -> Result<MetricState> {
    let mut next = state.clone();
    next.update(g, dist, d, moved)?;
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{random_layout, shortest_paths};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn combination_count_and_labels() {
        let all = MetricSet::all_combinations();
        assert_eq!(all.len(), 15);
        assert_eq!(all[0].label(), "ST");
        assert_eq!(all[4].label(), "ST-ELD");
        assert_eq!(all[14].label(), "ST-ELD-CN-AR");
        assert_eq!("cn-st".parse::<MetricSet>().unwrap().label(), "ST-CN");
    }

    #[test]
    fn evaluate_keeps_requested_order() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let g_conn = Graph::new(4, [(0, 1), (2, 3), (1, 2)]).unwrap();
        let d = Drawing::from_pairs(&[(0.0, 0.0), (1.0, 1.0), (0.0, 1.0), (1.0, 0.0)]).unwrap();
        let dist = shortest_paths(&g_conn).unwrap();
        let v = evaluate(
            &[MetricId::CrossingNumber, MetricId::EdgeLengthDeviation],
            &g,
            &d,
            &dist,
        )
        .unwrap();
        assert_eq!(v[0], 1.0);
        assert!(v[1].abs() < 1e-15);

        let ar_st = evaluate(&[MetricId::AngularResolution, MetricId::Stress], &g_conn, &d, &dist).unwrap();
        let ar = angular_resolution(&d, &g_conn).unwrap();
        assert_eq!(ar_st[0], ar);
    }

    #[test]
    fn empty_move_is_a_noop() {
        let g = Graph::complete(5).unwrap();
        let dist = shortest_paths(&g).unwrap();
        let d = random_layout(5, 1);
        for id in MetricId::ALL {
            let s = MetricState::new(id, &g, &d, &dist).unwrap();
            let t = incremental_update(&s, &g, &dist, &d, &[]).unwrap();
            assert_eq!(s.value(), t.value());
        }
    }

    #[test]
    fn unreported_move_is_inconsistent() {
        let g = Graph::path(4).unwrap();
        let dist = shortest_paths(&g).unwrap();
        let d = random_layout(4, 2);
        let mut s = MetricState::new(MetricId::EdgeLengthDeviation, &g, &d, &dist).unwrap();
        let mut moved = d.clone();
        moved.coords_mut()[2].x += 0.1;
        assert!(matches!(
            s.update(&g, &dist, &moved, &[1]),
            Err(Error::InconsistentState(_))
        ));
    }

    #[test]
    fn star_leaf_move_keeps_zero_crossings() {
        let g = Graph::star(4).unwrap();
        let dist = shortest_paths(&g).unwrap();
        let mut d = Drawing::from_pairs(&[(0.5, 0.5), (0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        let mut s = MetricState::new(MetricId::CrossingNumber, &g, &d, &dist).unwrap();
        d.coords_mut()[3] = Point::new(0.1, 0.9);
        s.update(&g, &dist, &d, &[3]).unwrap();
        assert_eq!(s.value(), 0.0);
        assert_eq!(s.value(), crossing_number(&d, &g) as f64);
    }

    #[test]
    fn incremental_tracks_full_over_random_moves() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 50;
        let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (rng.random_range(0..i), i)).collect();
        for _ in 0..40 {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a != b && !edges.contains(&(a.min(b), a.max(b))) && !edges.contains(&(a.max(b), a.min(b))) {
                edges.push((a.min(b), a.max(b)));
            }
        }
        let g = Graph::new(n, edges).unwrap();
        let dist = shortest_paths(&g).unwrap();
        let mut d = random_layout(n, 9);
        let mut states: Vec<MetricState> = MetricId::ALL
            .iter()
            .map(|&id| MetricState::new(id, &g, &d, &dist).unwrap())
            .collect();
        for _ in 0..1000 {
            let v = rng.random_range(0..n);
            d.coords_mut()[v] = Point::new(rng.random(), rng.random());
            for s in &mut states {
                s.update(&g, &dist, &d, &[v]).unwrap();
                let full = evaluate_one(s.metric(), &g, &d, &dist).unwrap();
                assert!(
                    (s.value() - full).abs() <= 1e-9,
                    "{}: {} vs {}",
                    s.metric(),
                    s.value(),
                    full
                );
            }
        }
    }
}
