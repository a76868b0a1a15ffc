//! Metric-constrained simulated annealing toward a target point set.
//!
//! Each iteration jitters a random subset of nodes until the proposal either
//! moves closer to the target or wins the temperature lottery, then accepts
//! it only if every constrained metric stays within its tolerance of the
//! starting value.
//!
//! Randomness comes from one ChaCha8 generator per run, seeded from
//! [`AnnealConfig::seed`]. Per jitter attempt the draw order is: subset size,
//! subset indices, one `(dx, dy)` normal pair per chosen node in subset order,
//! then the uniform escape draw.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DistanceMatrix, Drawing, Graph, Point};
use crate::metrics::{evaluate_one, MetricId, MetricSet, MetricState};
use crate::shapes::TargetShape;
use crate::similarity::{percent, SimilarityKind};

mod unbounded {
    //! `f64` fields where JSON `null` stands for +infinity.
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Allowed drift of each metric from its starting value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    #[serde(with = "unbounded")]
    pub stress: f64,
    #[serde(with = "unbounded")]
    pub edge_length_deviation: f64,
    #[serde(with = "unbounded")]
    pub angular_resolution: f64,
    /// Crossing band as a fraction of the starting crossing count, floored.
    #[serde(with = "unbounded")]
    pub crossing_fraction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            stress: 0.0025,
            edge_length_deviation: 0.0025,
            angular_resolution: 0.0025,
            crossing_fraction: 0.05,
        }
    }
}

impl Tolerances {
    pub fn unbounded() -> Self {
        Tolerances {
            stress: f64::INFINITY,
            edge_length_deviation: f64::INFINITY,
            angular_resolution: f64::INFINITY,
            crossing_fraction: f64::INFINITY,
        }
    }

    /// Absolute band for `id` given its starting value.
    pub fn band(&self, id: MetricId, baseline: f64) -> f64 {
        match id {
            MetricId::Stress => self.stress,
            MetricId::EdgeLengthDeviation => self.edge_length_deviation,
            MetricId::AngularResolution => self.angular_resolution,
            MetricId::CrossingNumber => {
                if baseline > 0.0 {
                    (self.crossing_fraction * baseline).floor()
                } else {
                    0.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnnealConfig {
    pub n_max: u64,
    pub t_init: f64,
    pub t_final: f64,
    /// Subsets hold between 1 and `n / subset_divisor` nodes.
    pub subset_divisor: usize,
    pub step_scale: f64,
    pub step_clip: f64,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub similarity: SimilarityKind,
    pub clamp_to_unit_box: bool,
    /// Keep every k-th iteration in the trace (the last one is always kept).
    pub trace_every: u64,
    /// Use incremental metric states instead of full re-evaluation.
    pub incremental: bool,
    pub max_attempts: u64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            n_max: 30_000,
            t_init: 0.4,
            t_final: 0.001,
            subset_divisor: 15,
            step_scale: 1.0 / 25.0,
            step_clip: 0.5,
            tolerances: Tolerances::default(),
            seed: 0,
            similarity: SimilarityKind::Greedy,
            clamp_to_unit_box: true,
            trace_every: 1,
            incremental: true,
            max_attempts: 1_000_000,
        }
    }
}

impl AnnealConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.t_final > 0.0 && self.t_final <= self.t_init && self.t_init < 1.0) {
            return bad(format!(
                "temperatures must satisfy 0 < t_final <= t_init < 1, got {} and {}",
                self.t_final, self.t_init
            ));
        }
        if self.subset_divisor == 0 {
            return bad("subset_divisor must be at least 1".into());
        }
        if !(self.step_scale > 0.0 && self.step_clip > 0.0) {
            return bad("step_scale and step_clip must be positive".into());
        }
        let t = &self.tolerances;
        for eps in [t.stress, t.edge_length_deviation, t.angular_resolution, t.crossing_fraction] {
            if eps.is_nan() || eps < 0.0 {
                return bad(format!("tolerances must be nonnegative, got {eps}"));
            }
        }
        if self.trace_every == 0 || self.max_attempts == 0 {
            return bad("trace_every and max_attempts must be at least 1".into());
        }
        Ok(())
    }
}

/// Quadratic cooling from `t_init` at iteration 0 to `t_final` at `n_max`,
/// flat at the end.
pub fn temperature(i: u64, cfg: &AnnealConfig) -> f64 {
    if cfg.n_max == 0 {
        return cfg.t_init;
    }
    let rest = 1.0 - (i.min(cfg.n_max) as f64 / cfg.n_max as f64);
    (cfg.t_init - cfg.t_final) * rest * rest + cfg.t_final
}

/// Accepted jitter proposal.
#[derive(Debug, Clone)]
pub struct Proposal {
    pub coords: Vec<Point>,
    /// Nodes displaced by the returned proposal, ascending.
    pub moved: Vec<usize>,
    pub loss: f64,
    /// Returned by the temperature draw although it did not reduce the loss.
    pub escaped: bool,
    pub attempts: u64,
}

/// Jitters random node subsets of `x` until the similarity loss drops below
/// `diff` or `temp` beats a uniform draw.
pub fn jitter(
    x: &[Point],
    temp: f64,
    diff: f64,
    y: &[Point],
    cfg: &AnnealConfig,
    rng: &mut impl Rng,
) -> Result<Proposal> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch {
            expected: y.len(),
            actual: x.len(),
        });
    }
    let n = x.len();
    if n == 0 {
        return Err(Error::InvalidParameter("cannot jitter an empty drawing".into()));
    }
    let largest = (n / cfg.subset_divisor).max(1);
    let mut buf = x.to_vec();
    let mut saved: Vec<(usize, Point)> = Vec::with_capacity(largest);
    for attempt in 1..=cfg.max_attempts {
        let size = rng.random_range(1..=largest);
        saved.clear();
        for v in index::sample(rng, n, size).into_iter() {
            let dx: f64 = rng.sample(StandardNormal);
            let dy: f64 = rng.sample(StandardNormal);
            let step = |z: f64| z.clamp(-cfg.step_clip, cfg.step_clip) * cfg.step_scale;
            let old = buf[v];
            let mut p = Point::new(old.x + step(dx), old.y + step(dy));
            if cfg.clamp_to_unit_box {
                p.x = p.x.clamp(0.0, 1.0);
                p.y = p.y.clamp(0.0, 1.0);
            }
            saved.push((v, old));
            buf[v] = p;
        }
        let u: f64 = rng.random();
        let loss = cfg.similarity.loss(&buf, y)?;
        let improved = loss < diff;
        if improved || temp > u {
            let mut moved: Vec<usize> = saved.iter().map(|(v, _)| *v).collect();
            moved.sort_unstable();
            return Ok(Proposal {
                coords: buf,
                moved,
                loss,
                escaped: !improved,
                attempts: attempt,
            });
        }
        for &(v, old) in saved.iter().rev() {
            buf[v] = old;
        }
    }
    Err(Error::JitterExhausted(cfg.max_attempts))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: u64,
    /// Similarity loss of the current drawing after this iteration's decision.
    pub loss: f64,
    pub percent: f64,
    /// Constrained metric values of the proposal, in declared order; `None`
    /// when a metric is undefined for it.
    pub metrics: Option<Vec<f64>>,
    pub accepted: bool,
    pub escape: bool,
    pub temperature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricBaseline {
    pub metric: MetricId,
    pub start: f64,
    #[serde(with = "unbounded")]
    pub band: f64,
    #[serde(rename = "final")]
    pub end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorphSummary {
    pub final_percent: f64,
    pub final_loss: f64,
    pub baseline_loss: f64,
    pub iterations: u64,
    pub accepted: u64,
    pub escapes: u64,
    pub seed: u64,
    /// Wall time; not serialized so result files stay reproducible.
    #[serde(skip)]
    pub elapsed_secs: Option<f64>,
}

/// Labels of an experiment cell, carried in result files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellInfo {
    pub graph: String,
    pub target: String,
    pub combo: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorphResult {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell: Option<CellInfo>,
    pub config: AnnealConfig,
    pub constraints: MetricSet,
    pub metrics: Vec<MetricBaseline>,
    pub summary: MorphSummary,
    pub trace: Vec<TraceRecord>,
    pub final_coords: Vec<Point>,
}

impl MorphResult {
    pub fn final_drawing(&self) -> Result<Drawing> {
        Drawing::new(self.final_coords.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

enum Evaluator {
    Incremental(Vec<MetricState>),
    Full,
}

/// One morph run, advanced an iteration at a time.
pub struct Annealer {
    graph: Graph,
    dist: DistanceMatrix,
    target: Vec<Point>,
    ids: Vec<MetricId>,
    constraints: MetricSet,
    cfg: AnnealConfig,
    rng: ChaCha8Rng,
    current: Drawing,
    diff: f64,
    baseline_loss: f64,
    baseline: Vec<f64>,
    bands: Vec<f64>,
    latest: Vec<f64>,
    evaluator: Evaluator,
    iteration: u64,
    accepted: u64,
    escapes: u64,
    trace: Vec<TraceRecord>,
}

impl Annealer {
    pub fn new(
        graph: &Graph,
        dist: &DistanceMatrix,
        start: &Drawing,
        target: &TargetShape,
        constraints: MetricSet,
        cfg: &AnnealConfig,
    ) -> Result<Self> {
        Annealer::with_reference(graph, dist, start, start, target, constraints, cfg)
    }

    /// Like [`Annealer::new`], but metric tolerances and the 0% similarity
    /// anchor come from `reference` instead of `start`. `start` must already
    /// satisfy the tolerances around `reference`.
    pub fn with_reference(
        graph: &Graph,
        dist: &DistanceMatrix,
        start: &Drawing,
        reference: &Drawing,
        target: &TargetShape,
        constraints: MetricSet,
        cfg: &AnnealConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        start.check_for(graph)?;
        reference.check_for(graph)?;
        if target.len() != start.len() {
            return Err(Error::SizeMismatch {
                expected: start.len(),
                actual: target.len(),
            });
        }
        if dist.len() != start.len() {
            return Err(Error::SizeMismatch {
                expected: start.len(),
                actual: dist.len(),
            });
        }
        let ids: Vec<MetricId> = constraints.ids().collect();
        let baseline = ids
            .iter()
            .map(|&id| evaluate_one(id, graph, reference, dist))
            .collect::<Result<Vec<_>>>()?;
        let bands = ids
            .iter()
            .zip(&baseline)
            .map(|(&id, &b)| cfg.tolerances.band(id, b))
            .collect();
        let evaluator = if cfg.incremental {
            Evaluator::Incremental(
                ids.iter()
                    .map(|&id| MetricState::new(id, graph, start, dist))
                    .collect::<Result<_>>()?,
            )
        } else {
            Evaluator::Full
        };
        let latest = ids
            .iter()
            .map(|&id| evaluate_one(id, graph, start, dist))
            .collect::<Result<Vec<_>>>()?;
        let diff = cfg.similarity.loss(start.coords(), &target.points)?;
        let baseline_loss = if std::ptr::eq(start, reference) {
            diff
        } else {
            cfg.similarity.loss(reference.coords(), &target.points)?
        };
        Ok(Annealer {
            graph: graph.clone(),
            dist: dist.clone(),
            target: target.points.clone(),
            ids,
            constraints,
            cfg: cfg.clone(),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            current: start.clone(),
            diff,
            baseline_loss,
            latest,
            baseline,
            bands,
            evaluator,
            iteration: 0,
            accepted: 0,
            escapes: 0,
            trace: Vec::new(),
        })
    }

    pub fn current(&self) -> &Drawing {
        &self.current
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn is_done(&self) -> bool {
        self.iteration >= self.cfg.n_max || self.diff <= 0.0
    }

    pub fn loss(&self) -> f64 {
        self.diff
    }

    pub fn percent(&self) -> f64 {
        percent(self.diff, self.baseline_loss).unwrap_or(100.0)
    }

    pub fn baseline_metrics(&self) -> &[f64] {
        &self.baseline
    }

    /// Constrained metric values of the current drawing.
    pub fn current_metrics(&self) -> &[f64] {
        &self.latest
    }

    pub fn target(&self) -> &[Point] {
        &self.target
    }

    fn within_bands(&self, values: &[f64]) -> bool {
        values
            .iter()
            .zip(&self.baseline)
            .zip(&self.bands)
            .all(|((v, b), band)| (v - b).abs() <= *band)
    }

    fn evaluate(&mut self, proposal: &Drawing, moved: &[usize]) -> Result<Option<Vec<f64>>> {
        match &mut self.evaluator {
            Evaluator::Full => {
                let mut values = Vec::with_capacity(self.ids.len());
                for &id in &self.ids {
                    match evaluate_one(id, &self.graph, proposal, &self.dist) {
                        Ok(v) => values.push(v),
                        Err(Error::MetricUndefined { .. }) => return Ok(None),
                        Err(e) => return Err(e),
                    }
                }
                Ok(Some(values))
            }
            Evaluator::Incremental(states) => {
                for k in 0..states.len() {
                    match states[k].update(&self.graph, &self.dist, proposal, moved) {
                        Ok(()) => {}
                        Err(Error::MetricUndefined { .. }) => {
                            // roll back the states already advanced
                            for s in &mut states[..k] {
                                s.update(&self.graph, &self.dist, &self.current, moved)?;
                            }
                            return Ok(None);
                        }
                        Err(e) => return Err(e),
                    }
                }
                Ok(Some(states.iter().map(MetricState::value).collect()))
            }
        }
    }

    fn roll_back(&mut self, moved: &[usize]) -> Result<()> {
        if let Evaluator::Incremental(states) = &mut self.evaluator {
            for s in states.iter_mut() {
                s.update(&self.graph, &self.dist, &self.current, moved)?;
            }
        }
        Ok(())
    }

    /// Runs one iteration. Returns `false` once the run is finished.
    pub fn step(&mut self) -> Result<bool> {
        if self.is_done() {
            return Ok(false);
        }
        self.iteration += 1;
        let temp = temperature(self.iteration, &self.cfg);
        let prop = jitter(
            self.current.coords(),
            temp,
            self.diff,
            &self.target,
            &self.cfg,
            &mut self.rng,
        )?;
        let proposal = Drawing::new(prop.coords)?;
        let values = self.evaluate(&proposal, &prop.moved)?;
        let accepted = values.as_deref().is_some_and(|v| self.within_bands(v));
        if accepted {
            self.current = proposal;
            self.diff = prop.loss;
            self.accepted += 1;
            if prop.escaped {
                self.escapes += 1;
            }
            if let Some(v) = &values {
                self.latest.clone_from(v);
            }
        } else if values.is_some() {
            self.roll_back(&prop.moved)?;
        }
        if self.iteration % self.cfg.trace_every == 0 || self.iteration == self.cfg.n_max {
            self.trace.push(TraceRecord {
                iteration: self.iteration,
                loss: self.diff,
                percent: self.percent(),
                metrics: values,
                accepted,
                escape: accepted && prop.escaped,
                temperature: temp,
            });
        }
        Ok(!self.is_done())
    }

    /// Runs up to `count` iterations; returns how many ran.
    pub fn run_for(&mut self, count: u64) -> Result<u64> {
        let mut ran = 0;
        while ran < count && !self.is_done() {
            self.step()?;
            ran += 1;
        }
        Ok(ran)
    }

    pub fn finish(mut self) -> Result<MorphResult> {
        while self.step()? {}
        let end = self
            .ids
            .iter()
            .map(|&id| evaluate_one(id, &self.graph, &self.current, &self.dist))
            .collect::<Result<Vec<_>>>()?;
        let metrics = self
            .ids
            .iter()
            .zip(&self.baseline)
            .zip(&self.bands)
            .zip(end)
            .map(|(((&metric, &start), &band), end)| MetricBaseline {
                metric,
                start,
                band,
                end,
            })
            .collect();
        let final_percent = if self.baseline_loss > 0.0 {
            self.percent()
        } else {
            100.0
        };
        Ok(MorphResult {
            cell: None,
            summary: MorphSummary {
                final_percent,
                final_loss: self.diff,
                baseline_loss: self.baseline_loss,
                iterations: self.iteration,
                accepted: self.accepted,
                escapes: self.escapes,
                seed: self.cfg.seed,
                elapsed_secs: None,
            },
            config: self.cfg,
            constraints: self.constraints,
            metrics,
            trace: self.trace,
            final_coords: self.current.into_coords(),
        })
    }
}

/// Morphs `start` toward `target` while holding `constraints` within their
/// tolerances of the starting values.
pub fn morph(
    graph: &Graph,
    dist: &DistanceMatrix,
    start: &Drawing,
    target: &TargetShape,
    constraints: MetricSet,
    cfg: &AnnealConfig,
) -> Result<MorphResult> {
    Annealer::new(graph, dist, start, target, constraints, cfg)?.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{force_layout, shortest_paths};
    use crate::shapes::{generate, ShapeLabel};

    #[test]
    fn temperature_endpoints_and_midpoint() {
        let cfg = AnnealConfig::default();
        assert_eq!(temperature(0, &cfg), 0.4);
        assert_eq!(temperature(cfg.n_max, &cfg), 0.001);
        assert!((temperature(cfg.n_max / 2, &cfg) - 0.10075).abs() < 1e-15);
        let mut last = f64::INFINITY;
        for i in (0..=cfg.n_max).step_by(997) {
            let t = temperature(i, &cfg);
            assert!(t <= last);
            last = t;
        }
    }

    #[test]
    fn hot_jitter_returns_first_proposal() {
        let cfg = AnnealConfig::default();
        let x: Vec<Point> = (0..30).map(|k| Point::new(k as f64 / 30.0, 0.5)).collect();
        let y = x.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = jitter(&x, 1.0, 0.0, &y, &cfg, &mut rng).unwrap();
        assert_eq!(p.attempts, 1);
        assert!(p.escaped);
        assert!(!p.moved.is_empty() && p.moved.len() <= 2);
    }

    #[test]
    fn cold_jitter_at_target_exhausts() {
        let cfg = AnnealConfig {
            max_attempts: 500,
            ..AnnealConfig::default()
        };
        let y: Vec<Point> = (0..8).map(|k| Point::new(k as f64 / 8.0, 0.2)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let err = jitter(&y, 0.0, 0.0, &y, &cfg, &mut rng).unwrap_err();
        assert!(matches!(err, Error::JitterExhausted(500)));
    }

    #[test]
    fn jitter_is_deterministic() {
        let cfg = AnnealConfig::default();
        let x: Vec<Point> = (0..40).map(|k| Point::new((k % 7) as f64 / 7.0, k as f64 / 40.0)).collect();
        let y = generate(ShapeLabel::O, 40).unwrap().points;
        let diff = crate::similarity::sim_greedy(&x, &y).unwrap();
        let a = jitter(&x, 0.1, diff, &y, &cfg, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = jitter(&x, 0.1, diff, &y, &cfg, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a.coords, b.coords);
        assert_eq!(a.loss, b.loss);
    }

    #[test]
    fn zero_iterations_returns_start() {
        let g = Graph::path(6).unwrap();
        let dist = shortest_paths(&g).unwrap();
        let start = force_layout(&g, 100, 1).unwrap();
        let target = generate(ShapeLabel::Grid, 6).unwrap();
        let cfg = AnnealConfig {
            n_max: 0,
            ..AnnealConfig::default()
        };
        let r = morph(&g, &dist, &start, &target, MetricSet::single(MetricId::EdgeLengthDeviation), &cfg).unwrap();
        assert_eq!(r.final_coords, start.coords());
        assert_eq!(r.summary.final_percent, 0.0);
    }

    #[test]
    fn start_on_target_is_already_done() {
        let g = Graph::path(5).unwrap();
        let dist = shortest_paths(&g).unwrap();
        let target = generate(ShapeLabel::O, 5).unwrap();
        let start = Drawing::new(target.points.clone()).unwrap();
        let r = morph(&g, &dist, &start, &target, MetricSet::single(MetricId::EdgeLengthDeviation), &AnnealConfig::default()).unwrap();
        assert_eq!(r.summary.iterations, 0);
        assert_eq!(r.summary.final_percent, 100.0);
        assert_eq!(r.final_coords, start.coords());
    }

    #[test]
    fn tolerance_json_uses_null_for_infinity() {
        let t = Tolerances::unbounded();
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.contains("null"));
        assert_eq!(serde_json::from_str::<Tolerances>(&s).unwrap(), t);
    }

    #[test]
    fn crossing_band_floors() {
        let t = Tolerances::default();
        assert_eq!(t.band(MetricId::CrossingNumber, 0.0), 0.0);
        assert_eq!(t.band(MetricId::CrossingNumber, 19.0), 0.0);
        assert_eq!(t.band(MetricId::CrossingNumber, 45.0), 2.0);
    }
}
