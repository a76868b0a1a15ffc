//! Configuration files and experiment plans.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::anneal::AnnealConfig;
use crate::error::{Error, Result};
use crate::graph::{dual_barabasi_albert, force_layout, shortest_paths, DistanceMatrix, Drawing, Graph};
use crate::io;
use crate::metrics::MetricSet;
use crate::shapes::{generate_with, load_target, ShapeLabel, ShapeParams, TargetShape};

use super::render::RenderOptions;

/// How start drawings are produced for graphs without coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LayoutOptions {
    pub iterations: usize,
    pub seed: u64,
}

impl Default for LayoutOptions {
    fn default() -> Self {
        LayoutOptions {
            iterations: 300,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSource {
    File {
        #[serde(default)]
        name: Option<String>,
        edges: PathBuf,
        #[serde(default)]
        coords: Option<PathBuf>,
    },
    DualBa {
        name: String,
        n: usize,
        m1: usize,
        m2: usize,
        p: f64,
        #[serde(default)]
        seed: u64,
    },
    Grid {
        name: String,
        rows: usize,
        cols: usize,
    },
}

/// A graph with its distances and start drawing, ready to morph.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub name: String,
    pub graph: Graph,
    pub dist: DistanceMatrix,
    pub start: Drawing,
}

impl GraphSource {
    pub fn name(&self) -> String {
        match self {
            GraphSource::File { name: Some(n), .. } => n.clone(),
            GraphSource::File { edges, .. } => edges
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "graph".into()),
            GraphSource::DualBa { name, .. } | GraphSource::Grid { name, .. } => name.clone(),
        }
    }

    pub fn load(&self, layout: &LayoutOptions) -> Result<LoadedGraph> {
        let (graph, coords) = match self {
            GraphSource::File { edges, coords, .. } => (io::read_edge_list(edges)?, coords.as_deref()),
            GraphSource::DualBa { n, m1, m2, p, seed, .. } => {
                (dual_barabasi_albert(*n, *m1, *m2, *p, *seed)?, None)
            }
            GraphSource::Grid { rows, cols, .. } => (Graph::grid(*rows, *cols)?, None),
        };
        let dist = shortest_paths(&graph)?;
        let start = match coords {
            Some(path) => {
                let d = io::read_coords(path)?;
                d.check_for(&graph)?;
                d.normalize()?
            }
            None => force_layout(&graph, layout.iterations, layout.seed)?,
        };
        Ok(LoadedGraph {
            name: self.name(),
            graph,
            dist,
            start,
        })
    }
}

/// A built-in shape label or a path to a target CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum TargetSource {
    Shape(ShapeLabel),
    File(PathBuf),
}

impl From<String> for TargetSource {
    fn from(s: String) -> Self {
        match s.parse::<ShapeLabel>() {
            Ok(label) if label != ShapeLabel::Custom => TargetSource::Shape(label),
            _ => TargetSource::File(PathBuf::from(s)),
        }
    }
}

impl From<TargetSource> for String {
    fn from(t: TargetSource) -> String {
        match t {
            TargetSource::Shape(label) => label.name().to_string(),
            TargetSource::File(p) => p.to_string_lossy().into_owned(),
        }
    }
}

impl fmt::Display for TargetSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl TargetSource {
    pub fn name(&self) -> String {
        match self {
            TargetSource::Shape(label) => label.name().to_string(),
            TargetSource::File(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "target".into()),
        }
    }

    pub fn resolve(&self, n: usize, params: &ShapeParams) -> Result<TargetShape> {
        match self {
            TargetSource::Shape(label) => generate_with(*label, n, params),
            TargetSource::File(path) => load_target(path, Some(n)),
        }
    }
}

/// A grid of morph runs over graphs, targets, metric combinations and seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentPlan {
    pub graphs: Vec<GraphSource>,
    pub targets: Vec<TargetSource>,
    pub combos: Vec<MetricSet>,
    /// Runs per cell, seeded `anneal.seed`, `anneal.seed + 1`, ...
    pub seeds: u64,
    /// Filled from the top-level `anneal` section of a config file.
    #[serde(skip)]
    pub anneal: AnnealConfig,
    /// Overrides `anneal.trace_every` so result files stay small.
    pub trace_every: u64,
    pub out_dir: PathBuf,
    pub force: bool,
    /// Concurrent cells; `None` uses every core.
    pub threads: Option<usize>,
    pub layout: LayoutOptions,
    pub shape_params: ShapeParams,
    pub render: RenderOptions,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        ExperimentPlan {
            graphs: Vec::new(),
            targets: ShapeLabel::BUILT_IN.iter().map(|&l| TargetSource::Shape(l)).collect(),
            combos: MetricSet::all_combinations(),
            seeds: 5,
            anneal: AnnealConfig::default(),
            trace_every: 100,
            out_dir: PathBuf::from("results"),
            force: false,
            threads: None,
            layout: LayoutOptions::default(),
            shape_params: ShapeParams::default(),
            render: RenderOptions::default(),
        }
    }
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.into()));
        if self.graphs.is_empty() {
            return bad("experiment needs at least one graph");
        }
        if self.targets.is_empty() {
            return bad("experiment needs at least one target");
        }
        if self.combos.is_empty() {
            return bad("experiment needs at least one metric combination");
        }
        if self.seeds == 0 {
            return bad("experiment needs at least one seed per cell");
        }
        for (i, c) in self.combos.iter().enumerate() {
            if c.is_empty() {
                return bad("metric combinations must be nonempty");
            }
            if self.combos[..i].contains(c) {
                return Err(Error::InvalidParameter(format!("combination {c} listed twice")));
            }
        }
        let mut names: Vec<String> = self.graphs.iter().map(GraphSource::name).collect();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return bad("graph names must be unique");
        }
        let mut targets: Vec<String> = self.targets.iter().map(TargetSource::name).collect();
        targets.sort();
        if targets.windows(2).any(|w| w[0] == w[1]) {
            return bad("target names must be unique");
        }
        self.anneal.validate()
    }

    pub fn cell_count(&self) -> u64 {
        (self.graphs.len() * self.targets.len() * self.combos.len()) as u64 * self.seeds
    }
}

/// Contents of a `--config` JSON file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AppConfig {
    pub anneal: AnnealConfig,
    pub experiment: ExperimentPlan,
    pub layout: LayoutOptions,
    pub render: RenderOptions,
    pub shape_params: ShapeParams,
}

impl AppConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}
