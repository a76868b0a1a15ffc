//! Morph graph drawings into arbitrary point-set shapes while holding drawing
//! quality metrics (stress, edge-length deviation, crossings, angular
//! resolution) near their starting values, then compare how easily each
//! metric is fooled.
//!
//! ```
//! use qmorph_core::{graph, metrics::MetricSet, shapes, anneal};
//!
//! let g = graph::Graph::grid(4, 4).unwrap();
//! let dist = graph::shortest_paths(&g).unwrap();
//! let start = graph::force_layout(&g, 100, 1).unwrap();
//! let target = shapes::generate(shapes::ShapeLabel::O, 16).unwrap();
//! let cfg = anneal::AnnealConfig { n_max: 200, ..Default::default() };
//! let qm: MetricSet = "ELD".parse().unwrap();
//! let result = anneal::morph(&g, &dist, &start, &target, qm, &cfg).unwrap();
//! assert!(result.summary.final_percent >= 0.0);
//! ```

pub mod analysis;
pub mod anneal;
pub mod app;
pub mod error;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod shapes;
pub mod similarity;

pub use anneal::{morph, AnnealConfig, Annealer, MorphResult, Tolerances};
pub use error::{Error, Result};
pub use graph::{Drawing, Graph, Point};
pub use metrics::{MetricId, MetricSet};
pub use shapes::{ShapeLabel, TargetShape};
