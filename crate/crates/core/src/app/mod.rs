//! Configuration, experiment grids, frame sequences and rendering.

pub mod config;
pub mod experiment;
pub mod render;
pub mod sequence;

pub use config::{AppConfig, ExperimentPlan, GraphSource, LayoutOptions, LoadedGraph, TargetSource};
pub use experiment::{load_results_dir, read_result, run_experiment, write_result, CellFailure, ExperimentOutcome};
pub use render::{render, render_svg, RenderOptions};
pub use sequence::{run_sequence, write_sequence, FrameSequence};
