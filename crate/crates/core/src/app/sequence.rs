//! Morphing through an ordered list of target frames.

use std::fs;
use std::path::{Path, PathBuf};

use crate::anneal::{AnnealConfig, Annealer, MorphResult};
use crate::error::{Error, Result};
use crate::graph::{DistanceMatrix, Drawing, Graph};
use crate::metrics::MetricSet;
use crate::shapes::{load_target, TargetShape};

use super::experiment::write_result;
use super::render::{render, RenderOptions};

#[derive(Debug, Clone)]
pub struct FrameSequence {
    pub frames: Vec<TargetShape>,
    /// Start each frame from the previous frame's final drawing.
    pub chain: bool,
    /// Measure tolerances and percent against each frame's own start instead
    /// of the original drawing.
    pub rebaseline: bool,
}

impl FrameSequence {
    pub fn new(frames: Vec<TargetShape>, chain: bool) -> Result<Self> {
        let seq = FrameSequence {
            frames,
            chain,
            rebaseline: false,
        };
        seq.check_sizes(None)?;
        Ok(seq)
    }

    pub fn load(paths: &[PathBuf], chain: bool) -> Result<Self> {
        let frames = paths
            .iter()
            .map(|p| load_target(p, None))
            .collect::<Result<Vec<_>>>()?;
        FrameSequence::new(frames, chain)
    }

    fn check_sizes(&self, n: Option<usize>) -> Result<()> {
        let Some(first) = self.frames.first() else {
            return Err(Error::InvalidParameter("a sequence needs at least one frame".into()));
        };
        let expected = n.unwrap_or(first.len());
        for f in &self.frames {
            if f.len() != expected {
                return Err(Error::SizeMismatch {
                    expected,
                    actual: f.len(),
                });
            }
        }
        Ok(())
    }
}

/// Morphs toward each frame in turn. Frame `k` runs with seed `cfg.seed + k`.
///
/// Unless `frames.rebaseline` is set, every frame keeps its metrics within
/// tolerance of the original `start` and reports percent relative to the
/// original drawing's distance from that frame's target.
pub fn run_sequence(
    graph: &Graph,
    dist: &DistanceMatrix,
    start: &Drawing,
    frames: &FrameSequence,
    constraints: MetricSet,
    cfg: &AnnealConfig,
) -> Result<Vec<MorphResult>> {
    frames.check_sizes(Some(start.len()))?;
    let mut results: Vec<MorphResult> = Vec::with_capacity(frames.frames.len());
    for (k, target) in frames.frames.iter().enumerate() {
        let mut frame_cfg = cfg.clone();
        frame_cfg.seed = cfg.seed.wrapping_add(k as u64);
        let from = match results.last() {
            Some(prev) if frames.chain => prev.final_drawing()?,
            _ => start.clone(),
        };
        let reference = if frames.rebaseline { &from } else { start };
        let annealer =
            Annealer::with_reference(graph, dist, &from, reference, target, constraints, &frame_cfg)?;
        results.push(annealer.finish()?);
    }
    Ok(results)
}

/// Writes `frame_000.json`/`frame_000.svg`, ... into `dir`; returns the SVG
/// paths in frame order.
pub fn write_sequence(
    dir: &Path,
    graph: &Graph,
    results: &[MorphResult],
    opts: &RenderOptions,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut svgs = Vec::with_capacity(results.len());
    for (k, r) in results.iter().enumerate() {
        write_result(&dir.join(format!("frame_{k:03}.json")), r)?;
        let svg = dir.join(format!("frame_{k:03}.svg"));
        render(&r.final_drawing()?, graph, &svg, opts)?;
        svgs.push(svg);
    }
    Ok(svgs)
}
